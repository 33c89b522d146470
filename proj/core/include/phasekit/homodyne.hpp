#pragma once

#include <cstdint>

#include "phasekit/couplings.hpp"
#include "phasekit/phase_observables.hpp"

namespace phasekit {

// Cell probabilities of a double-homodyne outcome density: radial cell = one
// quadrature node (weight w_q), angle cell = partition bin.
struct JointDensityTable {
    QuadratureGrid grid;
    AnglePartition partition;
    RealMatrix mass; // Q x K
    double total_mass = 0.0;
};

// G^sigma effect for number-diagonal sigma = sum_k lambda_k |k><k|:
// sum_k lambda_k P_{G^|k>}(X x Theta). Throws unless lambda is a probability
// vector (covariance requires sigma diagonal in the number basis).
Matrix gsigma_effect(const RealVector& lambda, const RadialBinSet& x, double lo,
                     double hi, const QuadratureGrid& grid, int dim);

// sigma' = C sigma C, entrywise conjugate in the number basis.
DensityMatrix conjugate_state(const DensityMatrix& sigma);

// Joint outcome distribution of double homodyne detection on rho (x) sigma:
// propagate through U and bin |Psi|^2. Throws if more than 1e-4 of the mass
// is lost to truncation.
JointDensityTable double_homodyne_dist(const DensityMatrix& rho,
                                       const DensityMatrix& sigma,
                                       const QuadratureGrid& grid,
                                       const AnglePartition& part);

struct ModifiedSchemeResult {
    RealVector probs;        // angle marginal
    JointDensityTable table; // full joint density
};

// Double homodyne on W(rho (x) |0><0|)W^*: W acts on the purification columns
// through the closed-form vacuum-column coefficients summed to k <= w_kmax.
ModifiedSchemeResult modified_scheme_phase_dist(const DensityMatrix& rho,
                                                const QuadratureGrid& grid,
                                                const AnglePartition& part,
                                                int w_kmax = 65536);

// Same marginal computed through the total coupling V (cross-check path).
RealVector modified_scheme_phase_dist_via_v(const DensityMatrix& rho,
                                            const QuadratureGrid& grid,
                                            const AnglePartition& part);

// i.i.d. categorical samples of (node index, angle bin); deterministic in seed.
std::vector<std::pair<int, int>> sample_outcomes(const JointDensityTable& table,
                                                 int count, std::uint64_t seed);

// 1 - |E[e^{i theta}]| of a binned angular distribution.
double circular_variance(const RealVector& probs, const AnglePartition& part);

} // namespace phasekit
