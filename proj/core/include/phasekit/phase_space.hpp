#pragma once

#include <optional>

#include "phasekit/phase_observables.hpp"
#include "phasekit/quadrature.hpp"

namespace phasekit {

// Discretized (mu, eta_m(x)) data of a phase-shift covariant phase-space
// observable: eta[m] is a component_dim x Q array of eta_m at the nodes, or a
// component_dim x 1 array when the radial measure is a Dirac atom.
struct RadialProfile {
    QuadratureGrid grid;
    std::vector<Matrix> eta;
    std::optional<double> atom; // x0, weight 1

    int dim() const { return static_cast<int>(eta.size()); }
    int component_dim() const { return eta.empty() ? 0 : static_cast<int>(eta[0].rows()); }
    bool atomic() const { return atom.has_value(); }
};

// Example families: G^|k> (displacement generated), F^|k> (Laguerre), Dirac.
RadialProfile profile_g(int k, const QuadratureGrid& grid, int dim);
RadialProfile profile_f(int k, const QuadratureGrid& grid, int dim);
RadialProfile profile_dirac(double x0, const PhaseMatrix& c);

// Radial outcome set: union of quadrature-node indices (and/or the atom).
struct RadialBinSet {
    std::vector<int> nodes;
    bool contains_atom = false;
};

RadialBinSet all_nodes(const RadialProfile& profile);
// Partition of the nodes into `bins` contiguous chunks (atom goes to bin 0).
std::vector<RadialBinSet> node_partition(const RadialProfile& profile, int bins);

// P(X x Theta)_{mn} = [sum_{q in X} w_q <eta_m(x_q)|eta_n(x_q)>] * kernel(m-n, Theta)
Matrix psc_effect(const RadialProfile& profile, const RadialBinSet& x,
                  double lo, double hi);

// c_mn = int <eta_m|eta_n> dmu. Raises if the result fails PSD by more than
// psd_floor (no repair).
PhaseMatrix angle_margin(const RadialProfile& profile, double psd_floor = -1e-8);

// Markov kernel (X_j, m) -> c_mm(X_j); rows m, columns j.
RealMatrix radial_margin_kernel(const RadialProfile& profile,
                                const std::vector<RadialBinSet>& bins);

// Discrete covariantization average over the partition's own shift group:
// P(X, Theta_j) = (1/K) sum_s e^{-i theta_s N} M(X x Theta_{j+s}) e^{i theta_s N}.
// Effect table indexed [radial bin][angle bin] on a uniform K-bin partition.
std::vector<std::vector<Matrix>>
covariantize(const std::vector<std::vector<Matrix>>& effects, int dim);

} // namespace phasekit
