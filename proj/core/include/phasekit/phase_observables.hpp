#pragma once

#include <functional>
#include <optional>

#include "phasekit/types.hpp"

namespace phasekit {

// Positive semidefinite unit-diagonal matrix (c_mn); determines a covariant
// phase observable E(Theta)_{mn} = c_mn (1/2pi) int_Theta e^{i theta (m-n)} dtheta.
struct PhaseMatrix {
    int dim = 0;
    Matrix c;

    static PhaseMatrix canonical(int dim);  // all-ones
    static PhaseMatrix identity(int dim);
    // Validates (Hermitian, unit diagonal within diag_tol, min eig >= psd_floor)
    // and canonicalizes the diagonal to exactly 1.
    static PhaseMatrix from_matrix(Matrix c, double psd_floor = -1e-10,
                                   double diag_tol = 1e-8);
    void validate(double psd_floor = -1e-10) const;
};

// (1/2pi) int_a^b e^{i theta k} dtheta, closed form.
Complex angle_kernel_integral(int k, double lo, double hi);

struct PhaseEffect {
    double lo = 0.0, hi = 0.0;
    Matrix op;
};

PhaseEffect phase_effect(const PhaseMatrix& c, double lo, double hi);

// p_j = Re tr[rho E(Theta_j)], clipped at 0. Throws if the total deviates
// from 1 by more than 1e-6 (truncation problem in rho).
RealVector phase_distribution(const DensityMatrix& rho, const PhaseMatrix& c,
                              const AnglePartition& part);

// Minimal Kolmogorov decomposition: unit vectors eta_m with <eta_m|eta_n> = c_mn.
struct StructureVectors {
    int dim = 0;
    int rank = 0;
    Matrix eta; // dim x rank, row m = eta_m

    Complex overlap(int m, int n) const { return eta.row(m).dot(eta.row(n)); }
};

StructureVectors structure_vectors(const PhaseMatrix& c);

// Frobenius norm of e^{i theta N} E(Theta) e^{-i theta N} - E(Theta + theta),
// the shifted interval wrapped mod 2pi.
double check_covariance(const PhaseMatrix& c, double theta, double lo, double hi);

// Splits [lo+shift, hi+shift) mod 2pi into at most two in-range pieces.
std::vector<std::pair<double, double>> wrap_interval(double lo, double hi, double shift);

// B_k = sum_m |m><m+k|
Matrix number_shift_operator(int k, int dim);

// max over bins of ||[A, E_can(Theta_j)]||_F
double commutator_defect(const Matrix& a, const AnglePartition& part);

// Post-processing kernel m(X_j, theta). Either piecewise constant on a base
// partition (values(j, b) on bin b) or a callable sampled on a fixed
// 4096-point trapezoid rule.
struct MarkovKernel {
    int output_bins = 0;
    AnglePartition base;
    RealMatrix values;
    std::function<double(int, double)> fn;

    static MarkovKernel piecewise(AnglePartition base, RealMatrix values);
    static MarkovKernel smooth(int output_bins, std::function<double(int, double)> fn);
    bool piecewise_constant() const { return !fn; }
    double at(int j, double theta) const;
    void validate() const;
};

constexpr int kKernelTrapezoidPoints = 4096;

// F(X_j) = int m(X_j, theta) dE_can(theta); checks sum_j F(X_j) = I within 1e-8.
std::vector<Matrix> post_process(const MarkovKernel& kernel, int dim);

// M(X_j x [lo,hi))_{mn} = (1/2pi) int_{lo}^{hi} m(X_j, theta) e^{i theta(m-n)} dtheta
Matrix joint_observable(const MarkovKernel& kernel, int output_bin, double lo,
                        double hi, int dim);

} // namespace phasekit
