#include "phasekit/instruments.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "phasekit/couplings.hpp"

namespace phasekit {

namespace {

// kernel integrals for all index differences in [-(2d-1), 2d-1]
std::vector<Complex> kernel_row(int dim, double lo, double hi) {
    std::vector<Complex> k(4 * dim - 1);
    for (int j = -(2 * dim - 1); j <= 2 * dim - 1; ++j)
        k[j + 2 * dim - 1] = angle_kernel_integral(j, lo, hi);
    return k;
}

} // namespace

InstrumentOutput rank1_covariant_instrument(const DensityMatrix& rho,
                                            const PhaseMatrix& c,
                                            const StructureVectors& eta,
                                            double lo, double hi) {
    const int d = rho.dim;
    if (c.dim != d || eta.dim != d)
        throw std::invalid_argument("rank1_covariant_instrument: dimension mismatch");
    if (eta.rank > d)
        throw std::invalid_argument("rank1_covariant_instrument: rank exceeds dim");
    const auto kint = kernel_row(d, lo, hi);
    InstrumentOutput out;
    out.lo = lo;
    out.hi = hi;
    out.op = Matrix::Zero(d, d);
    // output entry (j,k): sum_{m,n} rho(n,m) eta_n[j] conj(eta_m[k]) K(j-k+m-n)
    for (int j = 0; j < eta.rank; ++j)
        for (int k = 0; k < eta.rank; ++k) {
            Complex acc(0.0, 0.0);
            for (int m = 0; m < d; ++m)
                for (int n = 0; n < d; ++n) {
                    const Complex w = rho.mat(n, m) * eta.eta(n, j) * std::conj(eta.eta(m, k));
                    if (w == Complex(0.0, 0.0)) continue;
                    acc += w * kint[(j - k + m - n) + 2 * d - 1];
                }
            out.op(j, k) = acc;
        }
    out.weight = out.op.trace().real();
    return out;
}

InstrumentOutput canonical_nuclear_instrument(const DensityMatrix& rho,
                                              const FockVector& eta,
                                              double lo, double hi) {
    const int d = rho.dim;
    if (eta.dim != d)
        throw std::invalid_argument("canonical_nuclear_instrument: dimension mismatch");
    if (std::abs(eta.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("canonical_nuclear_instrument: eta not normalized");
    const auto kint = kernel_row(d, lo, hi);
    InstrumentOutput out;
    out.lo = lo;
    out.hi = hi;
    out.op = Matrix::Zero(d, d);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
            Complex acc(0.0, 0.0);
            for (int m = 0; m < d; ++m)
                for (int n = 0; n < d; ++n)
                    acc += rho.mat(n, m) * kint[(j - k + m - n) + 2 * d - 1];
            out.op(j, k) = eta.amp[j] * std::conj(eta.amp[k]) * acc;
        }
    out.weight = out.op.trace().real();
    return out;
}

double swap_hamiltonian_check(int dim) {
    if (dim < 2 || dim > 24)
        throw std::invalid_argument("swap_hamiltonian_check: dim out of range [2,24]");
    const int n2 = dim * dim;
    Matrix swap = Matrix::Zero(n2, n2);
    for (int m = 0; m < dim; ++m)
        for (int n = 0; n < dim; ++n) swap(n * dim + m, m * dim + n) = 1.0;
    const Matrix proj = 0.5 * (Matrix::Identity(n2, n2) - swap); // antisymmetric projector
    const Matrix h = M_PI * proj;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Matrix expo = Matrix::Zero(n2, n2);
    for (int k = 0; k < n2; ++k)
        expo += std::polar(1.0, es.eigenvalues()[k]) *
                (es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint());
    return (expo - swap).norm();
}

double dilation_check(const DensityMatrix& rho, double lo, double hi, int dim) {
    if (rho.dim != dim) throw std::invalid_argument("dilation_check: dimension mismatch");
    const Matrix o = o_angle_effect(lo, hi, dim);
    // tr[(rho x |0><0|) O] with the second mode pinned to |0>
    Complex lhs(0.0, 0.0);
    for (int p = 0; p < dim; ++p)
        for (int pp = 0; pp < dim; ++pp) lhs += rho.mat(p, pp) * o(pp * dim, p * dim);
    const PhaseEffect can = phase_effect(PhaseMatrix::canonical(dim), lo, hi);
    const Complex rhs = (rho.mat * can.op).trace();
    return std::abs(lhs - rhs);
}

Matrix instrument_choi(const PhaseMatrix& c, const StructureVectors& eta,
                       double lo, double hi) {
    const int d = c.dim;
    const auto kint = kernel_row(d, lo, hi);
    // Choi[(a,j),(b,k)] = eta_a[j] conj(eta_b[k]) K((j-a)-(k-b))
    Matrix choi = Matrix::Zero(d * d, d * d);
    for (int a = 0; a < d; ++a)
        for (int j = 0; j < eta.rank; ++j)
            for (int b = 0; b < d; ++b)
                for (int k = 0; k < eta.rank; ++k)
                    choi(a * d + j, b * d + k) = eta.eta(a, j) * std::conj(eta.eta(b, k)) *
                                                 kint[(j - a) - (k - b) + 2 * d - 1];
    return choi;
}

} // namespace phasekit
