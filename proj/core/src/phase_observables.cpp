#include "phasekit/phase_observables.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace phasekit {

PhaseMatrix PhaseMatrix::canonical(int dim) {
    PhaseMatrix c;
    c.dim = dim;
    c.c = Matrix::Ones(dim, dim);
    return c;
}

PhaseMatrix PhaseMatrix::identity(int dim) {
    PhaseMatrix c;
    c.dim = dim;
    c.c = Matrix::Identity(dim, dim);
    return c;
}

PhaseMatrix PhaseMatrix::from_matrix(Matrix m, double psd_floor, double diag_tol) {
    PhaseMatrix c;
    c.dim = static_cast<int>(m.rows());
    if (m.rows() != m.cols()) throw std::invalid_argument("PhaseMatrix: not square");
    for (int k = 0; k < c.dim; ++k) {
        if (std::abs(m(k, k) - Complex(1.0, 0.0)) > diag_tol)
            throw std::invalid_argument("PhaseMatrix: diagonal deviates from 1");
        m(k, k) = 1.0;
    }
    c.c = std::move(m);
    c.validate(psd_floor);
    return c;
}

void PhaseMatrix::validate(double psd_floor) const {
    if (dim < 1 || c.rows() != dim || c.cols() != dim)
        throw std::invalid_argument("PhaseMatrix: bad shape");
    if ((c - c.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("PhaseMatrix: not Hermitian");
    for (int k = 0; k < dim; ++k)
        if (c(k, k) != Complex(1.0, 0.0))
            throw std::invalid_argument("PhaseMatrix: diagonal not 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(c, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < psd_floor)
        throw std::invalid_argument("PhaseMatrix: fails positive semidefiniteness");
}

Complex angle_kernel_integral(int k, double lo, double hi) {
    if (!(0.0 <= lo && lo < hi && hi <= kTwoPi))
        throw std::invalid_argument("angle_kernel_integral: need 0 <= lo < hi <= 2pi");
    if (k == 0) return Complex((hi - lo) / kTwoPi, 0.0);
    const Complex num = std::polar(1.0, hi * k) - std::polar(1.0, lo * k);
    return num / Complex(0.0, kTwoPi * k);
}

PhaseEffect phase_effect(const PhaseMatrix& c, double lo, double hi) {
    PhaseEffect e;
    e.lo = lo;
    e.hi = hi;
    e.op = Matrix(c.dim, c.dim);
    for (int m = 0; m < c.dim; ++m)
        for (int n = 0; n < c.dim; ++n)
            e.op(m, n) = c.c(m, n) * angle_kernel_integral(m - n, lo, hi);
    return e;
}

RealVector phase_distribution(const DensityMatrix& rho, const PhaseMatrix& c,
                              const AnglePartition& part) {
    if (rho.dim != c.dim) throw std::invalid_argument("phase_distribution: dim mismatch");
    const int bins = part.bins();
    RealVector p(bins);
    for (int j = 0; j < bins; ++j) {
        const PhaseEffect e = phase_effect(c, part.lo(j), part.hi(j));
        double pj = (rho.mat * e.op).trace().real();
        if (pj < 0.0) {
            if (pj < -1e-10) throw std::runtime_error("phase_distribution: negative bin weight");
            pj = 0.0;
        }
        p[j] = pj;
    }
    if (std::abs(p.sum() - 1.0) > 1e-6)
        throw std::runtime_error("phase_distribution: trace deficit (truncation problem)");
    return p;
}

StructureVectors structure_vectors(const PhaseMatrix& c) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(c.c);
    const RealVector& lam = es.eigenvalues(); // ascending
    const double cutoff = 1e-12 * lam[c.dim - 1];
    StructureVectors sv;
    sv.dim = c.dim;
    std::vector<int> keep;
    for (int k = c.dim - 1; k >= 0; --k) // largest first, fixed convention
        if (lam[k] > cutoff) keep.push_back(k);
    sv.rank = static_cast<int>(keep.size());
    sv.eta = Matrix(c.dim, sv.rank);
    for (int idx = 0; idx < sv.rank; ++idx) {
        const int k = keep[idx];
        const double s = std::sqrt(lam[k]);
        for (int m = 0; m < c.dim; ++m)
            sv.eta(m, idx) = s * std::conj(es.eigenvectors()(m, k));
    }
    return sv;
}

std::vector<std::pair<double, double>> wrap_interval(double lo, double hi, double shift) {
    auto mod = [](double t) {
        double r = std::fmod(t, kTwoPi);
        if (r < 0.0) r += kTwoPi;
        return r;
    };
    const double a = mod(lo + shift);
    const double width = hi - lo;
    std::vector<std::pair<double, double>> pieces;
    if (a + width <= kTwoPi + 1e-15) {
        pieces.emplace_back(a, std::min(a + width, kTwoPi));
    } else {
        pieces.emplace_back(a, kTwoPi);
        pieces.emplace_back(0.0, a + width - kTwoPi);
    }
    return pieces;
}

double check_covariance(const PhaseMatrix& c, double theta, double lo, double hi) {
    const int d = c.dim;
    const PhaseEffect e = phase_effect(c, lo, hi);
    Vector u(d);
    for (int n = 0; n < d; ++n) u[n] = std::polar(1.0, theta * n);
    Matrix lhs = u.asDiagonal() * e.op * u.conjugate().asDiagonal();
    Matrix rhs = Matrix::Zero(d, d);
    for (const auto& [a, b] : wrap_interval(lo, hi, theta)) {
        if (b - a < 1e-15) continue;
        rhs += phase_effect(c, a, b).op;
    }
    return (lhs - rhs).norm();
}

Matrix number_shift_operator(int k, int dim) {
    Matrix b = Matrix::Zero(dim, dim);
    for (int m = std::max(0, -k); m < dim && m + k < dim; ++m) b(m, m + k) = 1.0;
    return b;
}

double commutator_defect(const Matrix& a, const AnglePartition& part) {
    const int d = static_cast<int>(a.rows());
    if (a.cols() != d) throw std::invalid_argument("commutator_defect: not square");
    const PhaseMatrix can = PhaseMatrix::canonical(d);
    double worst = 0.0;
    for (int j = 0; j < part.bins(); ++j) {
        const Matrix e = phase_effect(can, part.lo(j), part.hi(j)).op;
        worst = std::max(worst, (a * e - e * a).norm());
    }
    return worst;
}

MarkovKernel MarkovKernel::piecewise(AnglePartition base, RealMatrix values) {
    MarkovKernel k;
    k.output_bins = static_cast<int>(values.rows());
    if (values.cols() != base.bins())
        throw std::invalid_argument("MarkovKernel: values shape does not match partition");
    k.base = std::move(base);
    k.values = std::move(values);
    k.validate();
    return k;
}

MarkovKernel MarkovKernel::smooth(int output_bins, std::function<double(int, double)> fn) {
    MarkovKernel k;
    k.output_bins = output_bins;
    k.fn = std::move(fn);
    k.validate();
    return k;
}

double MarkovKernel::at(int j, double theta) const {
    if (fn) return fn(j, theta);
    for (int b = 0; b < base.bins(); ++b)
        if (theta < base.hi(b)) return values(j, b);
    return values(j, base.bins() - 1);
}

void MarkovKernel::validate() const {
    if (output_bins < 1) throw std::invalid_argument("MarkovKernel: no output bins");
    if (piecewise_constant()) {
        for (int b = 0; b < base.bins(); ++b) {
            double col = 0.0;
            for (int j = 0; j < output_bins; ++j) {
                const double v = values(j, b);
                if (v < -1e-12 || v > 1.0 + 1e-12)
                    throw std::invalid_argument("MarkovKernel: value outside [0,1]");
                col += v;
            }
            if (std::abs(col - 1.0) > 1e-10)
                throw std::invalid_argument("MarkovKernel: kernel normalization violation");
        }
    } else {
        for (int t = 0; t < 64; ++t) {
            const double theta = kTwoPi * t / 64;
            double tot = 0.0;
            for (int j = 0; j < output_bins; ++j) {
                const double v = fn(j, theta);
                if (v < -1e-12 || v > 1.0 + 1e-12)
                    throw std::invalid_argument("MarkovKernel: value outside [0,1]");
                tot += v;
            }
            if (std::abs(tot - 1.0) > 1e-10)
                throw std::invalid_argument("MarkovKernel: kernel normalization violation");
        }
    }
}

namespace {

// (1/2pi) int m(X_j, theta) e^{i theta k} dtheta over [lo,hi), closed form on
// base-bin intersections for piecewise kernels; global trapezoid otherwise.
Complex kernel_fourier(const MarkovKernel& kernel, int j, int k, double lo, double hi) {
    if (kernel.piecewise_constant()) {
        Complex acc(0.0, 0.0);
        for (int b = 0; b < kernel.base.bins(); ++b) {
            const double a = std::max(lo, kernel.base.lo(b));
            const double c = std::min(hi, kernel.base.hi(b));
            if (c - a < 1e-15) continue;
            acc += kernel.values(j, b) * angle_kernel_integral(k, a, c);
        }
        return acc;
    }
    // fixed-rate trapezoid on the periodic grid, restricted to [lo, hi)
    Complex acc(0.0, 0.0);
    const double dt = kTwoPi / kKernelTrapezoidPoints;
    for (int t = 0; t < kKernelTrapezoidPoints; ++t) {
        const double theta = dt * t;
        if (theta < lo || theta >= hi) continue;
        acc += kernel.fn(j, theta) * std::polar(1.0, theta * k);
    }
    return acc * (dt / kTwoPi);
}

} // namespace

std::vector<Matrix> post_process(const MarkovKernel& kernel, int dim) {
    kernel.validate();
    std::vector<Matrix> effects;
    effects.reserve(kernel.output_bins);
    Matrix total = Matrix::Zero(dim, dim);
    for (int j = 0; j < kernel.output_bins; ++j) {
        Matrix f(dim, dim);
        for (int m = 0; m < dim; ++m)
            for (int n = 0; n < dim; ++n)
                f(m, n) = kernel_fourier(kernel, j, m - n, 0.0, kTwoPi);
        total += f;
        effects.push_back(std::move(f));
    }
    if ((total - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-8)
        throw std::runtime_error("post_process: effects do not sum to identity");
    return effects;
}

Matrix joint_observable(const MarkovKernel& kernel, int output_bin, double lo,
                        double hi, int dim) {
    Matrix m(dim, dim);
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
            m(a, b) = kernel_fourier(kernel, output_bin, a - b, lo, hi);
    return m;
}

} // namespace phasekit
