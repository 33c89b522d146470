#include "phasekit/rng.hpp"

#include <cmath>

namespace phasekit {

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return r * std::cos(kTwoPi * u2);
}

Complex Rng::complex_gaussian() {
    const double re = gaussian();
    return Complex(re, gaussian());
}

FockVector Rng::random_state(int dim) {
    FockVector psi;
    psi.dim = dim;
    psi.amp = Vector(dim);
    for (int n = 0; n < dim; ++n) psi.amp[n] = complex_gaussian();
    psi.amp /= psi.amp.norm();
    return psi;
}

DensityMatrix Rng::random_density(int dim, int rank) {
    if (rank <= 0) rank = dim;
    DensityMatrix rho;
    rho.dim = dim;
    rho.mat = Matrix::Zero(dim, dim);
    double total = 0.0;
    std::vector<double> w(rank);
    for (int r = 0; r < rank; ++r) {
        w[r] = uniform() + 1e-3;
        total += w[r];
    }
    for (int r = 0; r < rank; ++r) {
        const FockVector psi = random_state(dim);
        rho.mat += (w[r] / total) * (psi.amp * psi.amp.adjoint());
    }
    return rho;
}

DensityMatrix Rng::random_diagonal_density(int dim) {
    DensityMatrix rho;
    rho.dim = dim;
    rho.mat = Matrix::Zero(dim, dim);
    double total = 0.0;
    std::vector<double> w(dim);
    for (int n = 0; n < dim; ++n) {
        w[n] = uniform();
        total += w[n];
    }
    for (int n = 0; n < dim; ++n) rho.mat(n, n) = w[n] / total;
    return rho;
}

PhaseMatrix Rng::random_phase_matrix(int dim, int rank) {
    if (rank <= 0) rank = 1 + static_cast<int>(uniform() * dim);
    rank = std::min(rank, dim);
    // random unit structure vectors give a PSD unit-diagonal Gram matrix
    Matrix eta(dim, rank);
    for (int m = 0; m < dim; ++m) {
        for (int r = 0; r < rank; ++r) eta(m, r) = complex_gaussian();
        eta.row(m) /= eta.row(m).norm();
    }
    Matrix c(dim, dim);
    for (int m = 0; m < dim; ++m)
        for (int n = 0; n < dim; ++n) c(m, n) = eta.row(m).dot(eta.row(n));
    return PhaseMatrix::from_matrix(std::move(c), -1e-10, 1e-12);
}

} // namespace phasekit
