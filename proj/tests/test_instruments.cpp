#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "phasekit/instruments.hpp"
#include "phasekit/rng.hpp"
#include "phasekit/states.hpp"
#include "test_support.hpp"

using namespace phasekit;

TEST_CASE("rank-1 canonical instrument with a vacuum posterior") {
    const int d = 12;
    const PhaseMatrix can = PhaseMatrix::canonical(d);
    const StructureVectors sv = structure_vectors(can); // rank 1, eta = const
    Rng rng(3);
    const DensityMatrix rho = rng.random_density(d);
    const InstrumentOutput out = rank1_covariant_instrument(rho, can, sv, 0.0, kTwoPi);
    // full-interval output is the rank-1 posterior times tr[rho] = 1
    CHECK(out.weight == doctest::Approx(1.0).epsilon(1e-10));
    Matrix want = Matrix::Zero(d, d);
    want(0, 0) = 1.0;
    CHECK((out.op - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("instrument weight matches the observable statistics") {
    const int d = 12;
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const PhaseMatrix c = rng.random_phase_matrix(d);
        const StructureVectors sv = structure_vectors(c);
        const DensityMatrix rho = rng.random_density(d);
        const double lo = 4.0 * rng.uniform();
        const double hi = std::min(lo + std::max(0.05, 2.0 * rng.uniform()), kTwoPi);
        const InstrumentOutput out = rank1_covariant_instrument(rho, c, sv, lo, hi);
        const double want = (rho.mat * phase_effect(c, lo, hi).op).trace().real();
        CHECK(std::abs(out.weight - want) < 1e-9);
        // outputs are positive semidefinite
        Eigen::SelfAdjointEigenSolver<Matrix> es(out.op, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() > -1e-10);
    }
}

TEST_CASE("instrument covariance under phase shifts") {
    const int d = 10;
    Rng rng(11);
    const PhaseMatrix c = rng.random_phase_matrix(d);
    const StructureVectors sv = structure_vectors(c);
    const DensityMatrix rho = rng.random_density(d);
    for (int s = 1; s < 10; ++s) {
        const double theta = kTwoPi * s / 10;
        const Vector u = phase_shift_diagonal(theta, d);
        DensityMatrix shifted;
        shifted.dim = d;
        shifted.mat = u.conjugate().asDiagonal() * rho.mat * u.asDiagonal();
        const Matrix lhs = u.asDiagonal() *
                           rank1_covariant_instrument(shifted, c, sv, 0.8, 2.3).op *
                           u.conjugate().asDiagonal();
        Matrix rhs = Matrix::Zero(d, d);
        for (const auto& [a, b] : wrap_interval(0.8, 2.3, theta)) {
            if (b - a < 1e-15) continue;
            rhs += rank1_covariant_instrument(rho, c, sv, a, b).op;
        }
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("nuclear canonical instrument") {
    const int d = 12;
    Rng rng(13);
    const DensityMatrix vac = DensityMatrix::pure(number_state(0, d));
    FockVector eta;
    eta.dim = d;
    eta.amp = Vector::Zero(d);
    eta.amp[0] = std::sqrt(0.6);
    eta.amp[1] = Complex(0.0, std::sqrt(0.4));

    // vacuum state: canonical density is uniform, so the output is the
    // angle-average of the posterior over Theta
    const double lo = 0.5, hi = 2.7;
    const InstrumentOutput out = canonical_nuclear_instrument(vac, eta, lo, hi);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
            const Complex want = eta.amp[j] * std::conj(eta.amp[k]) *
                                 angle_kernel_integral(j - k, lo, hi);
            CHECK(std::abs(out.op(j, k) - want) < 1e-14);
        }

    // number-state posteriors are rotation invariant: output is |n><n| scaled
    const DensityMatrix rho = rng.random_density(d);
    const InstrumentOutput fixed =
        canonical_nuclear_instrument(rho, number_state(3, d), 0.2, 1.4);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
            if (j != 3 || k != 3) CHECK(std::abs(fixed.op(j, k)) < 1e-14);
    CHECK(fixed.weight ==
          doctest::Approx((rho.mat * phase_effect(PhaseMatrix::canonical(d), 0.2, 1.4).op)
                              .trace()
                              .real())
              .epsilon(1e-9));

    // agreement with the rank-1 form for the all-ones phase matrix
    StructureVectors sv;
    sv.dim = d;
    sv.rank = d;
    sv.eta = Matrix::Zero(d, d);
    for (int m = 0; m < d; ++m)
        for (int j = 0; j < d; ++j) sv.eta(m, j) = eta.amp[j];
    const InstrumentOutput r1 =
        rank1_covariant_instrument(rho, PhaseMatrix::canonical(d), sv, 0.5, 2.7);
    const InstrumentOutput nuc = canonical_nuclear_instrument(rho, eta, 0.5, 2.7);
    CHECK((r1.op - nuc.op).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("instrument additivity and normalization") {
    const int d = 10;
    Rng rng(17);
    const PhaseMatrix c = rng.random_phase_matrix(d);
    const StructureVectors sv = structure_vectors(c);
    const DensityMatrix rho = rng.random_density(d);
    const Matrix whole = rank1_covariant_instrument(rho, c, sv, 0.3, 2.9).op;
    const Matrix a = rank1_covariant_instrument(rho, c, sv, 0.3, 1.1).op;
    const Matrix b = rank1_covariant_instrument(rho, c, sv, 1.1, 2.9).op;
    CHECK((whole - a - b).cwiseAbs().maxCoeff() < 1e-12);

    const AnglePartition part = AnglePartition::uniform(12);
    Complex trace(0.0, 0.0);
    for (int j = 0; j < part.bins(); ++j)
        trace += rank1_covariant_instrument(rho, c, sv, part.lo(j), part.hi(j)).op.trace();
    CHECK(std::abs(trace - Complex(1.0, 0.0)) < 1e-9);
}

TEST_CASE("Choi blocks of instrument bins are positive semidefinite") {
    const int d = 8;
    Rng rng(19);
    const AnglePartition part = AnglePartition::uniform(6);
    for (int trial = 0; trial < 3; ++trial) {
        const PhaseMatrix c = rng.random_phase_matrix(d);
        const StructureVectors sv = structure_vectors(c);
        for (int j = 0; j < part.bins(); ++j) {
            const Matrix choi = instrument_choi(c, sv, part.lo(j), part.hi(j));
            CHECK((choi - choi.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
            Eigen::SelfAdjointEigenSolver<Matrix> es(choi, Eigen::EigenvaluesOnly);
            CHECK(es.eigenvalues().minCoeff() > -1e-8);
        }
    }
}

TEST_CASE("swap interaction from the antisymmetric projector") {
    CHECK(swap_hamiltonian_check(2) < 1e-12);
    CHECK(swap_hamiltonian_check(8) < 1e-10);
    // SWAP^2 = I exactly
    const int d = 6;
    Matrix swap = Matrix::Zero(d * d, d * d);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) swap(n * d + m, m * d + n) = 1.0;
    CHECK((swap * swap - Matrix::Identity(d * d, d * d)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dilation identity") {
    const int d = 16;
    Rng rng(23);
    const DensityMatrix any = rng.random_density(d);
    CHECK(dilation_check(any, 0.0, kTwoPi, d) < 1e-12);

    const DensityMatrix coh = DensityMatrix::pure(coherent_state(Complex(1.0, 0.0), d));
    CHECK(dilation_check(coh, 0.0, M_PI, d) < 1e-9);

    for (int trial = 0; trial < 10; ++trial) {
        const DensityMatrix rho = rng.random_density(d);
        const double lo = 4.0 * rng.uniform();
        const double hi = std::min(lo + std::max(0.1, 2.5 * rng.uniform()), kTwoPi);
        CHECK(dilation_check(rho, lo, hi, d) < 1e-8);
    }
}
