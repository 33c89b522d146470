#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "phasekit/phase_observables.hpp"
#include "phasekit/phase_space.hpp"
#include "phasekit/quadrature.hpp"
#include "phasekit/rng.hpp"
#include "phasekit/states.hpp"
#include "test_support.hpp"

using namespace phasekit;

TEST_CASE("angle kernel integral closed form") {
    CHECK(angle_kernel_integral(0, 0.0, kTwoPi) == Complex(1.0, 0.0));
    for (const int k : {-3, -1, 1, 2, 7})
        CHECK(std::abs(angle_kernel_integral(k, 0.0, kTwoPi)) < 1e-15);
    const Complex v = angle_kernel_integral(-1, 0.0, M_PI);
    CHECK(std::abs(v - Complex(0.0, -1.0 / M_PI)) < 1e-15);
    for (const int k : {-2, 3}) {
        const Complex closed = angle_kernel_integral(k, 0.4, 2.9);
        const Complex numeric = oracle::angle_integral_trapezoid(k, 0.4, 2.9, 10000);
        CHECK(std::abs(closed - numeric) < 1e-7);
    }
}

TEST_CASE("phase effects of the canonical matrix") {
    const int d = 12;
    const PhaseMatrix can = PhaseMatrix::canonical(d);
    CHECK(phase_effect(can, 0.0, kTwoPi).op.isIdentity(1e-14));
    const PhaseEffect e = phase_effect(can, 0.5, 2.0);
    for (int m = 0; m < d; ++m)
        CHECK(std::abs(e.op(m, m) - Complex(1.5 / kTwoPi, 0.0)) < 1e-15);
    const PhaseEffect half = phase_effect(can, 0.0, M_PI);
    CHECK(std::abs(half.op(0, 1) - Complex(0.0, -1.0 / M_PI)) < 1e-15);
}

TEST_CASE("phase matrix validation") {
    CHECK_THROWS_AS(PhaseMatrix::from_matrix(Matrix::Ones(4, 4) * 2.0),
                    std::invalid_argument);
    Matrix bad = Matrix::Identity(4, 4);
    bad(0, 1) = Complex(0.0, 2.0);
    bad(1, 0) = Complex(0.0, -2.0);
    CHECK_THROWS_AS(PhaseMatrix::from_matrix(std::move(bad)), std::invalid_argument);
}

TEST_CASE("phase distribution basics") {
    const int d = 16, bins = 24;
    const AnglePartition part = AnglePartition::uniform(bins);
    const DensityMatrix vac = DensityMatrix::pure(number_state(0, d));
    const RealVector pv = phase_distribution(vac, PhaseMatrix::canonical(d), part);
    for (int j = 0; j < bins; ++j) CHECK(pv[j] == doctest::Approx(1.0 / bins).epsilon(1e-12));

    Rng rng(11);
    const PhaseMatrix c = rng.random_phase_matrix(d);
    const DensityMatrix n5 = DensityMatrix::pure(number_state(5, d));
    const RealVector pn = phase_distribution(n5, c, part);
    for (int j = 0; j < bins; ++j) CHECK(pn[j] == doctest::Approx(1.0 / bins).epsilon(1e-12));
}

TEST_CASE("canonical distribution of a coherent state is the London histogram") {
    const int d = 32, bins = 360;
    const AnglePartition part = AnglePartition::uniform(bins);
    const DensityMatrix rho = DensityMatrix::pure(coherent_state(Complex(1.0, 0.0), d));
    const RealVector p = phase_distribution(rho, PhaseMatrix::canonical(d), part);
    const std::vector<double> want = oracle::london_histogram(Complex(1.0, 0.0), bins, 64);
    for (int j = 0; j < bins; ++j) CHECK(std::abs(p[j] - want[j]) < 1e-8);
}

TEST_CASE("structure vectors") {
    const int d = 14;
    const StructureVectors can = structure_vectors(PhaseMatrix::canonical(d));
    CHECK(can.rank == 1);
    for (int m = 1; m < d; ++m)
        CHECK(std::abs(can.eta(m, 0) - can.eta(0, 0)) < 1e-12);

    const StructureVectors id = structure_vectors(PhaseMatrix::identity(d));
    CHECK(id.rank == d);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            CHECK(std::abs(id.overlap(m, n) - (m == n ? 1.0 : 0.0)) < 1e-12);

    // F^|1> margin: rank 2 with Gram delta_{min(m,1),min(n,1)}
    const QuadratureGrid grid = QuadratureGrid::radial(64);
    const PhaseMatrix f1 = angle_margin(profile_f(1, grid, d));
    const StructureVectors sv = structure_vectors(f1);
    CHECK(sv.rank == 2);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
            const double want = (std::min(m, 1) == std::min(n, 1)) ? 1.0 : 0.0;
            CHECK(std::abs(sv.overlap(m, n) - Complex(want, 0.0)) < 1e-9);
        }
}

TEST_CASE("structure vector Gram reconstruction for random matrices") {
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const PhaseMatrix c = rng.random_phase_matrix(16);
        const StructureVectors sv = structure_vectors(c);
        double worst = 0.0;
        for (int m = 0; m < 16; ++m) {
            CHECK(std::abs(sv.eta.row(m).norm() - 1.0) < 1e-10);
            for (int n = 0; n < 16; ++n)
                worst = std::max(worst, std::abs(sv.overlap(m, n) - c.c(m, n)));
        }
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("covariance of phase effects") {
    const PhaseMatrix can = PhaseMatrix::canonical(20);
    CHECK(check_covariance(can, 0.0, 0.3, 1.1) == 0.0);
    CHECK(check_covariance(can, M_PI / 3.0, 0.0, M_PI / 2.0) < 1e-12);
    Rng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const PhaseMatrix c = rng.random_phase_matrix(12);
        const double theta = kTwoPi * rng.uniform();
        const double lo = 5.0 * rng.uniform();
        const double hi = lo + std::max(0.05, (kTwoPi - lo) * rng.uniform());
        CHECK(check_covariance(c, theta, lo, std::min(hi, kTwoPi)) < 1e-10);
    }
}

TEST_CASE("commutator defect separates scalars") {
    const int d = 16;
    const AnglePartition part = AnglePartition::uniform(8);
    const Matrix scal = Complex(2.3, 0.4) * Matrix::Identity(d, d);
    CHECK(commutator_defect(scal, part) < 1e-14);

    Matrix proj = Matrix::Zero(d, d);
    proj(0, 0) = 1.0;
    CHECK(commutator_defect(proj, part) > 0.01);

    Matrix num = Matrix::Zero(d, d);
    for (int n = 0; n < d; ++n) num(n, n) = n;
    CHECK(commutator_defect(num, part) > 0.01);

    // B_k builder: B_k = sum_m |m><m+k|
    const Matrix b2 = number_shift_operator(2, 6);
    CHECK(b2(0, 2) == Complex(1.0, 0.0));
    CHECK(b2(3, 5) == Complex(1.0, 0.0));
    CHECK(b2.cwiseAbs().sum() == doctest::Approx(4.0));
    const Matrix bm1 = number_shift_operator(-1, 6);
    CHECK(bm1(1, 0) == Complex(1.0, 0.0));
}

TEST_CASE("random non-scalar Hermitian operators fail to commute") {
    const int d = 12;
    const AnglePartition part = AnglePartition::uniform(8);
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        Matrix h(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) h(i, j) = rng.complex_gaussian();
        h = ((h + h.adjoint()) / 2.0).eval();
        CHECK(commutator_defect(h, part) > 1e-6);
    }
}

TEST_CASE("only trivial diagonal projections commute with all bins") {
    const int d = 8;
    const AnglePartition part = AnglePartition::uniform(8);
    for (int mask = 0; mask < (1 << d); ++mask) {
        Matrix p = Matrix::Zero(d, d);
        for (int n = 0; n < d; ++n)
            if (mask & (1 << n)) p(n, n) = 1.0;
        const bool commutes = commutator_defect(p, part) < 1e-10;
        const bool trivial = (mask == 0) || (mask == (1 << d) - 1);
        CHECK(commutes == trivial);
    }
}

TEST_CASE("post-processing by an identity kernel returns the canonical bins") {
    const int d = 10, bins = 8;
    const AnglePartition base = AnglePartition::uniform(bins);
    const MarkovKernel kernel =
        MarkovKernel::piecewise(base, RealMatrix::Identity(bins, bins));
    const auto effects = post_process(kernel, d);
    const PhaseMatrix can = PhaseMatrix::canonical(d);
    for (int j = 0; j < bins; ++j) {
        const Matrix want = phase_effect(can, base.lo(j), base.hi(j)).op;
        CHECK((effects[j] - want).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("constant kernels produce trivial observables") {
    const int d = 10, bins = 5;
    const AnglePartition base = AnglePartition::uniform(bins);
    RealMatrix vals(3, bins);
    const double mu[3] = {0.5, 0.3, 0.2};
    for (int j = 0; j < 3; ++j)
        for (int b = 0; b < bins; ++b) vals(j, b) = mu[j];
    const auto effects = post_process(MarkovKernel::piecewise(base, vals), d);
    for (int j = 0; j < 3; ++j)
        CHECK((effects[j] - mu[j] * Matrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("box-smoothing kernel: margins and positivity of the joint observable") {
    const int d = 12, bins = 8;
    const AnglePartition base = AnglePartition::uniform(bins);
    // m(X_j, theta) spread over the 3 bins centered at j (piecewise constant)
    RealMatrix vals = RealMatrix::Zero(bins, bins);
    for (int j = 0; j < bins; ++j)
        for (int off = -1; off <= 1; ++off)
            vals(j, (j + off + bins) % bins) = 1.0 / 3.0;
    const MarkovKernel kernel = MarkovKernel::piecewise(base, vals);
    const auto effects = post_process(kernel, d);

    // X margin of the joint observable reproduces the post-processed effects
    for (int j = 0; j < bins; ++j) {
        const Matrix m = joint_observable(kernel, j, 0.0, kTwoPi, d);
        CHECK((m - effects[j]).cwiseAbs().maxCoeff() < 1e-12);
    }
    // Theta margin reproduces the canonical bins
    const PhaseMatrix can = PhaseMatrix::canonical(d);
    for (int b = 0; b < bins; ++b) {
        Matrix sum = Matrix::Zero(d, d);
        for (int j = 0; j < bins; ++j)
            sum += joint_observable(kernel, j, base.lo(b), base.hi(b), d);
        CHECK((sum - phase_effect(can, base.lo(b), base.hi(b)).op).cwiseAbs().maxCoeff() <
              1e-12);
    }
    // joint effects are PSD
    for (int j = 0; j < bins; ++j) {
        const Matrix m = joint_observable(kernel, j, base.lo(j), base.hi(j), d);
        Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() > -1e-10);
    }
}

TEST_CASE("smooth kernel path against the closed Fourier oracle") {
    const int d = 10, bins = 8;
    const double delta = kTwoPi / bins;
    // true smoothing kernel: m(X_j, theta) = (1/2pi) int_{Theta_j} g(t - theta) dt
    // with g a box of width 3*delta and mass 2pi
    auto box_overlap = [&](int j, double theta) {
        // |Theta_j  intersect  [theta - 1.5 delta, theta + 1.5 delta] mod 2pi| / (3 delta)
        const double lo = delta * j, hi = delta * (j + 1);
        double covered = 0.0;
        double a = std::fmod(theta - 1.5 * delta, kTwoPi);
        if (a < 0.0) a += kTwoPi;
        double rest = 3.0 * delta;
        while (rest > 1e-15) {
            const double piece = std::min(rest, kTwoPi - a);
            const double s = std::max(a, lo), e = std::min(a + piece, hi);
            if (e > s) covered += e - s;
            rest -= piece;
            a = 0.0;
        }
        return covered / (3.0 * delta);
    };
    const MarkovKernel kernel = MarkovKernel::smooth(bins, box_overlap);
    const auto effects = post_process(kernel, d);
    // oracle: F(X_j)_{mn} = sinc(1.5 delta k) * kernelint(k, Theta_j), k = m-n
    double worst = 0.0;
    for (int j = 0; j < bins; ++j)
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n) {
                const int k = m - n;
                const double u = 1.5 * delta * k;
                const double ghat = (k == 0) ? 1.0 : std::sin(u) / u;
                const Complex want =
                    ghat * angle_kernel_integral(k, delta * j, delta * (j + 1));
                worst = std::max(worst, std::abs(effects[j](m, n) - want));
            }
    CHECK(worst < 2e-5); // trapezoid + midpoint-overlap resolution limited

    // margins of the joint observable agree with the post-processed effects to
    // rounding (identical trapezoid sums telescope)
    for (int j = 0; j < bins; ++j) {
        Matrix m = Matrix::Zero(d, d);
        for (int b = 0; b < bins; ++b)
            m += joint_observable(kernel, j, kTwoPi * b / bins, kTwoPi * (b + 1) / bins, d);
        CHECK((m - effects[j]).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("kernel normalization violations are rejected") {
    const int bins = 4;
    const AnglePartition base = AnglePartition::uniform(bins);
    RealMatrix vals = RealMatrix::Constant(bins, bins, 0.3);
    CHECK_THROWS_AS(MarkovKernel::piecewise(base, vals), std::invalid_argument);
}

TEST_CASE("every valid phase matrix yields a POVM: property sweep") {
    Rng rng(23);
    const int d = 12;
    const AnglePartition part = AnglePartition::uniform(10);
    for (int trial = 0; trial < 10; ++trial) {
        const PhaseMatrix c = rng.random_phase_matrix(d);
        Matrix total = Matrix::Zero(d, d);
        for (int j = 0; j < part.bins(); ++j) {
            const Matrix e = phase_effect(c, part.lo(j), part.hi(j)).op;
            Eigen::SelfAdjointEigenSolver<Matrix> es(e, Eigen::EigenvaluesOnly);
            CHECK(es.eigenvalues().minCoeff() > -1e-10);
            CHECK(es.eigenvalues().maxCoeff() < 1.0 + 1e-10);
            total += e;
        }
        CHECK((total - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-9);
    }
}
