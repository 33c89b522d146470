#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "phasekit/phase_space.hpp"
#include "phasekit/rng.hpp"
#include "phasekit/special.hpp"
#include "phasekit/states.hpp"
#include "test_support.hpp"

using namespace phasekit;

namespace {

double covariance_defect(const RadialProfile& p, const RadialBinSet& x, double lo,
                         double hi, double theta) {
    const int d = p.dim();
    const Matrix e = psc_effect(p, x, lo, hi);
    Vector u(d);
    for (int n = 0; n < d; ++n) u[n] = std::polar(1.0, theta * n);
    const Matrix lhs = u.asDiagonal() * e * u.conjugate().asDiagonal();
    Matrix rhs = Matrix::Zero(d, d);
    for (const auto& [a, b] : wrap_interval(lo, hi, theta)) {
        if (b - a < 1e-15) continue;
        rhs += psc_effect(p, x, a, b);
    }
    return (lhs - rhs).norm();
}

} // namespace

TEST_CASE("G^0 profile values and normalization") {
    const int d = 20;
    const QuadratureGrid grid = QuadratureGrid::radial(64);
    const RadialProfile g0 = profile_g(0, grid, d);
    for (int m = 0; m < d; m += 3)
        for (int q = 0; q < grid.order; q += 13) {
            const double x = grid.nodes[q];
            const double want =
                std::pow(x, 0.5 * m) * std::exp(-0.5 * log_factorial(m));
            CHECK(std::abs(g0.eta[m](0, q) - Complex(want, 0.0)) < 1e-12);
        }
    for (int m = 0; m <= 16; ++m) {
        double norm = 0.0;
        for (int q = 0; q < grid.order; ++q)
            norm += grid.weights[q] * std::norm(g0.eta[m](0, q));
        CHECK(std::abs(norm - 1.0) < 1e-8);
    }
}

TEST_CASE("G^0 margins against the Gamma integral oracle") {
    const int d = 24;
    const QuadratureGrid grid = QuadratureGrid::radial(64);
    const PhaseMatrix c = angle_margin(profile_g(0, grid, d));
    double worst = 0.0;
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
            const double want = std::exp(std::lgamma(0.5 * (m + n) + 1.0) -
                                         0.5 * (log_factorial(m) + log_factorial(n)));
            worst = std::max(worst, std::abs(c.c(m, n) - Complex(want, 0.0)));
        }
    CHECK(worst < 1e-8);
    CHECK(std::abs(c.c(0, 1).real() - 0.88622692545275801) < 1e-8);
    CHECK(std::abs(c.c(0, 1).real()) < 1.0);
}

TEST_CASE("G^k angle margins are never canonical") {
    const QuadratureGrid grid = QuadratureGrid::radial(64);
    for (int k = 0; k <= 8; ++k) {
        const PhaseMatrix c = angle_margin(profile_g(k, grid, 32));
        CHECK(std::abs(c.c(0, 1)) < 1.0 - 1e-3);
    }
}

TEST_CASE("F^k margins give the Kronecker pattern") {
    const int d = 24;
    const QuadratureGrid grid = QuadratureGrid::radial(64);
    for (const int k : {0, 1, 3}) {
        const PhaseMatrix c = angle_margin(profile_f(k, grid, d));
        double worst = 0.0;
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n) {
                const double want = (std::min(m, k) == std::min(n, k)) ? 1.0 : 0.0;
                worst = std::max(worst, std::abs(c.c(m, n) - Complex(want, 0.0)));
            }
        CHECK(worst < 1e-9);
        // the (k+1)x(k+1) upper-left block is the identity
        for (int m = 0; m <= k; ++m)
            for (int n = 0; n <= k; ++n)
                CHECK(std::abs(c.c(m, n) - Complex(m == n ? 1.0 : 0.0, 0.0)) < 1e-9);
    }
    // k = 0 gives the canonical (all-ones) phase matrix
    const PhaseMatrix f0 = angle_margin(profile_f(0, grid, d));
    CHECK((f0.c - Matrix::Ones(d, d)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("F^1 radial margin distinguishes only m=0 from m>=1") {
    const int d = 16;
    const QuadratureGrid grid = QuadratureGrid::radial(64);
    const RadialProfile f1 = profile_f(1, grid, d);
    const auto bins = node_partition(f1, 6);
    const RealMatrix k = radial_margin_kernel(f1, bins);
    for (int m = 1; m < d; ++m)
        CHECK((k.row(m) - k.row(1)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((k.row(0) - k.row(1)).cwiseAbs().maxCoeff() > 0.05);
    // rows are probability vectors
    for (int m = 0; m < d; ++m) CHECK(std::abs(k.row(m).sum() - 1.0) < 1e-10);
}

TEST_CASE("Dirac profiles reproduce their phase matrix and trivial radial margin") {
    const int d = 12;
    Rng rng(3);
    const PhaseMatrix c = rng.random_phase_matrix(d);
    const RadialProfile p = profile_dirac(1.7, c);
    CHECK(p.atomic());
    const PhaseMatrix back = angle_margin(p);
    CHECK((back.c - c.c).cwiseAbs().maxCoeff() < 1e-10);

    RadialBinSet with_atom, without_atom;
    with_atom.contains_atom = true;
    const RealMatrix k = radial_margin_kernel(p, {with_atom, without_atom});
    for (int m = 0; m < d; ++m) {
        CHECK(k(m, 0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(k(m, 1) == 0.0);
    }

    // canonical C: canonical angle margin, trivial radial margin
    const RadialProfile pc = profile_dirac(0.4, PhaseMatrix::canonical(d));
    const PhaseMatrix cm = angle_margin(pc);
    CHECK((cm.c - Matrix::Ones(d, d)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("psc effects: normalization, factorization, covariance") {
    const int d = 20;
    const QuadratureGrid grid = QuadratureGrid::radial(64);
    const RadialProfile g1 = profile_g(1, grid, d);
    const Matrix full = psc_effect(g1, all_nodes(g1), 0.0, kTwoPi);
    for (int m = 0; m <= d / 2; ++m)
        for (int n = 0; n <= d / 2; ++n)
            CHECK(std::abs(full(m, n) - Complex(m == n ? 1.0 : 0.0, 0.0)) < 1e-8);

    // scalar-component profiles factorize as c_mn(X) * kernel(m-n, Theta)
    const RadialProfile f0 = profile_f(0, grid, d);
    const auto bins = node_partition(f0, 4);
    const Matrix e = psc_effect(f0, bins[1], 0.7, 2.2);
    Matrix radial(d, d);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
            Complex acc(0.0, 0.0);
            for (int q : bins[1].nodes)
                acc += grid.weights[q] * std::conj(f0.eta[m](0, q)) * f0.eta[n](0, q);
            radial(m, n) = acc;
        }
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            CHECK(std::abs(e(m, n) - radial(m, n) * angle_kernel_integral(m - n, 0.7, 2.2)) <
                  1e-14);

    for (const auto* p : {&g1, &f0}) {
        for (int s = 1; s <= 4; ++s)
            CHECK(covariance_defect(*p, node_partition(*p, 4)[s % 4], 0.4, 2.0,
                                    0.61 * s) < 1e-10);
    }
}

TEST_CASE("radial margin kernel rows sum to one across a full partition") {
    const int d = 16;
    const QuadratureGrid grid = QuadratureGrid::radial(48);
    for (const int k : {0, 2}) {
        const RadialProfile p = profile_g(k, grid, d);
        const RealMatrix kernel = radial_margin_kernel(p, node_partition(p, 5));
        for (int m = 0; m <= d / 2; ++m)
            CHECK(std::abs(kernel.row(m).sum() - 1.0) < 1e-8);
    }
}

TEST_CASE("canonical angle margin forces a trivial radial margin") {
    const int d = 16;
    const QuadratureGrid grid = QuadratureGrid::radial(64);
    const RadialProfile f0 = profile_f(0, grid, d);
    const PhaseMatrix margin = angle_margin(f0);
    REQUIRE((margin.c - Matrix::Ones(d, d)).cwiseAbs().maxCoeff() < 1e-6);
    const RealMatrix kernel = radial_margin_kernel(f0, node_partition(f0, 6));
    for (int m = 1; m < d; ++m)
        CHECK((kernel.row(m) - kernel.row(0)).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("covariantize: fixed point, covariance, margin preservation") {
    const int d = 12, bins = 8;
    const QuadratureGrid grid = QuadratureGrid::radial(48);
    const AnglePartition part = AnglePartition::uniform(bins);
    const RadialProfile p = profile_f(1, grid, d);
    const auto rbins = node_partition(p, 3);
    std::vector<std::vector<Matrix>> table(rbins.size());
    for (size_t r = 0; r < rbins.size(); ++r)
        for (int j = 0; j < bins; ++j)
            table[r].push_back(psc_effect(p, rbins[r], part.lo(j), part.hi(j)));

    const auto fixed = covariantize(table, d);
    double fp = 0.0;
    for (size_t r = 0; r < rbins.size(); ++r)
        for (int j = 0; j < bins; ++j)
            fp = std::max(fp, (fixed[r][j] - table[r][j]).cwiseAbs().maxCoeff());
    CHECK(fp < 1e-10);

    // permuted bins: not covariant, same (diagonal) radial margin
    std::vector<std::vector<Matrix>> perm(table.size());
    for (size_t r = 0; r < table.size(); ++r)
        for (int j = 0; j < bins; ++j) perm[r].push_back(table[r][(5 * j + 2) % bins]);
    const auto cov = covariantize(perm, d);
    for (size_t r = 0; r < cov.size(); ++r)
        for (int j = 0; j < bins; ++j)
            for (int s = 0; s < bins; ++s) {
                const Vector u = phase_shift_diagonal(kTwoPi * s / bins, d);
                const Matrix lhs = u.asDiagonal() * cov[r][j] * u.conjugate().asDiagonal();
                CHECK((lhs - cov[r][(j + s) % bins]).cwiseAbs().maxCoeff() < 1e-10);
            }
    for (size_t r = 0; r < cov.size(); ++r) {
        Matrix before = Matrix::Zero(d, d), after = Matrix::Zero(d, d);
        for (int j = 0; j < bins; ++j) {
            before += perm[r][j];
            after += cov[r][j];
        }
        CHECK((before - after).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("angle margin refuses non-unit diagonals instead of repairing") {
    RadialProfile broken;
    broken.grid = QuadratureGrid::radial(8);
    broken.eta.resize(2);
    broken.eta[0] = Matrix::Constant(1, 8, 1.0);
    broken.eta[1] = Matrix::Constant(1, 8, 1.2); // norm 1.44, not a unit vector
    CHECK_THROWS_AS(angle_margin(broken), std::invalid_argument);
}

TEST_CASE("generated families stay PSD and normalized across partitions") {
    const int d = 16;
    const QuadratureGrid grid = QuadratureGrid::radial(64);
    const AnglePartition part = AnglePartition::uniform(12);
    Rng rng(41);
    std::vector<RadialProfile> profiles;
    profiles.push_back(profile_g(2, grid, d));
    profiles.push_back(profile_f(2, grid, d));
    profiles.push_back(profile_dirac(1.1, rng.random_phase_matrix(d)));
    for (const auto& p : profiles) {
        Matrix total = Matrix::Zero(d, d);
        const RadialBinSet full = all_nodes(p);
        for (int j = 0; j < part.bins(); ++j) {
            const Matrix e = psc_effect(p, full, part.lo(j), part.hi(j));
            Eigen::SelfAdjointEigenSolver<Matrix> es(e, Eigen::EigenvaluesOnly);
            CHECK(es.eigenvalues().minCoeff() > -1e-10);
            total += e;
        }
        for (int m = 0; m <= d / 2; ++m)
            for (int n = 0; n <= d / 2; ++n)
                CHECK(std::abs(total(m, n) - Complex(m == n ? 1.0 : 0.0, 0.0)) < 1e-8);
    }
}
