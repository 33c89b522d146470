#include "phasekit/verify.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "phasekit/couplings.hpp"
#include "phasekit/homodyne.hpp"
#include "phasekit/instruments.hpp"
#include "phasekit/phase_observables.hpp"
#include "phasekit/phase_space.hpp"
#include "phasekit/rng.hpp"
#include "phasekit/special.hpp"
#include "phasekit/states.hpp"

namespace phasekit {

bool SuiteReport::passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

double VerifyConfig::tolerance(const std::string& key) const {
    const auto it = tol.find(key);
    if (it == tol.end()) throw std::invalid_argument("unknown tolerance key: " + key);
    return it->second;
}

void VerifyConfig::set_tolerance(const std::string& key, double value) {
    const auto it = tol.find(key);
    if (it == tol.end()) throw std::invalid_argument("unknown tolerance key: " + key);
    it->second = value;
}

namespace {

void add_check(SuiteReport& r, const std::string& name, double measured, double bound,
               bool larger_is_worse = true) {
    CheckResult c;
    c.name = name;
    c.measured = measured;
    c.bound = bound;
    c.passed = larger_is_worse ? (measured <= bound) : (measured >= bound);
    r.checks.push_back(c);
}

double min_effect_eigenvalue(const Matrix& e) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(e, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double max_effect_eigenvalue_defect(const Matrix& e) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(e, Eigen::EigenvaluesOnly);
    return std::max(0.0, es.eigenvalues().maxCoeff() - 1.0);
}

// worst covariance defect of the bin effects of c over a uniform shift grid
double povm_covariance_defect(const PhaseMatrix& c, const AnglePartition& part,
                              int shift_points) {
    double worst = 0.0;
    for (int s = 0; s < shift_points; ++s) {
        const double theta = kTwoPi * s / shift_points;
        for (int j = 0; j < part.bins(); j += std::max(1, part.bins() / 8))
            worst = std::max(worst, check_covariance(c, theta, part.lo(j), part.hi(j)));
    }
    return worst;
}

struct NamedMatrix {
    std::string name;
    PhaseMatrix c;
};

std::vector<NamedMatrix> povm_candidates(const VerifyConfig& cfg,
                                         const QuadratureGrid& grid) {
    std::vector<NamedMatrix> out;
    out.push_back({"canonical", PhaseMatrix::canonical(cfg.dim)});
    Rng rng(cfg.seed);
    for (int i = 0; i < 20; ++i)
        out.push_back({"random#" + std::to_string(i), rng.random_phase_matrix(cfg.dim)});
    for (int k = 0; k <= 4 && k < cfg.dim; ++k)
        out.push_back({"F^" + std::to_string(k),
                       angle_margin(profile_f(k, grid, cfg.dim))});
    for (int k = 0; k <= 4 && k < cfg.dim; ++k)
        out.push_back({"G^" + std::to_string(k),
                       angle_margin(profile_g(k, grid, cfg.dim))});
    out.push_back({"dirac", angle_margin(profile_dirac(1.0, rng.random_phase_matrix(cfg.dim)))});
    return out;
}

} // namespace

SuiteReport run_povm_suite(const VerifyConfig& cfg) {
    SuiteReport report{"povm", {}};
    const QuadratureGrid grid = QuadratureGrid::radial(cfg.quad);
    const AnglePartition part = AnglePartition::uniform(cfg.bins);
    const double psd_floor = cfg.tolerance("povm.psd_floor");
    const double sum_tol = cfg.tolerance("povm.bins_sum");
    const double cov_tol = cfg.tolerance("povm.covariance");

    double worst_eig = 0.0, worst_sum = 0.0, worst_cov = 0.0, worst_above = 0.0;
    for (const auto& cand : povm_candidates(cfg, grid)) {
        Matrix total = Matrix::Zero(cfg.dim, cfg.dim);
        for (int j = 0; j < part.bins(); ++j) {
            const Matrix e = phase_effect(cand.c, part.lo(j), part.hi(j)).op;
            total += e;
            worst_eig = std::min(worst_eig, min_effect_eigenvalue(e));
            worst_above = std::max(worst_above, max_effect_eigenvalue_defect(e));
        }
        worst_sum = std::max(worst_sum,
                             (total - Matrix::Identity(cfg.dim, cfg.dim)).cwiseAbs().maxCoeff());
        worst_cov = std::max(worst_cov, povm_covariance_defect(cand.c, part, 16));
    }
    add_check(report, "effects PSD (min eigenvalue)", worst_eig, -psd_floor, false);
    add_check(report, "effects below identity", worst_above, psd_floor);
    add_check(report, "bins sum to identity", worst_sum, sum_tol);
    add_check(report, "covariance defect on 16-point shift grid", worst_cov, cov_tol);

    // margin oracles
    {
        const int dm = std::min(cfg.dim, 24);
        double worst_f = 0.0;
        for (int k = 0; k <= 4 && k < dm; ++k) {
            const PhaseMatrix c = angle_margin(profile_f(k, grid, dm));
            for (int m = 0; m < dm; ++m)
                for (int n = 0; n < dm; ++n) {
                    const double want = (std::min(m, k) == std::min(n, k)) ? 1.0 : 0.0;
                    worst_f = std::max(worst_f, std::abs(c.c(m, n) - Complex(want, 0.0)));
                }
        }
        add_check(report, "F^k margin delta pattern", worst_f, cfg.tolerance("margin.f_delta"));

        const PhaseMatrix g0 = angle_margin(profile_g(0, grid, cfg.dim));
        const double c01 = std::abs(g0.c(0, 1) - Complex(0.88622692545275801, 0.0));
        add_check(report, "G^0 margin c_01 = sqrt(pi)/2", c01, cfg.tolerance("margin.g_gamma"));
        double worst_g = 0.0; // |c_01| < 1 for k <= 8
        for (int k = 0; k <= 8 && k < cfg.dim; ++k) {
            const PhaseMatrix gk = angle_margin(profile_g(k, grid, cfg.dim));
            worst_g = std::max(worst_g, std::abs(gk.c(0, 1)));
        }
        add_check(report, "G^k |c_01| < 1", worst_g, 1.0 - 1e-12);
    }

    // Lemma 1: commutator defect separates scalars from non-scalars
    {
        const int dl = 12;
        const AnglePartition pl = AnglePartition::uniform(8);
        Rng rng(cfg.seed + 1);
        double min_nonscalar = 1e300;
        for (int trial = 0; trial < 50; ++trial) {
            Matrix h(dl, dl);
            for (int i = 0; i < dl; ++i)
                for (int j = 0; j < dl; ++j) h(i, j) = rng.complex_gaussian();
            h = ((h + h.adjoint()) / 2.0).eval();
            min_nonscalar = std::min(min_nonscalar, commutator_defect(h, pl));
        }
        add_check(report, "lemma1: non-scalar commutator defect", min_nonscalar,
                  cfg.tolerance("lemma1.nonscalar"), false);
        const Matrix scal = Complex(0.7, -0.3) * Matrix::Identity(dl, dl);
        add_check(report, "lemma1: scalar commutator defect", commutator_defect(scal, pl),
                  cfg.tolerance("lemma1.scalar"));
    }

    // post-processing margins: joint observable reproduces both margins
    {
        const int dj = std::min(cfg.dim, 16);
        const int kbins = 8;
        const AnglePartition base = AnglePartition::uniform(kbins);
        RealMatrix vals = RealMatrix::Zero(kbins, kbins);
        for (int j = 0; j < kbins; ++j)
            for (int b = 0; b < kbins; ++b) {
                const int diff = std::abs(((j - b) % kbins + kbins) % kbins);
                const int wrap = std::min(diff, kbins - diff);
                vals(j, b) = (wrap == 0) ? 0.5 : (wrap == 1 ? 0.25 : 0.0);
            }
        const MarkovKernel kernel = MarkovKernel::piecewise(base, vals);
        const auto effects = post_process(kernel, dj);
        double worst = 0.0;
        for (int j = 0; j < kbins; ++j) {
            // X margin: Theta = full circle
            const Matrix m = joint_observable(kernel, j, 0.0, kTwoPi, dj);
            worst = std::max(worst, (m - effects[j]).cwiseAbs().maxCoeff());
        }
        // Theta margin: sum over output bins equals E_can on each interval
        const PhaseMatrix can = PhaseMatrix::canonical(dj);
        for (int b = 0; b < kbins; ++b) {
            Matrix sum = Matrix::Zero(dj, dj);
            for (int j = 0; j < kbins; ++j)
                sum += joint_observable(kernel, j, base.lo(b), base.hi(b), dj);
            worst = std::max(worst,
                             (sum - phase_effect(can, base.lo(b), base.hi(b)).op)
                                 .cwiseAbs()
                                 .maxCoeff());
        }
        add_check(report, "joint observable margins", worst, cfg.tolerance("joint.margin"));
    }
    return report;
}

namespace {

double psc_covariance_defect(const RadialProfile& p, const RadialBinSet& x,
                             double lo, double hi, double theta) {
    const int d = p.dim();
    const Matrix e = psc_effect(p, x, lo, hi);
    const Vector u = phase_shift_diagonal(theta, d);
    const Matrix lhs = u.asDiagonal() * e * u.conjugate().asDiagonal();
    Matrix rhs = Matrix::Zero(d, d);
    for (const auto& [a, b] : wrap_interval(lo, hi, theta)) {
        if (b - a < 1e-15) continue;
        rhs += psc_effect(p, x, a, b);
    }
    return (lhs - rhs).norm();
}

} // namespace

SuiteReport run_covariance_suite(const VerifyConfig& cfg) {
    SuiteReport report{"covariance", {}};
    const QuadratureGrid grid = QuadratureGrid::radial(cfg.quad);
    const double cov_tol = cfg.tolerance("povm.covariance");

    double worst = 0.0;
    Rng rng(cfg.seed + 2);
    std::vector<RadialProfile> profiles;
    profiles.push_back(profile_f(1, grid, cfg.dim));
    profiles.push_back(profile_g(1, grid, cfg.dim));
    profiles.push_back(profile_dirac(0.8, rng.random_phase_matrix(cfg.dim)));
    for (const auto& p : profiles) {
        const auto bins = node_partition(p, 4);
        for (int s = 1; s <= 5; ++s) {
            const double theta = 0.37 * s;
            worst = std::max(worst,
                             psc_covariance_defect(p, bins[s % bins.size()], 0.3, 2.1, theta));
        }
    }
    add_check(report, "phase-space effect covariance", worst, cov_tol);

    // covariantize: covariant input is a fixed point
    {
        const int dc = std::min(cfg.dim, 16);
        const int kbins = 8;
        const AnglePartition part = AnglePartition::uniform(kbins);
        const RadialProfile p = profile_f(1, grid, dc);
        const auto rbins = node_partition(p, 3);
        std::vector<std::vector<Matrix>> table(rbins.size());
        for (size_t r = 0; r < rbins.size(); ++r)
            for (int j = 0; j < kbins; ++j)
                table[r].push_back(psc_effect(p, rbins[r], part.lo(j), part.hi(j)));
        const auto fixed = covariantize(table, dc);
        double defect = 0.0;
        for (size_t r = 0; r < rbins.size(); ++r)
            for (int j = 0; j < kbins; ++j)
                defect = std::max(defect, (fixed[r][j] - table[r][j]).cwiseAbs().maxCoeff());
        add_check(report, "covariantize fixed point", defect, 1e-10);

        // covariantized permuted table obeys the covariance identity on the grid
        std::vector<std::vector<Matrix>> permuted(table.size());
        for (size_t r = 0; r < table.size(); ++r)
            for (int j = 0; j < kbins; ++j)
                permuted[r].push_back(table[r][(j * 3 + 1) % kbins]);
        const auto cov = covariantize(permuted, dc);
        double cdef = 0.0;
        for (size_t r = 0; r < cov.size(); ++r)
            for (int j = 0; j < kbins; ++j)
                for (int s = 0; s < kbins; ++s) {
                    const Vector u = phase_shift_diagonal(kTwoPi * s / kbins, dc);
                    const Matrix lhs = u.asDiagonal() * cov[r][j] * u.conjugate().asDiagonal();
                    cdef = std::max(cdef,
                                    (lhs - cov[r][(j + s) % kbins]).cwiseAbs().maxCoeff());
                }
        add_check(report, "covariantize output covariance", cdef, 1e-10);

        // radial margin preserved (diagonal, hence phase-shift invariant)
        double mdef = 0.0;
        for (size_t r = 0; r < table.size(); ++r) {
            Matrix before = Matrix::Zero(dc, dc), after = Matrix::Zero(dc, dc);
            for (int j = 0; j < kbins; ++j) {
                before += permuted[r][j];
                after += cov[r][j];
            }
            mdef = std::max(mdef, (before - after).cwiseAbs().maxCoeff());
        }
        add_check(report, "covariantize preserves radial margin", mdef, 1e-10);
    }

    // random phase matrices: effect covariance over 100 seeds
    {
        double wc = 0.0;
        Rng r2(cfg.seed + 3);
        for (int trial = 0; trial < 100; ++trial) {
            const PhaseMatrix c = r2.random_phase_matrix(std::min(cfg.dim, 16));
            const double theta = kTwoPi * r2.uniform();
            const double lo = kTwoPi * r2.uniform() * 0.9;
            const double hi = lo + (kTwoPi - lo) * std::max(0.05, r2.uniform());
            wc = std::max(wc, check_covariance(c, theta, lo, std::min(hi, kTwoPi)));
        }
        add_check(report, "random phase matrices covariance (100 seeds)", wc, cov_tol);
    }
    return report;
}

SuiteReport run_coupling_suite(const VerifyConfig& cfg) {
    SuiteReport report{"coupling", {}};
    if (cfg.quad < 2 * cfg.dim)
        throw std::invalid_argument("coupling suite requires quad >= 2*dim");
    const QuadratureGrid grid = QuadratureGrid::radial(cfg.quad);
    const int d = cfg.dim;
    const WMatrix w = w_matrix(d, grid);

    // W(|0,0>) = |0,0>
    {
        Vector col = w.mat.col(0);
        col[0] -= 1.0;
        add_check(report, "W(|0,0>) = |0,0>", col.cwiseAbs().maxCoeff(),
                  cfg.tolerance("coupling.w_vacuum_exact"));
    }

    // vacuum columns: quadrature vs closed form
    {
        double worst = 0.0;
        for (int m = 1; m <= std::min(6, d - 1); ++m) {
            const int kcap = std::min(40, d - 1 - m);
            const auto closed = w_column_vacuum(m, kcap);
            for (int k = 0; k <= kcap; ++k) {
                const Complex got = w.mat((k + m) * d + k, m * d + 0);
                worst = std::max(worst, std::abs(got - Complex(closed[k], 0.0)));
            }
        }
        add_check(report, "W vacuum columns match closed form", worst,
                  cfg.tolerance("coupling.vacuum_column"));
    }

    // number-difference selection rule: no weight outside k - l = m - n
    {
        double off = 0.0;
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n)
                for (int k = 0; k < d; ++k)
                    for (int l = 0; l < d; ++l)
                        if (k - l != m - n)
                            off = std::max(off, std::abs(w.mat(k * d + l, m * d + n)));
        add_check(report, "W block diagonal in number difference", off, 0.0, true);
    }

    // diagonal columns are exact; off-diagonal column norms match the
    // closed-form truncation tail
    {
        double diag_worst = 0.0;
        for (int n = 0; n < std::min(d, 8); ++n) {
            Vector col = w.mat.col(n * d + n);
            col[(n * d + n)] -= 1.0;
            diag_worst = std::max(diag_worst, col.norm());
        }
        add_check(report, "W diagonal columns exact", diag_worst, 1e-12);

        double tail_mismatch = 0.0;
        for (int m = 1; m <= std::min(4, d / 4); ++m) {
            const int kbig = 200000;
            const auto closed = w_column_vacuum(m, kbig);
            double tail = 0.0;
            for (size_t k = static_cast<size_t>(d); k < closed.size(); ++k)
                tail += closed[k] * closed[k];
            tail += m * m / (4.0 * kbig); // asymptotic remainder
            const double dropped = w.dropped(m, 0);
            tail_mismatch = std::max(
                tail_mismatch, std::abs(dropped - tail) / std::max(tail, 1e-12));
        }
        add_check(report, "W column truncation tail matches closed form (rel)",
                  tail_mismatch, cfg.tolerance("coupling.v_uw_tail_rel"));
    }

    // o_angle: bins sum to identity; dilation identity against E_can
    {
        const AnglePartition part = AnglePartition::uniform(8);
        Matrix total = Matrix::Zero(d * d, d * d);
        for (int j = 0; j < part.bins(); ++j)
            total += o_angle_effect(part.lo(j), part.hi(j), d);
        add_check(report, "O_angle bins sum to identity",
                  (total - Matrix::Identity(d * d, d * d)).cwiseAbs().maxCoeff(), 1e-12);

        Rng rng(cfg.seed + 4);
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            const DensityMatrix rho = rng.random_density(d);
            const double lo = kTwoPi * 0.9 * rng.uniform();
            const double hi = lo + std::max(0.1, (kTwoPi - lo) * rng.uniform());
            worst = std::max(worst, dilation_check(rho, lo, std::min(hi, kTwoPi), d));
        }
        add_check(report, "O_angle dilation identity", worst,
                  cfg.tolerance("coupling.dilation"));
    }

    // o_rad: full node set gives identity; F^k identity for the joint effect
    {
        RadialBinSet full;
        for (int q = 0; q < grid.order; ++q) full.nodes.push_back(q);
        const Matrix orad = o_rad_effect(full, d, grid);
        add_check(report, "O_rad(all) = identity",
                  (orad - Matrix::Identity(d * d, d * d)).cwiseAbs().maxCoeff(), 1e-8);

        RadialBinSet half;
        for (int q = 0; q < grid.order / 2; ++q) half.nodes.push_back(q);
        Rng rng(cfg.seed + 5);
        double worst = 0.0;
        for (int k = 0; k <= 2; ++k) {
            const DensityMatrix rho = rng.random_density(d);
            const Matrix oj = o_effect(half, 0.4, 2.9, d, grid);
            // tr[(rho x |k><k|) O]
            Complex lhs(0.0, 0.0);
            for (int p = 0; p < d; ++p)
                for (int pp = 0; pp < d; ++pp)
                    lhs += rho.mat(p, pp) * oj(pp * d + k, p * d + k);
            const Matrix fk = psc_effect(profile_f(k, grid, d), half, 0.4, 2.9);
            const Complex rhs = (rho.mat * fk).trace();
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        add_check(report, "O(X x Theta) reproduces F^k statistics", worst, 1e-8);
    }

    // swap interaction
    add_check(report, "exp(i pi P_antisym) = SWAP (d=8)", swap_hamiltonian_check(8),
              cfg.tolerance("coupling.swap"));
    return report;
}

namespace {

// expected double-homodyne table from the G^sigma' observable side
RealMatrix expected_homodyne_table(const DensityMatrix& rho, const RealVector& lambda,
                                   const QuadratureGrid& grid, const AnglePartition& part,
                                   int dim) {
    const int rows = 2 * dim - 1;
    std::vector<RadialProfile> profiles;
    for (int k = 0; k < lambda.size(); ++k) profiles.push_back(profile_g(k, grid, dim));
    Matrix kint(rows, part.bins());
    for (int j = 0; j < rows; ++j)
        for (int b = 0; b < part.bins(); ++b)
            kint(j, b) = angle_kernel_integral(j - (dim - 1), part.lo(b), part.hi(b));
    RealMatrix mass = RealMatrix::Zero(grid.order, part.bins());
    for (int q = 0; q < grid.order; ++q) {
        // t(diff) = sum_k lambda_k sum_{m-n=diff} rho(n,m) conj(eta^k_m) eta^k_n
        Vector t = Vector::Zero(rows);
        for (int k = 0; k < lambda.size(); ++k) {
            if (lambda[k] == 0.0) continue;
            for (int m = 0; m < dim; ++m)
                for (int n = 0; n < dim; ++n)
                    t[(m - n) + dim - 1] += lambda[k] * rho.mat(n, m) *
                                            std::conj(profiles[k].eta[m](0, q)) *
                                            profiles[k].eta[n](0, q);
        }
        for (int b = 0; b < part.bins(); ++b) {
            Complex acc(0.0, 0.0);
            for (int j = 0; j < rows; ++j) acc += t[j] * kint(j, b);
            mass(q, b) = grid.weights[q] * acc.real();
        }
    }
    return mass;
}

} // namespace

SuiteReport run_identity_suite(const VerifyConfig& cfg) {
    SuiteReport report{"identity", {}};
    const QuadratureGrid grid = QuadratureGrid::radial(cfg.quad);
    const AnglePartition part = AnglePartition::uniform(cfg.bins);
    const int d = cfg.dim;

    // double homodyne vs G^sigma' for random (rho, diagonal sigma) pairs
    {
        Rng rng(cfg.seed + 6);
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const DensityMatrix rho = rng.random_density(d);
            const DensityMatrix sigma = rng.random_diagonal_density(d);
            const JointDensityTable table = double_homodyne_dist(rho, sigma, grid, part);
            RealVector lambda(d);
            for (int k = 0; k < d; ++k) lambda[k] = sigma.mat(k, k).real();
            // sigma is diagonal, so sigma' = sigma
            const RealMatrix expected = expected_homodyne_table(rho, lambda, grid, part, d);
            worst = std::max(worst, (table.mass - expected).cwiseAbs().maxCoeff());
        }
        add_check(report, "measurement identity (20 random pairs)", worst,
                  cfg.tolerance("identity.bin"));
    }

    // modified scheme reproduces the canonical phase distribution
    {
        const DensityMatrix rho = DensityMatrix::pure(coherent_state(Complex(1.0, 0.0), d));
        const RealVector canon =
            phase_distribution(rho, PhaseMatrix::canonical(d), part);
        const ModifiedSchemeResult mod =
            modified_scheme_phase_dist(rho, grid, part, cfg.w_kmax);
        add_check(report, "modified scheme vs canonical (coherent 1)",
                  (mod.probs - canon).cwiseAbs().maxCoeff(),
                  cfg.tolerance("modified.bin"));
        const RealVector viav = modified_scheme_phase_dist_via_v(rho, grid, part);
        add_check(report, "via-V path vs via-UW path",
                  (mod.probs - viav).cwiseAbs().maxCoeff(),
                  cfg.tolerance("modified.via_v"));
    }

    // closed-form outputs of V
    {
        const int dv = d;
        double worst = 0.0;
        const int samples = 16;
        // pair-coherent -> Bessel J0
        {
            const Complex alpha(1.0, 0.0);
            const TwoModeVector psi = pair_coherent_state(alpha, dv);
            const WavefunctionTable t = apply_kernel(psi, Coupling::Total, grid, samples);
            const double c = 1.0 / std::sqrt(bessel_j0(Complex(0.0, 2.0)).real());
            for (int q = 0; q < grid.order; ++q) {
                const double x = grid.nodes[q];
                const Complex want = c / std::sqrt(M_PI) *
                                     bessel_j0(2.0 * std::sqrt(x) * std::sqrt(alpha)) *
                                     std::exp(alpha) * std::exp(-0.5 * x);
                for (int s = 0; s < samples; ++s)
                    worst = std::max(worst, std::abs(t.values(q, s) - want));
            }
        }
        add_check(report, "V(pair coherent) Bessel closed form", worst,
                  cfg.tolerance("closed_form.v_output"));

        // two-mode phase coherent -> Gaussian
        worst = 0.0;
        {
            const int qshift = 1;
            const Complex alpha(0.6, 0.0);
            const TwoModeVector psi = two_mode_phase_coherent_state(qshift, alpha, dv);
            const WavefunctionTable t = apply_kernel(psi, Coupling::Total, grid, samples);
            for (int q = 0; q < grid.order; ++q) {
                const double x = grid.nodes[q];
                for (int s = 0; s < samples; ++s) {
                    const double theta = t.theta(s);
                    const Complex want =
                        std::sqrt(1.0 - std::norm(alpha)) / (std::sqrt(M_PI) * (1.0 - alpha)) *
                        std::exp(Complex(0.0, qshift * theta) -
                                 (alpha / (1.0 - alpha) + 0.5) * x);
                    worst = std::max(worst, std::abs(t.values(q, s) - want));
                }
            }
        }
        add_check(report, "V(two-mode phase coherent) Gaussian closed form", worst,
                  cfg.tolerance("closed_form.v_output"));

        // monomial -> x^n e^{-x/2} / (sqrt(pi) n!)
        worst = 0.0;
        {
            const int n = 3;
            const MonomialState mono = monomial_state(n, dv);
            const WavefunctionTable t =
                apply_kernel(mono.state, Coupling::Total, grid, samples);
            for (int q = 0; q < grid.order; ++q) {
                const double x = grid.nodes[q];
                const double want = std::pow(x, n) * std::exp(-0.5 * x) /
                                    (std::sqrt(M_PI) * std::exp(log_factorial(n))) /
                                    mono.original_norm;
                for (int s = 0; s < samples; ++s)
                    worst = std::max(worst, std::abs(t.values(q, s) - Complex(want, 0.0)));
            }
        }
        add_check(report, "V(monomial) power-law closed form", worst,
                  cfg.tolerance("closed_form.v_output"));

        // coherent (x) vacuum -> London profile
        worst = 0.0;
        {
            const Complex alpha(1.0, 0.0);
            TwoModeVector psi;
            psi.dim = dv;
            psi.amp = Matrix::Zero(dv, dv);
            const FockVector single = coherent_state(alpha, dv);
            for (int m = 0; m < dv; ++m) psi.amp(m, 0) = single.amp[m];
            const WavefunctionTable t = apply_kernel(psi, Coupling::Total, grid, samples);
            for (int q = 0; q < grid.order; ++q) {
                const double x = grid.nodes[q];
                for (int s = 0; s < samples; ++s) {
                    const double theta = t.theta(s);
                    Complex series(0.0, 0.0);
                    for (int m = 0; m < dv; ++m)
                        series += single.amp[m] * std::polar(1.0, -theta * m);
                    const Complex want = std::exp(-0.5 * x) / std::sqrt(M_PI) * series;
                    worst = std::max(worst, std::abs(t.values(q, s) - want));
                }
            }
        }
        add_check(report, "V(coherent x vacuum) London profile", worst,
                  cfg.tolerance("closed_form.v_output"));
    }

    // classical limit: canonical circular variance decreases with amplitude
    {
        double prev = 2.0;
        bool decreasing = true;
        for (const double a : {0.5, 1.0, 2.0, 3.0}) {
            const DensityMatrix rho = DensityMatrix::pure(coherent_state(Complex(a, 0.0), d));
            const double cv =
                circular_variance(phase_distribution(rho, PhaseMatrix::canonical(d), part), part);
            decreasing = decreasing && (cv < prev);
            prev = cv;
        }
        add_check(report, "circular variance decreasing in |alpha|",
                  decreasing ? 1.0 : 0.0, 0.5, false);
    }
    return report;
}

SuiteReport run_instruments_suite(const VerifyConfig& cfg) {
    SuiteReport report{"instruments", {}};
    const int d = std::min(cfg.dim, 16);
    Rng rng(cfg.seed + 7);

    // weight = tr[rho E(Theta)]
    {
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const PhaseMatrix c = rng.random_phase_matrix(d);
            const StructureVectors sv = structure_vectors(c);
            const DensityMatrix rho = rng.random_density(d);
            const double lo = 4.0 * rng.uniform();
            const double hi = lo + std::max(0.1, (kTwoPi - lo) * rng.uniform());
            const InstrumentOutput out =
                rank1_covariant_instrument(rho, c, sv, lo, std::min(hi, kTwoPi));
            const Complex expect =
                (rho.mat * phase_effect(c, lo, std::min(hi, kTwoPi)).op).trace();
            worst = std::max(worst, std::abs(out.weight - expect.real()));
        }
        add_check(report, "instrument weight equals tr[rho E]", worst,
                  cfg.tolerance("instrument.weight"));
    }

    // covariance of the instrument on a shift grid
    {
        const PhaseMatrix c = rng.random_phase_matrix(d);
        const StructureVectors sv = structure_vectors(c);
        const DensityMatrix rho = rng.random_density(d);
        double worst = 0.0;
        for (int s = 1; s < 8; ++s) {
            const double theta = kTwoPi * s / 8;
            const Vector u = phase_shift_diagonal(theta, d);
            DensityMatrix shifted;
            shifted.dim = d;
            shifted.mat = u.conjugate().asDiagonal() * rho.mat * u.asDiagonal();
            const InstrumentOutput lhs_raw =
                rank1_covariant_instrument(shifted, c, sv, 0.5, 1.9);
            const Matrix lhs = u.asDiagonal() * lhs_raw.op * u.conjugate().asDiagonal();
            Matrix rhs = Matrix::Zero(d, d);
            for (const auto& [a, b] : wrap_interval(0.5, 1.9, theta)) {
                if (b - a < 1e-15) continue;
                rhs += rank1_covariant_instrument(rho, c, sv, a, b).op;
            }
            worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
        }
        add_check(report, "instrument covariance", worst,
                  cfg.tolerance("instrument.covariance"));
    }

    // additivity and normalization
    {
        const PhaseMatrix c = PhaseMatrix::canonical(d);
        const StructureVectors sv = structure_vectors(c);
        const DensityMatrix rho = rng.random_density(d);
        const Matrix whole = rank1_covariant_instrument(rho, c, sv, 0.4, 2.6).op;
        const Matrix a = rank1_covariant_instrument(rho, c, sv, 0.4, 1.3).op;
        const Matrix b = rank1_covariant_instrument(rho, c, sv, 1.3, 2.6).op;
        add_check(report, "instrument additivity", (whole - a - b).cwiseAbs().maxCoeff(),
                  1e-12);
        const AnglePartition part = AnglePartition::uniform(8);
        Complex tr(0.0, 0.0);
        for (int j = 0; j < part.bins(); ++j)
            tr += rank1_covariant_instrument(rho, c, sv, part.lo(j), part.hi(j)).op.trace();
        add_check(report, "instrument normalization", std::abs(tr - Complex(1.0, 0.0)),
                  1e-9);
    }

    // complete positivity surrogate: Choi blocks PSD at d=8
    {
        const int dc = 8;
        Rng r2(cfg.seed + 8);
        double worst = 0.0;
        for (int trial = 0; trial < 3; ++trial) {
            const PhaseMatrix c = r2.random_phase_matrix(dc);
            const StructureVectors sv = structure_vectors(c);
            const AnglePartition part = AnglePartition::uniform(4);
            for (int j = 0; j < part.bins(); ++j) {
                const Matrix choi = instrument_choi(c, sv, part.lo(j), part.hi(j));
                worst = std::min(worst, min_effect_eigenvalue(choi));
            }
        }
        add_check(report, "Choi blocks PSD", worst,
                  cfg.tolerance("instrument.choi_floor"), false);
    }

    // nuclear form agrees with the rank-1 instrument for the canonical phase
    {
        const DensityMatrix rho = rng.random_density(d);
        FockVector eta = number_state(0, d);
        eta.amp[0] = std::sqrt(0.5);
        eta.amp[2] = Complex(0.0, std::sqrt(0.5));
        const InstrumentOutput nuc = canonical_nuclear_instrument(rho, eta, 0.7, 2.9);
        const PhaseMatrix can = PhaseMatrix::canonical(d);
        StructureVectors sv;
        sv.dim = d;
        sv.rank = d;
        sv.eta = Matrix::Zero(d, d);
        for (int m = 0; m < d; ++m)
            for (int j = 0; j < d; ++j) sv.eta(m, j) = eta.amp[j];
        const InstrumentOutput r1 = rank1_covariant_instrument(rho, can, sv, 0.7, 2.9);
        add_check(report, "nuclear form matches rank-1 instrument",
                  (nuc.op - r1.op).cwiseAbs().maxCoeff(), 1e-8);
    }

    // swap interaction and dilation identity
    add_check(report, "exp(i pi P_antisym) = SWAP (d=2)", swap_hamiltonian_check(2), 1e-12);
    add_check(report, "exp(i pi P_antisym) = SWAP (d=8)", swap_hamiltonian_check(8),
              cfg.tolerance("coupling.swap"));
    {
        double worst = 0.0;
        Rng r3(cfg.seed + 9);
        const int dd = std::min(cfg.dim, 24);
        for (int trial = 0; trial < 50; ++trial) {
            const DensityMatrix rho = r3.random_density(dd);
            const double lo = 4.0 * r3.uniform();
            const double hi = lo + std::max(0.1, (kTwoPi - lo) * r3.uniform());
            worst = std::max(worst, dilation_check(rho, lo, std::min(hi, kTwoPi), dd));
        }
        add_check(report, "dilation identity (50 random cases)", worst,
                  cfg.tolerance("coupling.dilation"));
    }
    return report;
}

std::vector<SuiteReport> run_suites(const std::string& suite, const VerifyConfig& cfg) {
    std::vector<SuiteReport> reports;
    if (suite == "povm" || suite == "all") reports.push_back(run_povm_suite(cfg));
    if (suite == "covariance" || suite == "all") reports.push_back(run_covariance_suite(cfg));
    if (suite == "coupling" || suite == "all") reports.push_back(run_coupling_suite(cfg));
    if (suite == "identity" || suite == "all") reports.push_back(run_identity_suite(cfg));
    if (suite == "instruments" || suite == "all") reports.push_back(run_instruments_suite(cfg));
    if (reports.empty()) throw std::invalid_argument("unknown suite: " + suite);
    return reports;
}

} // namespace phasekit
