#include "phasekit/homodyne.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "phasekit/special.hpp"
#include "phasekit/states.hpp"

namespace phasekit {

namespace {

// e^{x/2}-scaled radial factor of (U|m>|n>)(x, theta)
double u_radial_scaled(int m, int n, double x) {
    const int a = std::abs(m - n);
    const int mn = std::min(m, n);
    const int mx = std::max(m, n);
    const double sign = ((n - m) > 0 && ((n - m) % 2 != 0)) ? -1.0 : 1.0;
    const double lx = (a > 0) ? 0.5 * a * std::log(x) : 0.0;
    return sign * std::exp(0.5 * (log_factorial(mn) - log_factorial(mx)) + lx) *
           assoc_laguerre(mn, a, x);
}

bool is_diagonal(const Matrix& m) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (i != j && std::abs(m(i, j)) > 1e-14) return false;
    return true;
}

// cell masses from the harmonic cross table:
// mass(q, bin) = w_q sum_{j,j'} M_{jj'}(q) kernel(j'-j, bin)
JointDensityTable bin_masses(const std::vector<Matrix>& cross, // per node: (2d-1)^2
                             int dim, const QuadratureGrid& grid,
                             const AnglePartition& part) {
    const int bins = part.bins();
    const int rows = 2 * dim - 1;
    Matrix kint(rows, bins); // kernel(j, bin) for j = -(d-1)..(d-1)
    for (int j = 0; j < rows; ++j)
        for (int b = 0; b < bins; ++b)
            kint(j, b) = angle_kernel_integral(j - (dim - 1), part.lo(b), part.hi(b));
    JointDensityTable table;
    table.grid = grid;
    table.partition = part;
    table.mass = RealMatrix::Zero(grid.order, bins);
    for (int q = 0; q < grid.order; ++q) {
        for (int b = 0; b < bins; ++b) {
            Complex acc(0.0, 0.0);
            for (int j = 0; j < rows; ++j)
                for (int jp = 0; jp < rows; ++jp) {
                    const int diff = (jp - j) + (dim - 1);
                    if (diff < 0 || diff >= rows) continue;
                    acc += cross[q](j, jp) * kint(diff, b);
                }
            double v = grid.weights[q] * acc.real();
            if (v < -1e-12)
                throw std::runtime_error("joint density: cell below -1e-12");
            table.mass(q, b) = std::max(v, 0.0);
        }
    }
    table.total_mass = table.mass.sum();
    return table;
}

} // namespace

Matrix gsigma_effect(const RealVector& lambda, const RadialBinSet& x, double lo,
                     double hi, const QuadratureGrid& grid, int dim) {
    if (lambda.size() < 1 || lambda.size() > dim)
        throw std::invalid_argument("gsigma_effect: weight vector size out of range");
    double sum = 0.0;
    for (int k = 0; k < lambda.size(); ++k) {
        if (lambda[k] < -1e-14)
            throw std::invalid_argument("gsigma_effect: negative weight");
        sum += lambda[k];
    }
    if (std::abs(sum - 1.0) > 1e-10)
        throw std::invalid_argument("gsigma_effect: weights must sum to 1");
    Matrix e = Matrix::Zero(dim, dim);
    for (int k = 0; k < lambda.size(); ++k) {
        if (lambda[k] == 0.0) continue;
        e += lambda[k] * psc_effect(profile_g(k, grid, dim), x, lo, hi);
    }
    return e;
}

DensityMatrix conjugate_state(const DensityMatrix& sigma) {
    DensityMatrix out;
    out.dim = sigma.dim;
    out.mat = sigma.mat.conjugate();
    return out;
}

JointDensityTable double_homodyne_dist(const DensityMatrix& rho,
                                       const DensityMatrix& sigma,
                                       const QuadratureGrid& grid,
                                       const AnglePartition& part) {
    if (rho.dim != sigma.dim)
        throw std::invalid_argument("double_homodyne_dist: dim mismatch");
    const int d = rho.dim;
    const int rows = 2 * d - 1;

    // per-node harmonic cross matrices M_{jj'}(q) = sum over pure components of
    // h_j conj(h_j'), h_j(x) = sum_{m-n=j} psi_{mn} u_radial(m,n,x) e^{x/2}
    std::vector<Matrix> cross(grid.order, Matrix::Zero(rows, rows));

    if (is_diagonal(sigma.mat)) {
        // sigma = sum_k lambda_k |k><k|:
        // M_{jj'}(q) = sum_k lambda_k rho_{j+k, j'+k} g_{j+k,k}(q) g_{j'+k,k}(q)
        RealMatrix g(d, d); // g(p, k) = u_radial_scaled(p, k, x) per node
        for (int q = 0; q < grid.order; ++q) {
            const double x = grid.nodes[q];
            for (int p = 0; p < d; ++p)
                for (int k = 0; k < d; ++k) g(p, k) = u_radial_scaled(p, k, x);
            Matrix& m = cross[q];
            for (int k = 0; k < d; ++k) {
                const double lam = sigma.mat(k, k).real();
                if (lam <= 0.0) continue;
                for (int j = -(d - 1); j <= d - 1; ++j) {
                    const int p = j + k;
                    if (p < 0 || p >= d) continue;
                    for (int jp = -(d - 1); jp <= d - 1; ++jp) {
                        const int pp = jp + k;
                        if (pp < 0 || pp >= d) continue;
                        m(j + d - 1, jp + d - 1) +=
                            lam * rho.mat(p, pp) * g(p, k) * g(pp, k);
                    }
                }
            }
        }
    } else {
        // general sigma: eigendecompose both states into pure components
        Eigen::SelfAdjointEigenSolver<Matrix> er(rho.mat), es(sigma.mat);
        for (int q = 0; q < grid.order; ++q) {
            const double x = grid.nodes[q];
            RealMatrix g(d, d);
            for (int p = 0; p < d; ++p)
                for (int k = 0; k < d; ++k) g(p, k) = u_radial_scaled(p, k, x);
            Matrix& m = cross[q];
            for (int i = 0; i < d; ++i) {
                const double pi_w = er.eigenvalues()[i];
                if (pi_w < 1e-15) continue;
                for (int s = 0; s < d; ++s) {
                    const double ps_w = es.eigenvalues()[s];
                    if (ps_w < 1e-15) continue;
                    Vector h = Vector::Zero(rows);
                    for (int mm = 0; mm < d; ++mm)
                        for (int nn = 0; nn < d; ++nn)
                            h[(mm - nn) + d - 1] += er.eigenvectors()(mm, i) *
                                                    es.eigenvectors()(nn, s) * g(mm, nn);
                    m += (pi_w * ps_w) * (h * h.adjoint());
                }
            }
        }
    }

    JointDensityTable table = bin_masses(cross, d, grid, part);
    if (table.total_mass < 1.0 - 1e-4)
        throw std::runtime_error("double_homodyne_dist: mass deficit above 1e-4 "
                                 "(truncation warning); increase dim");
    return table;
}

namespace {

// H_j(x_q) = sum_{k<=kmax} c^{(j)}_k sqrt(k!/(k+j)!) x^{j/2} L^j_k(x_q):
// the e^{x/2}-scaled radial profile of U applied to W(|j>|0>). The scaled
// recurrence factors depend on k only, so they are hoisted out of the node loop.
RealMatrix w_vacuum_radial_table(int dim, const QuadratureGrid& grid, int kmax) {
    RealMatrix h = RealMatrix::Zero(dim, grid.order);
    for (int q = 0; q < grid.order; ++q) h(0, q) = 1.0;
    std::vector<double> r1(kmax + 1), r2(kmax + 1);
    for (int j = 1; j < dim; ++j) {
        const std::vector<double> c = w_column_vacuum(j, kmax);
        const double a = static_cast<double>(j);
        for (int k = 2; k <= kmax; ++k) {
            const double kk = static_cast<double>(k);
            r1[k] = std::sqrt(kk / (kk + a)) / kk;
            r2[k] = ((kk - 1.0 + a) / kk) *
                    std::sqrt(kk * (kk - 1.0) / ((kk + a) * (kk + a - 1.0)));
        }
        const double l0 = std::exp(-0.5 * log_factorial(j));
        const double l1s = std::exp(-0.5 * std::lgamma(a + 2.0));
        for (int q = 0; q < grid.order; ++q) {
            const double x = grid.nodes[q];
            double prev = l0;
            double cur = (1.0 + a - x) * l1s;
            double acc = c[0] * prev + (kmax >= 1 ? c[1] * cur : 0.0);
            for (int k = 2; k <= kmax; ++k) {
                const double next = (2.0 * k - 1.0 + a - x) * r1[k] * cur - r2[k] * prev;
                acc += c[k] * next;
                prev = cur;
                cur = next;
            }
            h(j, q) = acc * std::pow(x, 0.5 * a);
        }
    }
    return h;
}

} // namespace

ModifiedSchemeResult modified_scheme_phase_dist(const DensityMatrix& rho,
                                                const QuadratureGrid& grid,
                                                const AnglePartition& part,
                                                int w_kmax) {
    if (w_kmax < 1) throw std::invalid_argument("modified_scheme_phase_dist: w_kmax < 1");
    const int d = rho.dim;
    const int rows = 2 * d - 1;
    const RealMatrix h = w_vacuum_radial_table(d, grid, w_kmax);

    // joint table: mass(q,b) = w_q sum_{jj'} rho_{jj'} H_j(q) H_j'(q) kernel(j'-j,b)
    std::vector<Matrix> cross(grid.order, Matrix::Zero(rows, rows));
    for (int q = 0; q < grid.order; ++q)
        for (int j = 0; j < d; ++j)
            for (int jp = 0; jp < d; ++jp)
                cross[q](j + d - 1, jp + d - 1) = rho.mat(j, jp) * h(j, q) * h(jp, q);
    ModifiedSchemeResult out;
    out.table = bin_masses(cross, d, grid, part);
    out.probs = RealVector(part.bins());
    for (int b = 0; b < part.bins(); ++b) out.probs[b] = out.table.mass.col(b).sum();
    return out;
}

RealVector modified_scheme_phase_dist_via_v(const DensityMatrix& rho,
                                            const QuadratureGrid& grid,
                                            const AnglePartition& part) {
    // V applied to |psi>|0> has constant scaled radial part L_0 = 1, so the
    // angle marginal collapses to sum_{jj'} rho_{jj'} S_{jj'} kernel(j'-j, b)
    // with S_{jj'} = sum_q w_q.
    const int d = rho.dim;
    const double s = grid.weights.sum();
    RealVector p(part.bins());
    for (int b = 0; b < part.bins(); ++b) {
        Complex acc(0.0, 0.0);
        for (int j = 0; j < d; ++j)
            for (int jp = 0; jp < d; ++jp)
                acc += rho.mat(j, jp) * s *
                       angle_kernel_integral(jp - j, part.lo(b), part.hi(b));
        p[b] = std::max(0.0, acc.real());
    }
    return p;
}

std::vector<std::pair<int, int>> sample_outcomes(const JointDensityTable& table,
                                                 int count, std::uint64_t seed) {
    if (count < 0) throw std::invalid_argument("sample_outcomes: negative count");
    std::vector<std::pair<int, int>> out;
    if (count == 0) return out;
    const int q = static_cast<int>(table.mass.rows());
    const int bins = static_cast<int>(table.mass.cols());
    std::vector<double> cdf(q * bins);
    double acc = 0.0;
    for (int i = 0; i < q; ++i)
        for (int b = 0; b < bins; ++b) {
            acc += std::max(0.0, table.mass(i, b));
            cdf[i * bins + b] = acc;
        }
    if (acc <= 0.0) throw std::runtime_error("sample_outcomes: empty table");
    std::mt19937_64 engine(seed);
    out.reserve(count);
    for (int n = 0; n < count; ++n) {
        // top 53 bits -> uniform double in [0,1); avoids distribution objects,
        // which are not portable across standard libraries
        const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53 * acc;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const int idx = static_cast<int>(std::min<std::ptrdiff_t>(
            std::distance(cdf.begin(), it), q * bins - 1));
        out.emplace_back(idx / bins, idx % bins);
    }
    return out;
}

double circular_variance(const RealVector& probs, const AnglePartition& part) {
    if (probs.size() != part.bins())
        throw std::invalid_argument("circular_variance: size mismatch");
    Complex mean(0.0, 0.0);
    for (int b = 0; b < part.bins(); ++b) mean += probs[b] * std::polar(1.0, part.mid(b));
    return 1.0 - std::abs(mean);
}

} // namespace phasekit
