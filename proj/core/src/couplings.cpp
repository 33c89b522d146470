#include "phasekit/couplings.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "phasekit/special.hpp"

namespace phasekit {

namespace {
constexpr double kInvSqrtPi = 0.56418958354775628694807945156077;
constexpr int kWCacheVersion = 1;

// Radial factor of (U|m>|n>)(x, theta) with the e^{-x/2} kept:
// sign * sqrt(min!/max!) x^{|m-n|/2} L^{|m-n|}_min(x) e^{-x/2}
double u_radial(int m, int n, double x) {
    const int a = std::abs(m - n);
    const int mn = std::min(m, n);
    const int mx = std::max(m, n);
    const double sign = ((n - m) > 0 && ((n - m) % 2 != 0)) ? -1.0 : 1.0;
    const double lx = (a > 0) ? 0.5 * a * std::log(x) : 0.0;
    return sign * std::exp(0.5 * (log_factorial(mn) - log_factorial(mx)) + lx - 0.5 * x) *
           assoc_laguerre(mn, a, x);
}

double v_radial(int m, int n, double x) {
    return assoc_laguerre(std::min(m, n), 0, x) * std::exp(-0.5 * x);
}

} // namespace

RnsIndex rns_pack(int p, int q) {
    if (p < 0 || q < 0) throw std::invalid_argument("rns_pack: negative mode index");
    return {p - q, std::min(p, q)};
}

std::pair<int, int> rns_unpack(const RnsIndex& idx) {
    if (idx.pair < 0) throw std::invalid_argument("rns_unpack: negative pair index");
    if (idx.diff >= 0) return {idx.pair + idx.diff, idx.pair};
    return {idx.pair, idx.pair - idx.diff};
}

Complex u_kernel(int m, int n, double x, double theta) {
    if (x < 0.0) throw std::invalid_argument("u_kernel: x < 0");
    return kInvSqrtPi * std::conj(displacement_element(m, n, std::sqrt(x), theta));
}

Complex v_kernel(int m, int n, double x, double theta) {
    if (x < 0.0) throw std::invalid_argument("v_kernel: x < 0");
    return kInvSqrtPi * std::polar(1.0, theta * (n - m)) * v_radial(m, n, x);
}

WMatrix w_matrix(int dim, const QuadratureGrid& grid) {
    if (grid.order < 2 * dim)
        throw std::invalid_argument("w_matrix: grid order must be >= 2*dim");
    const int q = grid.order;
    WMatrix w;
    w.dim = dim;
    w.grid_order = q;
    w.mat = Matrix::Zero(dim * dim, dim * dim);
    w.dropped = RealMatrix::Zero(dim, dim);

    RealVector lag_mn(q), half_power(q);
    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n < dim; ++n) {
            const int j = std::abs(n - m);
            const int mn = std::min(m, n);
            const double sign = ((n - m) > 0 && ((n - m) % 2 != 0)) ? -1.0 : 1.0;
            for (int s = 0; s < q; ++s) {
                lag_mn[s] = assoc_laguerre(mn, 0, grid.nodes[s]);
                half_power[s] = std::pow(grid.nodes[s], 0.5 * j);
            }
            // alpha_{kl,mn}, l = k+n-m; L^j_{min(k,l)} advanced incrementally
            RealVector lcur = RealVector::Ones(q);          // L^j_0
            RealVector lprev = RealVector::Zero(q);
            int t_now = 0;                                   // current min(k,l)
            double kept = 0.0;
            for (int k = 0; k < dim; ++k) {
                const int l = k + n - m;
                if (l < 0) continue;
                if (l >= dim) break;
                const int t = std::min(k, l);
                while (t_now < t) {
                    ++t_now;
                    RealVector lnext(q);
                    for (int s = 0; s < q; ++s) {
                        const double x = grid.nodes[s];
                        lnext[s] = (t_now == 1)
                            ? 1.0 + j - x
                            : ((2.0 * t_now - 1.0 + j - x) * lcur[s] -
                               (t_now - 1.0 + j) * lprev[s]) / t_now;
                    }
                    lprev = lcur;
                    lcur = lnext;
                }
                double integral = 0.0;
                for (int s = 0; s < q; ++s)
                    integral += grid.weights[s] * half_power[s] * lcur[s] * lag_mn[s];
                const double coeff = sign *
                    std::exp(0.5 * (log_factorial(t) - log_factorial(std::max(k, l)))) *
                    integral;
                w.mat(k * dim + l, m * dim + n) = coeff;
                kept += coeff * coeff;
            }
            // exact W is an isometry column-wise; the remainder sits above the
            // truncation in k
            w.dropped(m, n) = std::max(0.0, 1.0 - kept);
        }
    }
    return w;
}

std::vector<double> w_column_vacuum(int m, int kmax) {
    if (m < 0 || kmax < 0) throw std::invalid_argument("w_column_vacuum: negative argument");
    if (m == 0) return {1.0};
    std::vector<double> c(kmax + 1);
    for (int k = 0; k <= kmax; ++k)
        c[k] = 0.5 * m *
               std::exp(std::lgamma(k + 0.5 * m) -
                        0.5 * (log_factorial(k) + log_factorial(k + m)));
    return c;
}

void save_w_matrix(const std::string& path, const WMatrix& w) {
    nlohmann::json j;
    j["format_version"] = kWCacheVersion;
    j["kind"] = "wmatrix";
    j["dim"] = w.dim;
    j["grid_order"] = w.grid_order;
    const int n = w.dim * w.dim;
    std::vector<double> re, im;
    re.reserve(n * n);
    im.reserve(n * n);
    for (int col = 0; col < n; ++col)
        for (int row = 0; row < n; ++row) {
            re.push_back(w.mat(row, col).real());
            im.push_back(w.mat(row, col).imag());
        }
    j["re"] = std::move(re);
    j["im"] = std::move(im);
    std::vector<double> dropped(w.dropped.data(), w.dropped.data() + w.dim * w.dim);
    j["dropped"] = std::move(dropped);
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("save_w_matrix: cannot open " + path);
    out << j.dump();
}

WMatrix load_w_matrix(const std::string& path, int expect_dim, int expect_grid_order) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_w_matrix: cannot open " + path);
    nlohmann::json j;
    in >> j;
    if (j.value("kind", "") != "wmatrix" || j.value("format_version", -1) != kWCacheVersion)
        throw std::runtime_error("load_w_matrix: unrecognized cache format");
    WMatrix w;
    w.dim = j.at("dim").get<int>();
    w.grid_order = j.at("grid_order").get<int>();
    if (w.dim != expect_dim || w.grid_order != expect_grid_order)
        throw std::runtime_error("load_w_matrix: cache keyed by different (dim, grid order)");
    const int n = w.dim * w.dim;
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    if (static_cast<int>(re.size()) != n * n || static_cast<int>(im.size()) != n * n)
        throw std::runtime_error("load_w_matrix: truncated cache payload");
    w.mat = Matrix(n, n);
    size_t idx = 0;
    for (int col = 0; col < n; ++col)
        for (int row = 0; row < n; ++row, ++idx) w.mat(row, col) = Complex(re[idx], im[idx]);
    const auto dropped = j.at("dropped").get<std::vector<double>>();
    if (static_cast<int>(dropped.size()) != w.dim * w.dim)
        throw std::runtime_error("load_w_matrix: truncated cache payload");
    w.dropped = Eigen::Map<const RealMatrix>(dropped.data(), w.dim, w.dim);
    return w;
}

Matrix harmonic_table(const TwoModeVector& state, Coupling kernel,
                      const QuadratureGrid& grid) {
    const int d = state.dim;
    const int q = grid.order;
    Matrix h = Matrix::Zero(2 * d - 1, q);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
            const Complex amp = state.amp(m, n);
            if (amp == Complex(0.0, 0.0)) continue;
            const int row = (m - n) + d - 1;
            for (int s = 0; s < q; ++s) {
                const double x = grid.nodes[s];
                const double radial = (kernel == Coupling::BeamSplitter)
                                          ? u_radial(m, n, x) * std::exp(0.5 * x)
                                          : assoc_laguerre(std::min(m, n), 0, x);
                h(row, s) += amp * radial;
            }
        }
    return h;
}

WavefunctionTable apply_kernel(const TwoModeVector& state, Coupling kernel,
                               const QuadratureGrid& grid, int angle_samples) {
    if (angle_samples < 1) throw std::invalid_argument("apply_kernel: angle_samples < 1");
    const int d = state.dim;
    const Matrix h = harmonic_table(state, kernel, grid);
    WavefunctionTable table;
    table.grid = grid;
    table.angle_samples = angle_samples;
    table.values = Matrix::Zero(grid.order, angle_samples);
    for (int t = 0; t < angle_samples; ++t) {
        const double theta = kTwoPi * t / angle_samples;
        for (int jrow = 0; jrow < 2 * d - 1; ++jrow) {
            const int j = jrow - (d - 1);
            const Complex phase = std::polar(kInvSqrtPi, -theta * j);
            for (int s = 0; s < grid.order; ++s)
                table.values(s, t) += phase * h(jrow, s) * std::exp(-0.5 * grid.nodes[s]);
        }
    }
    return table;
}

Matrix o_angle_effect(double lo, double hi, int dim) {
    const int n2 = dim * dim;
    Matrix o = Matrix::Zero(n2, n2);
    for (int p = 0; p < dim; ++p)
        for (int q = 0; q < dim; ++q) {
            const RnsIndex a = rns_pack(p, q);
            for (int pp = 0; pp < dim; ++pp)
                for (int qq = 0; qq < dim; ++qq) {
                    const RnsIndex b = rns_pack(pp, qq);
                    if (a.pair != b.pair) continue;
                    o(p * dim + q, pp * dim + qq) =
                        angle_kernel_integral(a.diff - b.diff, lo, hi);
                }
        }
    return o;
}

Matrix o_rad_effect(const RadialBinSet& x, int dim, const QuadratureGrid& grid) {
    // R_kl = sum_{q in X} w_q L_k(x_q) L_l(x_q)
    RealMatrix lag(dim, grid.order);
    for (int k = 0; k < dim; ++k)
        for (int s = 0; s < grid.order; ++s)
            lag(k, s) = assoc_laguerre(k, 0, grid.nodes[s]);
    RealMatrix r = RealMatrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l) {
            double acc = 0.0;
            for (int s : x.nodes) acc += grid.weights[s] * lag(k, s) * lag(l, s);
            r(k, l) = acc;
        }
    const int n2 = dim * dim;
    Matrix o = Matrix::Zero(n2, n2);
    for (int p = 0; p < dim; ++p)
        for (int q = 0; q < dim; ++q) {
            const RnsIndex a = rns_pack(p, q);
            for (int pp = 0; pp < dim; ++pp)
                for (int qq = 0; qq < dim; ++qq) {
                    const RnsIndex b = rns_pack(pp, qq);
                    if (a.diff != b.diff) continue;
                    o(p * dim + q, pp * dim + qq) = r(a.pair, b.pair);
                }
        }
    return o;
}

Matrix o_effect(const RadialBinSet& x, double lo, double hi, int dim,
                const QuadratureGrid& grid) {
    RealMatrix lag(dim, grid.order);
    for (int k = 0; k < dim; ++k)
        for (int s = 0; s < grid.order; ++s)
            lag(k, s) = assoc_laguerre(k, 0, grid.nodes[s]);
    RealMatrix r = RealMatrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l) {
            double acc = 0.0;
            for (int s : x.nodes) acc += grid.weights[s] * lag(k, s) * lag(l, s);
            r(k, l) = acc;
        }
    const int n2 = dim * dim;
    Matrix o = Matrix::Zero(n2, n2);
    for (int p = 0; p < dim; ++p)
        for (int q = 0; q < dim; ++q) {
            const RnsIndex a = rns_pack(p, q);
            for (int pp = 0; pp < dim; ++pp)
                for (int qq = 0; qq < dim; ++qq) {
                    const RnsIndex b = rns_pack(pp, qq);
                    o(p * dim + q, pp * dim + qq) =
                        angle_kernel_integral(a.diff - b.diff, lo, hi) * r(a.pair, b.pair);
                }
        }
    return o;
}

} // namespace phasekit
