#include "phasekit/phase_space.hpp"

#include <cmath>

#include "phasekit/special.hpp"
#include "phasekit/states.hpp"

namespace phasekit {

RadialProfile profile_g(int k, const QuadratureGrid& grid, int dim) {
    if (k < 0 || k >= dim) throw std::invalid_argument("profile_g: k outside truncation");
    RadialProfile p;
    p.grid = grid;
    p.eta.resize(dim);
    for (int m = 0; m < dim; ++m) {
        Matrix row(1, grid.order);
        const int a = std::abs(m - k);
        const int mn = std::min(m, k);
        const int mx = std::max(m, k);
        const double sign = ((k - m) > 0 && ((k - m) % 2 != 0)) ? -1.0 : 1.0;
        const double pref = sign * std::exp(0.5 * (log_factorial(mn) - log_factorial(mx)));
        for (int q = 0; q < grid.order; ++q) {
            const double x = grid.nodes[q];
            row(0, q) = pref * std::pow(x, 0.5 * a) * assoc_laguerre(mn, a, x);
        }
        p.eta[m] = std::move(row);
    }
    return p;
}

RadialProfile profile_f(int k, const QuadratureGrid& grid, int dim) {
    if (k < 0 || k >= dim) throw std::invalid_argument("profile_f: k outside truncation");
    RadialProfile p;
    p.grid = grid;
    p.eta.resize(dim);
    for (int m = 0; m < dim; ++m) {
        Matrix row(1, grid.order);
        const int mn = std::min(m, k);
        for (int q = 0; q < grid.order; ++q)
            row(0, q) = assoc_laguerre(mn, 0, grid.nodes[q]);
        p.eta[m] = std::move(row);
    }
    return p;
}

RadialProfile profile_dirac(double x0, const PhaseMatrix& c) {
    if (!(x0 > 0.0)) throw std::invalid_argument("profile_dirac: x0 must be positive");
    const StructureVectors sv = structure_vectors(c);
    RadialProfile p;
    p.atom = x0;
    p.eta.resize(c.dim);
    for (int m = 0; m < c.dim; ++m) {
        Matrix col(sv.rank, 1);
        for (int r = 0; r < sv.rank; ++r) col(r, 0) = sv.eta(m, r);
        p.eta[m] = std::move(col);
    }
    return p;
}

RadialBinSet all_nodes(const RadialProfile& profile) {
    RadialBinSet x;
    if (profile.atomic()) {
        x.contains_atom = true;
    } else {
        x.nodes.resize(profile.grid.order);
        for (int q = 0; q < profile.grid.order; ++q) x.nodes[q] = q;
    }
    return x;
}

std::vector<RadialBinSet> node_partition(const RadialProfile& profile, int bins) {
    if (bins < 1) throw std::invalid_argument("node_partition: bins < 1");
    std::vector<RadialBinSet> out(bins);
    if (profile.atomic()) {
        out[0].contains_atom = true;
        return out;
    }
    const int q = profile.grid.order;
    for (int i = 0; i < q; ++i) out[std::min(i * bins / q, bins - 1)].nodes.push_back(i);
    return out;
}

namespace {

// sum_{q in X} w_q <eta_m(x_q)|eta_n(x_q)>
Complex radial_overlap(const RadialProfile& p, const RadialBinSet& x, int m, int n) {
    if (p.atomic())
        return x.contains_atom ? p.eta[m].col(0).dot(p.eta[n].col(0)) : Complex(0.0, 0.0);
    Complex acc(0.0, 0.0);
    for (int q : x.nodes)
        acc += p.grid.weights[q] * p.eta[m].col(q).dot(p.eta[n].col(q));
    return acc;
}

} // namespace

Matrix psc_effect(const RadialProfile& profile, const RadialBinSet& x, double lo,
                  double hi) {
    const int d = profile.dim();
    Matrix e(d, d);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            e(m, n) = radial_overlap(profile, x, m, n) * angle_kernel_integral(m - n, lo, hi);
    return e;
}

PhaseMatrix angle_margin(const RadialProfile& profile, double psd_floor) {
    const int d = profile.dim();
    const RadialBinSet full = all_nodes(profile);
    Matrix c(d, d);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) c(m, n) = radial_overlap(profile, full, m, n);
    return PhaseMatrix::from_matrix(std::move(c), psd_floor);
}

RealMatrix radial_margin_kernel(const RadialProfile& profile,
                                const std::vector<RadialBinSet>& bins) {
    const int d = profile.dim();
    RealMatrix k(d, static_cast<int>(bins.size()));
    for (int m = 0; m < d; ++m)
        for (size_t j = 0; j < bins.size(); ++j)
            k(m, static_cast<int>(j)) = radial_overlap(profile, bins[j], m, m).real();
    return k;
}

std::vector<std::vector<Matrix>>
covariantize(const std::vector<std::vector<Matrix>>& effects, int dim) {
    if (effects.empty() || effects[0].empty())
        throw std::invalid_argument("covariantize: empty effect table");
    const int bins = static_cast<int>(effects[0].size());
    std::vector<std::vector<Matrix>> out(effects.size());
    std::vector<Vector> shifts(bins);
    for (int s = 0; s < bins; ++s) shifts[s] = phase_shift_diagonal(kTwoPi * s / bins, dim);
    for (size_t r = 0; r < effects.size(); ++r) {
        if (static_cast<int>(effects[r].size()) != bins)
            throw std::invalid_argument("covariantize: ragged effect table");
        out[r].resize(bins);
        for (int j = 0; j < bins; ++j) {
            Matrix acc = Matrix::Zero(dim, dim);
            for (int s = 0; s < bins; ++s) {
                const Matrix& m = effects[r][(j + s) % bins];
                acc += shifts[s].conjugate().asDiagonal() * m * shifts[s].asDiagonal();
            }
            out[r][j] = acc / static_cast<double>(bins);
        }
    }
    return out;
}

} // namespace phasekit
