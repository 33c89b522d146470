#include "phasekit/quadrature.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace phasekit {

#include "maxwell_table.inc"

namespace {

// Nodes: eigenvalues of the Jacobi matrix, polished by Newton steps on the
// orthonormal p_Q; weights via the Christoffel function 1/sum_k p_k(t)^2.
// The eigenvector-component weight formula loses all relative accuracy for
// the tiny extreme-node weights; this route keeps them to ~1e-14 relative.
struct Recurrence {
    // orthonormal: b[k+1] p_{k+1}(t) = (t - a[k]) p_k(t) - b[k] p_{k-1}(t)
    RealVector a; // a[0..Q-1]
    RealVector b; // b[1..Q] stored at [1..Q]
    double mu0;   // total mass of the weight
};

void newton_polish(const Recurrence& rec, int order, RealVector& t) {
    for (int pass = 0; pass < 3; ++pass) {
        for (int q = 0; q < order; ++q) {
            double p = 1.0 / std::sqrt(rec.mu0), pm = 0.0;
            double dp = 0.0, dpm = 0.0;
            for (int k = 0; k < order; ++k) {
                const double bk = (k > 0) ? rec.b[k] : 0.0;
                const double pn = ((t[q] - rec.a[k]) * p - bk * pm) / rec.b[k + 1];
                const double dpn = (p + (t[q] - rec.a[k]) * dp - bk * dpm) / rec.b[k + 1];
                pm = p; p = pn;
                dpm = dp; dp = dpn;
            }
            if (dp != 0.0) t[q] -= p / dp;
        }
    }
}

RealVector christoffel_weights(const Recurrence& rec, int order, const RealVector& t) {
    RealVector w(order);
    for (int q = 0; q < order; ++q) {
        double p = 1.0 / std::sqrt(rec.mu0), pm = 0.0;
        double s = p * p;
        for (int k = 0; k + 1 < order; ++k) {
            const double bk = (k > 0) ? rec.b[k] : 0.0;
            const double pn = ((t[q] - rec.a[k]) * p - bk * pm) / rec.b[k + 1];
            pm = p; p = pn;
            s += p * p;
        }
        w[q] = 1.0 / s;
    }
    return w;
}

RealVector jacobi_eigenvalues(const Recurrence& rec, int order) {
    RealMatrix j = RealMatrix::Zero(order, order);
    for (int k = 0; k < order; ++k) {
        j(k, k) = rec.a[k];
        if (k + 1 < order) {
            j(k, k + 1) = rec.b[k + 1];
            j(k + 1, k) = rec.b[k + 1];
        }
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(j, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

QuadratureGrid from_recurrence(const Recurrence& rec, int order) {
    RealVector t = jacobi_eigenvalues(rec, order);
    newton_polish(rec, order, t);
    RealVector w = christoffel_weights(rec, order, t);
    QuadratureGrid grid;
    grid.order = order;
    grid.nodes = t;
    grid.weights = w;
    return grid;
}

} // namespace

QuadratureGrid QuadratureGrid::gauss_laguerre(int order) {
    if (order < 1 || order > 170)
        throw std::invalid_argument("gauss_laguerre: order out of range [1,170]");
    Recurrence rec;
    rec.mu0 = 1.0;
    rec.a = RealVector(order);
    rec.b = RealVector(order + 1);
    for (int k = 0; k < order; ++k) rec.a[k] = 2.0 * k + 1.0;
    for (int k = 1; k <= order; ++k) rec.b[k] = static_cast<double>(k);
    QuadratureGrid grid = from_recurrence(rec, order);
    grid.validate();
    return grid;
}

QuadratureGrid QuadratureGrid::radial(int order) {
    if (order < 1 || order >= kMaxwellTableSize)
        throw std::invalid_argument("radial: order out of range [1,159]");
    Recurrence rec;
    rec.mu0 = 0.5; // int_0^inf r e^{-r^2} dr
    rec.a = RealVector(order);
    rec.b = RealVector(order + 1);
    for (int k = 0; k < order; ++k) rec.a[k] = kMaxwellAlpha[k];
    for (int k = 1; k <= order; ++k) rec.b[k] = kMaxwellSqrtBeta[k - 1];
    QuadratureGrid grid = from_recurrence(rec, order);
    // map r -> x = r^2; the factor 2 makes sum w = 2 mu0 = 1
    grid.nodes = grid.nodes.array().square();
    grid.weights *= 2.0;
    grid.validate();
    return grid;
}

void QuadratureGrid::validate() const {
    if (order < 1 || nodes.size() != order || weights.size() != order)
        throw std::invalid_argument("QuadratureGrid: inconsistent sizes");
    for (int q = 0; q < order; ++q) {
        if (!(nodes[q] >= 0.0) || !(weights[q] > 0.0))
            throw std::invalid_argument("QuadratureGrid: invalid node or weight");
    }
    if (std::abs(weights.sum() - 1.0) > 1e-12)
        throw std::runtime_error("QuadratureGrid: weights do not sum to 1");
    if (std::abs(weights.dot(nodes) - 1.0) > 1e-10)
        throw std::runtime_error("QuadratureGrid: first moment deviates from 1");
}

} // namespace phasekit
