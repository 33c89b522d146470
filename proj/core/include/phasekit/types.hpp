#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace phasekit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Single-mode pure state on the truncated number basis |0>,...,|dim-1>.
struct FockVector {
    int dim = 0;
    Vector amp;
    // 1 - |amp|^2 relative to the untruncated state (0 for exact states).
    double truncation_leakage = 0.0;

    double norm() const { return amp.norm(); }
};

// Two-mode pure state; amp(m, n) multiplies |m> (x) |n>.
struct TwoModeVector {
    int dim = 0;
    Matrix amp;
    double truncation_leakage = 0.0;

    double norm() const { return amp.norm(); }
};

struct DensityMatrix {
    int dim = 0;
    Matrix mat;

    static DensityMatrix pure(const FockVector& psi);
    // Hermitian within 1e-12, trace within 1e-10 of 1, min eigenvalue >= -1e-10.
    void validate() const;
};

// Half-open bins [theta_j, theta_{j+1}) covering [0, 2pi) exactly.
struct AnglePartition {
    std::vector<double> edges;

    static AnglePartition uniform(int bins);

    int bins() const { return static_cast<int>(edges.size()) - 1; }
    double lo(int j) const { return edges[j]; }
    double hi(int j) const { return edges[j + 1]; }
    double width(int j) const { return edges[j + 1] - edges[j]; }
    double mid(int j) const { return 0.5 * (edges[j] + edges[j + 1]); }
    void validate() const;
};

constexpr double kTwoPi = 6.283185307179586476925286766559;

} // namespace phasekit
