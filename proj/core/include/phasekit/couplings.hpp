#pragma once

#include <string>

#include "phasekit/phase_space.hpp"
#include "phasekit/quadrature.hpp"
#include "phasekit/types.hpp"

namespace phasekit {

// Relative number state |m,k>>: m = number difference, k = pair index.
struct RnsIndex {
    int diff = 0;
    int pair = 0;
};

RnsIndex rns_pack(int p, int q);                 // |p> (x) |q> -> |p-q, min(p,q)>>
std::pair<int, int> rns_unpack(const RnsIndex&); // throws on negative pair index

// Beam splitter + phase shifter coupling: (U |m>|n>)(x, theta), x = r^2.
Complex u_kernel(int m, int n, double x, double theta);
// Target coupling: (V |m>|n>)(x, theta) = e^{i theta(n-m)} L_min(x) e^{-x/2} / sqrt(pi).
Complex v_kernel(int m, int n, double x, double theta);

// W = U* V on the truncated two-mode space, assembled from the alpha
// quadrature; block diagonal over the number difference k - l = m - n.
struct WMatrix {
    int dim = 0;
    int grid_order = 0;
    Matrix mat;          // d^2 x d^2; row k*d+l, column m*d+n
    RealMatrix dropped;  // per column (m,n): squared weight lost to truncation
    double max_dropped_weight() const { return dropped.maxCoeff(); }
};

WMatrix w_matrix(int dim, const QuadratureGrid& grid); // requires grid.order >= 2*dim

// Closed-form coefficients of W(|m>|0>) over |m,k>>, k = 0..kmax:
// (m/2) Gamma(k + m/2) / sqrt(k! (k+m)!), via log-gamma. m = 0 gives {1}.
std::vector<double> w_column_vacuum(int m, int kmax);

// JSON cache for WMatrix keyed by (dim, grid order).
void save_w_matrix(const std::string& path, const WMatrix& w);
WMatrix load_w_matrix(const std::string& path, int expect_dim, int expect_grid_order);

enum class Coupling { BeamSplitter, Total }; // U, V

// Psi(x_q, theta_t) = sum_{m,n} amp(m,n) kernel(m,n,x_q,theta_t) on a
// (Q x T) grid with theta_t = 2 pi t / T.
struct WavefunctionTable {
    QuadratureGrid grid;
    int angle_samples = 0;
    Matrix values; // Q x T

    double theta(int t) const { return kTwoPi * t / angle_samples; }
};

WavefunctionTable apply_kernel(const TwoModeVector& state, Coupling kernel,
                               const QuadratureGrid& grid, int angle_samples);

// Harmonic decomposition of a propagated state with the e^{-x/2} factor
// removed: Psi(x,theta) = (1/sqrt(pi)) e^{-x/2} sum_j h_j(x) e^{-i j theta}.
// Row j + dim - 1 holds h_j at the nodes, j = -(dim-1)..dim-1.
Matrix harmonic_table(const TwoModeVector& state, Coupling kernel,
                      const QuadratureGrid& grid);

// O_angle(Theta) = sum_{m,n,k} kernel(m-n, Theta) |m,k>><<n,k| on the d x d
// truncated product basis (exact delta in k).
Matrix o_angle_effect(double lo, double hi, int dim);

// O_rad(X) = sum_{n,k,l} [sum_{q in X} w_q L_k L_l] |n,k>><<n,l|.
Matrix o_rad_effect(const RadialBinSet& x, int dim, const QuadratureGrid& grid);

// Joint restriction O(X x Theta).
Matrix o_effect(const RadialBinSet& x, double lo, double hi, int dim,
                const QuadratureGrid& grid);

} // namespace phasekit
