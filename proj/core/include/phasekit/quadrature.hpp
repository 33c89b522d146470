#pragma once

#include "phasekit/types.hpp"

namespace phasekit {

// Quadrature rule for the measure e^{-x} dx on [0, inf): sum_q w_q f(x_q).
struct QuadratureGrid {
    int order = 0;
    RealVector nodes;   // x_q >= 0, ascending
    RealVector weights; // w_q > 0, sum_q w_q = 1

    // Classical Gauss-Laguerre: integrates x^k exactly for k <= 2*order - 1.
    static QuadratureGrid gauss_laguerre(int order);

    // Gauss rule generated in the variable r = sqrt(x) (weight r e^{-r^2} on
    // [0, inf), Shizgal's quadrature): integrates x^{k/2} exactly for
    // k <= 2*order - 2, so half-integer powers of x are handled as well as
    // integer ones. This is the working grid for all radial integrals.
    static QuadratureGrid radial(int order);

    void validate() const;
};

} // namespace phasekit
