#pragma once

#include "phasekit/types.hpp"

namespace phasekit {

// log(n!)
double log_factorial(int n);

// Associated Laguerre polynomial L_n^alpha(x) by the three-term recurrence in n.
double assoc_laguerre(int n, int alpha, double x);

// Iterates k = 0, 1, 2, ... producing sqrt(k!/(k+alpha)!) * L^alpha_k(x).
// The factorial ratio is folded into the recurrence so values stay bounded
// for k far beyond the factorial overflow limit.
class ScaledLaguerre {
public:
    ScaledLaguerre(int alpha, double x);

    double value() const { return current_; }
    void next();

private:
    int alpha_;
    double x_;
    long long k_ = 0;
    double current_ = 0.0;
    double previous_ = 0.0;
};

// <m| D(r e^{i theta}) |k> on the number basis; factorial ratio in log space.
Complex displacement_element(int m, int k, double r, double theta);

// Zeroth Bessel function of the first kind by its power series; terms are
// added until |term| < 1e-17 |partial sum|. Throws std::runtime_error if 200
// terms do not suffice.
Complex bessel_j0(Complex z);

} // namespace phasekit
