#include "phasekit/special.hpp"

#include <cmath>

namespace phasekit {

double log_factorial(int n) {
    if (n < 0) throw std::invalid_argument("log_factorial: negative argument");
    return std::lgamma(static_cast<double>(n) + 1.0);
}

double assoc_laguerre(int n, int alpha, double x) {
    if (n < 0 || alpha < 0) throw std::invalid_argument("assoc_laguerre: negative index");
    if (n == 0) return 1.0;
    double lm1 = 1.0;
    double l = 1.0 + alpha - x;
    for (int k = 2; k <= n; ++k) {
        double next = ((2.0 * k - 1.0 + alpha - x) * l - (k - 1.0 + alpha) * lm1) / k;
        lm1 = l;
        l = next;
    }
    return l;
}

ScaledLaguerre::ScaledLaguerre(int alpha, double x) : alpha_(alpha), x_(x) {
    if (alpha < 0) throw std::invalid_argument("ScaledLaguerre: negative alpha");
    current_ = std::exp(-0.5 * log_factorial(alpha)); // sqrt(0!/alpha!)
    previous_ = 0.0;
}

void ScaledLaguerre::next() {
    ++k_;
    const double k = static_cast<double>(k_);
    const double a = static_cast<double>(alpha_);
    double next;
    if (k_ == 1) {
        next = (1.0 + a - x_) * std::exp(-0.5 * std::lgamma(a + 2.0));
    } else {
        const double f1 = std::sqrt(k / (k + a));
        const double f2 = std::sqrt(k * (k - 1.0) / ((k + a) * (k + a - 1.0)));
        next = ((2.0 * k - 1.0 + a - x_) / k) * f1 * current_ -
               ((k - 1.0 + a) / k) * f2 * previous_;
    }
    previous_ = current_;
    current_ = next;
}

Complex displacement_element(int m, int k, double r, double theta) {
    if (m < 0 || k < 0) throw std::invalid_argument("displacement_element: negative index");
    if (r < 0.0) throw std::invalid_argument("displacement_element: negative radius");
    const int a = std::abs(m - k);
    if (r == 0.0) return (m == k) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
    const int mn = std::min(m, k);
    const int mx = std::max(m, k);
    const double sign = ((k - m) > 0 && ((k - m) % 2 != 0)) ? -1.0 : 1.0;
    const double x = r * r;
    const double mag = std::exp(0.5 * (log_factorial(mn) - log_factorial(mx)) +
                                a * std::log(r) - 0.5 * x) *
                       assoc_laguerre(mn, a, x);
    return sign * mag * std::polar(1.0, theta * (m - k));
}

Complex bessel_j0(Complex z) {
    const Complex q = -(z / 2.0) * (z / 2.0); // successive term ratio numerator
    Complex term(1.0, 0.0);
    Complex sum = term;
    for (int m = 1; m <= 200; ++m) {
        term *= q / static_cast<double>(m * m);
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) return sum;
    }
    throw std::runtime_error("bessel_j0: series did not converge within 200 terms");
}

} // namespace phasekit
