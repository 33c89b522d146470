#include "phasekit/states.hpp"

#include <cctype>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "phasekit/special.hpp"

namespace phasekit {

DensityMatrix DensityMatrix::pure(const FockVector& psi) {
    DensityMatrix rho;
    rho.dim = psi.dim;
    rho.mat = psi.amp * psi.amp.adjoint();
    const double n2 = psi.amp.squaredNorm();
    if (n2 > 0.0) rho.mat /= n2;
    return rho;
}

void DensityMatrix::validate() const {
    if (dim < 1 || mat.rows() != dim || mat.cols() != dim)
        throw std::invalid_argument("DensityMatrix: bad shape");
    if ((mat - mat.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("DensityMatrix: not Hermitian");
    if (std::abs(mat.trace().real() - 1.0) > 1e-10 || std::abs(mat.trace().imag()) > 1e-10)
        throw std::invalid_argument("DensityMatrix: trace deviates from 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(mat, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw std::invalid_argument("DensityMatrix: negative eigenvalue");
}

AnglePartition AnglePartition::uniform(int bins) {
    if (bins < 1) throw std::invalid_argument("AnglePartition: bins < 1");
    AnglePartition p;
    p.edges.resize(bins + 1);
    for (int j = 0; j <= bins; ++j) p.edges[j] = kTwoPi * j / bins;
    p.edges.back() = kTwoPi;
    return p;
}

void AnglePartition::validate() const {
    if (edges.size() < 2 || edges.front() != 0.0 || edges.back() != kTwoPi)
        throw std::invalid_argument("AnglePartition: must cover [0, 2pi) exactly");
    for (size_t j = 0; j + 1 < edges.size(); ++j)
        if (!(edges[j] < edges[j + 1]))
            throw std::invalid_argument("AnglePartition: edges not strictly increasing");
}

FockVector number_state(int n, int dim) {
    if (n < 0 || n >= dim) throw std::invalid_argument("number_state: index outside truncation");
    FockVector psi;
    psi.dim = dim;
    psi.amp = Vector::Zero(dim);
    psi.amp[n] = 1.0;
    return psi;
}

FockVector coherent_state(Complex alpha, int dim) {
    FockVector psi;
    psi.dim = dim;
    psi.amp = Vector(dim);
    Complex term = std::exp(-0.5 * std::norm(alpha));
    psi.amp[0] = term;
    for (int n = 1; n < dim; ++n) {
        term *= alpha / std::sqrt(static_cast<double>(n));
        psi.amp[n] = term;
    }
    psi.truncation_leakage = std::max(0.0, 1.0 - psi.amp.squaredNorm());
    return psi;
}

TwoModeVector pair_coherent_state(Complex alpha, int dim) {
    TwoModeVector psi;
    psi.dim = dim;
    psi.amp = Matrix::Zero(dim, dim);
    const double norm_c = bessel_j0(Complex(0.0, 2.0 * std::abs(alpha))).real();
    const double c = 1.0 / std::sqrt(norm_c);
    Complex term = c;
    psi.amp(0, 0) = term;
    for (int m = 1; m < dim; ++m) {
        term *= alpha / static_cast<double>(m);
        psi.amp(m, m) = term;
    }
    psi.truncation_leakage = std::max(0.0, 1.0 - psi.amp.squaredNorm());
    return psi;
}

TwoModeVector two_mode_phase_coherent_state(int q, Complex alpha, int dim) {
    if (q < 0) throw std::invalid_argument("two_mode_phase_coherent_state: q < 0");
    if (std::abs(alpha) >= 1.0)
        throw std::invalid_argument("two_mode_phase_coherent_state: |alpha| >= 1");
    if (q >= dim) throw std::invalid_argument("two_mode_phase_coherent_state: q outside truncation");
    TwoModeVector psi;
    psi.dim = dim;
    psi.amp = Matrix::Zero(dim, dim);
    const double c = std::sqrt(1.0 - std::norm(alpha));
    Complex term = c;
    for (int m = 0; m + q < dim; ++m) {
        psi.amp(m, m + q) = term;
        term *= alpha;
    }
    psi.truncation_leakage = std::max(0.0, 1.0 - psi.amp.squaredNorm());
    return psi;
}

MonomialState monomial_state(int n, int dim) {
    if (n < 0 || n >= dim) throw std::invalid_argument("monomial_state: n outside truncation");
    MonomialState out;
    out.state.dim = dim;
    out.state.amp = Matrix::Zero(dim, dim);
    double norm2 = 0.0;
    for (int m = 0; m <= n; ++m) {
        const double b = std::exp(log_factorial(n) - log_factorial(m) - log_factorial(n - m));
        const double coeff = (m % 2 == 0) ? b : -b;
        out.state.amp(m, m) = coeff;
        norm2 += coeff * coeff;
    }
    out.original_norm = std::sqrt(norm2);
    out.state.amp /= out.original_norm;
    return out;
}

Vector phase_shift_diagonal(double theta, int dim) {
    Vector d(dim);
    for (int n = 0; n < dim; ++n) d[n] = std::polar(1.0, theta * n);
    return d;
}

Matrix phase_shift_unitary(double theta, int dim) {
    return phase_shift_diagonal(theta, dim).asDiagonal();
}

void require_leakage_below(double leakage, double bound) {
    if (leakage > bound)
        throw std::runtime_error("truncation leakage " + std::to_string(leakage) +
                                 " exceeds bound " + std::to_string(bound) +
                                 "; increase --dim");
}

namespace {

int parse_int(const std::string& text, size_t& pos) {
    size_t start = pos;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) throw ParseError("expected integer", start);
    return std::stoi(text.substr(start, pos - start));
}

double parse_real(const std::string& text, size_t& pos) {
    size_t start = pos;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
    bool digits = false;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        ++pos;
        digits = true;
    }
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            ++pos;
            digits = true;
        }
    }
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
        size_t mark = pos++;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
        bool exp_digits = false;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            ++pos;
            exp_digits = true;
        }
        if (!exp_digits) pos = mark;
    }
    if (!digits) throw ParseError("expected number", start);
    return std::stod(text.substr(start, pos - start));
}

} // namespace

// Complex literal "re" or "re+imi" / "re-imi", e.g. "1+0i", "0.5-0.25i".
Complex parse_complex(const std::string& text, size_t offset) {
    size_t pos = offset;
    const double re = parse_real(text, pos);
    if (pos == text.size()) return Complex(re, 0.0);
    if (text[pos] != '+' && text[pos] != '-')
        throw ParseError("expected '+' or '-' before imaginary part", pos);
    const double im = parse_real(text, pos);
    if (pos >= text.size() || text[pos] != 'i')
        throw ParseError("expected trailing 'i' on imaginary part", pos);
    ++pos;
    if (pos != text.size()) throw ParseError("trailing characters in complex literal", pos);
    return Complex(re, im);
}

StateSpec parse_state_spec(const std::string& text) {
    const size_t colon = text.find(':');
    if (colon == std::string::npos) throw ParseError("expected 'kind:args'", 0);
    const std::string kind = text.substr(0, colon);
    const std::string args = text.substr(colon + 1);
    StateSpec spec;
    size_t pos = 0;
    if (kind == "number") {
        spec.kind = StateSpec::Kind::Number;
        spec.n = parse_int(args, pos);
        if (pos != args.size()) throw ParseError("trailing characters", colon + 1 + pos);
        if (spec.n < 0) throw ParseError("number index must be nonnegative", colon + 1);
    } else if (kind == "coherent") {
        spec.kind = StateSpec::Kind::Coherent;
        spec.alpha = parse_complex(args);
    } else if (kind == "pair") {
        spec.kind = StateSpec::Kind::PairCoherent;
        spec.alpha = parse_complex(args);
    } else if (kind == "tmpc") {
        spec.kind = StateSpec::Kind::TwoModePhaseCoherent;
        spec.q = parse_int(args, pos);
        if (pos >= args.size() || args[pos] != ',')
            throw ParseError("expected ',' after tmpc index", colon + 1 + pos);
        spec.alpha = parse_complex(args.substr(pos + 1));
    } else if (kind == "monomial") {
        spec.kind = StateSpec::Kind::Monomial;
        spec.n = parse_int(args, pos);
        if (pos != args.size()) throw ParseError("trailing characters", colon + 1 + pos);
        if (spec.n < 0) throw ParseError("monomial index must be nonnegative", colon + 1);
    } else {
        throw ParseError("unknown state kind '" + kind + "'", 0);
    }
    return spec;
}

FockVector make_single_mode_state(const StateSpec& spec, int dim) {
    switch (spec.kind) {
        case StateSpec::Kind::Number: return number_state(spec.n, dim);
        case StateSpec::Kind::Coherent: return coherent_state(spec.alpha, dim);
        default: throw std::invalid_argument("state spec is two-mode");
    }
}

TwoModeVector make_two_mode_state(const StateSpec& spec, int dim) {
    switch (spec.kind) {
        case StateSpec::Kind::PairCoherent: return pair_coherent_state(spec.alpha, dim);
        case StateSpec::Kind::TwoModePhaseCoherent:
            return two_mode_phase_coherent_state(spec.q, spec.alpha, dim);
        case StateSpec::Kind::Monomial: return monomial_state(spec.n, dim).state;
        default: throw std::invalid_argument("state spec is single-mode");
    }
}

} // namespace phasekit
