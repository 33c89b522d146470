#pragma once

#include <string>

#include "phasekit/types.hpp"

namespace phasekit {

FockVector number_state(int n, int dim);
FockVector coherent_state(Complex alpha, int dim);

// psi_alpha = C(alpha) sum_m alpha^m/m! |m>|m>, C(alpha) = J_0(2i|alpha|)^{-1/2}.
TwoModeVector pair_coherent_state(Complex alpha, int dim);

// (1-|alpha|^2)^{1/2} sum_m alpha^m |m>|m+q>; requires |alpha| < 1.
TwoModeVector two_mode_phase_coherent_state(int q, Complex alpha, int dim);

struct MonomialState {
    TwoModeVector state;  // normalized
    double original_norm; // norm of sum_m (-1)^m C(n,m) |m>|m> before normalization
};
// phi_n = sum_{m<=n} (-1)^m binom(n,m) |m>|m>, normalized.
MonomialState monomial_state(int n, int dim);

// diag(e^{i theta n}), n = 0..dim-1
Vector phase_shift_diagonal(double theta, int dim);
Matrix phase_shift_unitary(double theta, int dim);

void require_leakage_below(double leakage, double bound);

// State grammar used by the CLI and tests:
//   number:n | coherent:re+imi | pair:re+imi | tmpc:q,re+imi | monomial:n
struct StateSpec {
    enum class Kind { Number, Coherent, PairCoherent, TwoModePhaseCoherent, Monomial };
    Kind kind = Kind::Number;
    int n = 0;      // number / monomial index
    int q = 0;      // tmpc offset
    Complex alpha;  // coherent / pair / tmpc amplitude
    bool two_mode() const {
        return kind == Kind::PairCoherent || kind == Kind::TwoModePhaseCoherent ||
               kind == Kind::Monomial;
    }
};

struct ParseError : std::runtime_error {
    size_t position;
    ParseError(const std::string& msg, size_t pos)
        : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"),
          position(pos) {}
};

StateSpec parse_state_spec(const std::string& text);
Complex parse_complex(const std::string& text, size_t offset = 0);

FockVector make_single_mode_state(const StateSpec& spec, int dim);
TwoModeVector make_two_mode_state(const StateSpec& spec, int dim);

} // namespace phasekit
