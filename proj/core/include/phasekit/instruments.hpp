#pragma once

#include "phasekit/phase_observables.hpp"

namespace phasekit {

struct InstrumentOutput {
    double lo = 0.0, hi = 0.0;
    Matrix op;           // unnormalized output operator
    double weight = 0.0; // tr[op] = tr[rho E(Theta)]
};

// Minimal covariant rank-1 instrument for the phase observable with matrix c
// and structure vectors eta (embedded on the first rank basis vectors):
// I_Theta(rho) = sum_{m,n} <n|rho|m> (1/2pi) int_Theta e^{i th N}|eta_n><eta_m|e^{-i th N}
//                e^{i th (m-n)} dth.
InstrumentOutput rank1_covariant_instrument(const DensityMatrix& rho,
                                            const PhaseMatrix& c,
                                            const StructureVectors& eta,
                                            double lo, double hi);

// Nuclear instrument of the canonical phase with posterior family
// sigma_theta = e^{i theta N} |eta><eta| e^{-i theta N}.
InstrumentOutput canonical_nuclear_instrument(const DensityMatrix& rho,
                                              const FockVector& eta,
                                              double lo, double hi);

// ||exp(i pi P_antisym) - SWAP||_F on the d x d two-mode space.
double swap_hamiltonian_check(int dim);

// |tr[(rho (x) |0><0|) O_angle(Theta)] - tr[rho E_can(Theta)]|
double dilation_check(const DensityMatrix& rho, double lo, double hi, int dim);

// Choi block matrix of the bin map rho -> I_Theta(rho); PSD iff the map is CP.
Matrix instrument_choi(const PhaseMatrix& c, const StructureVectors& eta,
                       double lo, double hi);

} // namespace phasekit
