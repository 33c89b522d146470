#pragma once

#include <cstdint>
#include <random>

#include "phasekit/phase_observables.hpp"
#include "phasekit/types.hpp"

namespace phasekit {

// Deterministic random sources: mt19937_64 plus hand-rolled transforms, so
// streams are identical across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(); // [0, 1)
    double gaussian();
    Complex complex_gaussian();

    FockVector random_state(int dim);
    DensityMatrix random_density(int dim, int rank = 0);
    DensityMatrix random_diagonal_density(int dim);
    PhaseMatrix random_phase_matrix(int dim, int rank = 0);

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace phasekit
