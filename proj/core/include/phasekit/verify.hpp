#pragma once

#include <map>
#include <string>
#include <vector>

#include "phasekit/types.hpp"

namespace phasekit {

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    bool passed = false;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;
    bool passed() const;
};

// All thresholds are pinned here and overridable by key (CLI --tol-override).
struct VerifyConfig {
    int dim = 24;
    int quad = 64;
    int bins = 64;
    std::uint64_t seed = 7;
    int w_kmax = 65536;

    std::map<std::string, double> tol = {
        {"povm.psd_floor", 1e-10},       {"povm.bins_sum", 1e-8},
        {"povm.covariance", 1e-10},      {"margin.f_delta", 1e-9},
        {"margin.g_gamma", 1e-8},        {"coupling.w_vacuum_exact", 1e-10},
        {"coupling.vacuum_column", 1e-9},{"coupling.v_uw_tail_rel", 0.1},
        {"coupling.swap", 1e-10},        {"coupling.dilation", 1e-8},
        {"identity.bin", 1e-6},          {"modified.bin", 2e-4},
        {"modified.via_v", 1e-4},        {"closed_form.v_output", 1e-7},
        {"joint.margin", 1e-9},          {"lemma1.nonscalar", 1e-6},
        {"lemma1.scalar", 1e-13},        {"instrument.weight", 1e-9},
        {"instrument.covariance", 1e-9}, {"instrument.choi_floor", -1e-8},
    };
    double tolerance(const std::string& key) const;
    void set_tolerance(const std::string& key, double value); // throws on unknown key
};

SuiteReport run_povm_suite(const VerifyConfig& cfg);
SuiteReport run_covariance_suite(const VerifyConfig& cfg);
SuiteReport run_coupling_suite(const VerifyConfig& cfg);
SuiteReport run_identity_suite(const VerifyConfig& cfg);
SuiteReport run_instruments_suite(const VerifyConfig& cfg);

// suite in {povm, covariance, coupling, identity, instruments, all}; throws
// std::invalid_argument on anything else.
std::vector<SuiteReport> run_suites(const std::string& suite, const VerifyConfig& cfg);

} // namespace phasekit
