// phasekit command-line front end: phase distributions, double homodyne
// tables, and the verification suites, exported as CSV or JSON.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "phasekit/homodyne.hpp"
#include "phasekit/instruments.hpp"
#include "phasekit/phase_observables.hpp"
#include "phasekit/phase_space.hpp"
#include "phasekit/states.hpp"
#include "phasekit/verify.hpp"

namespace {

using namespace phasekit;
using nlohmann::json;

constexpr int kSchemaVersion = 1;

struct RunConfig {
    int dim = 32;
    int quad = 64;
    int bins = 64;
    std::uint64_t seed = 7;
    std::string out;
    std::string format = "csv";
    std::vector<std::string> tol_overrides;
    double leakage_bound = 1e-6;
    int w_kmax = 65536;
};

void add_common_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--dim", cfg.dim, "Fock truncation dimension")->check(CLI::Range(4, 64));
    cmd->add_option("--quad", cfg.quad, "radial quadrature order");
    cmd->add_option("--bins", cfg.bins, "angle bins")->check(CLI::Range(4, 4096));
    cmd->add_option("--seed", cfg.seed, "random seed");
    cmd->add_option("--out", cfg.out, "output path (default: stdout)");
    cmd->add_option("--format", cfg.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--tol-override", cfg.tol_overrides,
                    "tolerance override key=val (repeatable)");
    cmd->add_option("--w-kmax", cfg.w_kmax, "W vacuum-column depth for --modified");
}

VerifyConfig to_verify_config(const RunConfig& cfg) {
    VerifyConfig v;
    v.dim = cfg.dim;
    v.quad = cfg.quad;
    v.bins = cfg.bins;
    v.seed = cfg.seed;
    v.w_kmax = cfg.w_kmax;
    for (const auto& kv : cfg.tol_overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--tol-override expects key=val, got '" + kv + "'");
        v.set_tolerance(kv.substr(0, eq), std::stod(kv.substr(eq + 1)));
    }
    return v;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// atomically replace `path` (tmp file + rename); empty path -> stdout
void emit(const std::string& path, const std::string& payload) {
    if (path.empty()) {
        std::cout << payload;
        return;
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file " + tmp);
        out << payload;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename output into place: " + path);
}

json config_echo(const RunConfig& cfg, const VerifyConfig& v) {
    json j;
    j["dim"] = cfg.dim;
    j["quad"] = cfg.quad;
    j["bins"] = cfg.bins;
    j["seed"] = cfg.seed;
    j["format"] = cfg.format;
    j["w_kmax"] = cfg.w_kmax;
    j["tolerances"] = json(v.tol);
    return j;
}

PhaseMatrix load_phase_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open phase-matrix file " + path);
    json j;
    in >> j;
    const int d = j.at("dim").get<int>();
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    if (static_cast<int>(re.size()) != d * d || static_cast<int>(im.size()) != d * d)
        throw std::runtime_error("phase-matrix file has wrong payload size");
    Matrix c(d, d);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) c(m, n) = Complex(re[m * d + n], im[m * d + n]);
    return PhaseMatrix::from_matrix(std::move(c));
}

// observable grammar: canonical | F:k | G:k | dirac:x0 | matrix-file:path
PhaseMatrix parse_observable(const std::string& text, const QuadratureGrid& grid, int dim) {
    if (text == "canonical") return PhaseMatrix::canonical(dim);
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw ParseError("unknown observable '" + text + "'", 0);
    const std::string kind = text.substr(0, colon);
    const std::string arg = text.substr(colon + 1);
    if (kind == "F") return angle_margin(profile_f(std::stoi(arg), grid, dim));
    if (kind == "G") return angle_margin(profile_g(std::stoi(arg), grid, dim));
    if (kind == "dirac") return angle_margin(profile_dirac(std::stod(arg), PhaseMatrix::canonical(dim)));
    if (kind == "matrix-file") return load_phase_matrix_file(arg);
    throw ParseError("unknown observable kind '" + kind + "'", 0);
}

DensityMatrix single_mode_density(const StateSpec& spec, int dim, double leakage_bound) {
    if (spec.two_mode())
        throw std::invalid_argument("this command needs a single-mode state spec");
    const FockVector psi = make_single_mode_state(spec, dim);
    require_leakage_below(psi.truncation_leakage, leakage_bound);
    return DensityMatrix::pure(psi);
}

int cmd_phase_dist(const RunConfig& cfg, const std::string& state_text,
                   const std::string& obs_text) {
    const VerifyConfig v = to_verify_config(cfg);
    const QuadratureGrid grid = QuadratureGrid::radial(cfg.quad);
    const AnglePartition part = AnglePartition::uniform(cfg.bins);
    const StateSpec spec = parse_state_spec(state_text);
    const DensityMatrix rho = single_mode_density(spec, cfg.dim, cfg.leakage_bound);
    const PhaseMatrix c = parse_observable(obs_text, grid, cfg.dim);
    const RealVector p = phase_distribution(rho, c, part);
    const double residual = p.sum() - 1.0;

    if (cfg.format == "csv") {
        std::string csv = "theta_lo,theta_hi,prob\n";
        for (int j = 0; j < part.bins(); ++j)
            csv += fmt(part.lo(j)) + "," + fmt(part.hi(j)) + "," + fmt(p[j]) + "\n";
        emit(cfg.out, csv);
    } else {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["command"] = "phase-dist";
        j["config"] = config_echo(cfg, v);
        j["state"] = state_text;
        j["observable"] = obs_text;
        j["normalization_residual"] = residual;
        json rows = json::array();
        for (int b = 0; b < part.bins(); ++b)
            rows.push_back({part.lo(b), part.hi(b), p[b]});
        j["rows"] = std::move(rows);
        emit(cfg.out, j.dump(2) + "\n");
    }
    if (std::abs(residual) > 1e-6)
        throw std::runtime_error("probability column residual above 1e-6");
    return 0;
}

int cmd_homodyne(const RunConfig& cfg, const std::string& signal_text,
                 const std::string& param_text, bool modified, bool allow_nondiagonal,
                 int samples) {
    const VerifyConfig v = to_verify_config(cfg);
    const QuadratureGrid grid = QuadratureGrid::radial(cfg.quad);
    const AnglePartition part = AnglePartition::uniform(cfg.bins);
    const StateSpec signal = parse_state_spec(signal_text);
    const DensityMatrix rho = single_mode_density(signal, cfg.dim, cfg.leakage_bound);

    JointDensityTable table;
    RealVector marginal;
    RealVector residual;
    if (modified) {
        if (param_text != "number:0")
            throw std::invalid_argument(
                "--modified prepares W(rho x |0><0|)W*; use --param number:0");
        const ModifiedSchemeResult res =
            modified_scheme_phase_dist(rho, grid, part, cfg.w_kmax);
        table = res.table;
        marginal = res.probs;
        const RealVector canon = phase_distribution(rho, PhaseMatrix::canonical(cfg.dim), part);
        residual = marginal - canon;
    } else {
        const StateSpec param = parse_state_spec(param_text);
        const DensityMatrix sigma = single_mode_density(param, cfg.dim, cfg.leakage_bound);
        const bool diagonal = param.kind == StateSpec::Kind::Number;
        if (!diagonal && !allow_nondiagonal)
            throw std::invalid_argument(
                "parameter state is not diagonal in the number basis; the angle margin "
                "is not covariant (pass --allow to proceed)");
        table = double_homodyne_dist(rho, sigma, grid, part);
        marginal = RealVector(part.bins());
        for (int b = 0; b < part.bins(); ++b) marginal[b] = table.mass.col(b).sum();
    }

    if (cfg.format == "csv") {
        std::string csv = modified ? "theta_lo,theta_hi,prob,residual\n"
                                   : "theta_lo,theta_hi,prob\n";
        for (int b = 0; b < part.bins(); ++b) {
            csv += fmt(part.lo(b)) + "," + fmt(part.hi(b)) + "," + fmt(marginal[b]);
            if (modified) csv += "," + fmt(residual[b]);
            csv += "\n";
        }
        emit(cfg.out, csv);
    } else {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["command"] = "homodyne";
        j["config"] = config_echo(cfg, v);
        j["signal"] = signal_text;
        j["param"] = param_text;
        j["modified"] = modified;
        j["total_mass"] = table.total_mass;
        j["normalization_residual"] = marginal.sum() - 1.0;
        json nodes = json::array(), weights = json::array();
        for (int q = 0; q < grid.order; ++q) {
            nodes.push_back(grid.nodes[q]);
            weights.push_back(grid.weights[q]);
        }
        j["grid"] = {{"order", grid.order}, {"nodes", nodes}, {"weights", weights}};
        json mass = json::array();
        for (int q = 0; q < grid.order; ++q) {
            json row = json::array();
            for (int b = 0; b < part.bins(); ++b) row.push_back(table.mass(q, b));
            mass.push_back(std::move(row));
        }
        j["joint_mass"] = std::move(mass);
        json rows = json::array();
        for (int b = 0; b < part.bins(); ++b) {
            json row = {part.lo(b), part.hi(b), marginal[b]};
            if (modified) row.push_back(residual[b]);
            rows.push_back(std::move(row));
        }
        j["rows"] = std::move(rows);
        if (samples > 0) {
            json cells = json::array();
            for (const auto& [q, b] : sample_outcomes(table, samples, cfg.seed))
                cells.push_back({q, b});
            j["samples"] = std::move(cells);
        }
        emit(cfg.out, j.dump(2) + "\n");
    }
    return 0;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite) {
    VerifyConfig v = to_verify_config(cfg);
    if ((suite == "coupling" || suite == "all") && cfg.quad < 2 * cfg.dim)
        throw CLI::ValidationError("coupling suite requires --quad >= 2*dim");
    const auto reports = run_suites(suite, v);
    bool ok = true;
    json jreports = json::array();
    for (const auto& r : reports) {
        json jr;
        jr["suite"] = r.suite;
        json checks = json::array();
        for (const auto& c : r.checks) {
            ok = ok && c.passed;
            std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << r.suite << ": " << c.name
                      << " (measured " << fmt(c.measured) << ", bound " << fmt(c.bound)
                      << ")\n";
            checks.push_back({{"name", c.name},
                              {"measured", c.measured},
                              {"bound", c.bound},
                              {"passed", c.passed}});
        }
        jr["checks"] = std::move(checks);
        jr["passed"] = r.passed();
        jreports.push_back(std::move(jr));
    }
    if (!cfg.out.empty()) {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["command"] = "verify";
        j["suite"] = suite;
        j["config"] = config_echo(cfg, v);
        j["reports"] = std::move(jreports);
        j["passed"] = ok;
        emit(cfg.out, j.dump(2) + "\n");
    }
    std::cout << (ok ? "verify: all checks passed\n" : "verify: FAILURES present\n");
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"phasekit: numerical toolkit for covariant phase observables and "
                 "double homodyne detection on a truncated Fock space"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string state_text, obs_text = "canonical";
    std::string signal_text, param_text = "number:0", suite = "all";
    bool modified = false, allow_nondiagonal = false;
    int samples = 0;

    CLI::App* pd = app.add_subcommand("phase-dist", "phase distribution of a state");
    add_common_flags(pd, cfg);
    pd->add_option("--state", state_text,
                   "state spec: number:n | coherent:re+imi")->required();
    pd->add_option("--observable", obs_text,
                   "canonical | F:k | G:k | dirac:x0 | matrix-file:path");

    CLI::App* hd = app.add_subcommand("homodyne", "double homodyne outcome density");
    add_common_flags(hd, cfg);
    hd->add_option("--signal", signal_text, "signal state spec")->required();
    hd->add_option("--param", param_text, "parameter state spec (default vacuum)");
    hd->add_flag("--modified", modified, "insert the W coupling (canonical-phase scheme)");
    hd->add_flag("--allow", allow_nondiagonal, "allow non-diagonal parameter states");
    hd->add_option("--samples", samples, "draw outcome samples into the JSON output");

    CLI::App* vf = app.add_subcommand("verify", "run verification suites");
    add_common_flags(vf, cfg);
    vf->add_option("--suite", suite,
                   "povm | covariance | coupling | identity | instruments | all");

    try {
        app.parse(argc, argv);
        if (pd->parsed()) return cmd_phase_dist(cfg, state_text, obs_text);
        if (hd->parsed())
            return cmd_homodyne(cfg, signal_text, param_text, modified, allow_nondiagonal,
                                samples);
        if (vf->parsed()) return cmd_verify(cfg, suite);
        return 2;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    } catch (const phasekit::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
