// Command-line front end: spectrum tables, resonance scans, exact/RWA
// simulation runs, drive-index sweeps and the sideband-equivalence check.
// Every command reads a JSON config and writes CSV/JSON into --out.
// Outputs are a pure function of the config; anything time-dependent goes
// to stderr only.

#include <atomic>
#include <chrono>
#include <clocale>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qrabi/qrabi.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qrabi;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerics = 3;
constexpr int kExitIo = 4;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& item : obj.items())
        if (!allowed.count(item.key()))
            throw ConfigError("unknown key \"" + item.key() + "\" in " + where);
}

double require_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw ConfigError("missing \"" + key + "\" in " + where);
    if (!obj[key].is_number()) throw ConfigError("\"" + key + "\" in " + where + " must be a number");
    return obj[key].get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback,
                 const std::string& where) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw ConfigError("\"" + key + "\" in " + where + " must be a number");
    return obj[key].get<double>();
}

int require_int(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw ConfigError("missing \"" + key + "\" in " + where);
    if (!obj[key].is_number_integer())
        throw ConfigError("\"" + key + "\" in " + where + " must be an integer");
    return obj[key].get<int>();
}

int int_or(const json& obj, const std::string& key, int fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer())
        throw ConfigError("\"" + key + "\" in " + where + " must be an integer");
    return obj[key].get<int>();
}

json load_config(const std::string& path, bool with_model) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open config file: " + path);
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    std::set<std::string> allowed = {"schema", "task"};
    if (with_model) allowed.insert("model");
    reject_unknown_keys(cfg, allowed, "config root");
    if (!cfg.contains("schema") || !cfg["schema"].is_number_integer() ||
        cfg["schema"].get<int>() != 1)
        throw ConfigError("config must declare \"schema\": 1");
    if (!cfg.contains("task") || !cfg["task"].is_object())
        throw ConfigError("config must contain a \"task\" object");
    if (with_model && (!cfg.contains("model") || !cfg["model"].is_object()))
        throw ConfigError("config must contain a \"model\" object");
    return cfg;
}

ModelParams parse_model(const json& m) {
    reject_unknown_keys(m, {"kind", "bargmann_k", "spin_j", "omega", "g1", "g2", "omega_e",
                            "phi", "delta", "dim"},
                        "model");
    ModelParams p;
    if (!m.contains("kind") || !m["kind"].is_string())
        throw ConfigError("model.kind must be one of \"oscillator\", \"su11\", \"su2\"");
    const std::string kind = m["kind"].get<std::string>();
    try {
        if (kind == "oscillator") {
            p.algebra = Algebra::oscillator();
        } else if (kind == "su11") {
            p.algebra = Algebra::su11(require_number(m, "bargmann_k", "model"));
        } else if (kind == "su2") {
            p.algebra = Algebra::su2(require_number(m, "spin_j", "model"));
        } else {
            throw ConfigError("unknown model.kind \"" + kind + "\"");
        }
        p.omega = number_or(m, "omega", 1.0, "model");
        p.g1 = require_number(m, "g1", "model");
        p.g2 = require_number(m, "g2", "model");
        p.omega_e = require_number(m, "omega_e", "model");
        p.phi = number_or(m, "phi", 0.0, "model");
        p.delta = require_number(m, "delta", "model");
        p.dim = (p.algebra.kind == AlgebraKind::SU2) ? p.algebra.su2_dim()
                                                     : require_int(m, "dim", "model");
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid model: ") + e.what());
    }
    return p;
}

ResonanceFamily parse_family(const std::string& name) {
    if (name == "one-qubit") return ResonanceFamily::OneQubit;
    if (name == "two-1") return ResonanceFamily::TwoPlusPlus;
    if (name == "two-2") return ResonanceFamily::TwoMinusMinus;
    if (name == "two-3") return ResonanceFamily::TwoPlusMinus;
    if (name == "two-4") return ResonanceFamily::TwoMinusPlus;
    throw ConfigError("unknown family \"" + name +
                      "\"; expected one-qubit or two-1 .. two-4");
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open output file: " + path.string());
    out << contents;
    if (!out) throw std::ios_base::failure("write failed: " + path.string());
}

// ---------------------------------------------------------------------------

int cmd_spectrum(const json& cfg, const fs::path& out_dir) {
    const ModelParams p = parse_model(cfg["model"]);
    const json& task = cfg["task"];
    reject_unknown_keys(task, {"n_max"}, "task");

    const DressedFrame frame = dressed_frame(p);
    const int n_max = int_or(task, "n_max", frame.interior, "task");
    if (n_max < 1 || n_max > frame.interior)
        throw NumericsError("spectrum: n_max exceeds the converged interior (" +
                            std::to_string(frame.interior) + ")");
    std::cerr << "[qrabi] spectrum: Omega=" << frame.omega_big << " x=" << frame.x
              << " delta/g1=" << p.delta_to_g1() << "\n";

    std::string csv = "n,lambda,energy,e_delta,diagonal_element\n";
    for (int n = 0; n < n_max; ++n)
        for (int lambda : {1, -1})
            csv += std::to_string(n) + "," + std::to_string(lambda) + "," +
                   fmt(frame.energies(n)) + "," + fmt(e_delta(frame, p, n, lambda)) + "," +
                   fmt(frame.table.element(n, n)) + "\n";
    write_file(out_dir / "spectrum.csv", csv);
    return kExitOk;
}

int cmd_resonance(const json& cfg, const fs::path& out_dir) {
    const ModelParams p = parse_model(cfg["model"]);
    const json& task = cfg["task"];
    reject_unknown_keys(task,
                        {"families", "alphas", "alpha_max", "m", "n", "omega_e_min",
                         "omega_e_max", "grid"},
                        "task");

    std::vector<ResonanceFamily> families;
    if (task.contains("families")) {
        if (!task["families"].is_array()) throw ConfigError("task.families must be an array");
        for (const auto& f : task["families"])
            families.push_back(parse_family(f.get<std::string>()));
    } else {
        families = {ResonanceFamily::OneQubit, ResonanceFamily::TwoPlusPlus,
                    ResonanceFamily::TwoMinusMinus, ResonanceFamily::TwoPlusMinus,
                    ResonanceFamily::TwoMinusPlus};
    }
    std::vector<int> alphas;
    if (task.contains("alphas")) {
        if (!task["alphas"].is_array()) throw ConfigError("task.alphas must be an array");
        for (const auto& a : task["alphas"]) alphas.push_back(a.get<int>());
    } else {
        const int amax = int_or(task, "alpha_max", 5, "task");
        for (int a = -amax; a <= amax; ++a) alphas.push_back(a);
    }
    const int m = int_or(task, "m", 0, "task");
    const int n = require_int(task, "n", "task");

    SolveWindow window;
    window.omega_min = number_or(task, "omega_e_min", 0.0, "task");
    window.omega_max = number_or(task, "omega_e_max", 0.0, "task");
    window.grid = int_or(task, "grid", 10000, "task");

    const DressedFrame frame = dressed_frame(p);
    std::string csv = "family,alpha,m,n,omega_e,residual,gamma\n";
    for (ResonanceFamily family : families) {
        for (int alpha : alphas) {
            if (family == ResonanceFamily::OneQubit && alpha == 0) continue;
            const auto roots = solve_resonance(family, p, frame, alpha, m, n, window);
            for (const ResonanceSpec& s : roots)
                csv += family_name(family) + "," + std::to_string(s.alpha) + "," +
                       std::to_string(s.m) + "," + std::to_string(s.n) + "," +
                       fmt(s.omega_e) + "," + fmt(s.residual) + "," +
                       fmt(2.0 * p.g2 / s.omega_e) + "\n";
        }
    }
    write_file(out_dir / "resonance.csv", csv);
    return kExitOk;
}

int cmd_simulate(const json& cfg, const fs::path& out_dir) {
    ModelParams p = parse_model(cfg["model"]);
    const json& task = cfg["task"];
    reject_unknown_keys(
        task, {"initial", "t_final", "steps", "record_stride", "track_n_max", "rwa"}, "task");

    // optional RWA gate block; may re-solve the drive frequency
    std::optional<RabiSolution> gate;
    if (task.contains("rwa")) {
        const json& r = task["rwa"];
        reject_unknown_keys(r, {"family", "alpha", "m", "n", "target", "solve_omega_e"},
                            "task.rwa");
        const ResonanceFamily family = parse_family(r.at("family").get<std::string>());
        const int alpha = require_int(r, "alpha", "task.rwa");
        const int rm = int_or(r, "m", 0, "task.rwa");
        const int rn = require_int(r, "n", "task.rwa");
        const std::string target_name =
            r.contains("target") ? r["target"].get<std::string>() : "pi";
        if (target_name != "pi" && target_name != "half")
            throw ConfigError("task.rwa.target must be \"pi\" or \"half\"");
        const PulseTarget target =
            target_name == "pi" ? PulseTarget::PiPulse : PulseTarget::HalfPulse;

        DressedFrame frame = dressed_frame(p);
        ResonanceSpec spec{family, alpha, rm, rn, p.omega_e, 0.0};
        if (r.contains("solve_omega_e") && r["solve_omega_e"].get<bool>()) {
            const auto roots = solve_resonance(family, p, frame, alpha, rm, rn);
            if (roots.empty())
                throw NumericsError("simulate: no resonance found in the search window");
            // pick the root closest to the configured drive frequency
            const ResonanceSpec* best = &roots.front();
            for (const ResonanceSpec& s : roots)
                if (std::abs(s.omega_e - p.omega_e) < std::abs(best->omega_e - p.omega_e))
                    best = &s;
            spec = *best;
            p.omega_e = spec.omega_e;
            frame = dressed_frame(p);
        } else {
            spec.residual = std::abs(
                resonance_condition_value(family, p, frame, alpha, rm, rn, p.omega_e));
            if (spec.residual > 1e-9)
                throw NumericsError("simulate: configured omega_e is off resonance (residual " +
                                    std::to_string(spec.residual) + "); set solve_omega_e");
        }
        gate = synthesize_gate(family, p, frame, spec, target);
    }

    const DressedFrame frame = dressed_frame(p);
    const json& init = task.at("initial");
    reject_unknown_keys(init, {"type", "n", "sign"}, "task.initial");
    const std::string init_type = init.at("type").get<std::string>();
    const int init_n = require_int(init, "n", "task.initial");
    const int init_sign = int_or(init, "sign", 1, "task.initial");
    if (init_n < 0 || init_n >= frame.interior)
        throw NumericsError("simulate: initial level outside the converged interior");
    if (init_sign != 1 && init_sign != -1)
        throw ConfigError("task.initial.sign must be 1 or -1");
    Vector psi0;
    if (init_type == "dressed") {
        psi0 = frame.states.col(frame.state_index(init_sign, init_n));
    } else if (init_type == "cat") {
        const CatBasis cats = cat_basis(frame);
        psi0 = cats.vectors.col((init_sign > 0 ? 0 : frame.dim) + init_n);
    } else {
        throw ConfigError("task.initial.type must be \"dressed\" or \"cat\"");
    }

    double t_final;
    if (task.contains("t_final")) {
        t_final = require_number(task, "t_final", "task");
    } else if (gate) {
        t_final = gate->duration;
    } else {
        throw ConfigError("task.t_final is required without an rwa block");
    }
    const Matrix h0 = hamiltonian_static(p);
    double h_norm = 0.0;
    for (int i = 0; i < h0.rows(); ++i)
        h_norm = std::max(h_norm, h0.row(i).cwiseAbs().sum());
    h_norm += std::abs(p.g2);
    const int default_steps = int(std::ceil(t_final * h_norm / 0.05)) + 1;
    const int steps = int_or(task, "steps", default_steps, "task");
    EvolveOptions opts;
    opts.record_stride = int_or(task, "record_stride", std::max(1, steps / 2000), "task");

    const Trajectory traj = evolve_exact(p, psi0, t_final, steps, opts);
    const int track_default =
        std::min(frame.interior, std::max(init_n, gate ? gate->spec.n : 0) + 3);
    const int track_n_max = int_or(task, "track_n_max", track_default, "task");
    const CoefficientTable table = extract_coefficients(traj, p, frame, track_n_max);

    std::string csv = "t";
    for (int n = 0; n < track_n_max; ++n)
        csv += ",pop_" + std::to_string(n) + "_plus,pop_" + std::to_string(n) + "_minus";
    csv += ",norm\n";
    for (size_t k = 0; k < table.times.size(); ++k) {
        csv += fmt(table.times[k]);
        for (int n = 0; n < track_n_max; ++n) {
            csv += "," + fmt(std::norm(table.cat_plus(int(k), n)));
            csv += "," + fmt(std::norm(table.cat_minus(int(k), n)));
        }
        csv += "," + fmt(traj.norms[k]) + "\n";
    }
    write_file(out_dir / "trajectory.csv", csv);

    json summary;
    summary["omega_e"] = p.omega_e;
    summary["gamma"] = p.gamma();
    summary["delta_to_g1"] = p.delta_to_g1();
    summary["steps"] = traj.steps;
    summary["dt"] = t_final / steps;
    summary["t_final"] = t_final;
    summary["max_norm_drift"] = traj.max_norm_drift;
    if (gate) {
        const RwaMetrics metrics = compare_rwa(traj, p, frame, *gate);
        summary["rwa"] = {
            {"family", family_name(gate->family)},
            {"alpha", gate->spec.alpha},
            {"omega_e", gate->spec.omega_e},
            {"residual", gate->spec.residual},
            {"rabi_frequency", gate->r.real()},
            {"pulse_duration", gate->duration},
            {"subspace", gate->subspace},
            {"max_population_deviation", metrics.max_population_deviation},
            {"max_leakage", metrics.max_leakage},
            {"terminal_fidelity", metrics.terminal_fidelity},
        };
    }
    write_file(out_dir / "summary.json", summary.dump(2) + "\n");
    return kExitOk;
}

int cmd_sweep(const json& cfg, const fs::path& out_dir, int workers) {
    const ModelParams p = parse_model(cfg["model"]);
    const json& task = cfg["task"];
    reject_unknown_keys(
        task, {"axis", "min", "max", "points", "family", "alpha", "m", "n", "lambda"}, "task");
    const std::string axis = task.at("axis").get<std::string>();
    if (axis != "gamma") throw ConfigError("task.axis must be \"gamma\"");
    const double lo = require_number(task, "min", "task");
    const double hi = require_number(task, "max", "task");
    const int points = require_int(task, "points", "task");
    if (!(lo < hi) || points < 2)
        throw ConfigError("sweep range must have min < max, points >= 2");
    if (lo <= 0.0) throw ConfigError("sweep gamma must be positive");
    const ResonanceFamily family = parse_family(task.at("family").get<std::string>());
    const int alpha = require_int(task, "alpha", "task");
    const int m = int_or(task, "m", 0, "task");
    const int n = require_int(task, "n", "task");
    const int lambda = int_or(task, "lambda", 1, "task");
    if (lambda != 1 && lambda != -1) throw ConfigError("task.lambda must be 1 or -1");
    if (p.g2 <= 0.0) throw NumericsError("sweep: gamma axis requires g2 > 0");

    const DressedFrame frame = dressed_frame(p);

    std::vector<std::string> rows(points);
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::mutex error_mutex;
    std::exception_ptr failure;

    const auto body = [&]() {
        try {
            for (int i = next.fetch_add(1); i < points; i = next.fetch_add(1)) {
                const double gamma = lo + (hi - lo) * i / (points - 1);
                const double omega_e = 2.0 * p.g2 / gamma;
                const double rabi =
                    rabi_frequency_at(family, p, frame, alpha, m, n, omega_e).real();
                const double shift = frame.e_delta(n, lambda, gamma);
                const double residual = std::abs(
                    resonance_condition_value(family, p, frame, alpha, m, n, omega_e));
                rows[i] = fmt(gamma) + "," + fmt(rabi) + "," + fmt(shift) + "," +
                          fmt(residual) + "\n";
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!failure) failure = std::current_exception();
        }
    };
    const int pool_size = std::max(1, workers);
    for (int w = 0; w < pool_size; ++w) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure); // nothing written yet: no partial files

    std::string csv = "gamma,rabi,e_delta,residual\n";
    for (const std::string& row : rows) csv += row;
    write_file(out_dir / "sweep.csv", csv);
    return kExitOk;
}

int cmd_nist_check(const json& cfg, const fs::path& out_dir) {
    const json& task = cfg["task"];
    reject_unknown_keys(task, {"eta", "omega0", "g", "delta", "dims"}, "task");
    const double eta = require_number(task, "eta", "task");
    const double omega0 = require_number(task, "omega0", "task");
    const double g = require_number(task, "g", "task");
    const double delta = require_number(task, "delta", "task");
    std::vector<int> dims;
    if (task.contains("dims")) {
        for (const auto& d : task.at("dims")) dims.push_back(d.get<int>());
    } else {
        dims = {128, 256};
    }

    json report;
    report["eta"] = eta;
    report["omega0"] = omega0;
    report["g"] = g;
    report["delta"] = delta;
    report["results"] = json::array();
    for (int dim : dims) {
        const NistReport r = nist_report(omega0, g, delta, eta, dim);
        report["constant_offset"] = r.constant_offset;
        report["results"].push_back(
            {{"dim", r.dim}, {"interior", r.interior}, {"residual", r.residual}});
    }
    write_file(out_dir / "nist_report.json", report.dump(2) + "\n");
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");
    CLI::App app{"dressed-state Rabi gate toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    int workers = int(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;

    CLI::App* spectrum = app.add_subcommand("spectrum", "dressed levels and shifts");
    CLI::App* resonance = app.add_subcommand("resonance", "solve resonance conditions");
    CLI::App* simulate = app.add_subcommand("simulate", "exact evolution and RWA comparison");
    CLI::App* sweep = app.add_subcommand("sweep", "map quantities over the drive index");
    CLI::App* nist = app.add_subcommand("nist-check", "sideband-equivalence residuals");
    for (CLI::App* sub : {spectrum, resonance, simulate, sweep, nist}) {
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--out", out_path, "output directory")->required();
    }
    sweep->add_option("--workers", workers, "sweep worker threads");

    CLI11_PARSE(app, argc, argv);

    const auto started = std::chrono::steady_clock::now();
    int code = kExitOk;
    try {
        const fs::path out_dir(out_path);
        fs::create_directories(out_dir);
        if (app.got_subcommand(spectrum)) {
            code = cmd_spectrum(load_config(config_path, true), out_dir);
        } else if (app.got_subcommand(resonance)) {
            code = cmd_resonance(load_config(config_path, true), out_dir);
        } else if (app.got_subcommand(simulate)) {
            code = cmd_simulate(load_config(config_path, true), out_dir);
        } else if (app.got_subcommand(sweep)) {
            code = cmd_sweep(load_config(config_path, true), out_dir, workers);
        } else {
            code = cmd_nist_check(load_config(config_path, false), out_dir);
        }
    } catch (const ConfigError& e) {
        std::cerr << "[qrabi] config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const json::exception& e) {
        std::cerr << "[qrabi] config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "[qrabi] config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericsError& e) {
        std::cerr << "[qrabi] numerical guard: " << e.what() << "\n";
        return kExitNumerics;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "[qrabi] i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "[qrabi] i/o error: " << e.what() << "\n";
        return kExitIo;
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - started);
    std::cerr << "[qrabi] done in " << elapsed.count() << " ms\n";
    return code;
}
