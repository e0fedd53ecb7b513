// catbell: evaluate, scan, verify and optimize the Bell-CHSH correlator of
// two-mode entangled cat states measured with displaced vacuum-projector
// observables.
//
// Exit codes:
//   0  success
//   1  configuration or parse error (the offending key is named)
//   2  degenerate state, grid or search region
//   3  eval only: the requested point violates the classical bound
//   4  verification failure (first failing check named)
//   5  internal consistency failure (quantum bound or certification breach)

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "catbell/analytic.hpp"
#include "catbell/config.hpp"
#include "catbell/optimize.hpp"
#include "catbell/scan.hpp"
#include "catbell/verify.hpp"

namespace {

using namespace catbell;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitDegenerate = 2;
constexpr int kExitViolating = 3;
constexpr int kExitVerifyFailed = 4;
constexpr int kExitInternal = 5;

int default_workers() {
    if (const char* env = std::getenv("CATBELL_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

// Raw flag values as strings; parsed into RunConfig after the config file
// so that explicit flags win.
struct FlagSet {
    std::optional<std::string> sigma, eta, z, zp, w, wp;
    std::optional<double> phi;
    std::optional<std::string> alpha_range, omega_range, steps;
    std::optional<int> cutoff, samples, restarts, workers;
    std::optional<long> budget;
    std::optional<std::uint64_t> seed;
    std::optional<double> settings_box;
    std::optional<std::string> out, format;
    bool paper_setting = false;
    bool literal_vacuum = false;
};

Amplitude parse_complex_flag(const std::string& text, const char* key) {
    try {
        return parse_complex(text);
    } catch (const std::exception& e) {
        throw CLI::ValidationError(std::string("--") + key, e.what());
    }
}

std::pair<int, int> parse_steps(const std::string& text) {
    const auto comma = text.find(',');
    try {
        if (comma == std::string::npos) {
            const int n = std::stoi(text);
            return {n, n};
        }
        return {std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw CLI::ValidationError("--steps", "expected N or NA,NO");
    }
}

void apply_flags(RunConfig& cfg, const FlagSet& f) {
    if (f.sigma) cfg.sigma = parse_complex_flag(*f.sigma, "sigma");
    if (f.eta) cfg.eta = parse_complex_flag(*f.eta, "eta");
    if (f.phi) cfg.phi = *f.phi;
    if (f.z) cfg.z = parse_complex_flag(*f.z, "z");
    if (f.zp) cfg.zp = parse_complex_flag(*f.zp, "zp");
    if (f.w) cfg.w = parse_complex_flag(*f.w, "w");
    if (f.wp) cfg.wp = parse_complex_flag(*f.wp, "wp");
    if (f.alpha_range) {
        try {
            cfg.alpha_range = parse_range(*f.alpha_range);
        } catch (const std::exception& e) {
            throw CLI::ValidationError("--alpha-range", e.what());
        }
    }
    if (f.omega_range) {
        try {
            cfg.omega_range = parse_range(*f.omega_range);
        } catch (const std::exception& e) {
            throw CLI::ValidationError("--omega-range", e.what());
        }
    }
    if (f.steps) cfg.steps = parse_steps(*f.steps);
    if (f.cutoff) cfg.cutoff = *f.cutoff;
    if (f.samples) cfg.samples = *f.samples;
    if (f.budget) cfg.budget = *f.budget;
    if (f.restarts) cfg.restarts = *f.restarts;
    if (f.seed) cfg.seed = *f.seed;
    if (f.workers) cfg.workers = *f.workers;
    if (f.settings_box) cfg.settings_box = *f.settings_box;
    if (f.out) cfg.out = *f.out;
    if (f.format) cfg.format = *f.format;
    if (f.paper_setting) cfg.paper_setting = true;
    if (f.literal_vacuum) cfg.literal_vacuum = true;
}

void apply_paper_setting(RunConfig& cfg) {
    // The stated parameter point: z = z' = w = w' = 1, phi = pi. With all
    // four displacements identical the CHSH sum reduces to 2 E(z, w).
    const Amplitude one{1.0, 0.0};
    cfg.z = one;
    cfg.zp = one;
    cfg.w = one;
    cfg.wp = one;
    cfg.phi = std::numbers::pi;
}

Amplitude require_amplitude(const std::optional<Amplitude>& v, const char* key) {
    if (!v) throw CLI::ValidationError(std::string("--") + key, "required for this command");
    return *v;
}

MeasurementSettings settings_from_config(const RunConfig& cfg) {
    return {require_amplitude(cfg.z, "z"), require_amplitude(cfg.zp, "zp"),
            require_amplitude(cfg.w, "w"), require_amplitude(cfg.wp, "wp")};
}

std::string fmt(double v) { return format_double(v); }

int cmd_eval(const RunConfig& cfg) {
    const CatStateParams state =
        make_cat_state(require_amplitude(cfg.sigma, "sigma"), require_amplitude(cfg.eta, "eta"),
                       cfg.phi.value_or(0.0));
    const MeasurementSettings s = settings_from_config(cfg);

    const double e_zw = correlator(s.z, s.w, state).value;
    const double e_zpw = correlator(s.z_prime, s.w, state).value;
    const double e_zwp = correlator(s.z, s.w_prime, state).value;
    const double e_zpwp = correlator(s.z_prime, s.w_prime, state).value;
    const ChshValue c = chsh(s, state);

    std::cout << "E(z,w)   = " << fmt(e_zw) << '\n'
              << "E(z',w)  = " << fmt(e_zpw) << '\n'
              << "E(z,w')  = " << fmt(e_zwp) << '\n'
              << "E(z',w') = " << fmt(e_zpwp) << '\n'
              << "CHSH     = " << fmt(c.value) << '\n'
              << "classification: " << to_string(c.classification) << '\n';
    return c.violating() ? kExitViolating : kExitOk;
}

int cmd_scan(const RunConfig& cfg) {
    ScanGrid grid;
    const auto ar = cfg.alpha_range.value_or(std::pair{0.2, 2.0});
    const auto orr = cfg.omega_range.value_or(std::pair{0.2, 2.0});
    const auto steps = cfg.steps.value_or(std::pair{25, 25});
    grid.alpha_range = {ar.first, ar.second, steps.first};
    grid.omega_range = {orr.first, orr.second, steps.second};
    grid.settings = settings_from_config(cfg);
    grid.phi = cfg.phi.value_or(std::numbers::pi);

    const ScanResult result = run_scan(grid, cfg.workers.value_or(default_workers()));
    for (const auto& [alpha, omega] : result.skipped) {
        std::cerr << "notice: skipped degenerate grid point (alpha, omega) = (" << fmt(alpha)
                  << ", " << fmt(omega) << ")\n";
    }
    if (result.records.empty()) {
        std::cerr << "error: every grid point is degenerate\n";
        return kExitDegenerate;
    }

    const std::string format = cfg.format.value_or("csv");
    const std::string out = cfg.out.value_or(format == "json" ? "scan.json" : "scan.csv");
    std::ofstream file(out, std::ios::binary);
    if (!file) {
        std::cerr << "error: cannot open '" << out << "' for writing\n";
        return kExitConfig;
    }
    if (format == "json") {
        file << scan_to_json(result.records).dump(2) << '\n';
    } else if (format == "csv") {
        write_scan_csv(result.records, file);
    } else {
        std::cerr << "error: --format must be csv or json\n";
        return kExitConfig;
    }

    const ScanSummary summary = summarize(result.records);
    std::cout << "scan: " << summary.total << " points -> " << out << "; max |CHSH| = "
              << fmt(summary.max_abs_chsh) << " at (alpha, omega) = ("
              << fmt(summary.argmax_alpha) << ", " << fmt(summary.argmax_omega)
              << "); violating fraction = " << fmt(summary.violating_fraction()) << '\n';
    if (cfg.paper_setting) {
        std::cout << "note: with identical settings z = z' = w = w' the CHSH sum collapses to "
                     "2 E(z,w) and cannot exceed 2; see README \"The stated parameter point\"\n";
    }
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
    VerifyOptions opt;
    opt.cutoff = cfg.cutoff.value_or(64);
    opt.samples = cfg.samples.value_or(100);
    opt.seed = cfg.seed.value_or(1);
    opt.workers = cfg.workers.value_or(default_workers());
    opt.literal_vacuum = cfg.literal_vacuum;

    const VerifyReport report = run_verification(opt);
    for (const auto& c : report.checks) {
        if (c.informational) {
            std::cout << "info  " << c.name << ": " << fmt(c.value) << '\n';
        } else {
            std::cout << "check " << c.name << ": " << fmt(c.value)
                      << (c.require_above ? " (required > " : " (tolerance ") << fmt(c.threshold)
                      << ") " << (c.passed ? "PASS" : "FAIL") << '\n';
        }
    }
    if (const VerifyCheck* failure = report.first_failure()) {
        std::cerr << "verify failed at check '" << failure->name << "'\n";
        return kExitVerifyFailed;
    }
    std::cout << "verify: all checks passed (cutoff " << opt.cutoff << ", samples " << opt.samples
              << ", seed " << opt.seed << ")\n";
    return kExitOk;
}

int cmd_optimize(const RunConfig& cfg) {
    OptimizationProblem problem;
    const long budget = cfg.budget.value_or(200000);
    const int restarts = cfg.restarts.value_or(64);
    const std::uint64_t seed = cfg.seed.value_or(1);
    const double box = cfg.settings_box.value_or(3.0);

    if (cfg.sigma || cfg.eta || cfg.phi) {
        const CatStateParams state =
            make_cat_state(require_amplitude(cfg.sigma, "sigma"),
                           require_amplitude(cfg.eta, "eta"), cfg.phi.value_or(0.0));
        problem = fixed_state_problem(state, box, budget, restarts, seed);
    } else {
        problem = reference_problem(budget, restarts, seed);
        for (std::size_t k = 0; k < 8; ++k) problem.bounds[k] = {-box, box};
        if (cfg.alpha_range) problem.bounds[8] = {cfg.alpha_range->first, cfg.alpha_range->second};
        if (cfg.omega_range) {
            problem.bounds[10] = {cfg.omega_range->first, cfg.omega_range->second};
        }
    }

    const OptimizationResult result =
        maximize_violation(problem, cfg.workers.value_or(default_workers()));

    const std::string out = cfg.out.value_or("result.json");
    std::ofstream file(out, std::ios::binary);
    if (!file) {
        std::cerr << "error: cannot open '" << out << "' for writing\n";
        return kExitConfig;
    }
    file << result_to_json(result).dump(2) << '\n';

    std::cout << "optimize: best |CHSH| = " << fmt(result.best_value) << " after "
              << result.evaluations_used << " evaluations (seed " << result.seed << ") -> " << out
              << '\n';
    return kExitOk;
}

int dispatch(const RunConfig& cfg) {
    if (cfg.command == "eval") return cmd_eval(cfg);
    if (cfg.command == "scan") return cmd_scan(cfg);
    if (cfg.command == "verify") return cmd_verify(cfg);
    if (cfg.command == "optimize") return cmd_optimize(cfg);
    std::cerr << "error: unknown command '" << cfg.command << "'\n";
    return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Bell-CHSH correlator toolkit for two-mode entangled cat states with "
        "displaced vacuum-projector observables"};
    app.require_subcommand(1);

    FlagSet flags;
    std::string config_path;
    bool dump_config = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--workers", flags.workers, "parallel evaluation cap (env CATBELL_WORKERS)");
        cmd->add_option("--config", config_path, "JSON config file; explicit flags override it")
            ->check(CLI::ExistingFile);
        cmd->add_flag("--dump-config", dump_config,
                      "print the effective config as JSON and exit");
    };
    auto add_state = [&](CLI::App* cmd) {
        cmd->add_option("--sigma", flags.sigma, "cat amplitude of mode A, e.g. 0.8+0i");
        cmd->add_option("--eta", flags.eta, "cat amplitude of mode B");
        cmd->add_option("--phi", flags.phi, "relative branch phase (radians)");
    };
    auto add_settings = [&](CLI::App* cmd) {
        cmd->add_option("--z", flags.z, "displacement z ('a+bi' or '(re,im)')");
        cmd->add_option("--zp", flags.zp, "displacement z'");
        cmd->add_option("--w", flags.w, "displacement w");
        cmd->add_option("--wp", flags.wp, "displacement w'");
        cmd->add_flag("--paper-setting", flags.paper_setting,
                      "use the stated parameter point z = z' = w = w' = 1, phi = pi "
                      "(degenerate: the CHSH sum collapses to 2 E)");
    };

    CLI::App* eval = app.add_subcommand("eval", "evaluate E components and the CHSH value");
    add_state(eval);
    add_settings(eval);
    add_common(eval);

    CLI::App* scan = app.add_subcommand("scan", "sweep real (alpha, omega) and emit CSV/JSON");
    scan->add_option("--alpha-range", flags.alpha_range, "alpha axis as min:max (default 0.2:2.0)");
    scan->add_option("--omega-range", flags.omega_range, "omega axis as min:max (default 0.2:2.0)");
    scan->add_option("--steps", flags.steps, "grid steps per axis, N or NA,NO (default 25)");
    scan->add_option("--phi", flags.phi, "branch phase (default pi)");
    add_settings(scan);
    scan->add_option("--out", flags.out, "output file (default scan.csv / scan.json)");
    scan->add_option("--format", flags.format, "csv or json (default csv)");
    add_common(scan);

    CLI::App* verify =
        app.add_subcommand("verify", "cross-check closed forms against the Fock-matrix oracle");
    verify->add_option("--cutoff", flags.cutoff, "Fock truncation per mode (default 64)");
    verify->add_option("--samples", flags.samples, "random parameter tuples (default 100)");
    verify->add_option("--seed", flags.seed, "sample seed (default 1)");
    verify->add_flag("--literal-f", flags.literal_vacuum,
                     "also report the joint-vacuum-projector reading of the observables");
    add_common(verify);

    CLI::App* optimize =
        app.add_subcommand("optimize", "search measurement settings (and state) for violations");
    add_state(optimize);
    optimize->add_option("--alpha-range", flags.alpha_range,
                         "bounds for real sigma in free-state mode (default 0.3:2.5)");
    optimize->add_option("--omega-range", flags.omega_range,
                         "bounds for real eta in free-state mode (default 0.3:2.5)");
    optimize->add_option("--settings-box", flags.settings_box,
                         "bound on |Re|,|Im| of each displacement (default 3)");
    optimize->add_option("--budget", flags.budget, "max objective evaluations (default 200000)");
    optimize->add_option("--restarts", flags.restarts, "simplex restarts (default 64)");
    optimize->add_option("--seed", flags.seed, "start-sample seed (default 1)");
    optimize->add_option("--out", flags.out, "result JSON file (default result.json)");
    add_common(optimize);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitConfig;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            nlohmann::json j;
            try {
                in >> j;
                cfg = config_from_json(j);
            } catch (const std::exception& e) {
                std::cerr << "error in --config file '" << config_path << "': " << e.what()
                          << '\n';
                return kExitConfig;
            }
        }
        for (const CLI::App* sub : app.get_subcommands()) cfg.command = sub->get_name();
        apply_flags(cfg, flags);
        if (cfg.paper_setting) apply_paper_setting(cfg);

        if (dump_config) {
            std::cout << config_to_json(cfg).dump(2) << '\n';
            return kExitOk;
        }
        return dispatch(cfg);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DegenerateStateError& e) {
        std::cerr << "error: degenerate state: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const DegenerateRegionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const CutoffTooSmallError& e) {
        std::cerr << "verify failed: CutoffTooSmall: " << e.what() << '\n';
        return kExitVerifyFailed;
    } catch (const TsirelsonViolationError& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    } catch (const CertificationError& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInternal;
    }
}
