#include "pacesync/cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "pacesync/analysis.hpp"
#include "pacesync/config.hpp"
#include "pacesync/harness.hpp"

namespace pacesync {

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<double> epsilon;
    bool quiet = false;
};

void add_common(CLI::App* sub, CommonArgs& args, bool with_epsilon = false) {
    sub->add_option("--config", args.config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", args.out_path, "output path (default: stdout)");
    sub->add_option("--seed", args.seed, "override the config seed");
    if (with_epsilon)
        sub->add_option("--epsilon", args.epsilon,
                        "evaluate bounds at this epsilon instead of max |xi_i(0)|");
    sub->add_flag("--quiet", args.quiet, "suppress progress output");
}

ExperimentSpec load_spec(const CommonArgs& args) {
    ExperimentSpec spec = load_experiment_file(args.config_path);
    if (args.seed) spec.seed = *args.seed;
    if (args.epsilon) {
        if (!(*args.epsilon >= 0.0)) throw ConfigError("--epsilon must be nonnegative");
        spec.epsilon_override = *args.epsilon;
    }
    return spec;
}

// Routes table/CSV output to --out or stdout.
class OutputStream {
public:
    explicit OutputStream(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw ConfigError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& get() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

std::string opt_number(const std::optional<double>& v) {
    return v ? format_csv_number(*v) : std::string();
}

struct BoundsRow {
    std::string kind;
    double epsilon = 0.0;
    std::optional<double> value;
    bool valid = false;
    std::optional<double> margin;
    std::string binding_term;
};

std::vector<BoundsRow> bounds_rows(const ModelParams& params, double eps) {
    const bool identical = params.identical_frequencies();
    std::vector<BoundsRow> rows;

    const auto push_skipped = [&](const char* kind, const char* why) {
        rows.push_back({kind, eps, std::nullopt, false, std::nullopt, why});
    };

    if (identical && eps < M_PI / 2.0) {
        const RateBound rb = alpha1(params, eps);
        const ConditionVerdict cv = check_sync_condition(params, eps);
        rows.push_back({"alpha1", eps, rb.value, rb.valid, cv.margin, cv.binding_term});
    } else {
        push_skipped("alpha1", identical ? "out_of_regime" : "not_applicable");
    }

    if (identical && eps >= M_PI / 2.0 && eps < M_PI) {
        const RateBound rb = alpha2(params, eps);
        const ConditionVerdict cv = check_sync_condition(params, eps);
        rows.push_back({"alpha2", eps, rb.value, rb.valid, cv.margin, cv.binding_term});
    } else {
        push_skipped("alpha2", identical ? "out_of_regime" : "not_applicable");
    }

    if (eps < M_PI / 4.0) {
        const RateBound rb = alpha3(params, eps);
        const ConditionVerdict cv = check_locking_condition(params, eps);
        rows.push_back({"alpha3", eps, rb.value, rb.valid, cv.margin, cv.binding_term});
    } else {
        push_skipped("alpha3", "out_of_regime");
    }

    if (eps >= M_PI / 4.0 && eps < M_PI / 2.0) {
        const RateBound rb = alpha4(params, eps);
        const ConditionVerdict cv = check_locking_condition(params, eps);
        rows.push_back({"alpha4", eps, rb.value, rb.valid, cv.margin, cv.binding_term});
    } else {
        push_skipped("alpha4", "out_of_regime");
    }
    return rows;
}

void print_bounds(std::ostream& os, const std::vector<BoundsRow>& rows, bool csv) {
    if (csv) {
        os << "kind,epsilon,value,valid,margin,binding_term\n";
        for (const BoundsRow& row : rows)
            os << row.kind << ',' << format_csv_number(row.epsilon) << ',' << opt_number(row.value)
               << ',' << (row.valid ? "true" : "false") << ',' << opt_number(row.margin) << ','
               << row.binding_term << '\n';
        return;
    }
    os << "kind     epsilon      value        valid  margin       binding_term\n";
    for (const BoundsRow& row : rows) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-8s %-12.6g %-12s %-6s %-12s %s\n", row.kind.c_str(),
                      row.epsilon, row.value ? format_csv_number(*row.value).c_str() : "-",
                      row.valid ? "true" : "false",
                      row.margin ? format_csv_number(*row.margin).c_str() : "-",
                      row.binding_term.c_str());
        os << buf;
    }
}

void print_verdicts(std::ostream& os, const std::vector<ConditionVerdict>& rows, bool csv) {
    if (csv) {
        os << "condition,holds,margin,binding_term\n";
        for (const ConditionVerdict& v : rows)
            os << v.condition << ',' << (v.holds ? "true" : "false") << ','
               << format_csv_number(v.margin) << ',' << v.binding_term << '\n';
        return;
    }
    os << "condition  holds  margin       binding_term\n";
    for (const ConditionVerdict& v : rows) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-10s %-6s %-12s %s\n", v.condition.c_str(),
                      v.holds ? "true" : "false", format_csv_number(v.margin).c_str(),
                      v.binding_term.c_str());
        os << buf;
    }
}

ProgressFn make_progress(const CommonArgs& args, std::size_t total, const char* label) {
    if (args.quiet) return nullptr;
    return [total, label](std::size_t index, double multiplier) {
        std::fprintf(stderr, "[%s] multiplier %g done (%zu/%zu)\n", label, multiplier, index + 1,
                     total);
    };
}

int run_simulate(const CommonArgs& args) {
    const ExperimentSpec spec = load_spec(args);
    const SimulationSetup setup = realize_run(spec);
    const Trajectory traj = integrate(setup.params, setup.xi0, spec.integrator);
    OutputStream out(args.out_path);
    write_trajectory_csv(out.get(), traj);
    if (!args.quiet)
        std::fprintf(stderr, "[simulate] n=%zu samples=%zu final_r=%.6f\n", setup.params.size(),
                     traj.size(), traj.r_samples.back());
    return 0;
}

int run_bounds(const CommonArgs& args) {
    const ExperimentSpec spec = load_spec(args);
    const SimulationSetup setup = realize_run(spec);
    OutputStream out(args.out_path);
    print_bounds(out.get(), bounds_rows(setup.params, setup.epsilon), !args.out_path.empty());
    return 0;
}

int run_check(const CommonArgs& args) {
    const ExperimentSpec spec = load_spec(args);
    const SimulationSetup setup = realize_run(spec);
    const double eps = setup.epsilon;
    std::vector<ConditionVerdict> rows;
    if (setup.params.identical_frequencies() && eps < M_PI)
        rows.push_back(check_sync_condition(setup.params, eps));
    if (eps < M_PI / 2.0) rows.push_back(check_locking_condition(setup.params, eps));
    if (eps < M_PI) rows.push_back(check_trapping_condition(setup.params, eps, spec.delta));
    OutputStream out(args.out_path);
    print_verdicts(out.get(), rows, !args.out_path.empty());
    return 0;
}

int run_sweep_cmd(const CommonArgs& args) {
    const ExperimentSpec spec = load_spec(args);
    if (spec.kind == ExperimentKind::trapping)
        throw ConfigError("config field 'kind' must be sync_sweep or locking_sweep for sweep");
    const SweepResult result =
        run_sweep(spec, make_progress(args, spec.multipliers.size(), "sweep"));
    OutputStream out(args.out_path);
    write_sweep_csv(out.get(), result);
    return 0;
}

int run_trap(const CommonArgs& args) {
    const ExperimentSpec spec = load_spec(args);
    if (spec.kind != ExperimentKind::trapping)
        throw ConfigError("config field 'kind' must be trapping for trap");
    const TrappingResult result =
        run_trapping(spec, make_progress(args, spec.multipliers.size(), "trap"));
    OutputStream out(args.out_path);
    write_trapping_csv(out.get(), result);
    return 0;
}

} // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Kuramoto oscillator network simulator with a pacemaker: trajectories, "
                 "spectral rate bounds, condition checks and sweep experiments"};
    app.require_subcommand(1);

    CommonArgs simulate_args, bounds_args, sweep_args, trap_args, check_args;
    CLI::App* simulate = app.add_subcommand("simulate", "integrate one trajectory to CSV");
    add_common(simulate, simulate_args);
    CLI::App* bounds = app.add_subcommand("bounds", "rate-bound table for a config");
    add_common(bounds, bounds_args, true);
    CLI::App* sweep = app.add_subcommand("sweep", "multiplier sweep of time-to-sync/lock");
    add_common(sweep, sweep_args);
    CLI::App* trap = app.add_subcommand("trap", "trapping curve over pacemaker multipliers");
    add_common(trap, trap_args);
    CLI::App* check = app.add_subcommand("check", "condition verdicts for a config");
    add_common(check, check_args, true);

    try {
        app.parse(argc, argv);
        if (simulate->parsed()) return run_simulate(simulate_args);
        if (bounds->parsed()) return run_bounds(bounds_args);
        if (sweep->parsed()) return run_sweep_cmd(sweep_args);
        if (trap->parsed()) return run_trap(trap_args);
        if (check->parsed()) return run_check(check_args);
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const IntegrationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cli_main(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("pacesync");
    for (const std::string& arg : args) argv.push_back(arg.c_str());
    return cli_main(static_cast<int>(argv.size()), argv.data());
}

} // namespace pacesync
