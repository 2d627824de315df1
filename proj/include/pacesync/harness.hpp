#ifndef PACESYNC_HARNESS_HPP
#define PACESYNC_HARNESS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "pacesync/dynamics.hpp"
#include "pacesync/network.hpp"
#include "pacesync/rng.hpp"

namespace pacesync {

enum class ExperimentKind { sync_sweep, locking_sweep, trapping };
enum class SweepTarget { pacemaker, coupling };

const char* to_string(ExperimentKind kind);
const char* to_string(SweepTarget target);

/// Coupling strengths are either given explicitly or drawn i.i.d. uniform
/// per unordered pair and redrawn until the graph is connected.
struct CouplingSource {
    std::optional<Mat> matrix;
    double lo = 0.0;
    double hi = 0.1;
};

/// A sweep or trapping experiment definition. Per-run randomness is drawn
/// from the substream seeded with (seed XOR run-index), and run k sees the
/// same initial phases and natural frequencies under every multiplier.
struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::sync_sweep;
    std::size_t n = 9;
    CouplingSource coupling;
    Vec base_g;
    double w0 = 1.0;
    std::optional<std::pair<double, double>> natural_freq_interval;
    std::optional<Vec> natural_freqs;
    std::optional<Vec> xi0;
    std::pair<double, double> init_interval{-1.5707963267948966, 1.5707963267948966};
    std::vector<double> multipliers{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    SweepTarget sweep_target = SweepTarget::pacemaker;
    std::size_t runs = 100;
    std::uint64_t seed = 1;
    IntegratorConfig integrator{0.01, 500.0, 10};
    double delta = 0.1;
    std::optional<double> epsilon_override;
    double sync_threshold = 0.99;
    double lock_tol = 1e-3;

    void validate() const;
};

enum class RunStatus { detected, timeout, blowup };

struct RunOutcome {
    RunStatus status = RunStatus::timeout;
    double time = 0.0;
};

/// Aggregate statistics for one multiplier. mean/std are over detected
/// runs only and absent when every run timed out; aborted (blown-up) runs
/// are counted separately and excluded as well.
struct MultiplierStats {
    double multiplier = 1.0;
    std::optional<double> mean_time;
    std::optional<double> std_time;
    std::size_t timeout_count = 0;
    std::size_t blowup_count = 0;
    std::vector<RunOutcome> run_outcomes;
};

struct SweepResult {
    std::vector<MultiplierStats> per_multiplier;
};

struct TrappingPoint {
    double multiplier = 1.0;
    double max_final_relative_phase = 0.0;
    std::size_t blowup_count = 0;
};

struct TrappingResult {
    std::vector<TrappingPoint> per_multiplier;
};

/// i.i.d. uniform draws on the interval, which must lie within [-pi, pi].
Vec sample_initial_phases(std::size_t n, std::pair<double, double> interval, SplitMix64& rng);

/// First sample time with r >= threshold, or nullopt if never reached.
std::optional<double> time_to_sync(const Trajectory& traj, double threshold = 0.99);

/// First sample time with max_i |zeta_i| < tol, or nullopt if never.
std::optional<double> time_to_lock(const Trajectory& traj, double tol = 1e-3);

/// Materializes the coupling graph of a spec, drawing from the dedicated
/// graph substream and redrawing until connected when random.
CouplingGraph realize_coupling(const ExperimentSpec& spec);

/// The state run `run_index` starts from: initial phases plus that run's
/// natural frequencies.
struct RunInputs {
    Vec xi0;
    Vec w;
};

RunInputs draw_run_inputs(const ExperimentSpec& spec, std::size_t run_index);

/// Fully realized single-run setup (multiplier 1): model parameters,
/// initial phases, and the epsilon used for bounds and condition checks
/// (the override if given, otherwise max_i |xi_i(0)|).
struct SimulationSetup {
    ModelParams params;
    Vec xi0;
    double epsilon;
};

SimulationSetup realize_run(const ExperimentSpec& spec, std::size_t run_index = 0);

using ProgressFn = std::function<void(std::size_t multiplier_index, double multiplier)>;

/// Sync-time or locking-time sweep over the multipliers. Runs within a
/// multiplier may execute on several threads; results are merged in
/// run-index order so output is independent of scheduling.
SweepResult run_sweep(const ExperimentSpec& spec, const ProgressFn& progress = nullptr);

/// Trapping protocol: integrate the full horizon for every multiplier and
/// record the worst final relative phase across runs.
TrappingResult run_trapping(const ExperimentSpec& spec, const ProgressFn& progress = nullptr);

/// CSV emission. Header rows are mandatory, rows newline-terminated,
/// numbers use '.' and 9 significant digits; absent aggregates (all runs
/// timed out) are emitted as empty fields.
std::string format_csv_number(double v);
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_sweep_csv(std::ostream& os, const SweepResult& result);
void write_trapping_csv(std::ostream& os, const TrappingResult& result);

} // namespace pacesync

#endif
