#include "pacesync/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <stdexcept>
#include <thread>

namespace pacesync {

namespace {

void parallel_for_runs(std::size_t count, const std::function<void(std::size_t)>& body) {
    unsigned workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers <= 1) {
        for (std::size_t k = 0; k < count; ++k) body(k);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t)
        pool.emplace_back([&, t] {
            try {
                for (std::size_t k = t; k < count; k += workers) body(k);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);
}

Mat scaled_coupling(const Mat& a, double factor) {
    Mat out = a;
    for (std::size_t i = 0; i < out.rows(); ++i)
        for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) *= factor;
    return out;
}

Vec scaled(const Vec& v, double factor) {
    Vec out = v;
    for (double& x : out) x *= factor;
    return out;
}

MultiplierStats aggregate(double multiplier, std::vector<RunOutcome> outcomes) {
    MultiplierStats stats;
    stats.multiplier = multiplier;
    double sum = 0.0;
    std::size_t detected = 0;
    for (const RunOutcome& run : outcomes) {
        switch (run.status) {
            case RunStatus::detected:
                sum += run.time;
                ++detected;
                break;
            case RunStatus::timeout: ++stats.timeout_count; break;
            case RunStatus::blowup: ++stats.blowup_count; break;
        }
    }
    if (detected > 0) {
        const double mean = sum / static_cast<double>(detected);
        double ss = 0.0;
        for (const RunOutcome& run : outcomes)
            if (run.status == RunStatus::detected) ss += (run.time - mean) * (run.time - mean);
        stats.mean_time = mean;
        stats.std_time = detected > 1 ? std::sqrt(ss / static_cast<double>(detected - 1)) : 0.0;
    }
    stats.run_outcomes = std::move(outcomes);
    return stats;
}

} // namespace

const char* to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::sync_sweep: return "sync_sweep";
        case ExperimentKind::locking_sweep: return "locking_sweep";
        case ExperimentKind::trapping: return "trapping";
    }
    return "?";
}

const char* to_string(SweepTarget target) {
    switch (target) {
        case SweepTarget::pacemaker: return "pacemaker";
        case SweepTarget::coupling: return "coupling";
    }
    return "?";
}

void ExperimentSpec::validate() const {
    if (n < 1) throw std::invalid_argument("experiment needs at least one oscillator");
    if (base_g.size() != n) throw std::invalid_argument("g does not match oscillator count");
    for (double v : base_g)
        if (!(v >= 0.0)) throw std::invalid_argument("g entries must be nonnegative");
    if (multipliers.empty()) throw std::invalid_argument("multipliers must be non-empty");
    for (double m : multipliers)
        if (!(m > 0.0)) throw std::invalid_argument("multipliers must be positive");
    if (runs < 1) throw std::invalid_argument("runs must be >= 1");
    if (!(init_interval.first <= init_interval.second) || init_interval.first < -M_PI ||
        init_interval.second > M_PI)
        throw std::invalid_argument("xi0 interval must lie within [-pi, pi]");
    if (natural_freq_interval && !(natural_freq_interval->first <= natural_freq_interval->second))
        throw std::invalid_argument("w interval must be ordered");
    if (natural_freqs && natural_freqs->size() != n)
        throw std::invalid_argument("w does not match oscillator count");
    if (xi0 && xi0->size() != n)
        throw std::invalid_argument("xi0 does not match oscillator count");
    if (kind == ExperimentKind::trapping && !(delta > 0.0 && delta < M_PI))
        throw std::invalid_argument("delta must lie in (0, pi)");
    if (!(sync_threshold > 0.0 && sync_threshold <= 1.0))
        throw std::invalid_argument("sync threshold must lie in (0, 1]");
    if (!(lock_tol > 0.0)) throw std::invalid_argument("lock tolerance must be positive");
    integrator.validate();
}

Vec sample_initial_phases(std::size_t n, std::pair<double, double> interval, SplitMix64& rng) {
    if (!(interval.first <= interval.second) || interval.first < -M_PI || interval.second > M_PI)
        throw std::invalid_argument("initial phase interval must lie within [-pi, pi]");
    Vec out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = rng.uniform(interval.first, interval.second);
    return out;
}

std::optional<double> time_to_sync(const Trajectory& traj, double threshold) {
    for (std::size_t k = 0; k < traj.size(); ++k)
        if (traj.r_samples[k] >= threshold) return traj.times[k];
    return std::nullopt;
}

std::optional<double> time_to_lock(const Trajectory& traj, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("time_to_lock: tol must be positive");
    for (std::size_t k = 0; k < traj.size(); ++k)
        if (max_abs(traj.zeta_samples[k]) < tol) return traj.times[k];
    return std::nullopt;
}

CouplingGraph realize_coupling(const ExperimentSpec& spec) {
    if (spec.coupling.matrix) {
        if (spec.coupling.matrix->rows() != spec.n)
            throw std::invalid_argument("coupling matrix does not match oscillator count");
        return CouplingGraph::from_matrix(*spec.coupling.matrix);
    }
    if (!(spec.coupling.lo >= 0.0 && spec.coupling.lo <= spec.coupling.hi))
        throw std::invalid_argument("coupling random_uniform bounds must satisfy 0 <= lo <= hi");
    // Dedicated substream so the graph draw never collides with run 0.
    SplitMix64 seeder(spec.seed);
    SplitMix64 rng(seeder.next());
    for (int attempt = 0; attempt < 10000; ++attempt) {
        Mat a(spec.n, spec.n);
        for (std::size_t i = 0; i < spec.n; ++i)
            for (std::size_t j = i + 1; j < spec.n; ++j)
                a(i, j) = a(j, i) = rng.uniform(spec.coupling.lo, spec.coupling.hi);
        CouplingGraph graph = CouplingGraph::from_matrix(std::move(a));
        if (is_connected(graph)) return graph;
    }
    throw std::runtime_error("could not draw a connected coupling graph in 10000 attempts");
}

RunInputs draw_run_inputs(const ExperimentSpec& spec, std::size_t run_index) {
    SplitMix64 rng(spec.seed ^ static_cast<std::uint64_t>(run_index));
    RunInputs inputs;
    inputs.xi0 = spec.xi0 ? *spec.xi0 : sample_initial_phases(spec.n, spec.init_interval, rng);
    if (spec.natural_freq_interval) {
        inputs.w.resize(spec.n);
        for (std::size_t i = 0; i < spec.n; ++i)
            inputs.w[i] = rng.uniform(spec.natural_freq_interval->first,
                                      spec.natural_freq_interval->second);
    } else if (spec.natural_freqs) {
        inputs.w = *spec.natural_freqs;
    } else {
        inputs.w.assign(spec.n, spec.w0);
    }
    return inputs;
}

SimulationSetup realize_run(const ExperimentSpec& spec, std::size_t run_index) {
    spec.validate();
    CouplingGraph graph = realize_coupling(spec);
    RunInputs inputs = draw_run_inputs(spec, run_index);
    ModelParams params(std::move(graph), PacemakerCoupling::from_vector(spec.base_g), spec.w0,
                       std::move(inputs.w));
    const double epsilon = spec.epsilon_override.value_or(max_abs(inputs.xi0));
    return {std::move(params), std::move(inputs.xi0), epsilon};
}

SweepResult run_sweep(const ExperimentSpec& spec, const ProgressFn& progress) {
    spec.validate();
    if (spec.kind == ExperimentKind::trapping)
        throw std::invalid_argument("run_sweep expects a sync_sweep or locking_sweep kind");
    const CouplingGraph base_graph = realize_coupling(spec);
    const bool sync_kind = spec.kind == ExperimentKind::sync_sweep;

    SweepResult result;
    result.per_multiplier.reserve(spec.multipliers.size());
    for (std::size_t mi = 0; mi < spec.multipliers.size(); ++mi) {
        const double m = spec.multipliers[mi];
        const Mat a = spec.sweep_target == SweepTarget::coupling
                          ? scaled_coupling(base_graph.a, m)
                          : base_graph.a;
        const Vec g = spec.sweep_target == SweepTarget::pacemaker ? scaled(spec.base_g, m)
                                                                  : spec.base_g;

        std::vector<RunOutcome> outcomes(spec.runs);
        parallel_for_runs(spec.runs, [&](std::size_t k) {
            RunInputs inputs = draw_run_inputs(spec, k);
            ModelParams params(CouplingGraph::from_matrix(a), PacemakerCoupling::from_vector(g),
                               spec.w0, std::move(inputs.w));
            const StopPredicate stop =
                sync_kind ? StopPredicate([&](double, const Vec&, const Vec&, double r) {
                    return r >= spec.sync_threshold;
                })
                          : StopPredicate([&](double, const Vec&, const Vec& zeta, double) {
                                return max_abs(zeta) < spec.lock_tol;
                            });
            try {
                const Trajectory traj = integrate(params, inputs.xi0, spec.integrator, stop);
                const std::optional<double> hit = sync_kind
                                                      ? time_to_sync(traj, spec.sync_threshold)
                                                      : time_to_lock(traj, spec.lock_tol);
                outcomes[k] = hit ? RunOutcome{RunStatus::detected, *hit}
                                  : RunOutcome{RunStatus::timeout, 0.0};
            } catch (const IntegrationError&) {
                outcomes[k] = {RunStatus::blowup, 0.0};
            }
        });
        result.per_multiplier.push_back(aggregate(m, std::move(outcomes)));
        if (progress) progress(mi, m);
    }
    return result;
}

TrappingResult run_trapping(const ExperimentSpec& spec, const ProgressFn& progress) {
    spec.validate();
    if (spec.kind != ExperimentKind::trapping)
        throw std::invalid_argument("run_trapping expects a trapping kind");
    for (double v : spec.base_g)
        if (!(v > 0.0))
            throw std::invalid_argument("trapping requires every pacemaker strength positive");
    const CouplingGraph base_graph = realize_coupling(spec);

    TrappingResult result;
    result.per_multiplier.reserve(spec.multipliers.size());
    for (std::size_t mi = 0; mi < spec.multipliers.size(); ++mi) {
        const double m = spec.multipliers[mi];
        const Vec g = scaled(spec.base_g, m);

        std::vector<double> finals(spec.runs, 0.0);
        std::vector<unsigned char> blown(spec.runs, 0);
        parallel_for_runs(spec.runs, [&](std::size_t k) {
            RunInputs inputs = draw_run_inputs(spec, k);
            ModelParams params(CouplingGraph::from_matrix(base_graph.a),
                               PacemakerCoupling::from_vector(g), spec.w0, std::move(inputs.w));
            try {
                const Trajectory traj = integrate(params, inputs.xi0, spec.integrator);
                finals[k] = max_abs(traj.final_xi());
            } catch (const IntegrationError&) {
                blown[k] = 1;
            }
        });

        TrappingPoint point;
        point.multiplier = m;
        for (std::size_t k = 0; k < spec.runs; ++k) {
            if (blown[k]) {
                ++point.blowup_count;
                continue;
            }
            point.max_final_relative_phase = std::max(point.max_final_relative_phase, finals[k]);
        }
        result.per_multiplier.push_back(point);
        if (progress) progress(mi, m);
    }
    return result;
}

std::string format_csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    const std::size_t n = traj.xi_samples.empty() ? 0 : traj.xi_samples.front().size();
    os << "t";
    for (std::size_t i = 1; i <= n; ++i) os << ",xi_" << i;
    for (std::size_t i = 1; i <= n; ++i) os << ",zeta_" << i;
    os << ",r\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        os << format_csv_number(traj.times[k]);
        for (double v : traj.xi_samples[k]) os << ',' << format_csv_number(v);
        for (double v : traj.zeta_samples[k]) os << ',' << format_csv_number(v);
        os << ',' << format_csv_number(traj.r_samples[k]) << '\n';
    }
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
    os << "multiplier,mean_time,std_time,timeouts\n";
    for (const MultiplierStats& stats : result.per_multiplier) {
        os << format_csv_number(stats.multiplier) << ',';
        if (stats.mean_time) os << format_csv_number(*stats.mean_time);
        os << ',';
        if (stats.std_time) os << format_csv_number(*stats.std_time);
        os << ',' << (stats.timeout_count + stats.blowup_count) << '\n';
    }
}

void write_trapping_csv(std::ostream& os, const TrappingResult& result) {
    os << "multiplier,max_final_relative_phase\n";
    for (const TrappingPoint& point : result.per_multiplier)
        os << format_csv_number(point.multiplier) << ','
           << format_csv_number(point.max_final_relative_phase) << '\n';
}

} // namespace pacesync
