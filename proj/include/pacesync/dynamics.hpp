#ifndef PACESYNC_DYNAMICS_HPP
#define PACESYNC_DYNAMICS_HPP

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pacesync/linalg.hpp"
#include "pacesync/network.hpp"

namespace pacesync {

/// Everything the relative-phase vector field needs: the coupling graph,
/// per-node pacemaker strengths, and natural frequencies. omega caches
/// w - w0 so the identical-frequency check is exact.
struct ModelParams {
    CouplingGraph graph;
    PacemakerCoupling pacemaker;
    double w0 = 0.0;
    Vec w;
    Vec omega;
    double phi0_init = 0.0;

    ModelParams(CouplingGraph graph, PacemakerCoupling pacemaker, double w0, Vec w,
                double phi0_init = 0.0);

    std::size_t size() const { return graph.n; }
    bool identical_frequencies() const { return max_abs(omega) == 0.0; }
};

struct IntegratorConfig {
    double dt = 0.01;
    double t_max = 500.0;
    std::size_t record_every = 1;

    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
        if (!(t_max >= dt)) throw std::invalid_argument("t_max must be at least one step");
        if (record_every < 1) throw std::invalid_argument("record_every must be >= 1");
    }
};

/// Time-sampled relative phases xi, relative frequencies zeta (the vector
/// field evaluated at each sample, not a finite difference) and the order
/// parameter r.
struct Trajectory {
    Vec times;
    std::vector<Vec> xi_samples;
    std::vector<Vec> zeta_samples;
    Vec r_samples;

    std::size_t size() const { return times.size(); }
    const Vec& final_xi() const { return xi_samples.back(); }
};

/// Thrown when the state leaves the finite/bounded envelope during
/// integration (usually a sign that dt is too large for the stiffness).
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(std::size_t step, const std::string& what)
        : std::runtime_error("integration aborted at step " + std::to_string(step) + ": " + what),
          step_(step) {}

    std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

/// xi'_i = (w_i - w_0) + sum_j a_ij sin(xi_j - xi_i) - g_i sin(xi_i).
Vec relative_phase_rhs(const Vec& xi, const ModelParams& params);

/// Same field in incidence form: Omega - G sin(xi) - B W sin(B^T xi).
/// Kept as a separate evaluation route for cross-checking.
Vec relative_phase_rhs_incidence(const Vec& xi, const ModelParams& params,
                                 const IncidenceRepresentation& inc);

/// Full-phase field: returns (phi0', phi') with phi0' = w0 and
/// phi'_i = w_i + sum_j a_ij sin(phi_j - phi_i) + g_i sin(phi0 - phi_i).
std::pair<double, Vec> full_phase_rhs(double phi0, const Vec& phi, const ModelParams& params);

/// Reduces x into [-pi, pi). Applied to initial conditions only; states
/// are never re-wrapped during integration.
double wrap_phase(double x);

/// Called at each recorded sample; returning true truncates the run at
/// that sample. Used by the sweep harness for time-to-event detection.
using StopPredicate = std::function<bool(double t, const Vec& xi, const Vec& zeta, double r)>;

/// Classical fixed-step RK4 on the relative-phase dynamics. Samples every
/// record_every steps, always including t = 0 and the final step. Aborts
/// with IntegrationError if the state goes non-finite or |xi_i| > 1e6.
Trajectory integrate(const ModelParams& params, const Vec& xi0, const IntegratorConfig& cfg,
                     const StopPredicate& stop = nullptr);

} // namespace pacesync

#endif
