#include "pacesync/dynamics.hpp"

#include <cmath>

#include "pacesync/analysis.hpp"

namespace pacesync {

namespace {

constexpr double kStateAbortThreshold = 1e6;

// Scratch buffers so the integrator never allocates in the step loop.
struct RhsWorkspace {
    Vec s, c, as, ac;
    explicit RhsWorkspace(std::size_t n) : s(n), c(n), as(n), ac(n) {}
};

// Component form with the pairwise sines expanded through
// sin(x_j - x_i) = sin(x_j)cos(x_i) - cos(x_j)sin(x_i), which turns the
// O(n^2) transcendental sum into two matrix-vector products.
void rhs_into(const Vec& xi, const ModelParams& params, RhsWorkspace& ws, Vec& out) {
    const std::size_t n = params.size();
    for (std::size_t i = 0; i < n; ++i) {
        ws.s[i] = std::sin(xi[i]);
        ws.c[i] = std::cos(xi[i]);
    }
    const Mat& a = params.graph.a;
    for (std::size_t i = 0; i < n; ++i) {
        double acc_s = 0.0;
        double acc_c = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            acc_s += a(i, j) * ws.s[j];
            acc_c += a(i, j) * ws.c[j];
        }
        ws.as[i] = acc_s;
        ws.ac[i] = acc_c;
    }
    for (std::size_t i = 0; i < n; ++i)
        out[i] = params.omega[i] - params.pacemaker.g[i] * ws.s[i] + ws.c[i] * ws.as[i] -
                 ws.s[i] * ws.ac[i];
}

} // namespace

ModelParams::ModelParams(CouplingGraph graph_, PacemakerCoupling pacemaker_, double w0_, Vec w_,
                         double phi0_init_)
    : graph(std::move(graph_)),
      pacemaker(std::move(pacemaker_)),
      w0(w0_),
      w(std::move(w_)),
      phi0_init(phi0_init_) {
    if (pacemaker.g.size() != graph.n)
        throw std::invalid_argument("pacemaker strength vector does not match oscillator count");
    if (w.size() != graph.n)
        throw std::invalid_argument("natural frequency vector does not match oscillator count");
    if (!std::isfinite(w0)) throw std::invalid_argument("w0 must be finite");
    omega.resize(graph.n);
    for (std::size_t i = 0; i < graph.n; ++i) {
        if (!std::isfinite(w[i])) throw std::invalid_argument("natural frequencies must be finite");
        omega[i] = w[i] - w0;
    }
}

Vec relative_phase_rhs(const Vec& xi, const ModelParams& params) {
    if (xi.size() != params.size())
        throw std::invalid_argument("relative_phase_rhs: xi does not match oscillator count");
    RhsWorkspace ws(params.size());
    Vec out(params.size());
    rhs_into(xi, params, ws, out);
    return out;
}

Vec relative_phase_rhs_incidence(const Vec& xi, const ModelParams& params,
                                 const IncidenceRepresentation& inc) {
    if (xi.size() != params.size() || inc.n != params.size())
        throw std::invalid_argument("relative_phase_rhs_incidence: dimension mismatch");
    Vec edge_diff = matvec_transposed(inc.b, xi);
    for (double& v : edge_diff) v = std::sin(v);
    for (std::size_t k = 0; k < inc.m; ++k) edge_diff[k] *= inc.w[k];
    Vec out = matvec(inc.b, edge_diff);
    for (std::size_t i = 0; i < params.size(); ++i)
        out[i] = params.omega[i] - params.pacemaker.g[i] * std::sin(xi[i]) - out[i];
    return out;
}

std::pair<double, Vec> full_phase_rhs(double phi0, const Vec& phi, const ModelParams& params) {
    const std::size_t n = params.size();
    if (phi.size() != n)
        throw std::invalid_argument("full_phase_rhs: phi does not match oscillator count");
    Vec s(n), c(n);
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = std::sin(phi[i]);
        c[i] = std::cos(phi[i]);
    }
    const double s0 = std::sin(phi0);
    const double c0 = std::cos(phi0);
    const Mat& a = params.graph.a;
    Vec out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc_s = 0.0;
        double acc_c = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            acc_s += a(i, j) * s[j];
            acc_c += a(i, j) * c[j];
        }
        out[i] = params.w[i] + c[i] * acc_s - s[i] * acc_c +
                 params.pacemaker.g[i] * (s0 * c[i] - c0 * s[i]);
    }
    return {params.w0, std::move(out)};
}

double wrap_phase(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("wrap_phase: input must be finite");
    const double two_pi = 2.0 * M_PI;
    double y = x - two_pi * std::floor((x + M_PI) / two_pi);
    // floor rounding can land exactly on pi; fold it back to -pi.
    if (y >= M_PI) y -= two_pi;
    return y;
}

Trajectory integrate(const ModelParams& params, const Vec& xi0, const IntegratorConfig& cfg,
                     const StopPredicate& stop) {
    cfg.validate();
    const std::size_t n = params.size();
    if (xi0.size() != n) throw std::invalid_argument("integrate: xi0 does not match oscillator count");
    for (double v : xi0)
        if (!std::isfinite(v)) throw std::invalid_argument("integrate: xi0 must be finite");

    const auto n_steps = static_cast<std::size_t>(std::max<long long>(1, std::llround(cfg.t_max / cfg.dt)));
    const double dt = cfg.dt;

    Trajectory traj;
    const std::size_t expected = n_steps / cfg.record_every + 2;
    traj.times.reserve(expected);
    traj.xi_samples.reserve(expected);
    traj.zeta_samples.reserve(expected);
    traj.r_samples.reserve(expected);

    Vec xi = xi0;
    RhsWorkspace ws(n);
    Vec k1(n), k2(n), k3(n), k4(n), stage(n), phi(n);

    for (std::size_t step = 0;; ++step) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(xi[i])) throw IntegrationError(step, "non-finite state");
            if (std::abs(xi[i]) > kStateAbortThreshold)
                throw IntegrationError(step, "state magnitude exceeded 1e6");
        }
        rhs_into(xi, params, ws, k1);

        const bool at_sample = (step % cfg.record_every == 0) || step == n_steps;
        if (at_sample) {
            const double t = static_cast<double>(step) * dt;
            const double phi0 = params.phi0_init + params.w0 * t;
            for (std::size_t i = 0; i < n; ++i) phi[i] = phi0 + xi[i];
            const double r = order_parameter(phi0, phi);
            traj.times.push_back(t);
            traj.xi_samples.push_back(xi);
            traj.zeta_samples.push_back(k1);
            traj.r_samples.push_back(r);
            if (stop && stop(t, xi, k1, r)) break;
        }
        if (step == n_steps) break;

        for (std::size_t i = 0; i < n; ++i) stage[i] = xi[i] + 0.5 * dt * k1[i];
        rhs_into(stage, params, ws, k2);
        for (std::size_t i = 0; i < n; ++i) stage[i] = xi[i] + 0.5 * dt * k2[i];
        rhs_into(stage, params, ws, k3);
        for (std::size_t i = 0; i < n; ++i) stage[i] = xi[i] + dt * k3[i];
        rhs_into(stage, params, ws, k4);
        for (std::size_t i = 0; i < n; ++i)
            xi[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return traj;
}

} // namespace pacesync
