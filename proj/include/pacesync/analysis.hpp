#ifndef PACESYNC_ANALYSIS_HPP
#define PACESYNC_ANALYSIS_HPP

#include <string>
#include <utility>

#include "pacesync/dynamics.hpp"
#include "pacesync/linalg.hpp"
#include "pacesync/network.hpp"

namespace pacesync {

/// sin(x)/x, continuously extended to 1 at x = 0 (series below 1e-4).
double sinc(double x);

/// epsilon0 is the unique root of 2e*cos(2e) = sin(2e) in (pi/2, pi);
/// 2*epsilon0 is where sinc attains its minimum on [0, 2*pi], and
/// sinc(2*epsilon0) = cos(2*epsilon0) < 0.
struct SincConstants {
    double epsilon0;
    double sinc_2eps0;
};

/// Bisection solve for the constants above, residual below 1e-12.
SincConstants solve_epsilon0();

/// Cached copy; computed once per process.
const SincConstants& sinc_constants();

/// (sigma1, sigma2) = (sinc(eps), sinc(2 eps)) for 0 <= eps < pi/2;
/// both strictly positive in that regime.
std::pair<double, double> sigma_pair_sync(double epsilon);

/// Extreme eigenvalues (min, max) of a symmetric matrix via cyclic Jacobi
/// rotations; iterates until the off-diagonal norm falls below
/// 1e-12 * ||mat||_F. Throws if the input is asymmetric beyond 1e-9.
std::pair<double, double> symmetric_eigen_extremes(const Mat& mat);

enum class RateKind { alpha1, alpha2, alpha3, alpha4 };

const char* to_string(RateKind kind);

/// One exponential-rate lower bound together with the epsilon it was
/// evaluated at and whether the gating hypotheses hold.
struct RateBound {
    RateKind kind;
    double value = 0.0;
    double epsilon = 0.0;
    bool valid = false;
};

/// Sync-rate bound for eps in [0, pi/2): lambda_min(sigma1 G + sigma2 L).
/// Requires identical natural frequencies.
RateBound alpha1(const ModelParams& params, double epsilon);

/// Sync-rate bound for eps in [pi/2, pi):
/// g_min sinc(eps) + sinc(2 eps0) lambda_max(L). Identical frequencies.
RateBound alpha2(const ModelParams& params, double epsilon);

/// Locking-rate bound for eps in [0, pi/4):
/// lambda_min(cos(eps) G + cos(2 eps) L).
RateBound alpha3(const ModelParams& params, double epsilon);

/// Locking-rate bound for eps in [pi/4, pi/2):
/// g_min cos(eps) + cos(2 eps) lambda_max(L).
RateBound alpha4(const ModelParams& params, double epsilon);

/// Outcome of a sufficient-condition check. margin is the slack in the
/// binding inequality (negative when violated), so holds <=> margin > 0.
struct ConditionVerdict {
    std::string condition;
    bool holds = false;
    double margin = 0.0;
    std::string binding_term;
};

/// Sufficient synchronization condition (identical frequencies).
/// For eps < pi/2 it is connectivity plus one positive pacemaker gain;
/// for pi/2 <= eps < pi it is a g_min threshold built from the coupling
/// spectrum and the worst row sum.
ConditionVerdict check_sync_condition(const ModelParams& params, double epsilon);

/// Sufficient phase-locking condition, eps in [0, pi/2).
ConditionVerdict check_locking_condition(const ModelParams& params, double epsilon);

/// Sufficient condition for trapping all relative phases in
/// [-delta, delta]: a g_min threshold driven by ||Omega||.
ConditionVerdict check_trapping_condition(const ModelParams& params, double epsilon, double delta);

/// Modulus of the mean unit phasor over the pacemaker plus all n nodes,
/// normalized so r is in [0, 1] with r = 1 exactly at perfect synchrony.
double order_parameter(double phi0, const Vec& phi);

/// (V, Vdot) with V = 0.5 xi^T xi and Vdot = xi^T xi'.
std::pair<double, double> lyapunov_diagnostics(const Vec& xi, const ModelParams& params);

/// Diagonals of the four comparison matrices: sinc over nodes, sinc over
/// edge differences, cos over nodes, cos over edge differences.
struct SMatrices {
    Vec s1, s2, s3, s4;
};

SMatrices s_matrices(const Vec& xi, const IncidenceRepresentation& inc);

struct DecayFit {
    double alpha_hat = 0.0;
    double intercept = 0.0;
};

/// Least-squares line through (t, ln||xi(t)||) on [t_start, t_end]. The
/// fit stops at the first sample with ||xi|| <= 1e-12 and needs at least
/// three usable samples. alpha_hat is the negated slope.
DecayFit fit_decay_rate(const Trajectory& traj, double t_start, double t_end);

} // namespace pacesync

#endif
