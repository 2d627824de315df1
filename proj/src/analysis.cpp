#include "pacesync/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pacesync {

namespace {

constexpr double kFitNormFloor = 1e-12;
constexpr double kSymmetryTolerance = 1e-9;

Mat laplacian_of(const ModelParams& params) {
    return laplacian(build_incidence(params.graph));
}

double max_row_sum(const CouplingGraph& graph) {
    double best = 0.0;
    for (std::size_t i = 0; i < graph.n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < graph.n; ++j) row += graph.a(i, j);
        best = std::max(best, row);
    }
    return best;
}

void require_identical_frequencies(const ModelParams& params, const char* who) {
    if (!params.identical_frequencies())
        throw std::invalid_argument(std::string(who) + " requires identical natural frequencies");
}

ConditionVerdict hypothesis_verdict(const ModelParams& params, std::string condition) {
    const bool connected = is_connected(params.graph);
    const double max_g = params.pacemaker.max();
    if (!connected)
        return {std::move(condition), false, -std::numeric_limits<double>::infinity(),
                "connectivity"};
    return {std::move(condition), max_g > 0.0, max_g, "pacemaker"};
}

} // namespace

double sinc(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("sinc: input must be finite");
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

SincConstants solve_epsilon0() {
    const auto residual = [](double eps) {
        return 2.0 * eps * std::cos(2.0 * eps) - std::sin(2.0 * eps);
    };
    // residual is increasing on (pi/2, pi): -pi at the left end, +2*pi at
    // the right, with the single root in between.
    double lo = M_PI / 2.0 + 1e-9;
    double hi = M_PI - 1e-9;
    double f_lo = residual(lo);
    if (!(f_lo < 0.0) || !(residual(hi) > 0.0))
        throw std::logic_error("epsilon0 bracket lost its sign change");
    double mid = lo;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double f_mid = residual(mid);
        if (std::abs(f_mid) < 1e-12 || hi - lo < 1e-15) break;
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return {mid, sinc(2.0 * mid)};
}

const SincConstants& sinc_constants() {
    static const SincConstants constants = solve_epsilon0();
    return constants;
}

std::pair<double, double> sigma_pair_sync(double epsilon) {
    if (!(epsilon >= 0.0 && epsilon < M_PI / 2.0))
        throw std::invalid_argument("sigma_pair_sync: epsilon must lie in [0, pi/2)");
    return {sinc(epsilon), sinc(2.0 * epsilon)};
}

std::pair<double, double> symmetric_eigen_extremes(const Mat& mat) {
    if (mat.rows() == 0 || mat.rows() != mat.cols())
        throw std::invalid_argument("symmetric_eigen_extremes: matrix must be square");
    const std::size_t n = mat.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(mat(i, j) - mat(j, i)) > kSymmetryTolerance)
                throw std::invalid_argument("symmetric_eigen_extremes: matrix is not symmetric");

    Mat a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (mat(i, j) + mat(j, i));

    const double norm = frobenius_norm(a);
    if (norm == 0.0) return {0.0, 0.0};
    const double target = 1e-12 * norm;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += 2.0 * a(i, j) * a(i, j);
        if (std::sqrt(off) < target) break;

        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = a(p, k) = c * akp - s * akq;
                    a(k, q) = a(q, k) = s * akp + c * akq;
                }
            }
    }

    double lo = a(0, 0);
    double hi = a(0, 0);
    for (std::size_t i = 1; i < n; ++i) {
        lo = std::min(lo, a(i, i));
        hi = std::max(hi, a(i, i));
    }
    return {lo, hi};
}

const char* to_string(RateKind kind) {
    switch (kind) {
        case RateKind::alpha1: return "alpha1";
        case RateKind::alpha2: return "alpha2";
        case RateKind::alpha3: return "alpha3";
        case RateKind::alpha4: return "alpha4";
    }
    return "?";
}

RateBound alpha1(const ModelParams& params, double epsilon) {
    if (!(epsilon >= 0.0 && epsilon < M_PI / 2.0))
        throw std::invalid_argument("alpha1: epsilon must lie in [0, pi/2)");
    require_identical_frequencies(params, "alpha1");
    const auto [sigma1, sigma2] = sigma_pair_sync(epsilon);
    Mat m = laplacian_of(params);
    for (std::size_t i = 0; i < params.size(); ++i)
        for (std::size_t j = 0; j < params.size(); ++j) m(i, j) *= sigma2;
    for (std::size_t i = 0; i < params.size(); ++i) m(i, i) += sigma1 * params.pacemaker.g[i];
    const double value = symmetric_eigen_extremes(m).first;
    const bool valid = is_connected(params.graph) && params.pacemaker.max() > 0.0;
    return {RateKind::alpha1, value, epsilon, valid};
}

RateBound alpha2(const ModelParams& params, double epsilon) {
    if (!(epsilon >= M_PI / 2.0 && epsilon < M_PI))
        throw std::invalid_argument("alpha2: epsilon must lie in [pi/2, pi)");
    require_identical_frequencies(params, "alpha2");
    const double lambda_max = symmetric_eigen_extremes(laplacian_of(params)).second;
    const double value =
        params.pacemaker.min() * sinc(epsilon) + sinc_constants().sinc_2eps0 * lambda_max;
    const bool valid = check_sync_condition(params, epsilon).holds;
    return {RateKind::alpha2, value, epsilon, valid};
}

RateBound alpha3(const ModelParams& params, double epsilon) {
    if (!(epsilon >= 0.0 && epsilon < M_PI / 4.0))
        throw std::invalid_argument("alpha3: epsilon must lie in [0, pi/4)");
    const double sigma3 = std::cos(epsilon);
    const double sigma4 = std::cos(2.0 * epsilon);
    Mat m = laplacian_of(params);
    for (std::size_t i = 0; i < params.size(); ++i)
        for (std::size_t j = 0; j < params.size(); ++j) m(i, j) *= sigma4;
    for (std::size_t i = 0; i < params.size(); ++i) m(i, i) += sigma3 * params.pacemaker.g[i];
    const double value = symmetric_eigen_extremes(m).first;
    const bool valid = is_connected(params.graph) && params.pacemaker.max() > 0.0;
    return {RateKind::alpha3, value, epsilon, valid};
}

RateBound alpha4(const ModelParams& params, double epsilon) {
    if (!(epsilon >= M_PI / 4.0 && epsilon < M_PI / 2.0))
        throw std::invalid_argument("alpha4: epsilon must lie in [pi/4, pi/2)");
    const double lambda_max = symmetric_eigen_extremes(laplacian_of(params)).second;
    const double value =
        params.pacemaker.min() * std::cos(epsilon) + std::cos(2.0 * epsilon) * lambda_max;
    const bool valid = check_locking_condition(params, epsilon).holds;
    return {RateKind::alpha4, value, epsilon, valid};
}

ConditionVerdict check_sync_condition(const ModelParams& params, double epsilon) {
    require_identical_frequencies(params, "check_sync_condition");
    if (!(epsilon >= 0.0 && epsilon < M_PI))
        throw std::invalid_argument("check_sync_condition: epsilon must lie in [0, pi)");
    if (epsilon < M_PI / 2.0) return hypothesis_verdict(params, "sync");

    const double lambda_max = symmetric_eigen_extremes(laplacian_of(params)).second;
    const double term_spectrum = sinc_constants().sinc_2eps0 * lambda_max / (-sinc(epsilon));
    const double term_row_sum = max_row_sum(params.graph) / std::sin(epsilon);
    const double threshold = std::max(term_spectrum, term_row_sum);
    const double margin = params.pacemaker.min() - threshold;
    return {"sync", margin > 0.0, margin,
            term_spectrum >= term_row_sum ? "coupling_spectrum" : "coupling_row_sum"};
}

ConditionVerdict check_locking_condition(const ModelParams& params, double epsilon) {
    if (!(epsilon >= 0.0 && epsilon < M_PI / 2.0))
        throw std::invalid_argument("check_locking_condition: epsilon must lie in [0, pi/2)");
    if (epsilon < M_PI / 4.0) return hypothesis_verdict(params, "locking");

    const double cos_eps = std::cos(epsilon);
    const double cos_2eps = std::cos(2.0 * epsilon);
    const double lambda_max = symmetric_eigen_extremes(laplacian_of(params)).second;
    const double term_spectrum = -cos_2eps * lambda_max / cos_eps;
    const double term_row_sum = -cos_2eps * max_row_sum(params.graph) / cos_eps;
    const double threshold = std::max(term_spectrum, term_row_sum);
    const double margin = params.pacemaker.min() - threshold;
    return {"locking", margin > 0.0, margin,
            term_spectrum >= term_row_sum ? "coupling_spectrum" : "coupling_row_sum"};
}

ConditionVerdict check_trapping_condition(const ModelParams& params, double epsilon,
                                          double delta) {
    if (!(delta > 0.0 && delta < M_PI))
        throw std::invalid_argument("check_trapping_condition: delta must lie in (0, pi)");
    if (!(epsilon >= 0.0 && epsilon < M_PI))
        throw std::invalid_argument("check_trapping_condition: epsilon must lie in [0, pi)");
    const double omega_norm = norm2(params.omega);
    double threshold = omega_norm / (delta * sinc(epsilon));
    std::string binding = "frequency_spread";
    if (epsilon >= M_PI / 2.0) {
        const double lambda_max = symmetric_eigen_extremes(laplacian_of(params)).second;
        threshold -= sinc_constants().sinc_2eps0 * lambda_max / sinc(epsilon);
        binding = "frequency_spread_plus_coupling";
    }
    const double margin = params.pacemaker.min() - threshold;
    return {"trapping", margin > 0.0, margin, std::move(binding)};
}

double order_parameter(double phi0, const Vec& phi) {
    double sum_c = std::cos(phi0);
    double sum_s = std::sin(phi0);
    for (double p : phi) {
        sum_c += std::cos(p);
        sum_s += std::sin(p);
    }
    return std::hypot(sum_c, sum_s) / static_cast<double>(phi.size() + 1);
}

std::pair<double, double> lyapunov_diagnostics(const Vec& xi, const ModelParams& params) {
    const Vec rhs = relative_phase_rhs(xi, params);
    return {0.5 * dot(xi, xi), dot(xi, rhs)};
}

SMatrices s_matrices(const Vec& xi, const IncidenceRepresentation& inc) {
    if (xi.size() != inc.n) throw std::invalid_argument("s_matrices: xi does not match node count");
    SMatrices out;
    out.s1.resize(inc.n);
    out.s3.resize(inc.n);
    for (std::size_t i = 0; i < inc.n; ++i) {
        out.s1[i] = sinc(xi[i]);
        out.s3[i] = std::cos(xi[i]);
    }
    const Vec diff = matvec_transposed(inc.b, xi);
    out.s2.resize(inc.m);
    out.s4.resize(inc.m);
    for (std::size_t k = 0; k < inc.m; ++k) {
        out.s2[k] = sinc(diff[k]);
        out.s4[k] = std::cos(diff[k]);
    }
    return out;
}

DecayFit fit_decay_rate(const Trajectory& traj, double t_start, double t_end) {
    Vec ts;
    Vec ys;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double t = traj.times[k];
        if (t < t_start || t > t_end) continue;
        const double norm = norm2(traj.xi_samples[k]);
        if (norm <= kFitNormFloor) break;
        ts.push_back(t);
        ys.push_back(std::log(norm));
    }
    if (ts.size() < 3)
        throw std::invalid_argument("fit_decay_rate: fewer than 3 usable samples in window");

    double t_mean = 0.0;
    double y_mean = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        t_mean += ts[k];
        y_mean += ys[k];
    }
    t_mean /= static_cast<double>(ts.size());
    y_mean /= static_cast<double>(ts.size());
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        num += (ts[k] - t_mean) * (ys[k] - y_mean);
        den += (ts[k] - t_mean) * (ts[k] - t_mean);
    }
    const double slope = num / den;
    return {-slope, y_mean - slope * t_mean};
}

} // namespace pacesync
