#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "pacesync/analysis.hpp"

using namespace pacesync;

namespace {

ModelParams make_identical(Mat a, Vec g) {
    CouplingGraph graph = CouplingGraph::from_matrix(std::move(a));
    const std::size_t n = graph.n;
    return ModelParams(std::move(graph), PacemakerCoupling::from_vector(std::move(g)), 1.0,
                       Vec(n, 1.0));
}

ModelParams make_nonidentical(Mat a, Vec g, Vec w, double w0 = 1.0) {
    CouplingGraph graph = CouplingGraph::from_matrix(std::move(a));
    return ModelParams(std::move(graph), PacemakerCoupling::from_vector(std::move(g)), w0,
                       std::move(w));
}

Mat pair_coupling(double kappa) {
    Mat a(2, 2);
    a(0, 1) = a(1, 0) = kappa;
    return a;
}

} // namespace

TEST_CASE("sinc fixed points") {
    CHECK(sinc(0.0) == 1.0);
    CHECK(sinc(M_PI / 2.0) == doctest::Approx(2.0 / M_PI).epsilon(1e-14));
    CHECK(sinc(M_PI) == doctest::Approx(0.0).scale(1));
    CHECK(sinc(-M_PI / 2.0) == sinc(M_PI / 2.0));
    // series branch joins the direct branch smoothly
    CHECK(sinc(9.9e-5) == doctest::Approx(std::sin(9.9e-5) / 9.9e-5).epsilon(1e-15));
    CHECK(std::abs(sinc(1.0001e-4) - sinc(0.9999e-4)) < 1e-12);
}

TEST_CASE("sinc minimum constants") {
    // sign-evaluation oracle on the residual 2e*cos(2e) - sin(2e)
    const auto residual = [](double e) { return 2.0 * e * std::cos(2.0 * e) - std::sin(2.0 * e); };
    CHECK(residual(M_PI / 2.0 + 1e-6) < 0.0);
    CHECK(residual(M_PI - 1e-6) > 0.0);

    const SincConstants c = solve_epsilon0();
    CHECK(c.epsilon0 > M_PI / 2.0);
    CHECK(c.epsilon0 < M_PI);
    CHECK(std::abs(residual(c.epsilon0)) < 1e-10);
    CHECK(std::abs(c.epsilon0 - 2.2467045) < 1e-6);
    CHECK(std::abs(c.sinc_2eps0 - (-0.2172336)) < 1e-6);
    // at the root, sinc(2 e0) equals cos(2 e0)
    CHECK(std::abs(c.sinc_2eps0 - std::cos(2.0 * c.epsilon0)) < 1e-12);
    CHECK(c.sinc_2eps0 < 0.0);

    // grid-minimization oracle: global minimum of sinc on [0, 2*pi]
    for (int k = 0; k <= 1000; ++k) {
        const double x = 2.0 * M_PI * static_cast<double>(k) / 1000.0;
        CHECK(c.sinc_2eps0 < sinc(x) + 1e-12);
    }

    const SincConstants& cached = sinc_constants();
    CHECK(cached.epsilon0 == c.epsilon0);
}

TEST_CASE("sync sigma pair") {
    const auto [s1_zero, s2_zero] = sigma_pair_sync(0.0);
    CHECK(s1_zero == 1.0);
    CHECK(s2_zero == 1.0);

    const auto [s1, s2] = sigma_pair_sync(M_PI / 4.0);
    CHECK(s1 == doctest::Approx(0.9003163161571062).epsilon(1e-12));
    CHECK(s2 == doctest::Approx(2.0 / M_PI).epsilon(1e-12));

    const auto [s1_edge, s2_edge] = sigma_pair_sync(M_PI / 2.0 - 1e-7);
    CHECK(s1_edge > 0.0);
    CHECK(s2_edge > 0.0);
    CHECK(s2_edge < 1e-6);

    CHECK_THROWS_AS(sigma_pair_sync(M_PI / 2.0), std::invalid_argument);
    CHECK_THROWS_AS(sigma_pair_sync(-0.1), std::invalid_argument);
}

TEST_CASE("eigen extremes on closed-form cases") {
    CHECK(symmetric_eigen_extremes(Mat::identity(3)) == std::pair{1.0, 1.0});

    const double kappa = 1.7;
    Mat m(2, 2);
    m(0, 0) = m(1, 1) = kappa;
    m(0, 1) = m(1, 0) = -kappa;
    const auto [lo, hi] = symmetric_eigen_extremes(m);
    CHECK(lo == doctest::Approx(0.0).scale(1));
    CHECK(hi == doctest::Approx(2.0 * kappa));

    Mat bad(2, 2);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(symmetric_eigen_extremes(bad), std::invalid_argument);
}

TEST_CASE("eigen extremes match characteristic-polynomial roots") {
    SplitMix64 rng(59);
    for (int trial = 0; trial < 100; ++trial) {
        Mat m2(2, 2);
        m2(0, 0) = rng.uniform(-5.0, 5.0);
        m2(1, 1) = rng.uniform(-5.0, 5.0);
        m2(0, 1) = m2(1, 0) = rng.uniform(-5.0, 5.0);
        const auto [lo2, hi2] = symmetric_eigen_extremes(m2);
        const auto [ref_lo2, ref_hi2] = oracles::eigen2x2(m2(0, 0), m2(0, 1), m2(1, 1));
        CHECK(std::abs(lo2 - ref_lo2) < 1e-8);
        CHECK(std::abs(hi2 - ref_hi2) < 1e-8);

        Mat m3(3, 3);
        for (std::size_t i = 0; i < 3; ++i) {
            m3(i, i) = rng.uniform(-5.0, 5.0);
            for (std::size_t j = i + 1; j < 3; ++j) m3(i, j) = m3(j, i) = rng.uniform(-5.0, 5.0);
        }
        const auto [lo3, hi3] = symmetric_eigen_extremes(m3);
        const auto roots = oracles::eigen3x3(m3);
        CHECK(std::abs(lo3 - roots[0]) < 1e-8);
        CHECK(std::abs(hi3 - roots[2]) < 1e-8);
    }
}

TEST_CASE("eigen extremes bound the Rayleigh quotient") {
    SplitMix64 rng(61);
    Mat m(4, 4);
    for (std::size_t i = 0; i < 4; ++i) {
        m(i, i) = rng.uniform(-2.0, 2.0);
        for (std::size_t j = i + 1; j < 4; ++j) m(i, j) = m(j, i) = rng.uniform(-2.0, 2.0);
    }
    const auto [lo, hi] = symmetric_eigen_extremes(m);
    for (int trial = 0; trial < 100; ++trial) {
        const Vec x = oracles::random_vec(4, rng, -1.0, 1.0);
        const double xx = dot(x, x);
        if (xx < 1e-12) continue;
        const double rq = dot(x, matvec(m, x)) / xx;
        CHECK(rq >= lo - 1e-9);
        CHECK(rq <= hi + 1e-9);
    }
}

TEST_CASE("alpha1 on the pinned pair") {
    const ModelParams params = make_identical(pair_coupling(1.0), {1.0, 0.0});
    const RateBound rb = alpha1(params, M_PI / 4.0);
    const auto [s1, s2] = sigma_pair_sync(M_PI / 4.0);
    const auto [ref_lo, ref_hi] = oracles::eigen2x2(s1 + s2, -s2, s2);
    CHECK(rb.value == doctest::Approx(ref_lo).epsilon(1e-10));
    CHECK(rb.value == doctest::Approx(0.3070807).epsilon(1e-6));
    CHECK(rb.valid);
    CHECK(rb.epsilon == M_PI / 4.0);
}

TEST_CASE("alpha1 degenerate cases") {
    // no pacemaker: the all-ones direction is in the kernel
    const ModelParams no_pin = make_identical(pair_coupling(1.0), {0.0, 0.0});
    CHECK(alpha1(no_pin, 0.3).value == doctest::Approx(0.0).scale(1));
    CHECK_FALSE(alpha1(no_pin, 0.3).valid);

    // eps = 0, G = I, no coupling
    const ModelParams pinned_only = make_identical(Mat(3, 3), Vec(3, 1.0));
    CHECK(alpha1(pinned_only, 0.0).value == doctest::Approx(1.0));
    CHECK_FALSE(alpha1(pinned_only, 0.0).valid); // disconnected

    CHECK_THROWS_AS(alpha1(no_pin, M_PI / 2.0), std::invalid_argument);
    const ModelParams drift =
        make_nonidentical(pair_coupling(1.0), {1.0, 0.0}, {1.2, 0.9});
    CHECK_THROWS_AS(alpha1(drift, 0.3), std::invalid_argument);
}

TEST_CASE("alpha2 value and affinity in g_min") {
    const double eps = 0.6 * M_PI;
    const ModelParams params = make_identical(pair_coupling(1.0), {5.0, 5.0});
    const double sinc_eps = std::sin(eps) / eps;
    const double expected = 5.0 * sinc_eps + sinc_constants().sinc_2eps0 * 2.0;
    const RateBound rb = alpha2(params, eps);
    CHECK(rb.value == doctest::Approx(expected).epsilon(1e-12));
    CHECK(rb.value == doctest::Approx(2.0882885).epsilon(1e-6));
    CHECK(rb.valid);

    const ModelParams bumped = make_identical(pair_coupling(1.0), {6.0, 6.0});
    CHECK(alpha2(bumped, eps).value - rb.value == doctest::Approx(sinc_eps).epsilon(1e-12));

    // no local coupling: only the pacemaker term survives
    const ModelParams uncoupled = make_identical(Mat(2, 2), {0.75, 0.9});
    CHECK(alpha2(uncoupled, eps).value == doctest::Approx(0.75 * sinc_eps).epsilon(1e-12));

    CHECK_THROWS_AS(alpha2(params, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(alpha2(params, M_PI), std::invalid_argument);
}

TEST_CASE("alpha3 on the pinned pair") {
    const ModelParams params = make_identical(pair_coupling(1.0), {1.0, 0.0});
    const double s3 = std::cos(M_PI / 6.0);
    const double s4 = std::cos(M_PI / 3.0);
    const auto [ref_lo, ref_hi] = oracles::eigen2x2(s3 + s4, -s4, s4);
    const RateBound rb = alpha3(params, M_PI / 6.0);
    CHECK(rb.value == doctest::Approx(ref_lo).epsilon(1e-10));
    CHECK(rb.value == doctest::Approx(0.2715749).epsilon(1e-6));
    CHECK(rb.valid);

    // eps = 0 reduces to lambda_min(G + L)
    SplitMix64 rng(67);
    Mat a = oracles::random_coupling(3, rng, 1.0, 0.1, 1.0);
    Mat gl = oracles::laplacian_by_description(a);
    Vec g{0.4, 0.0, 1.1};
    for (std::size_t i = 0; i < 3; ++i) gl(i, i) += g[i];
    const ModelParams params3 = make_identical(std::move(a), std::move(g));
    CHECK(alpha3(params3, 0.0).value ==
          doctest::Approx(oracles::eigen3x3(gl)[0]).epsilon(1e-8));

    const ModelParams no_pin = make_identical(pair_coupling(1.0), {0.0, 0.0});
    CHECK(alpha3(no_pin, 0.1).value == doctest::Approx(0.0).scale(1));
    CHECK_THROWS_AS(alpha3(params, M_PI / 4.0), std::invalid_argument);
}

TEST_CASE("alpha4 value and edge cases") {
    // at eps = pi/4 the coupling term is killed by cos(pi/2) = 0
    const ModelParams params = make_identical(pair_coupling(1.0), {2.0, 3.0});
    CHECK(alpha4(params, M_PI / 4.0).value ==
          doctest::Approx(2.0 * std::sqrt(0.5)).epsilon(1e-12));

    const double eps = 0.4 * M_PI;
    const ModelParams strong = make_identical(pair_coupling(1.0), {5.0, 5.0});
    const double expected = 5.0 * std::cos(eps) + std::cos(2.0 * eps) * 2.0;
    const RateBound rb = alpha4(strong, eps);
    CHECK(rb.value == doctest::Approx(expected).epsilon(1e-12));
    CHECK(rb.value == doctest::Approx(-0.0729490).epsilon(1e-5));
    CHECK_FALSE(rb.valid);

    const ModelParams uncoupled = make_identical(Mat(2, 2), {0.8, 1.4});
    CHECK(alpha4(uncoupled, eps).value == doctest::Approx(0.8 * std::cos(eps)).epsilon(1e-12));

    // affine in g_min with slope cos(eps)
    const ModelParams bumped = make_identical(pair_coupling(1.0), {6.0, 6.0});
    CHECK(alpha4(bumped, eps).value - rb.value == doctest::Approx(std::cos(eps)).epsilon(1e-12));

    CHECK_THROWS_AS(alpha4(params, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(alpha4(params, M_PI / 2.0), std::invalid_argument);
}

TEST_CASE("sync condition, half-circle regime") {
    Mat a(3, 3);
    a(0, 1) = a(1, 0) = 1.0;
    a(1, 2) = a(2, 1) = 1.0;
    const ModelParams params = make_identical(std::move(a), {1.0, 0.0, 0.0});
    const ConditionVerdict v = check_sync_condition(params, M_PI / 4.0);
    CHECK(v.holds);
    CHECK(v.margin == doctest::Approx(1.0));
    CHECK(v.binding_term == "pacemaker");

    Mat disconnected(4, 4);
    disconnected(0, 1) = disconnected(1, 0) = 1.0;
    disconnected(2, 3) = disconnected(3, 2) = 1.0;
    const ModelParams split = make_identical(std::move(disconnected), {1.0, 0.0, 0.0, 0.0});
    const ConditionVerdict sv = check_sync_condition(split, M_PI / 4.0);
    CHECK_FALSE(sv.holds);
    CHECK(sv.binding_term == "connectivity");
    CHECK(sv.margin < 0.0);
}

TEST_CASE("sync condition, wide regime threshold") {
    const double eps = 0.6 * M_PI;
    // scalar oracle for both terms of the threshold
    const double sinc_eps = std::sin(eps) / eps;
    const double term_spectrum = sinc_constants().sinc_2eps0 * 2.0 / (-sinc_eps);
    const double term_row_sum = 1.0 / std::sin(eps);
    const double threshold = std::max(term_spectrum, term_row_sum);
    CHECK(term_spectrum == doctest::Approx(0.8611).epsilon(1e-4));
    CHECK(term_row_sum == doctest::Approx(1.0515).epsilon(1e-4));

    const ModelParams holds_params = make_identical(pair_coupling(1.0), {1.1, 1.1});
    const ConditionVerdict yes = check_sync_condition(holds_params, eps);
    CHECK(yes.holds);
    CHECK(yes.margin == doctest::Approx(1.1 - threshold).epsilon(1e-12));
    CHECK(yes.binding_term == "coupling_row_sum");

    const ModelParams fails_params = make_identical(pair_coupling(1.0), {1.0, 1.0});
    CHECK_FALSE(check_sync_condition(fails_params, eps).holds);

    CHECK_THROWS_AS(check_sync_condition(holds_params, M_PI), std::invalid_argument);
    const ModelParams drift = make_nonidentical(pair_coupling(1.0), {1.0, 1.0}, {1.5, 0.5});
    CHECK_THROWS_AS(check_sync_condition(drift, 0.3), std::invalid_argument);
}

TEST_CASE("locking condition") {
    // at eps = pi/4 both threshold terms vanish
    const ModelParams params = make_identical(pair_coupling(1.0), {0.3, 0.5});
    const ConditionVerdict at_quarter = check_locking_condition(params, M_PI / 4.0);
    CHECK(at_quarter.holds);
    CHECK(at_quarter.margin == doctest::Approx(0.3).epsilon(1e-12));

    const double eps = 0.4 * M_PI;
    const double factor = -std::cos(2.0 * eps) / std::cos(eps);
    const double threshold = std::max(factor * 2.0, factor * 1.0);
    CHECK(threshold == doctest::Approx(5.2361).epsilon(1e-4));
    const ModelParams strong = make_identical(pair_coupling(1.0), {6.0, 6.0});
    const ConditionVerdict yes = check_locking_condition(strong, eps);
    CHECK(yes.holds);
    CHECK(yes.margin == doctest::Approx(6.0 - threshold).epsilon(1e-12));
    CHECK(yes.binding_term == "coupling_spectrum");

    const ModelParams no_pin = make_identical(pair_coupling(1.0), {0.0, 0.0});
    CHECK_FALSE(check_locking_condition(no_pin, M_PI / 6.0).holds);
    CHECK_THROWS_AS(check_locking_condition(params, M_PI / 2.0), std::invalid_argument);
}

TEST_CASE("trapping condition thresholds") {
    // zero frequency spread: any positive g_min traps
    const ModelParams identical = make_identical(pair_coupling(1.0), {0.2, 0.4});
    const ConditionVerdict trivially = check_trapping_condition(identical, 0.3, 0.1);
    CHECK(trivially.holds);
    CHECK(trivially.margin == doctest::Approx(0.2).epsilon(1e-12));

    // ||Omega|| = 0.5
    const ModelParams drift =
        make_nonidentical(pair_coupling(1.0), {5.0, 6.0}, {1.3, 1.4});
    const ConditionVerdict narrow = check_trapping_condition(drift, M_PI / 4.0, 0.1);
    const double sinc_quarter = std::sin(M_PI / 4.0) / (M_PI / 4.0);
    CHECK(5.0 - narrow.margin == doctest::Approx(0.5 / (0.1 * sinc_quarter)).epsilon(1e-12));
    CHECK(5.0 - narrow.margin == doctest::Approx(5.5536).epsilon(1e-4));
    CHECK(narrow.binding_term == "frequency_spread");

    const double eps = 0.6 * M_PI;
    const double sinc_eps = std::sin(eps) / eps;
    const double expected =
        0.5 / (0.1 * sinc_eps) - sinc_constants().sinc_2eps0 * 2.0 / sinc_eps;
    const ConditionVerdict wide = check_trapping_condition(drift, eps, 0.1);
    CHECK(5.0 - wide.margin == doctest::Approx(expected).epsilon(1e-12));
    CHECK(5.0 - wide.margin == doctest::Approx(10.7709).epsilon(1e-4));
    CHECK(wide.binding_term == "frequency_spread_plus_coupling");

    CHECK_THROWS_AS(check_trapping_condition(drift, 0.3, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(check_trapping_condition(drift, 0.3, M_PI), std::invalid_argument);
    CHECK_THROWS_AS(check_trapping_condition(drift, M_PI, 0.1), std::invalid_argument);
}

TEST_CASE("order parameter") {
    CHECK(order_parameter(0.7, {0.7, 0.7, 0.7}) == doctest::Approx(1.0));
    CHECK(order_parameter(0.0, {2.0 * M_PI / 3.0, 4.0 * M_PI / 3.0}) ==
          doctest::Approx(0.0).scale(1));
    CHECK(order_parameter(0.0, {M_PI}) == doctest::Approx(0.0).scale(1));

    SplitMix64 rng(71);
    for (int trial = 0; trial < 50; ++trial) {
        const Vec phi = oracles::random_vec(6, rng, -M_PI, M_PI);
        const double phi0 = rng.uniform(-M_PI, M_PI);
        const double shift = rng.uniform(-10.0, 10.0);
        Vec shifted = phi;
        for (double& p : shifted) p += shift;
        const double r = order_parameter(phi0, phi);
        CHECK(r >= 0.0);
        CHECK(r <= 1.0 + 1e-12);
        CHECK(order_parameter(phi0 + shift, shifted) == doctest::Approx(r).epsilon(1e-12));
    }
}

TEST_CASE("lyapunov diagnostics") {
    SplitMix64 rng(73);
    const std::size_t n = 5;
    Mat a = oracles::random_coupling(n, rng, 1.0, 0.01, 0.1);
    Vec g(n, 0.0);
    g[0] = 1.0;
    const ModelParams params = make_identical(std::move(a), std::move(g));

    const auto [v_zero, vdot_zero] = lyapunov_diagnostics(Vec(n, 0.0), params);
    CHECK(v_zero == 0.0);
    CHECK(vdot_zero == 0.0);

    for (int trial = 0; trial < 100; ++trial) {
        const Vec xi = oracles::random_vec(n, rng, -M_PI / 2.0 + 1e-3, M_PI / 2.0 - 1e-3);
        const double eps = max_abs(xi);
        if (eps < 1e-6) continue;
        const auto [v, vdot] = lyapunov_diagnostics(xi, params);
        CHECK(v == doctest::Approx(0.5 * dot(xi, xi)).epsilon(1e-14));
        CHECK(vdot < 0.0);
        // decay is at least twice the spectral bound
        const RateBound rb = alpha1(params, eps);
        CHECK(vdot <= -2.0 * rb.value * v + 1e-9);
    }
}

TEST_CASE("comparison-matrix diagonals") {
    SplitMix64 rng(79);
    CouplingGraph graph = CouplingGraph::from_matrix(pair_coupling(1.0));
    const IncidenceRepresentation inc = build_incidence(graph);

    const SMatrices at_zero = s_matrices(Vec(2, 0.0), inc);
    for (double v : at_zero.s1) CHECK(v == 1.0);
    for (double v : at_zero.s2) CHECK(v == 1.0);
    for (double v : at_zero.s3) CHECK(v == 1.0);
    for (double v : at_zero.s4) CHECK(v == 1.0);

    // an edge difference beyond the half circle turns S4 negative
    const SMatrices wide = s_matrices({-0.6 * M_PI, 0.6 * M_PI}, inc);
    CHECK(wide.s4[0] < 0.0);
    CHECK(wide.s4[0] == doctest::Approx(std::cos(1.2 * M_PI)).epsilon(1e-12));

    // sigma bounds inside the half circle
    const double eps = 1.2;
    for (int trial = 0; trial < 50; ++trial) {
        const Vec xi = oracles::random_vec(2, rng, -eps, eps);
        const SMatrices sm = s_matrices(xi, inc);
        for (double v : sm.s1) CHECK(v >= sinc(eps) - 1e-12);
        for (double v : sm.s2) CHECK(v >= sinc(2.0 * eps) - 1e-12);
    }
}

TEST_CASE("comparison matrices reproduce the sine terms") {
    SplitMix64 rng(83);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 3 + static_cast<std::size_t>(rng.next() % 4);
        CouplingGraph graph =
            CouplingGraph::from_matrix(oracles::random_coupling(n, rng, 0.7, 0.01, 1.0));
        const IncidenceRepresentation inc = build_incidence(graph);
        const Vec g = oracles::random_vec(n, rng, 0.0, 2.0);
        const Vec xi = oracles::random_vec(n, rng, -M_PI, M_PI);
        const SMatrices sm = s_matrices(xi, inc);

        // G*S1*xi + B*W*S2*B^T*xi  vs  G*sin(xi) + B*W*sin(B^T*xi)
        const Vec diff = matvec_transposed(inc.b, xi);
        Vec lhs_edge(inc.m), rhs_edge(inc.m);
        for (std::size_t k = 0; k < inc.m; ++k) {
            lhs_edge[k] = inc.w[k] * sm.s2[k] * diff[k];
            rhs_edge[k] = inc.w[k] * std::sin(diff[k]);
        }
        const Vec lhs_nodes = matvec(inc.b, lhs_edge);
        const Vec rhs_nodes = matvec(inc.b, rhs_edge);
        for (std::size_t i = 0; i < n; ++i) {
            const double lhs = g[i] * sm.s1[i] * xi[i] + lhs_nodes[i];
            const double rhs = g[i] * std::sin(xi[i]) + rhs_nodes[i];
            CHECK(std::abs(lhs - rhs) < 1e-12);
        }
    }
}

TEST_CASE("decay-rate fit on synthetic data") {
    Trajectory traj;
    const Vec xi0{0.3, -0.4, 0.2};
    for (int k = 0; k <= 100; ++k) {
        const double t = 0.05 * static_cast<double>(k);
        Vec xi = xi0;
        for (double& v : xi) v *= std::exp(-2.0 * t);
        traj.times.push_back(t);
        traj.xi_samples.push_back(xi);
        traj.zeta_samples.push_back(Vec(3, 0.0));
        traj.r_samples.push_back(1.0);
    }
    const DecayFit fit = fit_decay_rate(traj, 0.0, 5.0);
    CHECK(fit.alpha_hat == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(fit.intercept == doctest::Approx(std::log(norm2(xi0))).epsilon(1e-6));

    CHECK_THROWS_AS(fit_decay_rate(traj, 4.9, 4.95), std::invalid_argument);
}

TEST_CASE("decay-rate fit stops at the norm floor") {
    Trajectory traj;
    for (int k = 0; k <= 50; ++k) {
        const double t = static_cast<double>(k);
        const double value = k <= 20 ? std::exp(-1.0 * t) : 0.0;
        traj.times.push_back(t);
        traj.xi_samples.push_back({value});
        traj.zeta_samples.push_back({0.0});
        traj.r_samples.push_back(1.0);
    }
    // samples at and past the floor are ignored rather than poisoning the fit
    const DecayFit fit = fit_decay_rate(traj, 0.0, 50.0);
    CHECK(fit.alpha_hat == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("single-node decay fit sits near the linearized rate") {
    const ModelParams params = make_identical(Mat(1, 1), {1.0});
    const Trajectory traj = integrate(params, {0.1}, {0.001, 5.0, 10});
    const DecayFit fit = fit_decay_rate(traj, 0.0, 5.0);
    CHECK(fit.alpha_hat == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("raising any pacemaker gain never lowers the narrow-regime bound") {
    SplitMix64 rng(89);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 3 + static_cast<std::size_t>(rng.next() % 6);
        Mat a = oracles::random_coupling(n, rng, 1.0, 0.01, 0.1);
        const Vec g = oracles::random_vec(n, rng, 0.0, 2.0);
        const double eps = rng.uniform(0.0, M_PI / 2.0 - 1e-6);
        const ModelParams base = make_identical(a, g);
        const double before = alpha1(base, eps).value;
        for (double bump : {0.1, 1.0, 10.0}) {
            Vec g_up = g;
            g_up[rng.next() % n] += bump;
            const ModelParams raised = make_identical(a, std::move(g_up));
            CHECK(alpha1(raised, eps).value >= before - 1e-8);
        }
    }
}

TEST_CASE("scaling the coupling never lowers the narrow-regime bound") {
    SplitMix64 rng(97);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 3 + static_cast<std::size_t>(rng.next() % 6);
        Mat a = oracles::random_coupling(n, rng, 1.0, 0.01, 0.1);
        const Vec g = oracles::random_vec(n, rng, 0.0, 1.0);
        const double eps = rng.uniform(0.0, M_PI / 2.0 - 1e-6);
        const double factor = rng.uniform(1.0, 10.0);
        Mat scaled = a;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) scaled(i, j) *= factor;
        const double before = alpha1(make_identical(a, g), eps).value;
        const double after = alpha1(make_identical(std::move(scaled), g), eps).value;
        CHECK(after >= before - 1e-8);
    }
}

TEST_CASE("a passing condition forces a positive bound") {
    SplitMix64 rng(101);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.next() % 5);
        Mat a = oracles::random_coupling(n, rng, 1.0, 0.01, 0.5);

        const double eps_wide = rng.uniform(M_PI / 2.0, M_PI - 1e-3);
        ModelParams probe = make_identical(a, Vec(n, 1.0));
        const ConditionVerdict at_one = check_sync_condition(probe, eps_wide);
        const double needed = 1.0 - at_one.margin;
        const ModelParams passing = make_identical(a, Vec(n, needed + 0.25));
        CHECK(check_sync_condition(passing, eps_wide).holds);
        CHECK(alpha2(passing, eps_wide).value > 0.0);

        const double eps_mid = rng.uniform(M_PI / 4.0, M_PI / 2.0 - 1e-3);
        const ConditionVerdict lock_at_one = check_locking_condition(probe, eps_mid);
        const double lock_needed = 1.0 - lock_at_one.margin;
        const ModelParams lock_passing = make_identical(a, Vec(n, lock_needed + 0.25));
        CHECK(check_locking_condition(lock_passing, eps_mid).holds);
        CHECK(alpha4(lock_passing, eps_mid).value > 0.0);
    }
}
