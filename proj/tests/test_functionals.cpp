#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>

#include "blowuplab/errors.hpp"
#include "blowuplab/functionals.hpp"
#include "blowuplab/run.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace blowuplab;
using namespace blowuplab::functionals;

namespace {

specfun::TestFunctionContext context(const solver::SimConfig& cfg) {
    return {cfg.params.N, cfg.params.mu, cfg.profile.R, {}};
}

// ρ(0) and ρ'(0)/ρ(0) from Boost's K_ν.
double rho0(double mu) {
    return boost::math::cyl_bessel_k(0.5 * (mu - 1.0), 1.0);
}

double rho0_log_derivative(double mu) {
    return mu - boost::math::cyl_bessel_k(0.5 * (mu + 1.0), 1.0) /
                    boost::math::cyl_bessel_k(0.5 * (mu - 1.0), 1.0);
}

double max_before(const std::vector<double>& values, const MonitorSeries& series, double t_limit) {
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < series.size(); ++i) {
        if (series[i].t <= t_limit) {
            worst = std::max(worst, std::abs(values[i]));
        }
    }
    return worst;
}

}  // namespace

TEST_SUITE("functionals") {

TEST_CASE("zero state gives zero functionals") {
    const auto cfg = testing::config(2, 0.5, 2.0, 2.0, 1, 1, 0.0, 1.0 / 32, 2.0);
    const auto snap = compute_snapshot(solver::build_initial_state(cfg), context(cfg), cfg.params);
    for (double v : {snap.F, snap.G, snap.G1, snap.G2, snap.int_ut_p, snap.int_u_q, snap.max_abs_u}) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("initial G1 and G2 against quadrature") {
    for (int N : {1, 3}) {
        CAPTURE(N);
        const double mu = 0.5;
        const double eps = 0.1;
        const auto cfg = testing::config(N, mu, 2.0, 2.0, 1, 0, eps, 1.0 / 256, 2.0);
        const auto snap =
            compute_snapshot(solver::build_initial_state(cfg), context(cfg), cfg.params);
        const double integral = oracle::simpson_rel(
            [N](double r) { return oracle::bump(r) * oracle::phi_closed(N, r) * std::pow(r, N - 1); },
            0.0, 1.0, 1e-14);
        const double expected = eps * rho0(mu) * oracle::sphere_area(N) * integral;
        CHECK(std::abs(snap.G1 / expected - 1.0) <= 1e-8);
        // g = f, so G2(0) = G1(0).
        CHECK(std::abs(snap.G2 / expected - 1.0) <= 1e-8);
    }
}

TEST_CASE("G is the weighted mass") {
    const auto cfg = testing::config(1, 0.7, 2.0, 2.0, 1, 0, 0.3, 1.0 / 64, 6.0);
    const auto result = solver::run(cfg);
    for (const auto& s : result.monitors) {
        CHECK(s.G == std::pow(1.0 + s.t, 0.35) * s.F);
    }
}

TEST_CASE("c_fg") {
    const specfun::TestFunctionContext ctx{1, 1.0, 1.0, {}};
    const solver::InitialProfile profile;
    CHECK(c_fg(ctx, profile, 0.0) == 0.0);
    const double integral = oracle::simpson_rel(
        [](double r) { return oracle::bump(r) * 2.0 * std::cosh(r); }, 0.0, 1.0, 1e-14);
    const double expected = rho0(1.0) * (1.0 - rho0_log_derivative(1.0) + 1.0) * 2.0 * integral;
    CHECK(std::abs(c_fg(ctx, profile, 1.0) / expected - 1.0) <= 1e-8);
    CHECK(c_fg(ctx, profile, 0.25) == doctest::Approx(0.25 * expected).epsilon(1e-12));
    for (double mu : {0.5, 1.0, 2.0, 3.0}) {
        for (int N : {1, 2, 3}) {
            CHECK(c_fg({N, mu, 1.0, {}}, profile, 0.1) > 0.0);
        }
    }
}

TEST_CASE("Gamma tends to 2") {
    for (double mu : {0.5, 1.0, 2.0}) {
        const auto cfg = testing::config(1, mu, 2.0, 2.0, 1, 0, 0.0, 1.0 / 8, 21.0);
        auto state = solver::build_initial_state(cfg);
        state.t = 20.0;
        const auto snap = compute_snapshot(state, context(cfg), cfg.params);
        CHECK(std::abs(snap.Gamma - 2.0) < 0.2);
    }
}

TEST_CASE("residual of the mass identity") {
    SUBCASE("too few rows") {
        MonitorSeries short_series(4);
        CHECK_THROWS_AS(residual_F(short_series, {}), InsufficientData);
    }
    SUBCASE("zero trajectory") {
        const auto cfg = testing::config(1, 0.5, 2.0, 2.0, 1, 0, 0.0, 1.0 / 32, 3.0);
        const auto result = solver::run(cfg);
        for (double r : residual_F(result.monitors, cfg.params).residual) {
            CHECK(r == 0.0);
        }
    }
    SUBCASE("linear run") {
        const auto cfg = testing::config(3, 1.0, 2.0, 2.0, 0, 0, 0.5, 1.0 / 64, 10.0);
        const auto result = solver::run(cfg);
        const auto report = residual_F(result.monitors, cfg.params);
        CHECK(max_relative_residual(report, result.monitors, 0.9 * cfg.t_max) < 0.02);
    }
    SUBCASE("blow-up run shrinks under refinement") {
        const auto cfg = testing::config(1, 0.5, 2.0, 2.0, 1, 0, 0.4, 1.0 / 128, 20.0);
        const auto coarse = solver::run(cfg);
        const auto fine = solver::run(solver::refined(cfg, 1));
        REQUIRE(coarse.outcome == solver::Outcome::BlowUp);
        REQUIRE(fine.outcome == solver::Outcome::BlowUp);
        const double limit = 0.8 * fine.T_num;
        const double rc = max_relative_residual(residual_F(coarse.monitors, cfg.params),
                                                coarse.monitors, limit);
        const double rf =
            max_relative_residual(residual_F(fine.monitors, cfg.params), fine.monitors, limit);
        CHECK(rf < 0.05);
        CHECK(rf < rc);
        // Past the start-up transient the defect falls at second order.
        const auto window = [limit](const solver::RunResult& run, const exponents::ModelParams& p) {
            const auto report = residual_F(run.monitors, p);
            double worst = 0.0;
            for (std::size_t i = 1; i + 1 < run.monitors.size(); ++i) {
                if (run.monitors[i].t >= 0.5 && run.monitors[i].t <= limit) {
                    worst = std::max(worst, report.relative[i]);
                }
            }
            return worst;
        };
        const double ratio = window(coarse, cfg.params) / window(fine, cfg.params);
        CHECK(ratio > 3.0);
        CHECK(ratio < 5.5);
    }
}

TEST_CASE("lemma31 ratio") {
    const specfun::TestFunctionContext ctx{1, 0.5, 1.0, {}};
    const double direct = 2.0 * oracle::simpson_rel(
                                    [](double x) { return 4.0 * std::cosh(x) * std::cosh(x); }, 0.0,
                                    1.0, 1e-14);
    CHECK(std::abs(lemma31_ratio(ctx, 0.0, 2.0) / direct - 1.0) <= 1e-6);
    for (int N : {1, 2, 3}) {
        const specfun::TestFunctionContext c{N, 0.5, 1.0, {}};
        const double at5 = lemma31_ratio(c, 5.0, 2.0);
        for (double t = 0.0; t <= 30.0; t += 0.5) {
            const double value = lemma31_ratio(c, t, 2.0);
            CHECK(value > 0.0);
            CHECK(value <= 10.0 * at5);
            CHECK(value >= 0.1 * at5);
        }
    }
    CHECK_THROWS_AS(lemma31_ratio(ctx, 1.0, 1.0), DomainError);
}

TEST_CASE("coercivity") {
    SUBCASE("zero data is flagged") {
        const auto cfg = testing::config(1, 0.5, 2.0, 2.0, 1, 0, 0.0, 1.0 / 32, 6.0);
        const auto report = coercivity_report(solver::run(cfg).monitors, 0.0);
        CHECK(report.min_G1_over_eps == 0.0);
        CHECK(report.min_G2_over_eps == 0.0);
        CHECK(report.violation);
    }
    SUBCASE("empty window") {
        const auto cfg = testing::config(1, 0.5, 2.0, 2.0, 1, 0, 0.0, 1.0 / 32, 2.0);
        CHECK_THROWS_AS(coercivity_report(solver::run(cfg).monitors, 0.0), InsufficientData);
    }
    SUBCASE("positive and proportional to eps") {
        double lo1 = INFINITY, hi1 = 0, lo2 = INFINITY, hi2 = 0;
        for (double eps : {0.4, 0.2, 0.1}) {
            const auto cfg = testing::config(1, 0.5, 2.0, 2.0, 1, 0, eps, 1.0 / 64, 200.0);
            const auto result = solver::run(cfg);
            REQUIRE(result.outcome == solver::Outcome::BlowUp);
            const auto report = coercivity_report(result.monitors, eps);
            CHECK_FALSE(report.violation);
            lo1 = std::min(lo1, report.min_G1_over_eps);
            hi1 = std::max(hi1, report.min_G1_over_eps);
            lo2 = std::min(lo2, report.min_G2_over_eps);
            hi2 = std::max(hi2, report.min_G2_over_eps);
        }
        CHECK(hi1 < 2.0 * lo1);
        CHECK(hi2 < 2.0 * lo2);
    }
    SUBCASE("strong damping") {
        for (double eps : {0.4, 0.1}) {
            const auto cfg = testing::config(1, 2.0, 2.0, 2.0, 1, 0, eps, 1.0 / 32, 30.0);
            const auto report = coercivity_report(solver::run(cfg).monitors, eps);
            CHECK(report.min_G1_over_eps > 0.0);
            CHECK(report.min_G2_over_eps > 0.0);
        }
    }
}

TEST_CASE("G2 consistency") {
    const auto cfg = testing::config(1, 0.5, 2.0, 2.0, 1, 0, 0.3, 1.0 / 128, 30.0);
    const auto result = solver::run(cfg);
    REQUIRE(result.outcome == solver::Outcome::BlowUp);
    const auto defect = g2_consistency_defect(result.monitors, context(cfg));
    CHECK(max_before(defect, result.monitors, 0.8 * result.T_num) < 0.05);
}

TEST_CASE("non-uniform derivative is exact on quadratics") {
    const std::vector<double> t{0.0, 0.1, 0.35, 0.4, 1.0, 1.7};
    std::vector<double> y;
    for (double s : t) {
        y.push_back(3.0 * s * s - 2.0 * s + 1.0);
    }
    const auto d = derivative(t, y);
    for (std::size_t i = 0; i < t.size(); ++i) {
        CHECK(d[i] == doctest::Approx(6.0 * t[i] - 2.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(derivative({0.0, 1.0}, {0.0, 1.0}), InsufficientData);
}

}
