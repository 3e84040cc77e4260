#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <stdexcept>

#include "blowuplab/errors.hpp"
#include "blowuplab/lifespan.hpp"
#include "helpers.hpp"

using namespace blowuplab;
using namespace blowuplab::lifespan;

namespace {

SweepResult synthetic(const std::vector<double>& eps, double (*law)(double), double noise,
                      unsigned seed = 7) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> jitter(-noise, noise);
    SweepResult result;
    for (double e : eps) {
        SweepRow row;
        row.eps = e;
        row.T_est = law(e) * (1.0 + jitter(rng));
        row.outcome = "BlowUp";
        result.rows.push_back(row);
    }
    return result;
}

const std::vector<double> kLadder{0.4, 0.3, 0.2, 0.15, 0.1, 0.075, 0.05};

exponents::LifespanBound algebraic(double k) {
    return {exponents::BoundKind::Algebraic, k, ""};
}

}  // namespace

TEST_SUITE("lifespan") {

TEST_CASE("power fit on exact data") {
    const auto fit = fit_power_law(synthetic(kLadder, [](double e) { return std::pow(e, -2.0); }, 0.0));
    CHECK(fit.kind == FitKind::Power);
    CHECK(std::abs(fit.slope + 2.0) <= 1e-12);
    CHECK(std::abs(fit.r_squared - 1.0) <= 1e-12);
    CHECK(std::abs(fit.intercept) <= 1e-12);
    CHECK(fit.points == kLadder.size());
}

TEST_CASE("power fit with noise") {
    auto data = synthetic(kLadder, [](double e) { return 5.0 * std::pow(e, -4.0 / 3.0); }, 0.01);
    data.bound = algebraic(4.0 / 3.0);
    const auto fit = fit_power_law(data);
    CHECK(std::abs(fit.slope + 4.0 / 3.0) <= 0.05);
    REQUIRE(fit.relative_deviation.has_value());
    CHECK(*fit.relative_deviation == doctest::Approx(std::abs(fit.slope + 4.0 / 3.0) / (4.0 / 3.0)));
}

TEST_CASE("fits need three blow-up rows") {
    auto two = synthetic({0.4, 0.2}, [](double e) { return 1.0 / e; }, 0.0);
    CHECK_THROWS_AS(fit_power_law(two), InsufficientData);
    CHECK_THROWS_AS(fit_exponential_law(two, 2.0), InsufficientData);
    auto three = synthetic({0.4, 0.2, 0.1}, [](double e) { return 1.0 / e; }, 0.0);
    three.rows[2].outcome = "ReachedTmax";
    CHECK_THROWS_AS(fit_power_law(three), InsufficientData);
}

TEST_CASE("exponential fit") {
    const auto exact = fit_exponential_law(
        synthetic(kLadder, [](double e) { return std::exp(3.0 / e); }, 0.0), 2.0);
    CHECK(exact.kind == FitKind::Exponential);
    CHECK(exact.slope == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(exact.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(exact.relative_deviation.has_value());

    // 2% noise on log T.
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> jitter(-0.02, 0.02);
    SweepResult noisy;
    for (double e : kLadder) {
        noisy.rows.push_back({e, std::exp(3.0 / e * (1.0 + jitter(rng))), 0.0, "BlowUp", true, 0.0, {}});
    }
    CHECK(std::abs(fit_exponential_law(noisy, 2.0).slope / 3.0 - 1.0) <= 0.1);
}

TEST_CASE("rows without blow-up are excluded with a warning") {
    auto data = synthetic(kLadder, [](double e) { return std::pow(e, -2.0); }, 0.0);
    data.rows.back().outcome = "ReachedTmax";
    data.rows.back().T_est = 1.0;
    const auto fit = fit_power_law(data);
    CHECK(fit.points == kLadder.size() - 1);
    CHECK(std::abs(fit.slope + 2.0) <= 1e-12);
    CHECK(fit.warnings.size() == 1);
    const auto efit = fit_exponential_law(data, 2.0);
    CHECK(efit.points == kLadder.size() - 1);
    CHECK(efit.warnings.size() == 1);
}

TEST_CASE("verdict rule") {
    FitReport fit;
    fit.kind = FitKind::Power;
    fit.slope = -1.30;
    CHECK(compare_to_theory(fit, algebraic(4.0 / 3.0)).verdict == Verdict::Consistent);
    fit.slope = -0.5;
    CHECK(compare_to_theory(fit, algebraic(4.0 / 3.0)).verdict == Verdict::Inconclusive);
    fit.slope = -2.0;
    const auto record = compare_to_theory(fit, algebraic(4.0 / 3.0));
    CHECK(record.verdict == Verdict::Inconsistent);
    CHECK(record.measured == doctest::Approx(2.0));
    CHECK(record.expected == doctest::Approx(4.0 / 3.0));
    fit.slope = -1.6;
    CHECK(compare_to_theory(fit, algebraic(4.0 / 3.0), 0.25).verdict == Verdict::Consistent);
    CHECK(compare_to_theory(fit, algebraic(4.0 / 3.0), 0.1).verdict == Verdict::Inconsistent);

    CHECK_THROWS_AS(compare_to_theory(fit, {exponents::BoundKind::Exponential, 4.0, ""}),
                    std::invalid_argument);
    FitReport efit;
    efit.kind = FitKind::Exponential;
    efit.slope = 2.0;
    efit.r_squared = 0.99;
    CHECK_THROWS_AS(compare_to_theory(efit, algebraic(1.0)), std::invalid_argument);
    CHECK(compare_to_theory(efit, {exponents::BoundKind::Exponential, 1.0, ""}).verdict ==
          Verdict::Consistent);
    efit.slope = -1.0;
    CHECK(compare_to_theory(efit, {exponents::BoundKind::Exponential, 1.0, ""}).verdict ==
          Verdict::Inconclusive);
}

TEST_CASE("verdict is invariant under rescaling lifespans") {
    auto data = synthetic(kLadder, [](double e) { return 3.0 * std::pow(e, -1.2); }, 0.02);
    const auto base = compare_to_theory(fit_power_law(data), algebraic(4.0 / 3.0));
    for (auto& row : data.rows) {
        row.T_est *= 17.0;
    }
    const auto scaled = compare_to_theory(fit_power_law(data), algebraic(4.0 / 3.0));
    CHECK(base.verdict == scaled.verdict);
    CHECK(base.measured == doctest::Approx(scaled.measured).epsilon(1e-12));
}

TEST_CASE("monotonicity") {
    auto data = synthetic(kLadder, [](double e) { return 1.0 / e; }, 0.0);
    CHECK(lifespans_monotone(data));
    std::swap(data.rows[2].T_est, data.rows[3].T_est);
    CHECK_FALSE(lifespans_monotone(data));
}

TEST_CASE("sweep preconditions") {
    const auto base = testing::config(1, 0.5, 2.0, 2.0, 1, 0, 0.4, 1.0 / 32, 10.0);
    CHECK_THROWS_AS(sweep(base, {0.4, 0.2}), ConfigError);
    CHECK_THROWS_AS(sweep(base, {0.4, 0.2, 0.0}), ConfigError);
    CHECK_THROWS_AS(sweep(base, {0.4, 0.4, 0.1}), ConfigError);
    CHECK_THROWS_AS(sweep(base, {0.1, 0.2, 0.4}), ConfigError);
    auto no_theorem = base;
    no_theorem.params = {3, 0.1, 10.0, 2.9, 1, 1};
    CHECK_THROWS_AS(sweep(no_theorem, {0.4, 0.2, 0.1}), NoTheoremError);
}

TEST_CASE("sweep on the subcritical derivative case") {
    const auto base = testing::config(1, 0.5, 2.0, 2.0, 1, 0, 0.4, 1.0 / 32, 10.0);
    SweepOptions options;
    options.refine = 2;
    const auto a = sweep(base, {0.4, 0.2, 0.1}, options);
    REQUIRE(a.rows.size() == 3);
    for (const auto& row : a.rows) {
        CHECK(row.outcome == "BlowUp");
        CHECK(row.T_est > 0.0);
    }
    CHECK(a.rows[0].T_est < a.rows[1].T_est);
    CHECK(a.rows[1].T_est < a.rows[2].T_est);
    CHECK(lifespans_monotone(a));
    CHECK(a.bound.kind == exponents::BoundKind::Algebraic);

    options.jobs = 2;
    const auto b = sweep(base, {0.4, 0.2, 0.1}, options);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(std::memcmp(&a.rows[i].T_est, &b.rows[i].T_est, sizeof(double)) == 0);
        CHECK(std::memcmp(&a.rows[i].uncertainty, &b.rows[i].uncertainty, sizeof(double)) == 0);
    }
}

TEST_CASE("rows that miss blow-up are tagged") {
    auto base = testing::config(1, 0.5, 2.0, 2.0, 1, 0, 0.4, 1.0 / 32, 10.0);
    SweepOptions options;
    options.t_max_limit = 10.0;
    const auto result = sweep(base, {0.4, 0.1, 0.05}, options);
    CHECK(result.rows[0].outcome == "BlowUp");
    CHECK(result.rows[1].outcome == "ReachedTmax");
    CHECK(result.rows[2].outcome == "ReachedTmax");
}

}
