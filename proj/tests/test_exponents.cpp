#include <doctest.h>

#include <cmath>
#include <random>

#include "blowuplab/errors.hpp"
#include "blowuplab/exponents.hpp"

using namespace blowuplab;
using namespace blowuplab::exponents;

namespace {

// Closed form of the positive Strauss root, used only as a cross-check.
double strauss_closed(double d) {
    return (d + 1.0 + std::sqrt(d * d + 10.0 * d - 7.0)) / (2.0 * (d - 1.0));
}

ModelParams make(int N, double mu, double p, double q, int a, int b) {
    return ModelParams{N, mu, p, q, a, b};
}

}  // namespace

TEST_SUITE("exponents") {

TEST_CASE("strauss exponent") {
    CHECK(strauss_exponent(3.0) == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-13));
    CHECK(strauss_exponent(2.0) == doctest::Approx((3.0 + std::sqrt(17.0)) / 2.0).epsilon(1e-13));
    CHECK(strauss_exponent(3.5) == doctest::Approx(2.1688578).epsilon(1e-7));
    for (double d : {1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 10.0, 1.0 + 1e-6}) {
        const double q = strauss_exponent(d);
        CHECK(std::abs((d - 1) * q * q - (d + 1) * q - 2) <= 1e-12 * std::max(1.0, (d - 1) * q * q));
        CHECK(q == doctest::Approx(strauss_closed(d)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(strauss_exponent(1.0), DomainError);
    CHECK_THROWS_AS(strauss_exponent(0.5), DomainError);
}

TEST_CASE("glassey exponent") {
    CHECK(glassey_exponent(2.0) == doctest::Approx(3.0));
    CHECK(glassey_exponent(3.0) == doctest::Approx(2.0));
    CHECK(glassey_exponent(1.5) == doctest::Approx(5.0));
    CHECK_THROWS_AS(glassey_exponent(1.0), DomainError);
}

TEST_CASE("lambda") {
    CHECK(lambda_combined(2.0, 2.0, 3.0) == doctest::Approx(2.0));
    CHECK(lambda_combined(1.9, 2.2, 3.5) == doctest::Approx(3.3).epsilon(1e-14));
    CHECK(std::abs(lambda_combined(2.0, 1.0 + 1e-12, 3.0)) < 1e-10);
    for (double d : {1.5, 2.0, 3.5, 6.0}) {
        for (double q : {1.5, 2.0, 3.0}) {
            CHECK(lambda_combined(glassey_exponent(d), q, d) ==
                  doctest::Approx((q - 1) * (d - 1)).epsilon(1e-12));
        }
    }
}

TEST_CASE("mu_star") {
    CHECK(mu_star(2.0, 2.0, 2) == doctest::Approx(2.0));
    CHECK(std::abs(mu_star(2.0, 3.0, 3)) < 1e-14);
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> pq(1.0 + 1e-6, 4.0);
    for (int k = 0; k < 100; ++k) {
        const double p = pq(rng);
        const double q = pq(rng);
        const int N = 1 + k % 3;
        CHECK(lambda_combined(p, q, N + mu_star(p, q, N)) == doctest::Approx(4.0).epsilon(1e-12));
    }
}

TEST_CASE("sigma shift") {
    CHECK(sigma_shift(0.5) == doctest::Approx(1.0));
    CHECK(sigma_shift(1.5) == doctest::Approx(2.0));
    CHECK(sigma_shift(3.0) == doctest::Approx(3.0));
    const double h = 1e-8;
    CHECK(std::abs(sigma_shift(1 - h) - sigma_shift(1 + h)) < 1e-7);
    CHECK(std::abs(sigma_shift(2 - h) - sigma_shift(2 + h)) < 1e-7);
    CHECK_THROWS_AS(sigma_shift(-0.1), DomainError);
}

TEST_CASE("classification examples") {
    CHECK(classify(make(1, 0.5, 2.0, 2.0, 1, 0)) == Region::DerivativeBlowUp);
    CHECK(classify(make(3, 0.5, 1.9, 2.2, 1, 1)) == Region::CombinedBlowUp);
    CHECK(classify(make(3, 0.1, 10.0, 2.9, 1, 1)) == Region::NoTheorem);
    CHECK(classify(make(3, 0.0, 3.0, 2.0, 0, 1)) == Region::PowerBlowUp);
    CHECK(to_string(Region::CombinedBlowUp) == "CombinedBlowUp");
}

TEST_CASE("boundaries belong to the blow-up tags") {
    const double d = 3.5;
    CHECK(classify(make(3, 0.5, glassey_exponent(d), 5.0, 1, 0)) == Region::DerivativeBlowUp);
    CHECK(classify(make(3, 0.5, 5.0, strauss_exponent(d), 0, 1)) == Region::PowerBlowUp);
    CHECK(classify(make(3, 0.5, 5.0, strauss_exponent(d) * (1 + 1e-12), 0, 1)) ==
          Region::PowerBlowUp);
    CHECK(classify(make(3, 0.5, 5.0, strauss_exponent(d) * (1 + 1e-6), 0, 1)) == Region::NoTheorem);
}

TEST_CASE("derivative check takes priority") {
    // p ≤ p_G and q ≤ q_S both hold; the derivative tag wins.
    CHECK(classify(make(3, 0.5, 1.5, 2.0, 1, 1)) == Region::DerivativeBlowUp);
}

TEST_CASE("small effective dimension") {
    // N + μ ≤ 1: every finite p and q lies below the thresholds.
    CHECK(classify(make(1, 0.0, 7.0, 2.0, 1, 0)) == Region::DerivativeBlowUp);
    CHECK(classify(make(1, 0.0, 7.0, 9.0, 0, 1)) == Region::PowerBlowUp);
}

TEST_CASE("lifespan exponents") {
    const auto sub = lifespan_exponent(make(1, 0.5, 2.0, 2.0, 1, 0));
    CHECK(sub.kind == BoundKind::Algebraic);
    CHECK(sub.exponent == doctest::Approx(4.0 / 3.0).epsilon(1e-14));

    const auto combined = lifespan_exponent(make(3, 0.5, 1.9, 2.2, 1, 1));
    CHECK(combined.kind == BoundKind::Algebraic);
    CHECK(combined.exponent == doctest::Approx(6.5143).epsilon(1e-4));
    CHECK(combined.exponent == doctest::Approx(2 * 1.9 * 1.2 / 0.7).epsilon(1e-12));

    const auto critical = lifespan_exponent(make(1, 0.5, 5.0, 2.0, 1, 0));
    CHECK(critical.kind == BoundKind::Exponential);
    CHECK(critical.exponent == doctest::Approx(4.0));

    const auto power = lifespan_exponent(make(3, 0.0, 3.0, 2.0, 0, 1));
    CHECK(power.kind == BoundKind::None);
    CHECK_FALSE(power.diagnostic.empty());

    CHECK_THROWS_AS(lifespan_exponent(make(3, 0.1, 10.0, 2.9, 1, 1)), NoTheoremError);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(make(0, 0.5, 2, 2, 1, 1).validate(), ConfigError);
    CHECK_THROWS_AS(make(1, -0.5, 2, 2, 1, 1).validate(), ConfigError);
    CHECK_THROWS_AS(make(1, 0.5, 1.0, 2, 1, 1).validate(), ConfigError);
    CHECK_THROWS_AS(make(1, 0.5, 2, 1.0, 1, 1).validate(), ConfigError);
    CHECK_THROWS_AS(make(3, 0.5, 2, 6.5, 1, 1).validate(), ConfigError);
    CHECK_NOTHROW(make(3, 0.5, 2, 6.0, 1, 1).validate());
    CHECK_THROWS_AS(make(1, 0.5, 2, 2, 2, 1).validate(), ConfigError);
    CHECK_THROWS_AS(make(1, 0.5, 2, 2, 0, 0).validate(), ConfigError);
    CHECK_NOTHROW(make(1, 0.5, 2, 2, 0, 0).validate(true));
    CHECK_THROWS_AS(classify(make(1, 0.5, 2, 2, 0, 0)), ConfigError);
}

}
