#include "blowuplab/exponents.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "blowuplab/errors.hpp"

namespace blowuplab::exponents {

void ModelParams::validate(bool allow_linear) const {
    if (N < 1) {
        throw ConfigError("params.N", "must be >= 1");
    }
    if (!(mu >= 0.0) || !std::isfinite(mu)) {
        throw ConfigError("params.mu", "must be finite and >= 0");
    }
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw ConfigError("params.p", "must be finite and > 1");
    }
    if (!(q > 1.0) || !std::isfinite(q)) {
        throw ConfigError("params.q", "must be finite and > 1");
    }
    if (N >= 3 && q > 2.0 * N / (N - 2.0)) {
        throw ConfigError("params.q", "must be <= 2N/(N-2) for N >= 3");
    }
    if (a != 0 && a != 1) {
        throw ConfigError("params.a", "must be 0 or 1");
    }
    if (b != 0 && b != 1) {
        throw ConfigError("params.b", "must be 0 or 1");
    }
    if (!allow_linear && a + b < 1) {
        throw ConfigError("params.a", "at least one of a, b must be 1");
    }
}

std::string_view to_string(Region region) {
    switch (region) {
        case Region::DerivativeBlowUp: return "DerivativeBlowUp";
        case Region::PowerBlowUp: return "PowerBlowUp";
        case Region::CombinedBlowUp: return "CombinedBlowUp";
        case Region::NoTheorem: return "NoTheorem";
    }
    return "NoTheorem";
}

std::string_view to_string(BoundKind kind) {
    switch (kind) {
        case BoundKind::Algebraic: return "algebraic";
        case BoundKind::Exponential: return "exponential";
        case BoundKind::None: return "none";
    }
    return "none";
}

double strauss_exponent(double d) {
    if (!(d > 1.0) || !std::isfinite(d)) {
        throw DomainError("strauss_exponent: dimension must be > 1");
    }
    const auto f = [d](double q) { return (d - 1.0) * q * q - (d + 1.0) * q - 2.0; };
    const auto df = [d](double q) { return 2.0 * (d - 1.0) * q - (d + 1.0); };

    // f(1) = −4 < 0; the vertex sits below 1 + 1/(d−1), so f is increasing past it.
    double lo = 1.0;
    double hi = 2.0;
    while (f(hi) <= 0.0) {
        lo = hi;
        hi *= 2.0;
    }
    double q = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        const double value = f(q);
        if (value == 0.0) {
            break;
        }
        (value < 0.0 ? lo : hi) = q;
        const double slope = df(q);
        double next = slope > 0.0 ? q - value / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - q) <= 1e-16 * q || hi - lo <= 4e-16 * hi) {
            q = next;
            break;
        }
        q = next;
    }
    return q;
}

double glassey_exponent(double d) {
    if (!(d > 1.0) || !std::isfinite(d)) {
        throw DomainError("glassey_exponent: dimension must be > 1");
    }
    return 1.0 + 2.0 / (d - 1.0);
}

double lambda_combined(double p, double q, double d) {
    return (q - 1.0) * ((d - 1.0) * p - 2.0);
}

double mu_star(double p, double q, int N) {
    return 2.0 * (q + 1.0) / (p * (q - 1.0)) - N + 1.0;
}

double sigma_shift(double mu) {
    if (!(mu >= 0.0)) {
        throw DomainError("sigma_shift: mu must be >= 0");
    }
    if (mu < 1.0) {
        return 2.0 * mu;
    }
    if (mu < 2.0) {
        return 2.0;
    }
    return mu;
}

namespace {

// Thresholds at the effective dimension N+μ. At N+μ = 1 both critical powers are
// unbounded (every power blows up in one undamped dimension).
struct Thresholds {
    double p_glassey;
    double q_strauss;
};

Thresholds thresholds(const ModelParams& params) {
    const double d = params.N + params.mu;
    if (d <= 1.0) {
        const double inf = std::numeric_limits<double>::infinity();
        return {inf, inf};
    }
    return {glassey_exponent(d), strauss_exponent(d)};
}

bool at_most(double value, double threshold) {
    return value <= threshold * (1.0 + kCriticalTolerance);
}

}  // namespace

Region classify(const ModelParams& params) {
    params.validate();
    const auto [p_g, q_s] = thresholds(params);
    if (params.a == 1 && at_most(params.p, p_g)) {
        return Region::DerivativeBlowUp;
    }
    if (params.b == 1 && at_most(params.q, q_s)) {
        return Region::PowerBlowUp;
    }
    const double d = params.N + params.mu;
    if (params.a == 1 && params.b == 1 && lambda_combined(params.p, params.q, d) < 4.0 &&
        params.p > p_g && params.q > q_s) {
        return Region::CombinedBlowUp;
    }
    return Region::NoTheorem;
}

LifespanBound lifespan_exponent(const ModelParams& params) {
    const Region region = classify(params);
    const double d = params.N + params.mu;
    switch (region) {
        case Region::CombinedBlowUp: {
            const double lambda = lambda_combined(params.p, params.q, d);
            return {BoundKind::Algebraic, 2.0 * params.p * (params.q - 1.0) / (4.0 - lambda), ""};
        }
        case Region::DerivativeBlowUp: {
            const double p_g = thresholds(params).p_glassey;
            if (std::isfinite(p_g) && std::abs(params.p - p_g) <= kCriticalTolerance * p_g) {
                return {BoundKind::Exponential, params.p - 1.0, ""};
            }
            const double denom = 2.0 - (d - 1.0) * (params.p - 1.0);
            return {BoundKind::Algebraic, 2.0 * (params.p - 1.0) / denom, ""};
        }
        case Region::PowerBlowUp:
            return {BoundKind::None, 0.0,
                    "q <= q_S(N+mu): blow-up holds, but no lifespan bound is stated for this branch"};
        case Region::NoTheorem:
            break;
    }
    throw NoTheoremError("no blow-up theorem applies to these parameters");
}

}  // namespace blowuplab::exponents
