#include "blowuplab/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "blowuplab/errors.hpp"
#include "blowuplab/quadrature.hpp"

namespace blowuplab::specfun {

namespace {

constexpr std::size_t kPanelNodes = 16;
constexpr std::size_t kPhiNodes = 256;
// Beyond r·(1 − cos θ) = 40 the φ integrand is below e^{−40} of its peak.
constexpr double kPhiLogCutoff = 40.0;

}  // namespace

void BesselEvalConfig::validate() const {
    if (!(tolerance > 0.0)) {
        throw ConfigError("bessel.tolerance", "must be > 0");
    }
    if (max_nodes < 16) {
        throw ConfigError("bessel.max_nodes", "must be >= 16");
    }
    if (!(log_cutoff > 0.0)) {
        throw ConfigError("bessel.log_cutoff", "must be > 0");
    }
}

double bessel_k_scaled(double nu, double t, const BesselEvalConfig& cfg) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw DomainError("bessel_k: argument must be finite and > 0, got " + std::to_string(t));
    }
    cfg.validate();

    // e^t K_ν(t) = ∫ exp(−t (cosh ζ − 1)) cosh(νζ) dζ; the truncation point is where
    // the exponent reaches the cap.
    const double zeta_max = std::acosh(1.0 + cfg.log_cutoff / t);
    const auto integrand = [nu, t](double zeta) {
        // cosh ζ − 1 = 2 sinh²(ζ/2) avoids cancellation near ζ = 0.
        const double s = std::sinh(0.5 * zeta);
        return std::exp(-2.0 * t * s * s) * std::cosh(nu * zeta);
    };

    const auto& rule = gauss_legendre(kPanelNodes);
    std::size_t panels = 8;
    double previous = integrate_panels(integrand, 0.0, zeta_max, panels, rule);
    while (panels * kPanelNodes * 2 <= static_cast<std::size_t>(cfg.max_nodes)) {
        panels *= 2;
        const double current = integrate_panels(integrand, 0.0, zeta_max, panels, rule);
        if (std::abs(current - previous) <= cfg.tolerance * std::abs(current)) {
            return current;
        }
        previous = current;
    }
    throw AccuracyError("bessel_k: tolerance not reached within node budget (nu=" +
                        std::to_string(nu) + ", t=" + std::to_string(t) + ")");
}

double bessel_k(double nu, double t, const BesselEvalConfig& cfg) {
    return bessel_k_scaled(nu, t, cfg) * std::exp(-t);
}

double log_bessel_k(double nu, double t, const BesselEvalConfig& cfg) {
    return std::log(bessel_k_scaled(nu, t, cfg)) - t;
}

double sphere_area(int N) {
    if (N < 1) {
        throw DomainError("sphere_area: dimension must be >= 1");
    }
    const double half = 0.5 * N;
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

namespace {

// |S^{N−2}| ∫₀^π e^{r (cos θ − 1)} sin^{N−2}θ dθ, i.e. e^{−r} φ(r) for N ≥ 2.
double phi_scaled_sphere(int N, double r) {
    const double lower_sphere = N == 2 ? 2.0 : sphere_area(N - 1);
    double upper = std::numbers::pi;
    if (r > 0.5 * kPhiLogCutoff) {
        upper = std::acos(1.0 - kPhiLogCutoff / r);
    }
    const auto& rule = gauss_legendre(kPhiNodes);
    const int power = N - 2;
    const auto integrand = [r, power](double theta) {
        const double s = std::sin(0.5 * theta);
        const double w = power == 0 ? 1.0 : std::pow(std::sin(theta), power);
        return std::exp(-2.0 * r * s * s) * w;
    };
    return lower_sphere * integrate_panels(integrand, 0.0, upper, 1, rule);
}

void check_phi_args(int N, double r) {
    if (N < 1) {
        throw DomainError("phi: dimension must be >= 1");
    }
    if (!(r >= 0.0)) {
        throw DomainError("phi: radius must be >= 0");
    }
}

}  // namespace

double phi(int N, double r) {
    check_phi_args(N, r);
    if (N == 1) {
        return 2.0 * std::cosh(r);
    }
    return std::exp(r) * phi_scaled_sphere(N, r);
}

double log_phi(int N, double r) {
    check_phi_args(N, r);
    if (N == 1) {
        return r + std::log1p(std::exp(-2.0 * r));
    }
    return r + std::log(phi_scaled_sphere(N, r));
}

void TestFunctionContext::validate() const {
    if (N < 1) {
        throw ConfigError("N", "must be >= 1");
    }
    if (!(mu >= 0.0) || !std::isfinite(mu)) {
        throw ConfigError("mu", "must be finite and >= 0");
    }
    if (!(R > 0.0)) {
        throw ConfigError("R", "must be > 0");
    }
    bessel.validate();
}

namespace {

void check_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw DomainError("time argument must be finite and >= 0");
    }
}

}  // namespace

double log_rho(const TestFunctionContext& ctx, double t) {
    check_time(t);
    const double s = t + 1.0;
    return 0.5 * (ctx.mu + 1.0) * std::log(s) + log_bessel_k(0.5 * (ctx.mu - 1.0), s, ctx.bessel);
}

double rho(const TestFunctionContext& ctx, double t) {
    return std::exp(log_rho(ctx, t));
}

double rho_log_derivative(const TestFunctionContext& ctx, double t) {
    check_time(t);
    const double s = t + 1.0;
    const double upper = bessel_k_scaled(0.5 * (ctx.mu + 1.0), s, ctx.bessel);
    const double lower = bessel_k_scaled(0.5 * (ctx.mu - 1.0), s, ctx.bessel);
    return ctx.mu / s - upper / lower;
}

double log_psi(const TestFunctionContext& ctx, double r, double t) {
    return log_rho(ctx, t) + log_phi(ctx.N, r);
}

double psi(const TestFunctionContext& ctx, double r, double t) {
    return rho(ctx, t) * phi(ctx.N, r);
}

}  // namespace blowuplab::specfun
