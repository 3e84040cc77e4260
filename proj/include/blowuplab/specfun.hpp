#pragma once

// Special functions behind the test-function method: the modified Bessel
// function K_nu, the radial eigenfunction phi of the Laplacian (Δφ = φ), the
// time factor rho solving ρ'' − ρ − (μ/(1+t) ρ)' = 0, and psi = rho·phi.
//
// Values that overflow or underflow double range for large arguments have
// log-valued counterparts (log_bessel_k, log_phi, log_rho, log_psi).

namespace blowuplab::specfun {

struct BesselEvalConfig {
    /// Relative tolerance between successive panel doublings.
    double tolerance = 1e-12;
    /// Exponent cap: the integrand is truncated where t(cosh ζ − 1) exceeds it.
    double log_cutoff = 745.0;
    int max_nodes = 1 << 16;

    void validate() const;
};

/// K_ν(t) = ∫₀^∞ exp(−t cosh ζ) cosh(νζ) dζ. Throws DomainError for t ≤ 0 and
/// AccuracyError when the node budget is exhausted. Underflows to 0 past t ≈ 745.
double bessel_k(double nu, double t, const BesselEvalConfig& cfg = {});

/// e^t K_ν(t), representable for all t > 0.
double bessel_k_scaled(double nu, double t, const BesselEvalConfig& cfg = {});

double log_bessel_k(double nu, double t, const BesselEvalConfig& cfg = {});

/// Surface measure |S^{N−1}| of the unit sphere in R^N (2 for N = 1).
double sphere_area(int N);

/// φ(|x| = r). For N = 1 this is e^r + e^{−r}; for N ≥ 2 the sphere integral
/// ∫_{S^{N−1}} e^{x·ω} dω, reduced to |S^{N−2}| ∫₀^π e^{r cos θ} sin^{N−2}θ dθ.
double phi(int N, double r);
double log_phi(int N, double r);

struct TestFunctionContext {
    int N = 1;
    double mu = 0.0;
    /// Support radius of the initial data.
    double R = 1.0;
    BesselEvalConfig bessel{};

    void validate() const;
};

/// ρ(t) = (t+1)^{(μ+1)/2} K_{(μ−1)/2}(t+1).
double rho(const TestFunctionContext& ctx, double t);
double log_rho(const TestFunctionContext& ctx, double t);

/// ρ'(t)/ρ(t) = μ/(1+t) − K_{(μ+1)/2}(t+1) / K_{(μ−1)/2}(t+1).
double rho_log_derivative(const TestFunctionContext& ctx, double t);

double psi(const TestFunctionContext& ctx, double r, double t);
double log_psi(const TestFunctionContext& ctx, double r, double t);

}  // namespace blowuplab::specfun
