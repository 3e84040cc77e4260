#pragma once

#include <string>
#include <string_view>

namespace blowuplab::exponents {

/// Coefficients of u_tt − Δu + μ/(1+t) u_t = a|u_t|^p + b|u|^q.
struct ModelParams {
    int N = 1;
    double mu = 0.0;
    double p = 2.0;
    double q = 2.0;
    int a = 1;
    int b = 1;

    /// Throws ConfigError naming the violated constraint. `allow_linear` admits
    /// a = b = 0, which the solver uses for the linear damped wave.
    void validate(bool allow_linear = false) const;
};

enum class Region { DerivativeBlowUp, PowerBlowUp, CombinedBlowUp, NoTheorem };

std::string_view to_string(Region region);

enum class BoundKind { Algebraic, Exponential, None };

std::string_view to_string(BoundKind kind);

/// T_ε ≤ C ε^{−exponent} (algebraic) or log T_ε ≤ C ε^{−exponent} (exponential).
struct LifespanBound {
    BoundKind kind = BoundKind::None;
    double exponent = 0.0;
    std::string diagnostic;
};

/// Relative tolerance used to decide p = p_G(N+μ).
inline constexpr double kCriticalTolerance = 1e-9;

/// Positive root of (d−1)q² − (d+1)q − 2 = 0.
double strauss_exponent(double d);

/// 1 + 2/(d−1).
double glassey_exponent(double d);

/// (q−1)((d−1)p − 2).
double lambda_combined(double p, double q, double d);

/// The damping μ_* at which λ(p, q, N+μ_*) = 4.
double mu_star(double p, double q, int N);

/// Piecewise shift: 2μ on [0,1), 2 on [1,2), μ on [2,∞).
double sigma_shift(double mu);

Region classify(const ModelParams& params);

/// Throws NoTheoremError when classify(params) is NoTheorem.
LifespanBound lifespan_exponent(const ModelParams& params);

}  // namespace blowuplab::exponents
