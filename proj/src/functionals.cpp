#include "blowuplab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blowuplab/errors.hpp"
#include "blowuplab/quadrature.hpp"

namespace blowuplab::functionals {

SnapshotWorkspace::SnapshotWorkspace(const solver::RadialGrid& grid,
                                     const specfun::TestFunctionContext& ctx)
    : ctx_(ctx), log_phi_(grid.size()) {
    ctx_.validate();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        log_phi_[i] = specfun::log_phi(grid.N, grid.r[i]);
    }
}

FunctionalSnapshot compute_snapshot(const solver::State& state, const SnapshotWorkspace& workspace,
                                    const exponents::ModelParams& params) {
    const auto& grid = state.grid;
    const auto& ctx = workspace.context();
    const auto& log_phi = workspace.log_phi();
    const double t = state.t;
    const double log_rho = specfun::log_rho(ctx, t);
    const std::size_t end = std::min(state.active + 1, grid.size() - 1);

    FunctionalSnapshot snap;
    snap.t = t;
    snap.dt = state.dt;
    for (std::size_t i = 0; i <= end; ++i) {
        // Trapezoid weights h·r^{N−1}; the r = 0 end carries half weight and the
        // far end lies outside the support.
        double w = grid.h * std::pow(grid.r[i], grid.N - 1);
        if (i == 0) {
            w *= 0.5;
        }
        const double u = state.u[i];
        const double v = state.velocity(i);
        const double psi = std::exp(log_rho + log_phi[i]);
        snap.max_abs_u = std::max(snap.max_abs_u, std::abs(u));
        snap.F += w * u;
        snap.G1 += w * u * psi;
        snap.G2 += w * v * psi;
        snap.int_ut_p += w * std::pow(std::abs(v), params.p);
        snap.int_u_q += w * std::pow(std::abs(u), params.q);
    }
    const double area = specfun::sphere_area(grid.N);
    snap.F *= area;
    snap.G1 *= area;
    snap.G2 *= area;
    snap.int_ut_p *= area;
    snap.int_u_q *= area;
    snap.G = std::pow(1.0 + t, 0.5 * params.mu) * snap.F;
    snap.Gamma = params.mu / (1.0 + t) - 2.0 * specfun::rho_log_derivative(ctx, t);
    return snap;
}

FunctionalSnapshot compute_snapshot(const solver::State& state,
                                    const specfun::TestFunctionContext& ctx,
                                    const exponents::ModelParams& params) {
    return compute_snapshot(state, SnapshotWorkspace(state.grid, ctx), params);
}

double c_fg(const specfun::TestFunctionContext& ctx, const solver::InitialProfile& profile,
            double eps) {
    ctx.validate();
    const int N = ctx.N;
    const double shift = ctx.mu - specfun::rho_log_derivative(ctx, 0.0);
    const auto integrand = [&](double r) {
        const double weight = specfun::phi(N, r) * std::pow(r, N - 1);
        return (shift * profile.f(N, r) + profile.g(N, r)) * weight;
    };
    const double integral = integrate_panels(integrand, 0.0, profile.R, 16, gauss_legendre(32));
    return eps * specfun::rho(ctx, 0.0) * specfun::sphere_area(N) * integral;
}

std::vector<double> derivative(const std::vector<double>& t, const std::vector<double>& y) {
    const std::size_t n = t.size();
    if (n < 3 || y.size() != n) {
        throw InsufficientData("derivative: need at least 3 samples");
    }
    std::vector<double> dy(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h1 = t[i] - t[i - 1];
        const double h2 = t[i + 1] - t[i];
        dy[i] = -h2 / (h1 * (h1 + h2)) * y[i - 1] + (h2 - h1) / (h1 * h2) * y[i] +
                h1 / (h2 * (h1 + h2)) * y[i + 1];
    }
    {
        const double h1 = t[1] - t[0];
        const double h2 = t[2] - t[1];
        dy[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * y[0] + (h1 + h2) / (h1 * h2) * y[1] -
                h1 / (h2 * (h1 + h2)) * y[2];
    }
    {
        const double h1 = t[n - 2] - t[n - 3];
        const double h2 = t[n - 1] - t[n - 2];
        dy[n - 1] = h2 / (h1 * (h1 + h2)) * y[n - 3] - (h1 + h2) / (h1 * h2) * y[n - 2] +
                    (2.0 * h2 + h1) / (h2 * (h1 + h2)) * y[n - 1];
    }
    return dy;
}

namespace {

std::vector<double> second_derivative(const std::vector<double>& t, const std::vector<double>& y) {
    const std::size_t n = t.size();
    std::vector<double> d2(n);
    const auto at = [&](std::size_t c) {
        const double h1 = t[c] - t[c - 1];
        const double h2 = t[c + 1] - t[c];
        return 2.0 * ((y[c + 1] - y[c]) / h2 - (y[c] - y[c - 1]) / h1) / (h1 + h2);
    };
    for (std::size_t i = 1; i + 1 < n; ++i) {
        d2[i] = at(i);
    }
    d2[0] = at(1);
    d2[n - 1] = at(n - 2);
    return d2;
}

}  // namespace

ResidualReport residual_F(const MonitorSeries& series, const exponents::ModelParams& params) {
    const std::size_t n = series.size();
    if (n < 5) {
        throw InsufficientData("residual_F: need at least 5 monitor times");
    }
    std::vector<double> t(n);
    std::vector<double> F(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = series[i].t;
        F[i] = series[i].F;
    }
    const auto dF = derivative(t, F);
    const auto d2F = second_derivative(t, F);

    ResidualReport report;
    report.residual.resize(n);
    report.relative.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double damping = params.mu / (1.0 + t[i]) * dF[i];
        const double forcing = params.a * series[i].int_ut_p + params.b * series[i].int_u_q;
        const double res = d2F[i] + damping - forcing;
        const double scale = std::abs(d2F[i]) + std::abs(damping) + std::abs(forcing);
        report.residual[i] = res;
        report.relative[i] = scale > 0.0 ? std::abs(res) / scale : 0.0;
    }
    return report;
}

double max_relative_residual(const ResidualReport& report, const MonitorSeries& series,
                             double t_limit) {
    // The end points use one-sided stencils and are left out.
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < series.size(); ++i) {
        if (series[i].t <= t_limit) {
            worst = std::max(worst, report.relative[i]);
        }
    }
    return worst;
}

double lemma31_ratio(const specfun::TestFunctionContext& ctx, double t, double r_exp) {
    ctx.validate();
    if (!(t >= 0.0)) {
        throw DomainError("lemma31_ratio: t must be >= 0");
    }
    if (!(r_exp > 1.0)) {
        throw DomainError("lemma31_ratio: exponent must be > 1");
    }
    const int N = ctx.N;
    const double radius = t + ctx.R;
    // ψ^r / (ρ^r e^{rt}) = exp(r (log φ − t)); the ρ factors cancel exactly.
    const auto integrand = [&](double s) {
        double log_value = r_exp * (specfun::log_phi(N, s) - t);
        if (N > 1) {
            log_value += (N - 1) * std::log(s);
        }
        return std::exp(log_value);
    };
    const auto panels = static_cast<std::size_t>(std::ceil(radius / 0.25));
    const double integral = integrate_panels(integrand, 0.0, radius, panels, gauss_legendre(16));
    const double log_numerator = std::log(specfun::sphere_area(N)) + std::log(integral);
    const double log_weight = 0.5 * (2.0 - r_exp) * (N - 1) * std::log1p(t);
    return std::exp(log_numerator - log_weight);
}

CoercivityReport coercivity_report(const MonitorSeries& series, double eps, double t_lo) {
    if (series.empty()) {
        throw InsufficientData("coercivity_report: empty series");
    }
    CoercivityReport report;
    report.t_lo = t_lo;
    report.t_hi = 0.9 * series.back().t;
    if (t_lo >= report.t_hi) {
        throw InsufficientData("coercivity_report: window [t_lo, 0.9 T_end] is empty");
    }
    const double scale = eps > 0.0 ? 1.0 / eps : 1.0;
    double min_g1 = std::numeric_limits<double>::infinity();
    double min_g2 = std::numeric_limits<double>::infinity();
    for (const auto& snap : series) {
        if (snap.t < t_lo || snap.t > report.t_hi) {
            continue;
        }
        min_g1 = std::min(min_g1, snap.G1 * scale);
        min_g2 = std::min(min_g2, snap.G2 * scale);
    }
    if (!std::isfinite(min_g1)) {
        throw InsufficientData("coercivity_report: no monitor time inside the window");
    }
    report.min_G1_over_eps = min_g1;
    report.min_G2_over_eps = min_g2;
    report.violation = !(min_g1 > 0.0) || !(min_g2 > 0.0);
    return report;
}

std::vector<double> g2_consistency_defect(const MonitorSeries& series,
                                          const specfun::TestFunctionContext& ctx) {
    const std::size_t n = series.size();
    std::vector<double> t(n);
    std::vector<double> g1(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = series[i].t;
        g1[i] = series[i].G1;
    }
    const auto dg1 = derivative(t, g1);
    std::vector<double> defect(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double log_derivative = specfun::rho_log_derivative(ctx, t[i]);
        const double lhs = dg1[i] - log_derivative * g1[i];
        const double scale = std::abs(dg1[i]) + std::abs(log_derivative * g1[i]) + std::abs(series[i].G2);
        defect[i] = scale > 0.0 ? std::abs(lhs - series[i].G2) / scale : 0.0;
    }
    return defect;
}

}  // namespace blowuplab::functionals
