#pragma once

// Weighted averages of a radial trajectory used by the test-function method:
//
//   F  = ∫ u dx,          G  = (1+t)^{μ/2} F,
//   G1 = ∫ u ψ dx,        G2 = ∫ u_t ψ dx,        ψ(x,t) = ρ(t) φ(x),
//   Γ  = μ/(1+t) − 2 ρ'/ρ,
//
// together with the nonlinear integrals ∫|u_t|^p dx, ∫|u|^q dx. Integrals use the
// trapezoid rule on the solver grid with dx = |S^{N−1}| r^{N−1} dr.

#include <string>
#include <vector>

#include "blowuplab/exponents.hpp"
#include "blowuplab/solver.hpp"
#include "blowuplab/specfun.hpp"

namespace blowuplab::functionals {

struct FunctionalSnapshot {
    double t = 0.0;
    double max_abs_u = 0.0;
    double F = 0.0;
    double G = 0.0;
    double G1 = 0.0;
    double G2 = 0.0;
    double Gamma = 0.0;
    double int_ut_p = 0.0;
    double int_u_q = 0.0;
    /// Defect of F'' + μ/(1+t) F' = a∫|u_t|^p + b∫|u|^q, filled by residual_F.
    double residual_F = 0.0;
    /// Step size that produced this level.
    double dt = 0.0;
};

using MonitorSeries = std::vector<FunctionalSnapshot>;

/// Caches log φ(r_i) on a solver grid; the sphere quadrature is too costly per step.
class SnapshotWorkspace {
public:
    SnapshotWorkspace(const solver::RadialGrid& grid, const specfun::TestFunctionContext& ctx);

    const specfun::TestFunctionContext& context() const { return ctx_; }
    const std::vector<double>& log_phi() const { return log_phi_; }

private:
    specfun::TestFunctionContext ctx_;
    std::vector<double> log_phi_;
};

FunctionalSnapshot compute_snapshot(const solver::State& state, const SnapshotWorkspace& workspace,
                                    const exponents::ModelParams& params);

FunctionalSnapshot compute_snapshot(const solver::State& state,
                                    const specfun::TestFunctionContext& ctx,
                                    const exponents::ModelParams& params);

/// ε·C(f,g) with C(f,g) = ρ(0) ∫ [(μ − ρ'(0)/ρ(0)) f φ + g φ] dx.
double c_fg(const specfun::TestFunctionContext& ctx, const solver::InitialProfile& profile,
            double eps);

/// Residual of the F identity at each monitor time, by second-order differences on
/// the (possibly non-uniform) monitor grid.
struct ResidualReport {
    std::vector<double> residual;
    /// |residual| / (|F''| + |μ/(1+t) F'| + |nonlinear|); 0 where all terms vanish.
    std::vector<double> relative;
};

/// Throws InsufficientData for fewer than 5 snapshots.
ResidualReport residual_F(const MonitorSeries& series, const exponents::ModelParams& params);

/// Largest relative residual over snapshots with t ≤ t_limit.
double max_relative_residual(const ResidualReport& report, const MonitorSeries& series,
                             double t_limit);

/// ∫_{|x|≤t+R} ψ^r dx / (ρ^r(t) e^{rt} (1+t)^{(2−r)(N−1)/2}), evaluated in log space.
double lemma31_ratio(const specfun::TestFunctionContext& ctx, double t, double r_exp);

struct CoercivityReport {
    double t_lo = 2.0;
    double t_hi = 0.0;
    double min_G1_over_eps = 0.0;
    double min_G2_over_eps = 0.0;
    bool violation = false;
};

/// Minima of G1/ε and G2/ε over [t_lo, 0.9·T_end], T_end the last monitor time.
/// Throws InsufficientData when the window holds no snapshot.
CoercivityReport coercivity_report(const MonitorSeries& series, double eps, double t_lo = 2.0);

/// Relative defect of G1' − (ρ'/ρ) G1 = G2 at each snapshot (G1' by differences).
std::vector<double> g2_consistency_defect(const MonitorSeries& series,
                                          const specfun::TestFunctionContext& ctx);

/// Second-order derivative of y(t) on a non-uniform grid: centred three-point
/// formulas inside, one-sided three-point formulas at the ends.
std::vector<double> derivative(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace blowuplab::functionals
