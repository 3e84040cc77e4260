#pragma once

// Radially symmetric Cauchy problem
//
//   u_tt − u_rr − (N−1)/r u_r + μ/(1+t) u_t = a|u_t|^p + b|u|^q,
//   u(r,0) = ε f(r),  u_t(r,0) = ε g(r),
//
// on a uniform grid r_i = i·h, i = 0..nr, with a zero Dirichlet value at r = L
// (never reached while L ≥ t_max + R) and the symmetry condition at r = 0.
//
// Space: conservative second-order differences, written with the cell volumes
// V_i = ∫ r^{N−1} dr over [r_i − h/2, r_i + h/2] so the operator is symmetric in
// the V-weighted inner product. At r = 0 it reduces to 2N(u_1 − u_0)/h², the
// regularized N·u_rr.
//
// Time: variable-step leapfrog. Damping uses the centred difference
// (u^{n+1} − u^{n−1})/(dt_n + dt_{n−1}) and is solved pointwise; nonlinear terms use
// u^n and the velocity v^n = (u^n − u^{n−1})/dt_{n−1} + ½ dt_{n−1} a^{n−1}, where
// a^{n−1} is the acceleration realized by the previous step.
//
// Only the support is updated. The discrete front runs a little ahead of the
// cone |x| ≤ t + R with a super-exponentially small precursor; it is carried, not
// cut, and values below kFlushRelative times the initial amplitude are set to 0.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "blowuplab/exponents.hpp"

namespace blowuplab::solver {

enum class ProfileShape { Bump };

/// f = g = exp(1 − 1/(1 − (r/R)²)) on [0, R), zero elsewhere; peak value 1.
struct InitialProfile {
    ProfileShape shape = ProfileShape::Bump;
    /// Rescale so that ∫_{R^N} f dx = 1 instead of max f = 1.
    bool normalize = false;
    double R = 1.0;

    /// Unnormalized shape value at radius r.
    double shape_value(double r) const;
    /// Multiplier applied to shape_value in dimension N.
    double amplitude(int N) const;
    double f(int N, double r) const { return amplitude(N) * shape_value(r); }
    double g(int N, double r) const { return amplitude(N) * shape_value(r); }
};

struct SimConfig {
    exponents::ModelParams params{};
    double eps = 0.1;
    InitialProfile profile{};
    /// Outer radius of the grid.
    double L = 0.0;
    int nr = 0;
    double cfl = 0.5;
    double t_max = 10.0;
    /// Blow-up is declared when max|u| reaches this multiple of the initial maximum.
    double blowup_threshold = 1e6;
    /// Blow-up is also declared when the adaptive step falls below this.
    double dt_min = 1e-10;
    int monitor_stride = 10;

    double h() const { return L / nr; }
    void validate() const;
};

/// Safety factor in dt ≤ η / (max|u|^{q−1} + max|u_t|^{p−1} + 1).
inline constexpr double kStepSafety = 0.5;

/// Values smaller than this multiple of the initial amplitude are flushed to zero.
inline constexpr double kFlushRelative = 1e-30;

/// External source term F(r, t) added to the right-hand side; used to verify the
/// scheme with manufactured solutions. The whole grid is then updated every step.
using Forcing = std::function<double(double r, double t)>;

struct RadialGrid {
    int N = 1;
    double h = 0.0;
    std::vector<double> r;
    /// Cell volumes V_i (without the |S^{N−1}| factor).
    std::vector<double> volume;
    /// Laplacian coefficients: (Lu)_i = c_plus_i (u_{i+1} − u_i) − c_minus_i (u_i − u_{i−1}).
    std::vector<double> c_plus;
    std::vector<double> c_minus;

    RadialGrid() = default;
    RadialGrid(int N, double L, int nr);

    std::size_t size() const { return r.size(); }
};

struct State {
    double t = 0.0;
    /// Size of the step that produced the current level.
    double dt = 0.0;
    std::vector<double> u;
    std::vector<double> u_prev;
    /// Acceleration realized at the previous level.
    std::vector<double> acc;
    std::int64_t step = 0;
    /// Points with index > active are zero.
    std::size_t active = 0;
    RadialGrid grid;
    /// Maximum of |u| in the initial data (blow-up reference amplitude).
    double initial_amplitude = 0.0;
    /// max|u| and max|u_t| at the current level, maintained by build_initial_state
    /// and time_step.
    double max_u = 0.0;
    double max_v = 0.0;
    /// Reused buffer for the next level.
    std::vector<double> scratch;

    /// Reconstructed u_t at the current level.
    double velocity(std::size_t i) const {
        return (u[i] - u_prev[i]) / dt + 0.5 * dt * acc[i];
    }
    std::vector<double> velocity() const;
    double max_abs_u() const { return max_u; }
    double max_abs_velocity() const { return max_v; }
};

State build_initial_state(const SimConfig& cfg, const Forcing* forcing = nullptr);

/// Adaptive step: min(cfl·h, η / (b·max|u|^{q−1} + a·max|u_t|^{p−1} + 1)).
double next_step_size(const State& state, const SimConfig& cfg);

enum class StepStatus { Ok, NonFinite };

/// Advances one step of size dt (defaults to next_step_size).
StepStatus time_step(State& state, const SimConfig& cfg, const Forcing* forcing = nullptr,
                     std::optional<double> dt = std::nullopt);

/// Leapfrog energy ½‖(u^n − u^{n−1})/dt‖²_V + ½ Σ r_{i+½}^{N−1} (Δu^n)(Δu^{n−1})/h,
/// the quantity the linear scheme conserves (μ = 0) or dissipates (μ > 0) exactly.
double discrete_energy(const State& state);

}  // namespace blowuplab::solver
