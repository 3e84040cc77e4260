#include "blowuplab/solver.hpp"

#include <algorithm>
#include <cmath>

#include "blowuplab/errors.hpp"
#include "blowuplab/quadrature.hpp"
#include "blowuplab/specfun.hpp"

namespace blowuplab::solver {

double InitialProfile::shape_value(double r) const {
    const double x = r / R;
    if (!(x < 1.0)) {
        return 0.0;
    }
    return std::exp(1.0 - 1.0 / (1.0 - x * x));
}

double InitialProfile::amplitude(int N) const {
    if (!normalize) {
        return 1.0;
    }
    const auto integrand = [this, N](double r) {
        return shape_value(r) * std::pow(r, N - 1);
    };
    const double mass =
        specfun::sphere_area(N) * integrate_panels(integrand, 0.0, R, 16, gauss_legendre(32));
    return 1.0 / mass;
}

void SimConfig::validate() const {
    params.validate(/*allow_linear=*/true);
    if (!(eps >= 0.0) || !std::isfinite(eps)) {
        throw ConfigError("eps", "must be finite and >= 0");
    }
    if (!(profile.R > 0.0) || !std::isfinite(profile.R)) {
        throw ConfigError("profile.R", "must be finite and > 0");
    }
    if (nr < 64) {
        throw ConfigError("nr", "must be >= 64");
    }
    if (!(cfl > 0.0 && cfl <= 1.0)) {
        throw ConfigError("cfl", "must lie in (0, 1]");
    }
    if (!(t_max > 0.0) || !std::isfinite(t_max)) {
        throw ConfigError("t_max", "must be finite and > 0");
    }
    if (!(L >= t_max + profile.R)) {
        throw ConfigError("L", "must be >= t_max + R (outer boundary outside the support cone)");
    }
    if (!(blowup_threshold > 1.0)) {
        throw ConfigError("blowup_threshold", "must be > 1");
    }
    if (!(dt_min > 0.0)) {
        throw ConfigError("dt_min", "must be > 0");
    }
    if (monitor_stride < 1) {
        throw ConfigError("monitor_stride", "must be >= 1");
    }
}

RadialGrid::RadialGrid(int dim, double L, int nr)
    : N(dim), h(L / nr), r(static_cast<std::size_t>(nr) + 1), volume(r.size()),
      c_plus(r.size()), c_minus(r.size()) {
    const auto face_area = [this](double radius) { return std::pow(radius, N - 1); };
    const auto ball = [this](double radius) { return std::pow(radius, N) / N; };
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = static_cast<double>(i) * h;
        const double outer = r[i] + 0.5 * h;
        const double inner = i == 0 ? 0.0 : r[i] - 0.5 * h;
        volume[i] = ball(outer) - ball(inner);
        c_plus[i] = face_area(outer) / (h * volume[i]);
        c_minus[i] = i == 0 ? 0.0 : face_area(inner) / (h * volume[i]);
    }
}

std::vector<double> State::velocity() const {
    std::vector<double> v(u.size(), 0.0);
    for (std::size_t i = 0; i <= active && i < u.size(); ++i) {
        v[i] = velocity(i);
    }
    return v;
}

namespace {

double laplacian(const RadialGrid& grid, const std::vector<double>& u, std::size_t i) {
    const double outward = grid.c_plus[i] * (u[i + 1] - u[i]);
    const double inward = i == 0 ? 0.0 : grid.c_minus[i] * (u[i] - u[i - 1]);
    return outward - inward;
}

double step_bound(const SimConfig& cfg, double max_u, double max_v) {
    const auto& prm = cfg.params;
    double load = 1.0;
    if (prm.b == 1) {
        load += std::pow(max_u, prm.q - 1.0);
    }
    if (prm.a == 1) {
        load += std::pow(max_v, prm.p - 1.0);
    }
    return std::min(cfg.cfl * cfg.h(), kStepSafety / load);
}

double nonlinear(const exponents::ModelParams& prm, double u, double v) {
    double value = 0.0;
    if (prm.a == 1) {
        value += std::pow(std::abs(v), prm.p);
    }
    if (prm.b == 1) {
        value += std::pow(std::abs(u), prm.q);
    }
    return value;
}

}  // namespace

State build_initial_state(const SimConfig& cfg, const Forcing* forcing) {
    cfg.validate();
    State state;
    state.grid = RadialGrid(cfg.params.N, cfg.L, cfg.nr);
    const auto& grid = state.grid;
    const std::size_t n = grid.size();
    const int N = cfg.params.N;

    std::vector<double> velocity(n, 0.0);
    state.u.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        state.u[i] = cfg.eps * cfg.profile.f(N, grid.r[i]);
        velocity[i] = cfg.eps * cfg.profile.g(N, grid.r[i]);
    }

    double max_u = 0.0;
    double max_v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        max_u = std::max(max_u, std::abs(state.u[i]));
        max_v = std::max(max_v, std::abs(velocity[i]));
    }
    state.initial_amplitude = max_u;
    state.max_u = max_u;
    state.max_v = max_v;
    state.scratch.assign(n, 0.0);
    const double dt = step_bound(cfg, max_u, max_v);

    // Second-order start: a fictitious level u^{−1} = u^0 − dt·u_t + ½dt²·u_tt makes the
    // first leapfrog step agree with a Taylor step and reproduces u_t(0) exactly.
    const double gamma = cfg.params.mu;
    state.acc.assign(n, 0.0);
    state.u_prev.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double acc = laplacian(grid, state.u, i) - gamma * velocity[i] +
                     nonlinear(cfg.params, state.u[i], velocity[i]);
        if (forcing != nullptr) {
            acc += (*forcing)(grid.r[i], 0.0);
        }
        state.acc[i] = acc;
        state.u_prev[i] = state.u[i] - dt * velocity[i] + 0.5 * dt * dt * acc;
    }

    std::size_t active = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (state.u[i] != 0.0 || state.u_prev[i] != 0.0) {
            active = i;
        }
    }
    state.active = forcing != nullptr ? n - 2 : active;
    state.t = 0.0;
    state.dt = dt;
    state.step = 0;
    return state;
}

double next_step_size(const State& state, const SimConfig& cfg) {
    return step_bound(cfg, state.max_abs_u(), state.max_abs_velocity());
}

StepStatus time_step(State& state, const SimConfig& cfg, const Forcing* forcing,
                     std::optional<double> dt_opt) {
    const auto& grid = state.grid;
    const auto& prm = cfg.params;
    const double dt_prev = state.dt;
    const double dt = dt_opt.value_or(next_step_size(state, cfg));
    const double span = dt + dt_prev;
    const double gamma = prm.mu / (1.0 + state.t);
    const double diag = 1.0 / dt + 0.5 * gamma;

    // One cell per step is the stencil's reach; past the current support the new
    // level is computed only where a neighbour is nonzero.
    const std::size_t last = grid.size() - 2;
    const std::size_t end = forcing != nullptr ? last : std::min(state.active + 1, last);
    const double flush = kFlushRelative * state.initial_amplitude;

    auto& next = state.scratch;
    double max_u = 0.0;
    double max_v = 0.0;
    bool finite = true;
    std::size_t support = 0;
    for (std::size_t i = 0; i <= end; ++i) {
        const double u = state.u[i];
        const double drift = (u - state.u_prev[i]) / dt_prev;
        const double v = drift + 0.5 * dt_prev * state.acc[i];
        double rhs = laplacian(grid, state.u, i) + nonlinear(prm, u, v);
        if (forcing != nullptr) {
            rhs += (*forcing)(grid.r[i], state.t);
        }
        double un = (0.5 * span * rhs + drift + u / dt + 0.5 * gamma * state.u_prev[i]) / diag;
        if (std::abs(un) < flush) {
            un = 0.0;
        }
        const double acc = 2.0 / span * ((un - u) / dt - drift);
        next[i] = un;
        state.acc[i] = acc;
        finite = finite && std::isfinite(un);
        if (un != 0.0) {
            support = i;
        }
        max_u = std::max(max_u, std::abs(un));
        max_v = std::max(max_v, std::abs((un - u) / dt + 0.5 * dt * acc));
    }

    // Rotate levels: (u_prev, u, scratch) <- (u, next, u_prev).
    std::swap(state.u_prev, state.u);
    std::swap(state.u, next);
    state.t += dt;
    state.dt = dt;
    state.active = forcing != nullptr ? end : std::max(support, state.active);
    state.max_u = max_u;
    state.max_v = max_v;
    ++state.step;
    return finite ? StepStatus::Ok : StepStatus::NonFinite;
}

double discrete_energy(const State& state) {
    const auto& grid = state.grid;
    double kinetic = 0.0;
    double potential = 0.0;
    const std::size_t n = grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double rate = (state.u[i] - state.u_prev[i]) / state.dt;
        kinetic += grid.volume[i] * rate * rate;
        if (i + 1 < n) {
            const double flux_weight = grid.c_plus[i] * grid.volume[i];
            potential += flux_weight * (state.u[i + 1] - state.u[i]) *
                         (state.u_prev[i + 1] - state.u_prev[i]);
        }
    }
    return 0.5 * (kinetic + potential);
}

}  // namespace blowuplab::solver
