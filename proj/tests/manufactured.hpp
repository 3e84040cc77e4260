#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "blowuplab/solver.hpp"

namespace testing {

namespace exponents = blowuplab::exponents;
namespace solver = blowuplab::solver;

// u*(r,t) = e^{−t} cos(πr/L)(1 − (r/L)²)², with the forcing that makes it exact.
struct Manufactured {
    exponents::ModelParams params;
    double L;

    double shape(double r) const {
        const double w = 1.0 - r * r / (L * L);
        return std::cos(std::numbers::pi * r / L) * w * w;
    }
    double exact(double r, double t) const { return std::exp(-t) * shape(r); }

    // f = c·W with c = cos(kr), W = (1 − r²/L²)²; returns f'' + (N−1)/r f'.
    double laplacian_shape(double r) const {
        const double k = std::numbers::pi / L;
        const double c = std::cos(k * r);
        const double s = std::sin(k * r);
        const double w = 1.0 - r * r / (L * L);
        const double W = w * w;
        const double W1 = -4.0 * r / (L * L) * w;
        const double W2 = 8.0 * r * r / (L * L * L * L) - 4.0 / (L * L) * w;
        const double f2 = -k * k * c * W - 2.0 * k * s * W1 + c * W2;
        if (r == 0.0) {
            return params.N * f2;
        }
        const double f1 = -k * s * W + c * W1;
        return f2 + (params.N - 1) / r * f1;
    }

    double forcing(double r, double t) const {
        const double e = std::exp(-t);
        const double u = e * shape(r);
        const double ut = -u;
        const double utt = u;
        double value = utt - e * laplacian_shape(r) + params.mu / (1.0 + t) * ut;
        if (params.a == 1) {
            value -= std::pow(std::abs(ut), params.p);
        }
        if (params.b == 1) {
            value -= std::pow(std::abs(u), params.q);
        }
        return value;
    }
};

/// L² error at t = 1 of the forced run started from the exact solution on [0, 2].
inline double manufactured_error(const exponents::ModelParams& params, int nr) {
    solver::SimConfig cfg;
    cfg.params = params;
    cfg.eps = 0.0;
    cfg.L = 2.0;
    cfg.nr = nr;
    cfg.t_max = 1.0;
    cfg.cfl = 0.5;
    const Manufactured m{params, cfg.L};
    const solver::Forcing forcing = [&m](double r, double t) { return m.forcing(r, t); };

    solver::State state = solver::build_initial_state(cfg, &forcing);
    const double dt = cfg.cfl * cfg.h();
    const auto& r = state.grid.r;
    for (std::size_t i = 0; i < r.size(); ++i) {
        state.u[i] = m.exact(r[i], 0.0);
        state.u_prev[i] = m.exact(r[i], -dt);
        state.acc[i] = m.exact(r[i], -dt);
    }
    state.dt = dt;
    state.initial_amplitude = 1.0;
    state.max_u = 1.0;
    state.max_v = std::exp(dt);

    const int steps = static_cast<int>(std::lround(cfg.t_max / dt));
    for (int n = 0; n < steps; ++n) {
        if (solver::time_step(state, cfg, &forcing, dt) != solver::StepStatus::Ok) {
            throw std::runtime_error("manufactured run failed to step");
        }
    }
    double err = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double d = state.u[i] - m.exact(r[i], state.t);
        err += state.grid.volume[i] * d * d;
    }
    return std::sqrt(err);
}

}  // namespace testing
