#include "blowuplab/run.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blowuplab/errors.hpp"

namespace blowuplab::solver {

std::string_view to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::BlowUp: return "BlowUp";
        case Outcome::ReachedTmax: return "ReachedTmax";
        case Outcome::Unstable: return "Unstable";
    }
    return "Unstable";
}

RunResult run(const SimConfig& cfg) {
    State state = build_initial_state(cfg);
    const specfun::TestFunctionContext ctx{cfg.params.N, cfg.params.mu, cfg.profile.R, {}};
    const functionals::SnapshotWorkspace workspace(state.grid, ctx);

    RunResult result;
    result.grid.h = cfg.h();
    result.grid.nr = cfg.nr;
    result.grid.dt_first = state.dt;
    result.grid.dt_smallest = state.dt;

    auto record = [&] {
        result.monitors.push_back(functionals::compute_snapshot(state, workspace, cfg.params));
    };
    record();

    const double amplitude_limit = cfg.blowup_threshold * state.initial_amplitude;
    bool recorded_last = true;
    while (true) {
        if (state.t >= cfg.t_max) {
            result.outcome = Outcome::ReachedTmax;
            result.reason = "reached t_max";
            break;
        }
        const double dt = next_step_size(state, cfg);
        if (dt < cfg.dt_min) {
            result.outcome = Outcome::BlowUp;
            result.T_num = state.t;
            result.reason = "adaptive step fell below dt_min";
            break;
        }
        if (time_step(state, cfg, nullptr, dt) != StepStatus::Ok) {
            result.outcome = Outcome::Unstable;
            result.reason = "non-finite values at t = " + std::to_string(state.t);
            recorded_last = true;  // a snapshot of non-finite data carries no information
            break;
        }
        result.grid.dt_smallest = std::min(result.grid.dt_smallest, dt);
        recorded_last = false;
        if (state.initial_amplitude > 0.0 && state.max_abs_u() >= amplitude_limit) {
            result.outcome = Outcome::BlowUp;
            result.T_num = state.t;
            result.reason = "max|u| exceeded blowup_threshold times the initial amplitude";
            break;
        }
        if (state.step % cfg.monitor_stride == 0) {
            record();
            recorded_last = true;
        }
    }
    if (!recorded_last) {
        record();
    }
    result.grid.steps = state.step;
    result.grid.t_final = state.t;

    if (result.monitors.size() >= 5) {
        const auto report = functionals::residual_F(result.monitors, cfg.params);
        for (std::size_t i = 0; i < result.monitors.size(); ++i) {
            result.monitors[i].residual_F = report.residual[i];
        }
    }
    return result;
}

SimConfig refined(const SimConfig& cfg, int level) {
    SimConfig out = cfg;
    out.nr = cfg.nr << level;
    return out;
}

LifespanEstimate measure_lifespan(const SimConfig& cfg, int refine) {
    if (refine < 1) {
        throw ConfigError("refine", "must be >= 1");
    }
    cfg.validate();
    LifespanEstimate estimate;
    for (int level = 0; level < refine; ++level) {
        RunResult result = run(refined(cfg, level));
        if (result.outcome != Outcome::BlowUp) {
            throw NoBlowUpObserved(std::string(to_string(result.outcome)),
                                   "no blow-up observed at refinement level " +
                                       std::to_string(level) + " (" + result.reason + ")");
        }
        estimate.level_times.push_back(result.T_num);
        if (level + 1 == refine) {
            estimate.finest = std::move(result);
        }
    }

    const auto& times = estimate.level_times;
    const std::size_t n = times.size();
    estimate.T_est = times.back();
    if (n == 1) {
        return estimate;
    }
    const double last_diff = times[n - 1] - times[n - 2];
    estimate.uncertainty = std::abs(last_diff);
    if (n == 2) {
        // Two levels: assume the scheme's second order.
        estimate.order = 2.0;
        estimate.T_est = times[1] + last_diff / 3.0;
        estimate.extrapolated = true;
        return estimate;
    }
    const double prev_diff = times[n - 2] - times[n - 3];
    const bool monotone = last_diff * prev_diff > 0.0 && std::abs(last_diff) < std::abs(prev_diff);
    if (!monotone) {
        return estimate;
    }
    estimate.order = std::clamp(std::log2(prev_diff / last_diff), 0.5, 4.0);
    estimate.T_est = times[n - 1] + last_diff / (std::pow(2.0, estimate.order) - 1.0);
    estimate.extrapolated = true;
    return estimate;
}

}  // namespace blowuplab::solver
