#pragma once

#include <string>
#include <vector>

#include "blowuplab/functionals.hpp"
#include "blowuplab/solver.hpp"

namespace blowuplab::solver {

enum class Outcome { BlowUp, ReachedTmax, Unstable };

std::string_view to_string(Outcome outcome);

struct GridSummary {
    double h = 0.0;
    int nr = 0;
    std::int64_t steps = 0;
    double dt_first = 0.0;
    double dt_smallest = 0.0;
    double t_final = 0.0;
};

struct RunResult {
    Outcome outcome = Outcome::ReachedTmax;
    /// Detected blow-up time; meaningful for Outcome::BlowUp.
    double T_num = 0.0;
    /// Why the run stopped (detector that fired, or the instability).
    std::string reason;
    functionals::MonitorSeries monitors;
    GridSummary grid;
};

/// Steps until blow-up detection, t ≥ t_max, or non-finite values. Snapshots are
/// taken at t = 0, every monitor_stride steps, and at the final level; the
/// residual_F column is filled afterwards. Deterministic for a fixed config.
RunResult run(const SimConfig& cfg);

struct LifespanEstimate {
    double T_est = 0.0;
    double uncertainty = 0.0;
    /// False when the level sequence was not monotonically converging and T_est
    /// fell back to the finest level.
    bool extrapolated = false;
    /// Observed convergence order used for extrapolation (0 when not extrapolated).
    double order = 0.0;
    std::vector<double> level_times;
    /// Finest-level run, kept for monitor post-processing.
    RunResult finest;
};

/// Runs `refine` levels with h, h/2, h/4, ... and Richardson-extrapolates the
/// detected blow-up times. Throws NoBlowUpObserved if any level fails to blow up.
LifespanEstimate measure_lifespan(const SimConfig& cfg, int refine);

/// Config for refinement level k: nr·2^k cells, same monitor_stride (so the
/// monitor spacing halves with h).
SimConfig refined(const SimConfig& cfg, int level);

}  // namespace blowuplab::solver
