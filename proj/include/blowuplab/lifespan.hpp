#pragma once

// ε-sweeps of the measured lifespan and their comparison with the theoretical
// upper bounds T_ε ≤ C ε^{−k} (algebraic) and log T_ε ≤ C ε^{−(p−1)} (exponential).

#include <optional>
#include <string>
#include <vector>

#include "blowuplab/exponents.hpp"
#include "blowuplab/run.hpp"

namespace blowuplab::lifespan {

struct SweepRow {
    double eps = 0.0;
    double T_est = 0.0;
    double uncertainty = 0.0;
    /// "BlowUp", or the outcome that ended the measurement without blow-up.
    std::string outcome;
    bool extrapolated = false;
    /// Horizon used for this row.
    double t_max = 0.0;
    /// Monitors of the finest level (empty unless requested).
    functionals::MonitorSeries monitors;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    solver::SimConfig base;
    exponents::LifespanBound bound;
};

struct SweepOptions {
    int refine = 1;
    int jobs = 1;
    /// Horizon for rows after the first: at least this multiple of the predicted lifespan.
    double horizon_factor = 3.0;
    /// Upper cap on any row's horizon.
    double t_max_limit = 1e4;
    bool keep_monitors = false;
};

/// One row per ε. The largest ε runs first with the base horizon and calibrates
/// the constant of the theoretical law; the remaining rows get horizons scaled
/// from that prediction and run on a pool of `jobs` threads. Rows that end
/// without blow-up are kept and tagged.
SweepResult sweep(const solver::SimConfig& base, const std::vector<double>& eps_list,
                  const SweepOptions& options = {});

enum class FitKind { Power, Exponential };

std::string_view to_string(FitKind kind);

struct FitReport {
    FitKind kind = FitKind::Power;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double theoretical_exponent = 0.0;
    /// |slope + k| / k for power fits; undefined for exponential fits.
    std::optional<double> relative_deviation;
    std::size_t points = 0;
    std::vector<std::string> warnings;
};

/// Least squares of log T_est against log ε over BlowUp rows.
FitReport fit_power_law(const SweepResult& result);

/// Least squares of log T_est against ε^{−(p−1)} over BlowUp rows.
FitReport fit_exponential_law(const SweepResult& result, double p);

enum class Verdict { Consistent, Inconclusive, Inconsistent };

std::string_view to_string(Verdict verdict);

struct VerdictRecord {
    Verdict verdict = Verdict::Inconclusive;
    double tau = 0.25;
    double measured = 0.0;
    double expected = 0.0;
    std::string note;
};

/// Power fits: consistent if |slope| ∈ [(1−τ)k, (1+τ)k], inconsistent if
/// |slope| > (1+τ)k, inconclusive otherwise. Exponential fits carry no
/// theoretical constant: consistent if slope > 0 and r² ≥ 1 − τ, else
/// inconclusive. Throws std::invalid_argument if the fit and bound kinds differ.
VerdictRecord compare_to_theory(const FitReport& fit, const exponents::LifespanBound& bound,
                                double tau = 0.25);

/// True if T_est strictly decreases in ε across consecutive BlowUp rows.
bool lifespans_monotone(const SweepResult& result);

}  // namespace blowuplab::lifespan
