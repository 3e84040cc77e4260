#include "blowuplab/lifespan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "blowuplab/errors.hpp"

namespace blowuplab::lifespan {

namespace {

SweepRow measure_row(const solver::SimConfig& cfg, int refine, bool keep_monitors) {
    SweepRow row;
    row.eps = cfg.eps;
    row.t_max = cfg.t_max;
    try {
        auto estimate = solver::measure_lifespan(cfg, refine);
        row.T_est = estimate.T_est;
        row.uncertainty = estimate.uncertainty;
        row.extrapolated = estimate.extrapolated;
        row.outcome = "BlowUp";
        if (keep_monitors) {
            row.monitors = std::move(estimate.finest.monitors);
        }
    } catch (const NoBlowUpObserved& e) {
        row.outcome = e.outcome();
    }
    return row;
}

solver::SimConfig with_horizon(const solver::SimConfig& base, double eps, double horizon) {
    solver::SimConfig cfg = base;
    const double h = base.h();
    const double margin = base.L - base.t_max;
    cfg.eps = eps;
    cfg.t_max = horizon;
    cfg.nr = static_cast<int>(std::ceil((horizon + margin) / h - 1e-9));
    cfg.L = cfg.nr * h;
    return cfg;
}

}  // namespace

SweepResult sweep(const solver::SimConfig& base, const std::vector<double>& eps_list,
                  const SweepOptions& options) {
    if (eps_list.size() < 3) {
        throw ConfigError("eps_list", "needs at least 3 values");
    }
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0.0) || !std::isfinite(eps_list[i])) {
            throw ConfigError("eps_list", "every eps must be finite and > 0");
        }
        if (i > 0 && !(eps_list[i] < eps_list[i - 1])) {
            throw ConfigError("eps_list", "values must be strictly decreasing");
        }
    }
    if (options.refine < 1) {
        throw ConfigError("refine", "must be >= 1");
    }
    base.validate();

    SweepResult result;
    result.base = base;
    result.bound = exponents::lifespan_exponent(base.params);
    result.rows.resize(eps_list.size());

    const double eps0 = eps_list.front();
    result.rows[0] = measure_row(with_horizon(base, eps0, base.t_max), options.refine,
                                 options.keep_monitors);

    // Horizons for the remaining rows come from the theoretical law calibrated on row 0.
    const auto& first = result.rows[0];
    const bool calibrated = first.outcome == "BlowUp";
    const auto horizon_for = [&](double eps) {
        if (!calibrated) {
            return base.t_max;
        }
        const double T0 = first.T_est;
        const double k = result.bound.exponent;
        double predicted = T0;
        switch (result.bound.kind) {
            case exponents::BoundKind::Algebraic:
                predicted = T0 * std::pow(eps / eps0, -k);
                break;
            case exponents::BoundKind::Exponential: {
                const double constant = std::max(std::log(T0), 1.0) * std::pow(eps0, k);
                predicted = std::exp(std::min(constant * std::pow(eps, -k), 700.0));
                break;
            }
            case exponents::BoundKind::None:
                break;
        }
        const double wanted = options.horizon_factor * predicted;
        return std::max(base.t_max, std::min(wanted, options.t_max_limit));
    };

    std::vector<solver::SimConfig> configs;
    for (std::size_t i = 1; i < eps_list.size(); ++i) {
        configs.push_back(with_horizon(base, eps_list[i], horizon_for(eps_list[i])));
    }

    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t k = next++; k < configs.size(); k = next++) {
            result.rows[k + 1] = measure_row(configs[k], options.refine, options.keep_monitors);
        }
    };
    const auto jobs = static_cast<std::size_t>(std::max(1, options.jobs));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t j = 0; j < std::min(jobs, configs.size()); ++j) {
            pool.emplace_back(worker);
        }
    }
    return result;
}

std::string_view to_string(FitKind kind) {
    return kind == FitKind::Power ? "power" : "exponential";
}

std::string_view to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::Consistent: return "consistent";
        case Verdict::Inconclusive: return "inconclusive";
        case Verdict::Inconsistent: return "inconsistent";
    }
    return "inconclusive";
}

namespace {

struct LineFit {
    double slope;
    double intercept;
    double r_squared;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0)) {
        throw InsufficientData("regression: abscissae are all equal");
    }
    LineFit fit{};
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += r * r;
    }
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    return fit;
}

template <typename Abscissa>
FitReport fit_rows(const SweepResult& result, FitKind kind, Abscissa&& abscissa) {
    FitReport report;
    report.kind = kind;
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& row : result.rows) {
        if (row.outcome != "BlowUp" || !(row.T_est > 0.0)) {
            report.warnings.push_back("row eps=" + std::to_string(row.eps) + " excluded (" +
                                      row.outcome + ")");
            continue;
        }
        x.push_back(abscissa(row.eps));
        y.push_back(std::log(row.T_est));
    }
    if (x.size() < 3) {
        throw InsufficientData("fit needs at least 3 BlowUp rows, have " + std::to_string(x.size()));
    }
    const LineFit line = least_squares(x, y);
    report.slope = line.slope;
    report.intercept = line.intercept;
    report.r_squared = line.r_squared;
    report.points = x.size();
    return report;
}

}  // namespace

FitReport fit_power_law(const SweepResult& result) {
    FitReport report = fit_rows(result, FitKind::Power, [](double eps) { return std::log(eps); });
    if (result.bound.kind == exponents::BoundKind::Algebraic) {
        const double k = result.bound.exponent;
        report.theoretical_exponent = k;
        report.relative_deviation = std::abs(report.slope + k) / k;
    }
    return report;
}

FitReport fit_exponential_law(const SweepResult& result, double p) {
    FitReport report = fit_rows(result, FitKind::Exponential,
                                [p](double eps) { return std::pow(eps, -(p - 1.0)); });
    report.theoretical_exponent = p - 1.0;
    return report;
}

VerdictRecord compare_to_theory(const FitReport& fit, const exponents::LifespanBound& bound,
                                double tau) {
    const bool matches = (fit.kind == FitKind::Power && bound.kind == exponents::BoundKind::Algebraic) ||
                         (fit.kind == FitKind::Exponential &&
                          bound.kind == exponents::BoundKind::Exponential);
    if (!matches) {
        throw std::invalid_argument("compare_to_theory: " + std::string(to_string(fit.kind)) +
                                    " fit cannot be compared with a " +
                                    std::string(exponents::to_string(bound.kind)) + " bound");
    }
    VerdictRecord record;
    record.tau = tau;
    record.expected = bound.exponent;
    if (fit.kind == FitKind::Exponential) {
        record.measured = fit.slope;
        const bool good = fit.slope > 0.0 && fit.r_squared >= 1.0 - tau;
        record.verdict = good ? Verdict::Consistent : Verdict::Inconclusive;
        record.note = "exponential law: the rate is fixed by the regression; only the sign of C "
                      "and the fit quality are checked";
        return record;
    }
    const double k = bound.exponent;
    record.measured = std::abs(fit.slope);
    if (record.measured > (1.0 + tau) * k) {
        record.verdict = Verdict::Inconsistent;
        record.note = "measured lifespan grows faster than the upper bound allows as eps -> 0";
    } else if (record.measured >= (1.0 - tau) * k) {
        record.verdict = Verdict::Consistent;
    } else {
        record.verdict = Verdict::Inconclusive;
        record.note = "slower growth than the bound exponent does not contradict an upper bound";
    }
    return record;
}

bool lifespans_monotone(const SweepResult& result) {
    const SweepRow* previous = nullptr;
    for (const auto& row : result.rows) {
        if (row.outcome != "BlowUp") {
            continue;
        }
        if (previous != nullptr && !(row.T_est > previous->T_est)) {
            return false;
        }
        previous = &row;
    }
    return true;
}

}  // namespace blowuplab::lifespan
