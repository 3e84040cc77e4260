#include "blowuplab/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "blowuplab/config_io.hpp"
#include "blowuplab/errors.hpp"
#include "blowuplab/specfun_check.hpp"

namespace blowuplab::cli {

namespace fs = std::filesystem;
using io::json;

namespace {

constexpr double kResidualLimit = 0.05;
constexpr double kResidualWindow = 0.8;
constexpr std::size_t kLemmaSamples = 50;

std::string pretty(const json& j) {
    return j.dump(2) + "\n";
}

json finite_or_null(double value) {
    return std::isfinite(value) ? json(value) : json(nullptr);
}

json load_config(const fs::path& path) {
    if (path.empty()) {
        throw ConfigError("--config", "required for this subcommand");
    }
    if (!fs::is_regular_file(path)) {
        throw ConfigError("--config", "no such file: " + path.string());
    }
    return io::read_json_file(path);
}

exponents::ModelParams classify_params(const json& j) {
    if (!j.is_object()) {
        throw ConfigError("", "config must be a JSON object");
    }
    if (!j.contains("params")) {
        return io::params_from_json(j, "");
    }
    if (j.size() == 1) {
        return io::params_from_json(j.at("params"));
    }
    return io::sim_config_from_json(j).params;
}

int classify(const Command& cmd, std::ostream& out) {
    const auto params = classify_params(load_config(cmd.config));
    const auto region = exponents::classify(params);
    const double d = params.N + params.mu;

    const auto threshold = [](auto&& f) -> json {
        try {
            return finite_or_null(f());
        } catch (const DomainError&) {
            return nullptr;
        }
    };
    json thresholds{
        {"p_G", threshold([&] { return exponents::glassey_exponent(d); })},
        {"q_S", threshold([&] { return exponents::strauss_exponent(d); })},
        {"lambda", threshold([&] { return exponents::lambda_combined(params.p, params.q, d); })},
        {"mu_star", threshold([&] { return exponents::mu_star(params.p, params.q, params.N); })}};

    json lifespan;
    try {
        lifespan = io::to_json(exponents::lifespan_exponent(params));
    } catch (const NoTheoremError& e) {
        lifespan = {{"kind", "none"}, {"exponent", nullptr}, {"diagnostic", e.what()}};
    }
    out << pretty({{"classification", std::string(exponents::to_string(region))},
                   {"params", io::to_json(params)},
                   {"thresholds", thresholds},
                   {"lifespan", lifespan}});
    return kExitOk;
}

int specfun_check(const Command& cmd, std::ostream& out, std::ostream& err) {
    const auto rows = specfun::run_property_checks();
    std::size_t failed = 0;
    out << "check,point,value,limit,pass\n";
    for (const auto& row : rows) {
        out << row.check << ',' << row.point << ',' << io::format_number(row.value) << ','
            << io::format_number(row.limit) << ',' << (row.pass ? "true" : "false") << '\n';
        failed += row.pass ? 0 : 1;
    }
    if (failed > 0) {
        err << failed << " of " << rows.size() << " checks failed\n";
        return kExitFailure;
    }
    if (cmd.verbosity > 0) {
        err << rows.size() << " checks passed\n";
    }
    return kExitOk;
}

std::string elapsed_since(std::chrono::steady_clock::time_point start) {
    const auto seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream s;
    s.precision(3);
    s << std::fixed << seconds << " s";
    return s.str();
}

int solve(const Command& cmd, std::ostream& out, std::ostream& err) {
    const auto cfg = io::sim_config_from_json(load_config(cmd.config));
    const auto start = std::chrono::steady_clock::now();
    const auto result = solver::run(cfg);

    json manifest = io::run_manifest(cfg, result);
    manifest["kind"] = "solve";
    const fs::path dir = cmd.out / manifest.at("config_hash").get<std::string>();
    fs::create_directories(dir);
    io::write_text(dir / "series.csv", io::monitor_csv(result.monitors));
    io::write_text(dir / "manifest.json", pretty(manifest));

    std::ostringstream log;
    log << io::kToolVersion << '\n'
        << "outcome " << solver::to_string(result.outcome) << '\n'
        << "reason " << result.reason << '\n'
        << "T_num " << io::format_number(result.T_num) << '\n'
        << "steps " << result.grid.steps << '\n'
        << "wall " << elapsed_since(start) << '\n';
    io::write_text(dir / "run.log", log.str());

    if (cmd.verbosity > 0) {
        err << solver::to_string(result.outcome) << ": " << result.reason << '\n';
    }
    out << dir.string() << '\n';
    return result.outcome == solver::Outcome::Unstable ? kExitFailure : kExitOk;
}

json lemma31_block(const specfun::TestFunctionContext& ctx,
                   const functionals::MonitorSeries& series, double t_end) {
    std::vector<double> times;
    for (const auto& row : series) {
        if (row.t <= t_end) {
            times.push_back(row.t);
        }
    }
    if (times.size() > kLemmaSamples) {
        std::vector<double> picked;
        for (std::size_t k = 0; k < kLemmaSamples; ++k) {
            picked.push_back(times[k * (times.size() - 1) / (kLemmaSamples - 1)]);
        }
        times = std::move(picked);
    }
    double max_ratio = 0.0;
    double min_ratio = std::numeric_limits<double>::infinity();
    for (double t : times) {
        const double ratio = functionals::lemma31_ratio(ctx, t, 2.0);
        max_ratio = std::max(max_ratio, ratio);
        min_ratio = std::min(min_ratio, ratio);
    }
    return {{"r_exp", 2.0},
            {"samples", times.size()},
            {"max_ratio", finite_or_null(max_ratio)},
            {"min_ratio", finite_or_null(min_ratio)}};
}

int verify(const Command& cmd, std::ostream& out, std::ostream& err) {
    const fs::path dir = cmd.run_dir;
    if (!fs::is_regular_file(dir / "manifest.json") || !fs::is_regular_file(dir / "series.csv")) {
        throw ConfigError("run_dir", "not a run directory: " + dir.string());
    }
    const json manifest = io::read_json_file(dir / "manifest.json");
    if (!manifest.contains("config")) {
        throw ConfigError("config", "manifest has no config echo");
    }
    const auto cfg = io::sim_config_from_json(manifest.at("config"));
    const auto series = io::parse_monitor_csv(io::read_text(dir / "series.csv"));
    if (series.empty()) {
        throw ConfigError("series.csv", "no monitor rows");
    }
    const bool blew_up = manifest.contains("T_num") && manifest.at("T_num").is_number();
    const double t_end = blew_up ? manifest.at("T_num").get<double>() : series.back().t;
    const specfun::TestFunctionContext ctx{cfg.params.N, cfg.params.mu, cfg.profile.R, {}};

    json report{{"run", manifest.at("config_hash")}, {"eps", cfg.eps}};
    bool pass = true;

    try {
        const auto residual = functionals::residual_F(series, cfg.params);
        const double max_rel =
            functionals::max_relative_residual(residual, series, kResidualWindow * t_end);
        const bool ok = max_rel < kResidualLimit;
        report["residual_F"] = {{"max_rel", max_rel},
                                {"t_limit", kResidualWindow * t_end},
                                {"limit", kResidualLimit},
                                {"pass", ok}};
        pass = pass && ok;
    } catch (const InsufficientData& e) {
        report["residual_F"] = {{"max_rel", nullptr}, {"pass", false}, {"note", e.what()}};
        pass = false;
    }

    try {
        const auto coercivity = functionals::coercivity_report(series, cfg.eps);
        const bool ok = !coercivity.violation;
        report["coercivity"] = {{"minG1_over_eps", coercivity.min_G1_over_eps},
                                {"minG2_over_eps", coercivity.min_G2_over_eps},
                                {"t_lo", coercivity.t_lo},
                                {"t_hi", coercivity.t_hi},
                                {"pass", ok}};
        pass = pass && ok;
    } catch (const InsufficientData& e) {
        report["coercivity"] = {{"minG1_over_eps", nullptr},
                                {"minG2_over_eps", nullptr},
                                {"pass", nullptr},
                                {"note", e.what()}};
    }

    report["lemma31"] = lemma31_block(ctx, series, t_end);
    report["pass"] = pass;

    io::write_text(dir / "verify.json", pretty(report));
    out << pretty(report);
    if (!pass && cmd.verbosity > 0) {
        err << "verification failed for " << dir.string() << '\n';
    }
    return pass ? kExitOk : kExitFailure;
}

int sweep(const Command& cmd, std::ostream& out, std::ostream& err) {
    auto cfg = io::sweep_config_from_json(load_config(cmd.config));
    if (cmd.jobs) {
        if (*cmd.jobs < 1) {
            throw ConfigError("--jobs", "must be >= 1");
        }
        cfg.options.jobs = *cmd.jobs;
    }
    if (cmd.refine) {
        cfg.options.refine = *cmd.refine;
    }
    if (cmd.tau) {
        if (!(*cmd.tau > 0.0 && *cmd.tau < 1.0)) {
            throw ConfigError("--tau", "must lie in (0, 1)");
        }
        cfg.tau = *cmd.tau;
    }

    const auto start = std::chrono::steady_clock::now();
    const auto result = lifespan::sweep(cfg.base, cfg.eps_list, cfg.options);

    const json config = io::to_json(cfg);
    const std::string hash = io::config_hash(config);
    const fs::path dir = cmd.out / hash;
    fs::create_directories(dir);
    io::write_text(dir / "sweep.csv", io::sweep_csv(result));

    json fit_json{{"bound", io::to_json(result.bound)},
                  {"monotone", lifespan::lifespans_monotone(result)}};
    int code = kExitOk;
    try {
        const bool exponential = result.bound.kind == exponents::BoundKind::Exponential;
        const auto fit = exponential ? lifespan::fit_exponential_law(result, cfg.base.params.p)
                                     : lifespan::fit_power_law(result);
        fit_json["fit"] = io::to_json(fit);
        if (result.bound.kind == exponents::BoundKind::None) {
            fit_json["verdict"] = io::to_json(lifespan::VerdictRecord{
                lifespan::Verdict::Inconclusive, cfg.tau, fit.slope, 0.0,
                "no lifespan exponent to compare against"});
        } else {
            const auto verdict = lifespan::compare_to_theory(fit, result.bound, cfg.tau);
            fit_json["verdict"] = io::to_json(verdict);
            if (verdict.verdict == lifespan::Verdict::Inconsistent) {
                code = kExitFailure;
            }
        }
    } catch (const InsufficientData& e) {
        fit_json["fit"] = nullptr;
        fit_json["verdict"] = nullptr;
        fit_json["error"] = e.what();
        code = kExitFailure;
    }
    io::write_text(dir / "fit.json", pretty(fit_json));

    std::size_t blowups = 0;
    for (const auto& row : result.rows) {
        blowups += row.outcome == "BlowUp" ? 1 : 0;
    }
    json manifest{{"tool_version", io::kToolVersion},
                  {"kind", "sweep"},
                  {"config", config},
                  {"config_hash", hash},
                  {"rows", result.rows.size()},
                  {"blowup_rows", blowups}};
    io::write_text(dir / "manifest.json", pretty(manifest));

    std::ostringstream log;
    log << io::kToolVersion << '\n'
        << "rows " << result.rows.size() << " blowup " << blowups << '\n'
        << "jobs " << cfg.options.jobs << '\n'
        << "wall " << elapsed_since(start) << '\n';
    io::write_text(dir / "run.log", log.str());

    if (cmd.verbosity > 0) {
        err << pretty(fit_json);
    }
    out << dir.string() << '\n';
    return code;
}

std::string cell(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) {
        return "";
    }
    const auto& v = j.at(key);
    if (v.is_number()) {
        return io::format_number(v.get<double>());
    }
    if (v.is_string()) {
        return v.get<std::string>();
    }
    return v.dump();
}

int report(const Command& cmd, std::ostream& out, std::ostream& err) {
    if (!fs::is_directory(cmd.out)) {
        throw ConfigError("--out", "no such directory: " + cmd.out.string());
    }
    std::map<std::string, std::string> lines;
    for (const auto& entry : fs::directory_iterator(cmd.out)) {
        const fs::path manifest_path = entry.path() / "manifest.json";
        if (!entry.is_directory() || !fs::is_regular_file(manifest_path)) {
            continue;
        }
        json manifest;
        try {
            manifest = io::read_json_file(manifest_path);
        } catch (const ConfigError& e) {
            err << "skipping " << manifest_path.string() << ": " << e.what() << '\n';
            continue;
        }
        const std::string kind = manifest.value("kind", "solve");
        const json& config = manifest.contains("config") ? manifest.at("config") : json::object();
        const json& base = kind == "sweep" && config.contains("base") ? config.at("base") : config;
        const json params = base.contains("params") ? base.at("params") : json::object();

        std::string slope;
        std::string verdict;
        if (kind == "sweep" && fs::is_regular_file(entry.path() / "fit.json")) {
            const json fit = io::read_json_file(entry.path() / "fit.json");
            slope = cell(fit.value("fit", json()), "slope");
            verdict = cell(fit.value("verdict", json()), "verdict");
        }
        std::ostringstream line;
        line << cell(manifest, "config_hash") << ',' << kind << ',' << cell(params, "N") << ','
             << cell(params, "mu") << ',' << cell(params, "p") << ',' << cell(params, "q") << ','
             << cell(params, "a") << ',' << cell(params, "b") << ','
             << (kind == "sweep" ? "" : cell(base, "eps")) << ',' << cell(base, "nr") << ','
             << cell(manifest, "outcome") << ',' << cell(manifest, "T_num") << ',' << slope << ','
             << verdict;
        lines[cell(manifest, "config_hash") + kind] = line.str();
    }

    std::ostringstream csv;
    csv << "config_hash,kind,N,mu,p,q,a,b,eps,nr,outcome,T_num,slope,verdict\n";
    for (const auto& [key, line] : lines) {
        csv << line << '\n';
    }
    io::write_text(cmd.out / "summary.csv", csv.str());
    out << csv.str();
    return kExitOk;
}

}  // namespace

int dispatch(const Command& cmd, std::ostream& out, std::ostream& err) {
    try {
        switch (cmd.subcommand) {
            case Subcommand::Classify:
                return classify(cmd, out);
            case Subcommand::SpecfunCheck:
                return specfun_check(cmd, out, err);
            case Subcommand::Solve:
                return solve(cmd, out, err);
            case Subcommand::Verify:
                return verify(cmd, out, err);
            case Subcommand::Sweep:
                return sweep(cmd, out, err);
            case Subcommand::Report:
                return report(cmd, out, err);
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NoTheoremError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitFailure;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical blow-up laboratory for damped semilinear wave equations", "blowuplab"};
    app.require_subcommand(1);

    Command cmd;
    if (const char* env = std::getenv("BLOWUPLAB_OUT"); env != nullptr && *env != '\0') {
        cmd.out = env;
    }
    std::string config;
    std::string out_dir;
    std::string run_dir;
    bool quiet = false;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_flag("--quiet,-q", quiet, "Suppress progress messages");
    };
    const auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config,-c", config, "JSON config file")->required();
    };
    const auto add_out = [&](CLI::App* sub) {
        sub->add_option("--out,-o", out_dir, "Output directory (default $BLOWUPLAB_OUT or runs)");
    };

    struct Entry {
        CLI::App* app;
        Subcommand kind;
    };
    std::vector<Entry> subs;

    auto* classify_cmd = app.add_subcommand("classify", "Blow-up region and lifespan exponent");
    add_config(classify_cmd);
    add_common(classify_cmd);
    subs.push_back({classify_cmd, Subcommand::Classify});

    auto* check_cmd = app.add_subcommand("specfun-check", "Special-function property table (CSV)");
    add_common(check_cmd);
    subs.push_back({check_cmd, Subcommand::SpecfunCheck});

    auto* solve_cmd = app.add_subcommand("solve", "Single run with CSV/JSON artifacts");
    add_config(solve_cmd);
    add_out(solve_cmd);
    add_common(solve_cmd);
    subs.push_back({solve_cmd, Subcommand::Solve});

    auto* verify_cmd = app.add_subcommand("verify", "Functional verification of a run directory");
    verify_cmd->add_option("run_dir", run_dir, "Directory written by solve")->required();
    add_common(verify_cmd);
    subs.push_back({verify_cmd, Subcommand::Verify});

    auto* sweep_cmd = app.add_subcommand("sweep", "Lifespan sweep over eps with fits");
    add_config(sweep_cmd);
    add_out(sweep_cmd);
    add_common(sweep_cmd);
    int jobs = 0;
    double tau = 0.0;
    int refine = 0;
    auto* jobs_opt = sweep_cmd->add_option("--jobs,-j", jobs, "Worker threads");
    auto* tau_opt = sweep_cmd->add_option("--tau", tau, "Verdict tolerance");
    auto* refine_opt = sweep_cmd->add_option("--refine", refine, "Grid levels per row");
    subs.push_back({sweep_cmd, Subcommand::Sweep});

    auto* report_cmd = app.add_subcommand("report", "Summary CSV over the output directory");
    add_out(report_cmd);
    add_common(report_cmd);
    subs.push_back({report_cmd, Subcommand::Report});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    for (const auto& entry : subs) {
        if (entry.app->parsed()) {
            cmd.subcommand = entry.kind;
        }
    }
    cmd.config = config;
    cmd.run_dir = run_dir;
    if (!out_dir.empty()) {
        cmd.out = out_dir;
    }
    if (jobs_opt->count() > 0) {
        cmd.jobs = jobs;
    }
    if (tau_opt->count() > 0) {
        cmd.tau = tau;
    }
    if (refine_opt->count() > 0) {
        cmd.refine = refine;
    }
    cmd.verbosity = quiet ? 0 : 1;
    return dispatch(cmd, out, err);
}

}  // namespace blowuplab::cli
