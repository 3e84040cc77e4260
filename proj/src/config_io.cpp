#include "blowuplab/config_io.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "blowuplab/errors.hpp"

namespace blowuplab::io {

namespace {

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const json& j, const std::string& prefix, const std::set<std::string>& allowed) {
    if (!j.is_object()) {
        throw ConfigError(prefix, "expected a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError(join(prefix, key), "unknown key");
        }
    }
}

const json& require(const json& j, const std::string& prefix, const std::string& key) {
    if (!j.contains(key)) {
        throw ConfigError(join(prefix, key), "missing required key");
    }
    return j.at(key);
}

double number(const json& value, const std::string& name) {
    if (!value.is_number()) {
        throw ConfigError(name, "expected a number, got " + std::string(value.type_name()));
    }
    return value.get<double>();
}

int integer(const json& value, const std::string& name) {
    if (value.is_number_integer()) {
        return value.get<int>();
    }
    if (value.is_number_float()) {
        const double d = value.get<double>();
        if (std::floor(d) == d && std::abs(d) < 1e9) {
            return static_cast<int>(d);
        }
    }
    throw ConfigError(name, "expected an integer, got " + value.dump());
}

double number_or(const json& j, const std::string& prefix, const std::string& key, double fallback) {
    return j.contains(key) ? number(j.at(key), join(prefix, key)) : fallback;
}

int integer_or(const json& j, const std::string& prefix, const std::string& key, int fallback) {
    return j.contains(key) ? integer(j.at(key), join(prefix, key)) : fallback;
}

// Walks the text with a SAX handler to name the key under which parsing failed.
class KeyTracker : public nlohmann::json_sax<json> {
public:
    bool null() override { return value(); }
    bool boolean(bool) override { return value(); }
    bool number_integer(number_integer_t) override { return value(); }
    bool number_unsigned(number_unsigned_t) override { return value(); }
    bool number_float(number_float_t, const string_t&) override { return value(); }
    bool string(string_t&) override { return value(); }
    bool binary(binary_t&) override { return value(); }
    bool start_object(std::size_t) override {
        path_.push_back({});
        return true;
    }
    bool key(string_t& k) override {
        path_.back() = k;
        return true;
    }
    bool end_object() override {
        path_.pop_back();
        return value();
    }
    bool start_array(std::size_t) override {
        path_.push_back({});
        return true;
    }
    bool end_array() override {
        path_.pop_back();
        return value();
    }
    bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception& e) override {
        message_ = e.what();
        return false;
    }

    std::string where() const {
        std::string out;
        for (const auto& part : path_) {
            if (!part.empty()) {
                out = join(out, part);
            }
        }
        return out;
    }
    const std::string& message() const { return message_; }

private:
    static bool value() { return true; }

    std::vector<std::string> path_;
    std::string message_;
};

}  // namespace

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        KeyTracker tracker;
        json::sax_parse(text, &tracker);
        throw ConfigError(tracker.where(), std::string("malformed JSON: ") + e.what());
    }
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("", "cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
}

json read_json_file(const std::filesystem::path& path) {
    return parse_json(read_text(path));
}

exponents::ModelParams params_from_json(const json& j, const std::string& prefix) {
    reject_unknown(j, prefix, {"N", "mu", "p", "q", "a", "b"});
    exponents::ModelParams params;
    params.N = integer(require(j, prefix, "N"), join(prefix, "N"));
    params.mu = number(require(j, prefix, "mu"), join(prefix, "mu"));
    params.p = number_or(j, prefix, "p", params.p);
    params.q = number_or(j, prefix, "q", params.q);
    params.a = integer(require(j, prefix, "a"), join(prefix, "a"));
    params.b = integer(require(j, prefix, "b"), join(prefix, "b"));
    return params;
}

json to_json(const exponents::ModelParams& params) {
    return json{{"N", params.N}, {"mu", params.mu}, {"p", params.p},
                {"q", params.q}, {"a", params.a},   {"b", params.b}};
}

solver::SimConfig sim_config_from_json(const json& j) {
    reject_unknown(j, "", {"params", "eps", "profile", "L", "nr", "cfl", "t_max",
                           "blowup_threshold", "dt_min", "monitor_stride"});
    solver::SimConfig cfg;
    cfg.params = params_from_json(require(j, "", "params"), "params");
    cfg.eps = number(require(j, "", "eps"), "eps");
    if (j.contains("profile")) {
        const auto& prof = j.at("profile");
        reject_unknown(prof, "profile", {"shape", "R", "normalize"});
        if (prof.contains("shape")) {
            const auto& shape = prof.at("shape");
            if (!shape.is_string() || shape.get<std::string>() != "bump") {
                throw ConfigError("profile.shape", "unsupported shape " + shape.dump() +
                                                       " (supported: \"bump\")");
            }
        }
        cfg.profile.R = number_or(prof, "profile", "R", cfg.profile.R);
        if (prof.contains("normalize")) {
            if (!prof.at("normalize").is_boolean()) {
                throw ConfigError("profile.normalize", "expected a boolean");
            }
            cfg.profile.normalize = prof.at("normalize").get<bool>();
        }
    }
    cfg.nr = integer(require(j, "", "nr"), "nr");
    cfg.t_max = number(require(j, "", "t_max"), "t_max");
    cfg.L = number_or(j, "", "L", cfg.t_max + cfg.profile.R + 1.0);
    cfg.cfl = number_or(j, "", "cfl", cfg.cfl);
    cfg.blowup_threshold = number_or(j, "", "blowup_threshold", cfg.blowup_threshold);
    cfg.dt_min = number_or(j, "", "dt_min", cfg.dt_min);
    cfg.monitor_stride = integer_or(j, "", "monitor_stride", cfg.monitor_stride);
    cfg.validate();
    return cfg;
}

json to_json(const solver::SimConfig& cfg) {
    return json{{"params", to_json(cfg.params)},
                {"eps", cfg.eps},
                {"profile", {{"shape", "bump"}, {"R", cfg.profile.R}, {"normalize", cfg.profile.normalize}}},
                {"L", cfg.L},
                {"nr", cfg.nr},
                {"cfl", cfg.cfl},
                {"t_max", cfg.t_max},
                {"blowup_threshold", cfg.blowup_threshold},
                {"dt_min", cfg.dt_min},
                {"monitor_stride", cfg.monitor_stride}};
}

SweepConfig sweep_config_from_json(const json& j) {
    reject_unknown(j, "", {"base", "eps_list", "refine", "tau", "jobs", "horizon_factor",
                           "t_max_limit"});
    SweepConfig cfg;
    try {
        cfg.base = sim_config_from_json(require(j, "", "base"));
    } catch (const ConfigError& e) {
        throw ConfigError(join("base", e.key()), e.what());
    }
    const auto& list = require(j, "", "eps_list");
    if (!list.is_array()) {
        throw ConfigError("eps_list", "expected an array of numbers");
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
        cfg.eps_list.push_back(number(list[i], "eps_list[" + std::to_string(i) + "]"));
    }
    cfg.options.refine = integer_or(j, "", "refine", cfg.options.refine);
    cfg.options.jobs = integer_or(j, "", "jobs", cfg.options.jobs);
    cfg.options.horizon_factor = number_or(j, "", "horizon_factor", cfg.options.horizon_factor);
    cfg.options.t_max_limit = number_or(j, "", "t_max_limit", cfg.options.t_max_limit);
    cfg.tau = number_or(j, "", "tau", cfg.tau);
    if (cfg.options.refine < 1) {
        throw ConfigError("refine", "must be >= 1");
    }
    if (!(cfg.tau > 0.0 && cfg.tau < 1.0)) {
        throw ConfigError("tau", "must lie in (0, 1)");
    }
    return cfg;
}

json to_json(const SweepConfig& cfg) {
    // jobs is left out: it does not change results.
    return json{{"base", to_json(cfg.base)},
                {"eps_list", cfg.eps_list},
                {"refine", cfg.options.refine},
                {"tau", cfg.tau},
                {"horizon_factor", cfg.options.horizon_factor},
                {"t_max_limit", cfg.options.t_max_limit}};
}

std::string canonical_dump(const json& j) {
    return j.dump();
}

std::string sha256_hex(const std::string& data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0xF]);
    }
    return out;
}

std::string config_hash(const json& j) {
    return sha256_hex(canonical_dump(j)).substr(0, 16);
}

std::string format_number(double value) {
    if (!std::isfinite(value)) {
        return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
    }
    std::array<char, 40> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), end);
}

std::string monitor_csv(const functionals::MonitorSeries& series) {
    std::string out = "t,max_abs_u,F,G,G1,G2,int_ut_p,int_u_q,residual,dt\n";
    for (const auto& s : series) {
        for (double v : {s.t, s.max_abs_u, s.F, s.G, s.G1, s.G2, s.int_ut_p, s.int_u_q,
                         s.residual_F}) {
            out += format_number(v);
            out += ',';
        }
        out += format_number(s.dt);
        out += '\n';
    }
    return out;
}

functionals::MonitorSeries parse_monitor_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,max_abs_u,F,G,G1,G2", 0) != 0) {
        throw ConfigError("series.csv", "unexpected header");
    }
    functionals::MonitorSeries series;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::array<double, 10> v{};
        std::istringstream row(line);
        std::string cell;
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (!std::getline(row, cell, ',')) {
                throw ConfigError("series.csv", "short row: " + line);
            }
            v[k] = std::strtod(cell.c_str(), nullptr);
        }
        functionals::FunctionalSnapshot s;
        s.t = v[0];
        s.max_abs_u = v[1];
        s.F = v[2];
        s.G = v[3];
        s.G1 = v[4];
        s.G2 = v[5];
        s.int_ut_p = v[6];
        s.int_u_q = v[7];
        s.residual_F = v[8];
        s.dt = v[9];
        series.push_back(s);
    }
    return series;
}

std::string sweep_csv(const lifespan::SweepResult& result) {
    std::string out = "eps,T_est,uncertainty,outcome\n";
    for (const auto& row : result.rows) {
        out += format_number(row.eps) + ',' + format_number(row.T_est) + ',' +
               format_number(row.uncertainty) + ',' + row.outcome + '\n';
    }
    return out;
}

json to_json(const lifespan::FitReport& fit) {
    json j{{"kind", std::string(lifespan::to_string(fit.kind))},
           {"slope", fit.slope},
           {"intercept", fit.intercept},
           {"r_squared", fit.r_squared},
           {"theoretical_exponent", fit.theoretical_exponent},
           {"points", fit.points},
           {"warnings", fit.warnings}};
    j["relative_deviation"] = fit.relative_deviation ? json(*fit.relative_deviation) : json(nullptr);
    return j;
}

json to_json(const lifespan::VerdictRecord& verdict) {
    return json{{"verdict", std::string(lifespan::to_string(verdict.verdict))},
                {"tau", verdict.tau},
                {"measured", verdict.measured},
                {"expected", verdict.expected},
                {"note", verdict.note}};
}

json to_json(const exponents::LifespanBound& bound) {
    json j{{"kind", std::string(exponents::to_string(bound.kind))}, {"exponent", bound.exponent}};
    if (!bound.diagnostic.empty()) {
        j["diagnostic"] = bound.diagnostic;
    }
    return j;
}

json run_manifest(const solver::SimConfig& cfg, const solver::RunResult& result) {
    const json config = to_json(cfg);
    json j{{"tool_version", kToolVersion},
           {"config", config},
           {"config_hash", config_hash(config)},
           {"outcome", std::string(solver::to_string(result.outcome))},
           {"reason", result.reason},
           {"monitor_rows", result.monitors.size()},
           {"grid",
            {{"h", result.grid.h},
             {"nr", result.grid.nr},
             {"steps", result.grid.steps},
             {"dt_first", result.grid.dt_first},
             {"dt_smallest", result.grid.dt_smallest},
             {"t_final", result.grid.t_final}}}};
    j["T_num"] = result.outcome == solver::Outcome::BlowUp ? json(result.T_num) : json(nullptr);
    return j;
}

}  // namespace blowuplab::io
