#pragma once

// JSON configs and manifests, CSV series and tables, and content hashes.
//
// Simulation config schema (keys not listed are rejected):
//
//   {
//     "params":  {"N": 1, "mu": 0.5, "p": 2.0, "q": 2.0, "a": 1, "b": 0},
//     "eps": 0.2,
//     "profile": {"shape": "bump", "R": 1.0, "normalize": false},   // optional
//     "L": 42.0,                // optional, default t_max + R + 1
//     "nr": 4096,
//     "cfl": 0.5,               // optional
//     "t_max": 40.0,
//     "blowup_threshold": 1e6,  // optional
//     "dt_min": 1e-10,          // optional
//     "monitor_stride": 10      // optional
//   }
//
// Sweep config: {"base": <simulation config>, "eps_list": [...], "refine": 1,
// "tau": 0.25, "jobs": 1, "horizon_factor": 3.0, "t_max_limit": 1e4}; only
// "base" and "eps_list" are required.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "blowuplab/exponents.hpp"
#include "blowuplab/functionals.hpp"
#include "blowuplab/lifespan.hpp"
#include "blowuplab/run.hpp"

namespace blowuplab::io {

using nlohmann::json;

inline constexpr const char* kToolVersion = "blowuplab 1.0.0";

/// Parses text as JSON; syntax errors become ConfigError with the parser message.
json parse_json(const std::string& text);
json read_json_file(const std::filesystem::path& path);

exponents::ModelParams params_from_json(const json& j, const std::string& prefix = "params");
json to_json(const exponents::ModelParams& params);

/// Throws ConfigError naming the offending key, then validates the whole config.
solver::SimConfig sim_config_from_json(const json& j);
json to_json(const solver::SimConfig& cfg);

struct SweepConfig {
    solver::SimConfig base;
    std::vector<double> eps_list;
    lifespan::SweepOptions options;
    double tau = 0.25;
};

SweepConfig sweep_config_from_json(const json& j);
json to_json(const SweepConfig& cfg);

/// Compact serialization with sorted keys and shortest round-trip numbers.
std::string canonical_dump(const json& j);

std::string sha256_hex(const std::string& data);

/// First 16 hex digits of the SHA-256 of the canonical serialization.
std::string config_hash(const json& j);

/// Shortest round-trip form, locale independent.
std::string format_number(double value);

/// Header: t,max_abs_u,F,G,G1,G2,int_ut_p,int_u_q,residual,dt
std::string monitor_csv(const functionals::MonitorSeries& series);
functionals::MonitorSeries parse_monitor_csv(const std::string& text);

/// Header: eps,T_est,uncertainty,outcome
std::string sweep_csv(const lifespan::SweepResult& result);

json to_json(const lifespan::FitReport& fit);
json to_json(const lifespan::VerdictRecord& verdict);
json to_json(const exponents::LifespanBound& bound);

/// Config echo, outcome, T_num and grid metadata; no timing, so reruns of the
/// same config produce identical bytes.
json run_manifest(const solver::SimConfig& cfg, const solver::RunResult& result);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace blowuplab::io
