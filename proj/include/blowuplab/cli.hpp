#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace blowuplab::cli {

enum class Subcommand { Classify, SpecfunCheck, Solve, Verify, Sweep, Report };

struct Command {
    Subcommand subcommand = Subcommand::Classify;
    std::filesystem::path config;
    /// Run directory for `verify`.
    std::filesystem::path run_dir;
    std::filesystem::path out = "runs";
    std::optional<int> jobs;
    std::optional<double> tau;
    std::optional<int> refine;
    /// 0 with --quiet.
    int verbosity = 1;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

/// Runs one subcommand. Results go to `out`, diagnostics to `err`.
int dispatch(const Command& cmd, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches. BLOWUPLAB_OUT sets the default --out.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace blowuplab::cli
