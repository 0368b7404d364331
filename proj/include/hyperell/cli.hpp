#pragma once

// Command-line front end for hyperell-l1: configuration, dispatch to the
// experiment modules, caching and report assembly.

#include "hyperell/report.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperell {

inline constexpr const char* kToolName = "hyperell-l1";
inline constexpr const char* kToolVersion = "1.0.0";

enum class ExitCode : int { success = 0, usage = 1, verification_failure = 2, resource_refusal = 3 };

enum class Command { enumerate, lfun, dist, moments, orthogonality, truncation, resonate, constants, verify };

std::string command_name(Command c);

struct RunConfig {
  Command command = Command::constants;
  std::uint32_t q = 5;
  int n = 4;
  std::vector<double> tau_grid{0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 2.5, 3.0};
  std::vector<double> k_list{1, 2, 3};
  std::vector<int> y_list;  // empty: round(3 log_q n)
  std::optional<double> c;
  std::optional<double> beta;
  bool refine_c = false;
  std::vector<double> c_sweep;
  std::optional<int> M;
  std::vector<std::string> f_list{"0,1", "1,1", "0,1,1"};
  std::vector<std::string> ell_list{"0,1", "1,1", "0,1,1"};
  std::vector<double> f_params{2.0};
  std::optional<std::string> D;
  std::uint64_t seed = 1;
  std::uint64_t mc_samples = 100000;
  bool monte_carlo = false;
  unsigned threads = 1;
  ReportFormat format = ReportFormat::json;
  std::optional<std::filesystem::path> cache_dir;
  bool force = false;
};

/// Bad command line; `what()` names the problem and `usage` holds the help text.
class UsageError : public std::runtime_error {
 public:
  UsageError(const std::string& message, std::string usage_text)
      : std::runtime_error(message), usage(std::move(usage_text)) {}
  std::string usage;
};

/// --help was requested; carries the help text.
class HelpRequested : public std::runtime_error {
 public:
  explicit HelpRequested(std::string text) : std::runtime_error("help"), help(std::move(text)) {}
  std::string help;
};

/// A scan larger than the desk-scale cap without --force.
class ResourceRefusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `args` excludes the program name. HYPERELL_CACHE_DIR is the fallback for
/// --cache-dir. Throws UsageError or HelpRequested.
RunConfig parse_config(const std::vector<std::string>& args);

/// Canonical flag echo of everything that affects results (not --threads,
/// not --cache-dir).
std::string config_echo(const RunConfig& cfg);

struct RunResult {
  Report report;
  ExitCode exit_code = ExitCode::success;
  std::vector<std::string> notices;  // for stderr; never part of the report
};

/// Throws ResourceRefusal for oversize scans without --force and
/// std::invalid_argument for inputs the modules reject.
RunResult run_experiment(const RunConfig& cfg);

/// Full CLI: parse, run, write the report to `out` and diagnostics to `err`.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyperell
