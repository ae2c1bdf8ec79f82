#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace mpmd::harness {

/// Process exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  ///< ran, but the result did not verify
inline constexpr int kExitUsage = 2;    ///< bad flags, unreadable or invalid input

struct SolveOptions {
  std::filesystem::path instance;
  std::string algo = "nonclairvoyant";
  std::filesystem::path out;
};

/// Loads an instance, solves it with the named algorithm and writes the
/// solution, the verification report and (for concave) the dual report.
int cmd_solve(const SolveOptions& options, std::ostream& err);

/// One CSV row of a ratio sweep.
struct RatioRow {
  std::size_t m = 0;
  std::size_t n = 0;
  std::string algo;
  std::string alg_cost;
  std::string opt_cost;  ///< "NA" when no oracle applies
  std::string ratio;     ///< "NA" when opt_cost is NA
  std::string runtime_ms;
  std::string generator;
  std::uint64_t seed = 0;
  bool verified = false;
};

struct RatioTable {
  std::vector<RatioRow> rows;
  std::string csv() const;
};

/// Runs the sweeps described by a config (see README) with per-trial seeds
/// splitmix64(seed + trial index) on a worker pool; rows come back in trial order.
RatioTable run_ratio(const nlohmann::json& config);

int cmd_ratio(const std::filesystem::path& config, const std::filesystem::path& out, std::ostream& err);

struct AdversaryOptions {
  std::string kind;  ///< four_point, det_phase or rand_phase
  std::size_t n = 6;
  double D = 100.0;
  double eps = 1.0;
  std::string algo = "nonclairvoyant";
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> transcript;  ///< all transcripts, concatenated
  std::optional<std::filesystem::path> out;         ///< summary CSV; stdout when absent
};

struct AdversarySummary {
  std::string csv;
  double mean_alg_cost = 0.0;
  double standard_error = 0.0;
  std::string reference_label;  ///< which closed form `reference` holds
  double reference = 0.0;       ///< 2D+eps, n-1 or 2 * sum_{k=2}^{n} 1/k by kind
};

AdversarySummary run_adversary(const AdversaryOptions& options, std::ostream* transcripts);

int cmd_adversary(const AdversaryOptions& options, std::ostream& out, std::ostream& err);

}  // namespace mpmd::harness
