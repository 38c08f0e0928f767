#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace fiid::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitResource = 3;
inline constexpr const char *kOutputDirEnv = "FIID_OUTPUT_DIR";

/// One experiment. Unset optionals fall back to per-subcommand defaults.
struct ExperimentConfig {
  std::string subcommand;
  int d = 3;
  std::optional<int> radius;
  std::optional<double> theta;
  std::optional<std::int64_t> n;
  std::optional<std::int64_t> replicas;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
  unsigned threads = 0;
  std::string graph_file;
  std::string process;
  std::string mode = "both";
  std::string sign = "alternating";
  std::optional<int> n_min;
  std::optional<int> ball_radius;
  std::optional<int> block_radius;
  int max_passes = 1000;
  bool bound_only = false;
  bool exact = false;
};

const std::vector<std::string> &subcommands();

/// Deterministic part of the config as recorded in reports (no thread count,
/// no output location).
Json config_to_json(const ExperimentConfig &config);
ExperimentConfig config_from_json(const Json &json);

/// Runs one experiment and writes its report to `out`. Returns the exit code.
/// The seed is drawn from system entropy when absent and always recorded.
int run(ExperimentConfig config, std::ostream &out, std::ostream &err);

/// Parses command-line arguments (including --config replay files) and runs.
int main_entry(int argc, char **argv, std::ostream &out, std::ostream &err);

/// Copy of a report without its "timing" member.
Json strip_timing(Json report);

} // namespace fiid::cli
