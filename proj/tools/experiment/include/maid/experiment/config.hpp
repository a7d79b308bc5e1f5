#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "maid/maid.hpp"

namespace maid::experiment {

/// Problem selector plus the parameters of every supported family. Only the
/// keys belonging to `type` are accepted in a config file.
struct ProblemConfig {
  std::string type = "quadratic";  // quadratic | tv | logistic
  std::optional<std::uint64_t> data_seed;

  // quadratic
  int rows = 1000;
  int n = 10;
  int d = 10;
  double noise = 0.01;

  // tv: synthetic unless `images` is given (with matching `clean` references)
  int width = 32;
  int height = 32;
  int count = 5;
  double sigma = 0.1;
  std::vector<std::filesystem::path> images;
  std::vector<std::filesystem::path> clean;
  bool robust = false;

  // logistic: synthetic unless both CSV paths are given
  int samples = 300;
  int val_samples = 200;
  int features = 10;
  int classes = 3;
  double separation = 2.0;
  std::filesystem::path train_csv;
  std::filesystem::path val_csv;
};

struct RunConfig {
  std::string name = "run";
  std::uint64_t seed = 0;
  std::filesystem::path output = "maid_out";
  ProblemConfig problem;
  MaidConfig maid;
  std::optional<std::vector<double>> theta0;
  /// Sweep lists; empty means "use the single value from `maid`". An eps0
  /// entry sets delta0 to the same value.
  std::vector<double> eps0_list;
  std::vector<bool> fixed_accuracy_list;
};

/// Command-line overrides applied after parsing.
struct Overrides {
  std::optional<std::int64_t> budget;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
};

/// One element of the sweep, fully resolved.
struct RunSpec {
  std::string label;
  MaidConfig maid;
};

/// Strict parse: unknown keys, wrong types and invalid MAID settings throw
/// ConfigError. Relative paths are resolved against `base_dir`.
RunConfig parse_run_config(const nlohmann::json& doc,
                           const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

void apply_overrides(RunConfig& config, const Overrides& overrides);

/// Canonical JSON form of a config, echoed into run metadata. Parsing it
/// back yields the same config.
nlohmann::json to_json(const RunConfig& config);

/// Cartesian product of the sweep lists, in file order.
std::vector<RunSpec> expand_sweep(const RunConfig& config);

struct DenoiseConfig {
  std::optional<std::vector<double>> theta;
  std::filesystem::path theta_from;  ///< run metadata JSON holding theta_final
  std::filesystem::path input;
  std::filesystem::path reference;   ///< optional ground truth
  std::filesystem::path output = "denoised.pgm";
  double eps = 1e-6;
};

DenoiseConfig parse_denoise_config(const nlohmann::json& doc,
                                   const std::filesystem::path& base_dir = {});
DenoiseConfig load_denoise_config(const std::filesystem::path& path);

}  // namespace maid::experiment
