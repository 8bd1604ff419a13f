#pragma once

#include "lotwassmap/common.hpp"
#include "lotwassmap/embedding.hpp"
#include "lotwassmap/measures.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace lotwassmap {

enum class ExperimentKind { CircleTranslation, Rotation, GridTranslation, Dilation, Timing };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& s);

/// Raised for schema violations; `path()` names the offending key ("generator.radius").
class ConfigError : public Error {
public:
  ConfigError(std::string path, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

struct GeneratorConfig {
  Index count = 10;          // circle / rotation
  double radius = 8.0;       // circle / rotation
  Index grid_side = 5;       // grid / dilation / timing
  double lo = -10.0;         // grid / dilation / timing domain
  double hi = 10.0;
  Matrix covariance;         // base covariance (unused by dilation)
  double noise = 0.5;
  std::optional<Index> k;    // data samples per measure; tied to m when empty
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::CircleTranslation;
  GeneratorConfig generator;
  SolverConfig solver;
  Index dim = 2;
  std::vector<Index> m_sweep;
  int trials = 10;
  std::uint64_t seed = 0;
  std::string output_dir = "results";
  /// Also run the pairwise Wassmap baseline each trial (always on for timing).
  bool compare_wassmap = false;

  /// Throws ConfigError when an invariant fails.
  void validate() const;
};

/// Parse and validate; missing keys take the experiment's defaults, unknown keys are rejected.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig parse_config(const std::string& text);
/// Canonical form: every key present, fixed key order.
nlohmann::json to_json(const ExperimentConfig& config);
/// Defaults for one experiment.
ExperimentConfig default_config(ExperimentKind kind);

/// Dataset for one trial of the configured experiment.
ManifoldDataset make_dataset(const ExperimentConfig& config, Index m, std::uint64_t seed);

/// hash(master seed, m, trial index).
std::uint64_t trial_seed(std::uint64_t master, Index m, int trial);

struct TrialRecord {
  Index m = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double relative_error = 0.0;
  double absolute_error = 0.0;
  PipelineMetrics lot;
  Matrix embedding;
  std::optional<double> wassmap_relative_error;
  std::optional<PipelineMetrics> wassmap;
};

struct AggregateRow {
  Index m = 0;
  int trials = 0;
  int failed = 0;
  double mean_relative_error = 0.0;
  double std_relative_error = 0.0;
  double mean_ot_solves = 0.0;
  std::optional<double> mean_wassmap_relative_error;
  std::optional<double> std_wassmap_relative_error;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<TrialRecord> trials;
  std::vector<AggregateRow> aggregate;
};

/// Mean and sample standard deviation (0 for a single value).
std::pair<double, double> mean_std(const std::vector<double>& xs);

std::vector<AggregateRow> aggregate_trials(const ExperimentConfig& config,
                                           const std::vector<TrialRecord>& trials);

/// Runs every (m, trial) pair, using up to `jobs` worker threads. Results do
/// not depend on `jobs`.
ExperimentReport run_experiment(const ExperimentConfig& config, int jobs = 1);

/// Aggregate CSV: deterministic columns only (no wall clock).
std::string aggregate_csv(const ExperimentReport& report);
/// One row per trial including timings.
std::string trials_csv(const ExperimentReport& report);
nlohmann::json report_json(const ExperimentReport& report);

/// <output_dir>/<experiment>
std::filesystem::path experiment_root(const ExperimentConfig& config);
/// Writes per-trial embedding.csv/metrics.json, aggregate.csv, trials.csv, report.json.
void write_report(const ExperimentReport& report);

}  // namespace lotwassmap
