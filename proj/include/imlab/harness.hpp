#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "imlab/metrics.hpp"
#include "imlab/run_config.hpp"

namespace imlab {

struct EpisodeSummary {
  std::uint64_t start_step = 0;
  State start;
  State final_state;
  std::optional<std::size_t> goal_index;
  std::optional<bool> success;
};

struct RunRecord {
  RunConfig config;
  std::string run_id;
  std::string artifact_version = kArtifactVersion;
  std::filesystem::path run_dir;  // empty for in-memory runs
  std::vector<MetricSeries> series;
  std::vector<EpisodeSummary> episodes;
  std::map<State, std::uint64_t> terminal_counts;
  std::uint64_t steps = 0;
  double coverage = 0.0;
  std::size_t repertoire_size = 0;
  double wall_seconds = 0.0;
  // Final discriminator accuracy over fresh evaluation executions of every
  // skill (vic / diayn only).
  std::optional<double> eval_accuracy;

  const MetricSeries* find(const std::string& name) const;
};

struct RunOptions {
  // Output root; the run is written to out_root / run_id. Empty keeps the run
  // in memory.
  std::filesystem::path out_root;
  // Evaluation executions per skill for eval_accuracy.
  std::size_t eval_rollouts_per_skill = 25;
};

RunRecord run(const RunConfig& config, const RunOptions& options = {});

// Independent runs executed on up to `workers` threads; results keep input
// order.
std::vector<RunRecord> run_many(const std::vector<RunConfig>& configs, const RunOptions& options,
                                unsigned workers);

// Reads record.json plus the occupancy and metric files of a run directory.
RunRecord load_run(const std::filesystem::path& run_dir);

// Terminal-state occupancy as a distribution over the canonical enumeration.
Eigen::VectorXd terminal_distribution(const RunRecord& record);

struct PairComparison {
  std::string run_a;
  std::string run_b;
  std::string facet_a;
  std::string facet_b;
  double js_divergence = 0.0;
  double coverage_a = 0.0;
  double coverage_b = 0.0;
  double mi_a = 0.0;
  double mi_b = 0.0;
};

struct ComparisonReport {
  std::vector<PairComparison> pairs;  // sorted by (run_a, run_b), run_a <= run_b
  double mean_between = 0.0;          // across facets; NaN when no such pair
  double mean_within = 0.0;           // same facet, different runs; NaN when none

  std::string csv() const;
  std::string summary() const;
};

ComparisonReport compare(const std::vector<RunRecord>& records);
// compare() plus comparison.csv and summary.txt under out_dir.
ComparisonReport compare_dirs(const std::vector<std::filesystem::path>& run_dirs, const std::filesystem::path& out_dir);

// One SVG line chart per metric series plus index.html; returns the written
// paths.
std::vector<std::filesystem::path> report(const RunRecord& record, const std::filesystem::path& out_dir);

}  // namespace imlab
