#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "imlab/curriculum.hpp"
#include "imlab/effectance.hpp"
#include "imlab/metrics.hpp"
#include "imlab/run_config.hpp"
#include "imlab/skill_use.hpp"

namespace imlab {

// Builds every emitted metric series purely from event-log records, so a live
// run and a replay of its log produce identical series.
//
// Record types (all carry "v" = schema version and "type"):
//   run_start     {run_id, config}
//   episode_start {episode, t, start, goal, goal_index?, module?}
//   step          {t, s, a, s2, events, r}
//   skill_spawned {t, event}
//   episode_end   {episode, t, final, success?, goal_index?, module?}
//   run_end       {t}
class MetricTracker {
 public:
  // Number of most recent episodes the windowed rates look at.
  static constexpr std::size_t kEpisodeWindow = 100;

  void consume(const nlohmann::json& record);

  // Series in name order.
  std::vector<MetricSeries> series() const;
  const std::map<std::string, MetricSeries>& series_map() const { return series_; }

  const std::optional<RunConfig>& config() const { return config_; }
  const std::string& run_id() const { return run_id_; }
  // Final-state counts over all finished episodes.
  const std::map<State, std::uint64_t>& terminal_counts() const { return terminal_; }
  const VisitCounts& visits() const { return visits_; }
  std::uint64_t steps() const { return last_t_; }
  std::uint64_t episodes() const { return episodes_; }

 private:
  void on_step(const nlohmann::json& r);
  void on_episode_end(const nlohmann::json& r);
  void emit(std::uint64_t t);
  void push(const std::string& name, std::uint64_t t, double value);

  std::optional<RunConfig> config_;
  std::string run_id_;
  std::map<std::string, MetricSeries> series_;

  VisitCounts visits_;
  std::uint64_t last_t_ = 0;
  std::uint64_t last_emit_ = 0;
  double reward_sum_ = 0.0;
  std::uint64_t reward_n_ = 0;
  std::set<EventId> events_seen_;
  std::uint64_t episodes_ = 0;

  // Current episode.
  std::optional<State> episode_start_;
  std::optional<std::size_t> goal_index_;

  std::optional<Discriminator> discriminator_;
  OutcomeTable outcomes_;
  std::deque<std::pair<ConditionKey, std::size_t>> recent_skill_outcomes_;
  std::deque<bool> recent_success_;
  std::map<std::string, CompetenceQueue> queues_;
  std::map<State, std::uint64_t> terminal_;
};

// Appends one JSON object per line and forwards every record to the tracker.
class EventLog {
 public:
  // An empty path keeps the log in memory only (nothing written).
  explicit EventLog(const std::filesystem::path& path);

  void write(nlohmann::json record);
  MetricTracker& tracker() { return tracker_; }
  const MetricTracker& tracker() const { return tracker_; }

 private:
  std::unique_ptr<std::ofstream> out_;
  MetricTracker tracker_;
};

// Re-reads an events.jsonl file into a fresh tracker.
MetricTracker replay_event_log(const std::filesystem::path& path);

// CSV with columns run_id,metric,step,value; values printed with 17
// significant digits.
std::string metrics_csv(const std::string& run_id, const std::vector<MetricSeries>& series);
std::vector<MetricSeries> parse_metrics_csv(const std::string& text, std::string* run_id = nullptr);

}  // namespace imlab
