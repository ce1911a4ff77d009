#include "imlab/event_log.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

#include "imlab/errors.hpp"

namespace imlab {

using nlohmann::json;

void MetricTracker::consume(const json& r) {
  if (r.value("v", 0) != kEventSchemaVersion) throw ConfigError("unsupported event schema version");
  const std::string type = r.at("type").get<std::string>();
  if (type == "run_start") {
    config_ = run_config_from_json(r.at("config"));
    run_id_ = r.at("run_id").get<std::string>();
    if (config_->facet == Facet::diayn || config_->facet == Facet::vic) {
      discriminator_.emplace(config_->facet == Facet::vic ? ConditionMode::start_and_final : ConditionMode::current_state,
                             config_->skills.num_skills, config_->skills.smoothing);
    }
    if (config_->facet == Facet::curious) {
      const auto modules = config_->curious.modules.empty() ? default_modules(config_->environment) : config_->curious.modules;
      for (const ModuleSpec& m : modules) queues_.emplace(m.id, CompetenceQueue(config_->curious.queue_length));
    }
  } else if (type == "episode_start") {
    episode_start_ = state_from_json(r.at("start"));
    if (r.at("episode").get<std::uint64_t>() == 0) visits_.add(*episode_start_);
    goal_index_.reset();
    if (r.contains("goal_index")) goal_index_ = r["goal_index"].get<std::size_t>();
  } else if (type == "step") {
    on_step(r);
  } else if (type == "episode_end") {
    on_episode_end(r);
  } else if (type == "run_end") {
    const auto t = r.at("t").get<std::uint64_t>();
    if (t != last_emit_) emit(t);
  } else if (type != "skill_spawned") {
    throw ConfigError("unknown event record type '" + type + "'");
  }
}

void MetricTracker::on_step(const json& r) {
  const auto t = r.at("t").get<std::uint64_t>();
  const State s2 = state_from_json(r.at("s2"));
  visits_.add(s2);
  reward_sum_ += r.at("r").get<double>();
  ++reward_n_;
  for (const auto& e : r.at("events")) events_seen_.insert(e.get<std::string>());
  if (discriminator_ && discriminator_->mode() == ConditionMode::current_state && goal_index_) {
    discriminator_->add(discriminator_->key(s2), *goal_index_);
  }
  last_t_ = t;
  if (config_ && t % config_->metric_cadence == 0) emit(t);
}

void MetricTracker::on_episode_end(const json& r) {
  const State final_state = state_from_json(r.at("final"));
  ++terminal_[final_state];
  ++episodes_;
  if (goal_index_) {
    outcomes_.add(*goal_index_, final_state);
    if (discriminator_) {
      const ConditionKey key = discriminator_->mode() == ConditionMode::start_and_final
                                   ? discriminator_->key(*episode_start_, final_state)
                                   : discriminator_->key(final_state);
      if (discriminator_->mode() == ConditionMode::start_and_final) discriminator_->add(key, *goal_index_);
      recent_skill_outcomes_.emplace_back(key, *goal_index_);
      if (recent_skill_outcomes_.size() > kEpisodeWindow) recent_skill_outcomes_.pop_front();
    }
  }
  if (r.contains("success") && r["success"].is_boolean()) {
    const bool success = r["success"].get<bool>();
    recent_success_.push_back(success);
    if (recent_success_.size() > kEpisodeWindow) recent_success_.pop_front();
    if (r.contains("module")) queues_.at(r["module"].get<std::string>()).push(success);
  }
}

void MetricTracker::push(const std::string& name, std::uint64_t t, double value) {
  auto [it, _] = series_.try_emplace(name, name);
  it->second.push(t, value);
}

void MetricTracker::emit(std::uint64_t t) {
  last_emit_ = t;
  const GridWorldConfig& env = config_->environment;
  const std::uint64_t size = state_space_size(env);
  if (size <= kDefaultStateCap) push("coverage", t, static_cast<double>(visits_.distinct()) / static_cast<double>(size));
  if (reward_n_ > 0) {
    push("mean_reward", t, reward_sum_ / static_cast<double>(reward_n_));
    reward_sum_ = 0.0;
    reward_n_ = 0;
  }
  push("episodes", t, static_cast<double>(episodes_));
  if (!env.salient_events.empty()) push("repertoire_size", t, static_cast<double>(events_seen_.size()));
  if (discriminator_ && outcomes_.total() > 0) {
    push("goal_state_mi", t, mutual_information(outcomes_));
    std::size_t correct = 0;
    for (const auto& [key, g] : recent_skill_outcomes_) correct += discriminator_->argmax(key) == g;
    push("discriminator_accuracy", t,
         static_cast<double>(correct) / static_cast<double>(recent_skill_outcomes_.size()));
  }
  if (!recent_success_.empty()) {
    std::size_t wins = 0;
    for (bool b : recent_success_) wins += b;
    push("success_rate", t, static_cast<double>(wins) / static_cast<double>(recent_success_.size()));
  }
  for (const auto& [id, q] : queues_) {
    if (q.size() >= 1) push("competence/" + id, t, competence(q));
    if (q.size() >= 2) push("learning_progress/" + id, t, learning_progress(q));
  }
}

std::vector<MetricSeries> MetricTracker::series() const {
  std::vector<MetricSeries> out;
  for (const auto& [_, s] : series_) out.push_back(s);
  return out;
}

EventLog::EventLog(const std::filesystem::path& path) {
  if (path.empty()) return;
  out_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
  if (!*out_) throw IoError("cannot write event log " + path.string());
}

void EventLog::write(json record) {
  record["v"] = kEventSchemaVersion;
  if (out_) {
    *out_ << record.dump() << '\n';
    // The tracker sees the record exactly as a replay will: after a text
    // round trip.
    tracker_.consume(json::parse(record.dump()));
  } else {
    tracker_.consume(record);
  }
}

MetricTracker replay_event_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open event log " + path.string());
  MetricTracker tracker;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    tracker.consume(json::parse(line));
  }
  return tracker;
}

std::string metrics_csv(const std::string& run_id, const std::vector<MetricSeries>& series) {
  std::string out = "run_id,metric,step,value\n";
  char buf[64];
  for (const MetricSeries& s : series) {
    for (const auto& p : s.points()) {
      std::snprintf(buf, sizeof buf, "%" PRIu64 ",%.17g\n", p.step, p.value);
      out += run_id + "," + s.name() + "," + buf;
    }
  }
  return out;
}

std::vector<MetricSeries> parse_metrics_csv(const std::string& text, std::string* run_id) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "run_id,metric,step,value") throw ConfigError("metrics CSV header missing");
  std::map<std::string, MetricSeries> by_name;
  std::vector<std::string> order;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string id, metric, step, value;
    if (!std::getline(row, id, ',') || !std::getline(row, metric, ',') || !std::getline(row, step, ',') ||
        !std::getline(row, value)) {
      throw ConfigError("malformed metrics CSV row: " + line);
    }
    if (run_id) *run_id = id;
    auto [it, inserted] = by_name.try_emplace(metric, metric);
    if (inserted) order.push_back(metric);
    it->second.push(std::stoull(step), std::strtod(value.c_str(), nullptr));
  }
  std::vector<MetricSeries> out;
  for (const auto& name : order) out.push_back(by_name.at(name));
  return out;
}

}  // namespace imlab
