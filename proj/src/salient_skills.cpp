#include "imlab/salient_skills.hpp"

#include <algorithm>
#include <cmath>

#include "imlab/errors.hpp"

namespace imlab {

MultiTimeModel::MultiTimeModel(double step_size, double discount) : step_size_(step_size), discount_(discount) {
  if (!(step_size_ > 0.0 && step_size_ <= 1.0)) throw ConfigError("model step size must lie in (0, 1]");
  if (!(discount_ > 0.0 && discount_ < 1.0)) throw ConfigError("model discount must lie in (0, 1)");
}

double MultiTimeModel::get(const State& s, const EventId& e) const {
  auto by_event = table_.find(e);
  if (by_event == table_.end()) return 0.0;
  auto it = by_event->second.find(s);
  return it == by_event->second.end() ? 0.0 : it->second;
}

void MultiTimeModel::update(const State& start, const EventId& event, int steps_taken, bool succeeded) {
  if (steps_taken < 1) throw ConfigError("model update needs at least one step");
  double& p = table_[event][start];
  const double target = succeeded ? std::pow(discount_, steps_taken) : 0.0;
  p = std::clamp((1.0 - step_size_) * p + step_size_ * target, 0.0, 1.0);
}

std::size_t MultiTimeModel::size() const {
  std::size_t n = 0;
  for (const auto& [_, m] : table_) n += m.size();
  return n;
}

double surprise(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("reach probability outside [0, 1]");
  return 1.0 - p;
}

double imrl_reward(const MultiTimeModel& model, const State& s, const State& /*s_next*/,
                   const std::vector<EventId>& events, double scale) {
  double r = 0.0;
  for (const EventId& e : events) r += surprise(model.get(s, e));
  return scale * r;
}

std::vector<EventId> SkillRepertoire::maybe_spawn(const std::vector<EventId>& events) {
  std::vector<EventId> spawned;
  for (const EventId& e : events) {
    if (skills_.count(e)) continue;
    skills_.emplace(e, Skill{SalientEvent{e}, QTable(initial_q_)});
    order_.push_back(e);
    spawned.push_back(e);
  }
  return spawned;
}

ImrlReward::ImrlReward(const GridWorldConfig& config, double step_size, double discount, double scale,
                       double initial_q)
    : config_(&config), model_(step_size, discount), repertoire_(initial_q), scale_(scale) {
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) throw ConfigError("surprise scale must be positive");
}

void ImrlReward::begin_episode() {
  path_.clear();
  last_fired_.clear();
}

void ImrlReward::observe(const Transition& t) {
  pending_ = imrl_reward(model_, t.state, t.next_state, t.events, scale_);
  repertoire_.maybe_spawn(t.events);

  path_.push_back(t.state);
  const std::size_t now = path_.size();  // index of next_state in the path
  for (const EventId& e : t.events) {
    // Every state on the path since the event last fired reached it after
    // (now - j) steps; the most recent visit of a state gives its shortest k.
    const std::size_t from = last_fired_.count(e) ? last_fired_[e] : 0;
    std::unordered_map<State, std::size_t, StateHash> latest;
    for (std::size_t j = from; j < now; ++j) latest[path_[j]] = j;
    std::vector<std::pair<std::size_t, const State*>> ordered;
    for (const auto& [s, j] : latest) ordered.emplace_back(j, &s);
    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [j, s] : ordered) model_.update(*s, e, static_cast<int>(now - j), true);
    last_fired_[e] = now;
  }
}

double ImrlReward::reward(const Transition& /*t*/) const { return pending_; }

double ImrlReward::reward_bound() const { return scale_ * static_cast<double>(config_->salient_events.size()); }

}  // namespace imlab
