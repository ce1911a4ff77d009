#pragma once

#include <map>
#include <unordered_map>
#include <vector>

#include "imlab/gcrl.hpp"

namespace imlab {

// Discounted, path-length-sensitive estimate of reaching an event's state
// from a start state by following the event's skill. Unseen pairs read 0.
class MultiTimeModel {
 public:
  MultiTimeModel(double step_size = 0.2, double discount = 0.9);

  double step_size() const { return step_size_; }
  double discount() const { return discount_; }

  double get(const State& s, const EventId& e) const;
  // P <- (1 - step_size) P + step_size * (discount^k if succeeded else 0)
  void update(const State& start, const EventId& event, int steps_taken, bool succeeded);
  std::size_t size() const;

 private:
  double step_size_;
  double discount_;
  std::unordered_map<EventId, std::unordered_map<State, double, StateHash>> table_;
};

// 1 - p for a reach probability p in [0, 1].
double surprise(double p);

// Surprise reward: sum over fired events of 1 - P(s, e), times scale; zero
// when no salient event fired.
double imrl_reward(const MultiTimeModel& model, const State& s, const State& s_next,
                   const std::vector<EventId>& events, double scale = 1.0);

// Skills spawned on the first observation of each salient event. Entries are
// never removed.
class SkillRepertoire {
 public:
  explicit SkillRepertoire(double initial_q = 0.0) : initial_q_(initial_q) {}

  // Returns the events that spawned a new skill.
  std::vector<EventId> maybe_spawn(const std::vector<EventId>& events);

  std::size_t size() const { return order_.size(); }
  bool contains(const EventId& e) const { return skills_.count(e) != 0; }
  Skill& skill(const EventId& e) { return skills_.at(e); }
  const Skill& skill(const EventId& e) const { return skills_.at(e); }
  const std::vector<EventId>& creation_order() const { return order_; }

 private:
  double initial_q_;
  std::map<EventId, Skill> skills_;
  std::vector<EventId> order_;
};

// Intrinsic surprise reward for salient transitions. The reward reported for a
// transition reflects the model before that transition was learned from.
class ImrlReward final : public RewardModule {
 public:
  ImrlReward(const GridWorldConfig& config, double step_size, double discount, double scale = 1.0,
             double initial_q = 0.0);

  void observe(const Transition& t) override;
  double reward(const Transition& t) const override;
  double reward_bound() const override;

  // Starts a fresh path memory (call at episode start).
  void begin_episode();

  const MultiTimeModel& model() const { return model_; }
  MultiTimeModel& model() { return model_; }
  const SkillRepertoire& repertoire() const { return repertoire_; }
  SkillRepertoire& repertoire() { return repertoire_; }

 private:
  const GridWorldConfig* config_;
  MultiTimeModel model_;
  SkillRepertoire repertoire_;
  double scale_;
  double pending_ = 0.0;
  // States of the current episode in visit order, with step numbers.
  std::vector<State> path_;
  std::unordered_map<EventId, std::size_t> last_fired_;
};

}  // namespace imlab
