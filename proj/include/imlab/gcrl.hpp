#pragma once

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "imlab/playroom.hpp"
#include "imlab/rng.hpp"

namespace imlab {

struct SkillIndex {
  std::size_t k = 0;
  bool operator==(const SkillIndex&) const = default;
};

struct FeatureTarget {
  FeatureVec vec;
  bool operator==(const FeatureTarget& o) const { return vec.size() == o.vec.size() && vec == o.vec; }
};

using ModuleId = std::string;

// A target restricted to one module's feature subspace.
struct ModuleGoal {
  ModuleId module;
  FeatureVec target;
  bool operator==(const ModuleGoal& o) const {
    return module == o.module && target.size() == o.target.size() && target == o.target;
  }
};

struct SalientEvent {
  EventId event;
  bool operator==(const SalientEvent&) const = default;
};

// The parameter of a reward function. Exactly one alternative is held.
using Goal = std::variant<SkillIndex, FeatureTarget, ModuleGoal, SalientEvent>;

std::string describe(const Goal& goal);
nlohmann::json goal_to_json(const Goal& goal);

using ActionValues = std::array<double, kNumActions>;

// Sparse table of action values; unseen states read as default_value.
class QTable {
 public:
  explicit QTable(double default_value = 0.0) : default_value_(default_value) {}

  double default_value() const { return default_value_; }
  double get(const State& s, Action a) const;
  ActionValues values(const State& s) const;
  double max_value(const State& s) const;
  void set(const State& s, Action a, double v);
  std::size_t size() const { return table_.size(); }
  // Largest |Q| over stored entries (and the default).
  double max_abs() const;

  bool operator==(const QTable& o) const {
    return default_value_ == o.default_value_ && table_ == o.table_;
  }

 private:
  double default_value_;
  std::unordered_map<State, ActionValues, StateHash> table_;
};

struct Skill {
  Goal goal;
  QTable q;
};

struct Transition {
  State state;
  Action action = Action::up;
  State next_state;
  std::vector<EventId> events;
  std::optional<Goal> goal;
  // Set on the last transition of a rollout (horizon reached or terminated).
  bool last = false;
};

// Intrinsic reward source. observe() is called on every transition before
// reward() is asked about it, and is the only mutating entry point.
class RewardModule {
 public:
  virtual ~RewardModule() = default;
  virtual void observe(const Transition& t) = 0;
  virtual double reward(const Transition& t) const = 0;
  // |reward| never exceeds this; infinity when the module has no finite bound.
  virtual double reward_bound() const { return std::numeric_limits<double>::infinity(); }
};

class ZeroReward final : public RewardModule {
 public:
  void observe(const Transition&) override {}
  double reward(const Transition&) const override { return 0.0; }
  double reward_bound() const override { return 0.0; }
};

struct LearnerParams {
  double alpha = 0.1;
  double gamma = 0.95;
  double epsilon = 0.1;

  void validate() const;
};

// One-step Q-learning backup. Terminal transitions do not bootstrap.
void q_update(QTable& q, const Transition& t, double reward, double alpha, double gamma, bool terminal = false);

// Uniform action with probability epsilon, else the lowest-index argmax.
Action epsilon_greedy(const QTable& q, const State& s, double epsilon, RngStream& rng);

Action greedy(const QTable& q, const State& s);

struct Rollout {
  std::vector<Transition> trajectory;
  double discounted_return = 0.0;
  // Per-step rewards, aligned with trajectory.
  std::vector<double> rewards;
  bool terminated = false;

  const State& final_state() const { return trajectory.back().next_state; }
};

struct RolloutOptions {
  LearnerParams learner;
  // Ends the rollout early (and marks the transition terminal) when true.
  std::function<bool(const Transition&)> terminate;
  bool learn = true;
};

// Runs up to horizon epsilon-greedy steps of the skill, observing and learning
// from the module's reward at each step.
Rollout rollout(Skill& skill, const State& start, RewardModule& module, int horizon, RngStream& rng,
                const GridWorldConfig& config, const RolloutOptions& options);

}  // namespace imlab
