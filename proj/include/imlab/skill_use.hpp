#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "imlab/gcrl.hpp"

namespace imlab {

enum class ConditionMode { start_and_final, current_state };

// What the discriminator conditions on: (s0, sf) for start_and_final, the
// single current state otherwise.
struct ConditionKey {
  State first;
  std::optional<State> second;
  bool operator==(const ConditionKey&) const = default;
};

struct ConditionKeyHash {
  std::size_t operator()(const ConditionKey& k) const noexcept;
};

// Count-based variational distribution q(g | key) with additive smoothing.
class Discriminator {
 public:
  Discriminator(ConditionMode mode, std::size_t num_goals, double smoothing = 1.0);

  ConditionMode mode() const { return mode_; }
  std::size_t num_goals() const { return num_goals_; }
  double smoothing() const { return smoothing_; }

  ConditionKey key(const State& s) const;
  ConditionKey key(const State& s0, const State& sf) const;

  void add(const ConditionKey& key, std::size_t goal, std::uint64_t n = 1);
  std::uint64_t count(const ConditionKey& key, std::size_t goal) const;
  double predict(const ConditionKey& key, std::size_t goal) const;
  Eigen::VectorXd distribution(const ConditionKey& key) const;
  // Most probable goal, lowest index on ties.
  std::size_t argmax(const ConditionKey& key) const;

  bool operator==(const Discriminator& o) const;

 private:
  void check_key(const ConditionKey& key) const;

  ConditionMode mode_;
  std::size_t num_goals_;
  double smoothing_;
  std::unordered_map<ConditionKey, std::vector<std::uint64_t>, ConditionKeyHash> counts_;
};

// State-conditioned goal-selection policy p(g | s0) updated by exponentiated
// gradient with a probability floor.
class GoalPolicy {
 public:
  GoalPolicy(std::size_t num_goals, double learning_rate = 0.1, double floor = 1e-3);

  std::size_t num_goals() const { return num_goals_; }
  double floor() const { return floor_; }
  double learning_rate() const { return learning_rate_; }

  Eigen::VectorXd probabilities(const State& s0) const;
  double probability(const State& s0, std::size_t goal) const;
  std::size_t sample(const State& s0, RngStream& rng) const;
  void update(const State& s0, std::size_t goal, double reward);

 private:
  std::size_t num_goals_;
  double learning_rate_;
  double floor_;
  std::unordered_map<State, Eigen::VectorXd, StateHash> rows_;
};

// Rescales p so it sums to one with every entry at least `floor`; entries
// pinned at the floor are removed from the proportional share.
Eigen::VectorXd project_with_floor(const Eigen::VectorXd& p, double floor);

// Draws an index from a probability vector.
std::size_t sample_categorical(const Eigen::VectorXd& p, RngStream& rng);

// log q(g | s0, sf) - log p(g | s0)
double vic_reward(const Discriminator& d, const GoalPolicy& p, const State& s0, const State& sf, std::size_t goal);

// log q(g | s_next)
double diayn_reward(const Discriminator& d, const State& s_next, std::size_t goal);

std::size_t diayn_goal_sample(std::size_t num_goals, RngStream& rng);

// Per-step DIAYN reward. The transition's goal must be a SkillIndex.
class DiaynReward final : public RewardModule {
 public:
  DiaynReward(std::size_t num_goals, double smoothing);

  void observe(const Transition& t) override;
  double reward(const Transition& t) const override;

  const Discriminator& discriminator() const { return discriminator_; }

 private:
  Discriminator discriminator_;
};

// VIC reward paid on the last step of a skill execution. begin() must be
// called with the execution's start state before the rollout.
class VicReward final : public RewardModule {
 public:
  VicReward(std::size_t num_goals, double smoothing, double learning_rate, double floor);

  void begin(const State& s0) { s0_ = s0; }
  void observe(const Transition& t) override;
  double reward(const Transition& t) const override;

  // Reinforces the goal policy with the execution's reward; the caller then
  // chains s0 <- sf.
  void finish(std::size_t goal, double reward) { policy_.update(*s0_, goal, reward); }

  const Discriminator& discriminator() const { return discriminator_; }
  const GoalPolicy& policy() const { return policy_; }
  const State& start() const { return *s0_; }

 private:
  Discriminator discriminator_;
  GoalPolicy policy_;
  std::optional<State> s0_;
};

}  // namespace imlab
