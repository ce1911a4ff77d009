#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "imlab/gcrl.hpp"
#include "imlab/goal_distance.hpp"

namespace imlab {

struct ModuleSpec {
  ModuleId id;
  std::vector<std::size_t> subspace;

  void validate(std::size_t feature_dim) const;
};

// One module per entity of the environment: agent position, each toggleable
// object, each block position.
std::vector<ModuleSpec> default_modules(const GridWorldConfig& config);

// Fixed-capacity FIFO of binary trial outcomes.
class CompetenceQueue {
 public:
  explicit CompetenceQueue(std::size_t capacity = 40);

  void push(bool success);
  std::size_t size() const { return outcomes_.size(); }
  std::size_t capacity() const { return capacity_; }
  const std::deque<std::uint8_t>& outcomes() const { return outcomes_; }

 private:
  std::size_t capacity_;
  std::deque<std::uint8_t> outcomes_;
};

// Mean outcome. NotReadyError on an empty queue.
double competence(const CompetenceQueue& q);

// Mean of the newer half minus mean of the older half; with an odd length the
// middle element belongs to the older half. NotReadyError below 2 entries.
double learning_progress(const CompetenceQueue& q);

// Learning progress, or 0 while the queue is too short to estimate it.
double learning_progress_or_zero(const CompetenceQueue& q);

// p_i = epsilon / N + (1 - epsilon) |LP_i| / sum_j |LP_j|. When every LP is
// zero the second term is uniform.
Eigen::VectorXd module_probabilities(const std::vector<double>& lps, double epsilon);

// Beta(successes, failures) pseudo-counts.
struct Belief {
  double alpha = 1.0;
  double beta = 1.0;
};

std::size_t thompson_select(const std::vector<Belief>& beliefs, RngStream& rng);
void belief_update(std::vector<Belief>& beliefs, std::size_t index, bool success);

// Picks a buffer entry uniformly and keeps only the module's coordinates.
ModuleGoal sample_module_goal(const GoalBuffer& buffer, const ModuleSpec& module, RngStream& rng);

FeatureVec restrict_to(const FeatureVec& phi, const ModuleSpec& module);

// Negative Euclidean distance measured in one module's subspace. The
// transition's goal must be a ModuleGoal naming one of the given modules.
class ModuleDistanceReward final : public RewardModule {
 public:
  ModuleDistanceReward(const GridWorldConfig& config, std::vector<ModuleSpec> modules, std::size_t buffer_capacity);

  void note_initial_state(const State& s) { buffer_.record_visit(s, features(s, *config_)); }
  void observe(const Transition& t) override;
  double reward(const Transition& t) const override;
  double reward_bound() const override;

  const ModuleSpec& module(const ModuleId& id) const;
  const std::vector<ModuleSpec>& modules() const { return modules_; }
  const GoalBuffer& buffer() const { return buffer_; }

  double distance(const State& s, const ModuleGoal& goal) const;

 private:
  const GridWorldConfig* config_;
  std::vector<ModuleSpec> modules_;
  GoalBuffer buffer_;
};

}  // namespace imlab
