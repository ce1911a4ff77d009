#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <unordered_map>

#include <Eigen/Core>

#include "imlab/errors.hpp"
#include "imlab/gcrl.hpp"

namespace imlab {

// Symmetric positive-semidefinite weighting of feature dimensions. Slightly
// negative eigenvalues (>= -1e-9) are clipped to zero at construction.
class WeightMatrix {
 public:
  explicit WeightMatrix(const Eigen::MatrixXd& a);

  static WeightMatrix identity(Eigen::Index dim) { return WeightMatrix(Eigen::MatrixXd::Identity(dim, dim)); }
  static WeightMatrix diagonal(const Eigen::VectorXd& weights);

  const Eigen::MatrixXd& matrix() const { return a_; }
  Eigen::Index dim() const { return a_.rows(); }
  double max_eigenvalue() const { return max_eigenvalue_; }

  WeightMatrix scaled(double c) const { return WeightMatrix(c * a_); }

 private:
  Eigen::MatrixXd a_;
  double max_eigenvalue_ = 0.0;
};

// -sqrt(d^T A d) with d = phi_next - phi_goal.
template <typename DerivedA, typename DerivedB>
double rig_reward(const Eigen::MatrixBase<DerivedA>& phi_next, const Eigen::MatrixBase<DerivedB>& phi_goal,
                  const WeightMatrix& a) {
  if (phi_next.size() != phi_goal.size() || phi_next.size() != a.dim()) {
    throw ConfigError("feature, goal and weight-matrix dimensions differ");
  }
  const Eigen::VectorXd d = phi_next - phi_goal;
  return -std::sqrt(std::max(0.0, d.dot(a.matrix() * d)));
}

template <typename DerivedA, typename DerivedB>
bool goal_reached(const Eigen::MatrixBase<DerivedA>& phi_next, const Eigen::MatrixBase<DerivedB>& phi_goal,
                  const WeightMatrix& a, double threshold) {
  return -rig_reward(phi_next, phi_goal, a) <= threshold;
}

// Recently visited states with their visit counts. A revisit bumps the count
// of the existing entry; a new state evicts the oldest entry once full.
class GoalBuffer {
 public:
  struct Entry {
    State state;
    FeatureVec phi;
    std::uint64_t count = 0;
  };

  explicit GoalBuffer(std::size_t capacity);

  void record_visit(const State& s, const FeatureVec& phi);

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  const std::deque<Entry>& entries() const { return entries_; }

 private:
  std::size_t capacity_;
  std::deque<Entry> entries_;
  std::unordered_map<State, std::uint64_t, StateHash> serial_;
  std::uint64_t front_serial_ = 0;
  std::uint64_t next_serial_ = 0;
};

// Probability of each buffer entry, proportional to count^skew_alpha.
Eigen::VectorXd goal_sampling_probabilities(const GoalBuffer& buffer, double skew_alpha);

// Index of the sampled entry; throws NotReadyError on an empty buffer.
std::size_t sample_goal_index(const GoalBuffer& buffer, double skew_alpha, RngStream& rng);

FeatureTarget sample_goal(const GoalBuffer& buffer, double skew_alpha, RngStream& rng);

// Negative weighted distance to a FeatureTarget goal; every visited state is
// recorded in the goal buffer.
class RigReward final : public RewardModule {
 public:
  RigReward(const GridWorldConfig& config, WeightMatrix a, std::size_t buffer_capacity);

  void note_initial_state(const State& s) { buffer_.record_visit(s, features(s, *config_)); }
  void observe(const Transition& t) override;
  double reward(const Transition& t) const override;
  double reward_bound() const override;

  const GoalBuffer& buffer() const { return buffer_; }
  const WeightMatrix& weights() const { return a_; }

 private:
  const GridWorldConfig* config_;
  WeightMatrix a_;
  GoalBuffer buffer_;
};

}  // namespace imlab
