#include "imlab/goal_distance.hpp"

#include <Eigen/Eigenvalues>

#include "imlab/skill_use.hpp"

namespace imlab {

WeightMatrix::WeightMatrix(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() == 0) throw ConfigError("weight matrix must be square and non-empty");
  if (!a.allFinite()) throw ConfigError("weight matrix has non-finite entries");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw ConfigError("weight matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  Eigen::VectorXd values = eig.eigenvalues();
  if (values.minCoeff() < -1e-9) throw ConfigError("weight matrix is not positive semidefinite");
  if (values.minCoeff() < 0.0) {
    values = values.cwiseMax(0.0);
    a_ = eig.eigenvectors() * values.asDiagonal() * eig.eigenvectors().transpose();
  } else {
    a_ = a;
  }
  max_eigenvalue_ = values.maxCoeff();
}

WeightMatrix WeightMatrix::diagonal(const Eigen::VectorXd& weights) {
  return WeightMatrix(Eigen::MatrixXd(weights.asDiagonal()));
}

GoalBuffer::GoalBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw ConfigError("goal buffer capacity must be positive");
}

void GoalBuffer::record_visit(const State& s, const FeatureVec& phi) {
  auto it = serial_.find(s);
  if (it != serial_.end()) {
    ++entries_[static_cast<std::size_t>(it->second - front_serial_)].count;
    return;
  }
  if (entries_.size() == capacity_) {
    serial_.erase(entries_.front().state);
    entries_.pop_front();
    ++front_serial_;
  }
  entries_.push_back({s, phi, 1});
  serial_.emplace(s, next_serial_++);
}

Eigen::VectorXd goal_sampling_probabilities(const GoalBuffer& buffer, double skew_alpha) {
  if (buffer.empty()) throw NotReadyError("goal buffer is empty; warm up with exploration first");
  if (skew_alpha > 0.0) throw ConfigError("skew_alpha must be <= 0");
  Eigen::VectorXd w(static_cast<Eigen::Index>(buffer.size()));
  Eigen::Index i = 0;
  for (const auto& e : buffer.entries()) w[i++] = std::pow(static_cast<double>(e.count), skew_alpha);
  return w / w.sum();
}

std::size_t sample_goal_index(const GoalBuffer& buffer, double skew_alpha, RngStream& rng) {
  return sample_categorical(goal_sampling_probabilities(buffer, skew_alpha), rng);
}

FeatureTarget sample_goal(const GoalBuffer& buffer, double skew_alpha, RngStream& rng) {
  return {buffer.entries()[sample_goal_index(buffer, skew_alpha, rng)].phi};
}

RigReward::RigReward(const GridWorldConfig& config, WeightMatrix a, std::size_t buffer_capacity)
    : config_(&config), a_(std::move(a)), buffer_(buffer_capacity) {
  if (a_.dim() != static_cast<Eigen::Index>(config.feature_dim())) {
    throw ConfigError("weight matrix dimension differs from the feature dimension");
  }
}

void RigReward::observe(const Transition& t) { buffer_.record_visit(t.next_state, features(t.next_state, *config_)); }

double RigReward::reward(const Transition& t) const {
  if (!t.goal || !std::holds_alternative<FeatureTarget>(*t.goal)) {
    throw ConfigError("distance reward needs a FeatureTarget goal");
  }
  return rig_reward(features(t.next_state, *config_), std::get<FeatureTarget>(*t.goal).vec, a_);
}

double RigReward::reward_bound() const {
  return std::sqrt(a_.max_eigenvalue() * static_cast<double>(config_->feature_dim()));
}

}  // namespace imlab
