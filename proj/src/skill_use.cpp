#include "imlab/skill_use.hpp"

#include <algorithm>

#include "imlab/errors.hpp"

namespace imlab {

namespace {

std::size_t skill_of(const Transition& t) {
  if (!t.goal || !std::holds_alternative<SkillIndex>(*t.goal)) {
    throw ConfigError("skill-discrimination rewards need a SkillIndex goal");
  }
  return std::get<SkillIndex>(*t.goal).k;
}

}  // namespace

std::size_t ConditionKeyHash::operator()(const ConditionKey& k) const noexcept {
  const StateHash h;
  std::size_t seed = h(k.first);
  if (k.second) seed ^= h(*k.second) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
  return seed;
}

Discriminator::Discriminator(ConditionMode mode, std::size_t num_goals, double smoothing)
    : mode_(mode), num_goals_(num_goals), smoothing_(smoothing) {
  if (num_goals_ < 2) throw ConfigError("discriminator needs at least 2 goals");
  if (!(smoothing_ > 0.0)) throw ConfigError("discriminator smoothing must be positive");
}

ConditionKey Discriminator::key(const State& s) const {
  if (mode_ != ConditionMode::current_state) throw ConfigError("discriminator conditions on (s0, sf)");
  return {s, std::nullopt};
}

ConditionKey Discriminator::key(const State& s0, const State& sf) const {
  if (mode_ != ConditionMode::start_and_final) throw ConfigError("discriminator conditions on the current state");
  return {s0, sf};
}

void Discriminator::check_key(const ConditionKey& key) const {
  const bool pair = key.second.has_value();
  if (pair != (mode_ == ConditionMode::start_and_final)) throw ConfigError("condition key does not match mode");
}

void Discriminator::add(const ConditionKey& key, std::size_t goal, std::uint64_t n) {
  check_key(key);
  if (goal >= num_goals_) throw ConfigError("goal index out of range");
  auto [it, inserted] = counts_.try_emplace(key);
  if (inserted) it->second.assign(num_goals_, 0);
  it->second[goal] += n;
}

std::uint64_t Discriminator::count(const ConditionKey& key, std::size_t goal) const {
  auto it = counts_.find(key);
  return it == counts_.end() ? 0 : it->second[goal];
}

double Discriminator::predict(const ConditionKey& key, std::size_t goal) const {
  if (goal >= num_goals_) throw ConfigError("goal index out of range");
  check_key(key);
  const auto k = static_cast<double>(num_goals_);
  auto it = counts_.find(key);
  if (it == counts_.end()) return 1.0 / k;
  std::uint64_t total = 0;
  for (std::uint64_t c : it->second) total += c;
  return (static_cast<double>(it->second[goal]) + smoothing_) / (static_cast<double>(total) + smoothing_ * k);
}

Eigen::VectorXd Discriminator::distribution(const ConditionKey& key) const {
  Eigen::VectorXd p(static_cast<Eigen::Index>(num_goals_));
  for (std::size_t g = 0; g < num_goals_; ++g) p[static_cast<Eigen::Index>(g)] = predict(key, g);
  return p;
}

std::size_t Discriminator::argmax(const ConditionKey& key) const {
  check_key(key);
  auto it = counts_.find(key);
  if (it == counts_.end()) return 0;
  return static_cast<std::size_t>(std::max_element(it->second.begin(), it->second.end()) - it->second.begin());
}

bool Discriminator::operator==(const Discriminator& o) const {
  return mode_ == o.mode_ && num_goals_ == o.num_goals_ && smoothing_ == o.smoothing_ && counts_ == o.counts_;
}

Eigen::VectorXd project_with_floor(const Eigen::VectorXd& p, double floor) {
  const Eigen::Index n = p.size();
  if (floor * static_cast<double>(n) > 1.0) throw ConfigError("probability floor too large for the goal count");
  std::vector<bool> pinned(static_cast<std::size_t>(n), false);
  Eigen::VectorXd out = p / p.sum();
  for (Eigen::Index round = 0; round <= n; ++round) {
    double free_mass = 1.0;
    double free_sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (pinned[static_cast<std::size_t>(i)]) {
        free_mass -= floor;
      } else {
        free_sum += p[i];
      }
    }
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (pinned[static_cast<std::size_t>(i)]) {
        out[i] = floor;
        continue;
      }
      out[i] = free_sum > 0.0 ? p[i] / free_sum * free_mass : free_mass;
      if (out[i] < floor) {
        pinned[static_cast<std::size_t>(i)] = true;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return out;
}

std::size_t sample_categorical(const Eigen::VectorXd& p, RngStream& rng) {
  const double u = rng.uniform() * p.sum();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return static_cast<std::size_t>(i);
  }
  // Rounding can leave u == sum; fall back to the last positive entry.
  for (Eigen::Index i = p.size() - 1; i >= 0; --i) {
    if (p[i] > 0.0) return static_cast<std::size_t>(i);
  }
  return 0;
}

GoalPolicy::GoalPolicy(std::size_t num_goals, double learning_rate, double floor)
    : num_goals_(num_goals), learning_rate_(learning_rate), floor_(floor) {
  if (num_goals_ < 1) throw ConfigError("goal policy needs at least one goal");
  if (!(learning_rate_ > 0.0 && learning_rate_ <= 1.0)) throw ConfigError("goal-policy learning rate must lie in (0, 1]");
  if (!(floor_ > 0.0) || floor_ * static_cast<double>(num_goals_) > 1.0) {
    throw ConfigError("goal-policy floor must be positive and at most 1/K");
  }
}

Eigen::VectorXd GoalPolicy::probabilities(const State& s0) const {
  auto it = rows_.find(s0);
  if (it != rows_.end()) return it->second;
  return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(num_goals_), 1.0 / static_cast<double>(num_goals_));
}

double GoalPolicy::probability(const State& s0, std::size_t goal) const {
  return probabilities(s0)[static_cast<Eigen::Index>(goal)];
}

std::size_t GoalPolicy::sample(const State& s0, RngStream& rng) const {
  return sample_categorical(probabilities(s0), rng);
}

void GoalPolicy::update(const State& s0, std::size_t goal, double reward) {
  if (!std::isfinite(reward)) throw RewardFault("non-finite reward in goal-policy update");
  if (goal >= num_goals_) throw ConfigError("goal index out of range");
  Eigen::VectorXd p = probabilities(s0);
  p[static_cast<Eigen::Index>(goal)] *= std::exp(learning_rate_ * reward);
  rows_[s0] = project_with_floor(p / p.sum(), floor_);
}

double vic_reward(const Discriminator& d, const GoalPolicy& p, const State& s0, const State& sf, std::size_t goal) {
  return std::log(d.predict(d.key(s0, sf), goal)) - std::log(p.probability(s0, goal));
}

double diayn_reward(const Discriminator& d, const State& s_next, std::size_t goal) {
  return std::log(d.predict(d.key(s_next), goal));
}

std::size_t diayn_goal_sample(std::size_t num_goals, RngStream& rng) { return rng.uniform_index(num_goals); }

DiaynReward::DiaynReward(std::size_t num_goals, double smoothing)
    : discriminator_(ConditionMode::current_state, num_goals, smoothing) {}

void DiaynReward::observe(const Transition& t) {
  discriminator_.add(discriminator_.key(t.next_state), skill_of(t));
}

double DiaynReward::reward(const Transition& t) const {
  return diayn_reward(discriminator_, t.next_state, skill_of(t));
}

VicReward::VicReward(std::size_t num_goals, double smoothing, double learning_rate, double floor)
    : discriminator_(ConditionMode::start_and_final, num_goals, smoothing),
      policy_(num_goals, learning_rate, floor) {}

void VicReward::observe(const Transition& t) {
  if (!t.last) return;
  if (!s0_) throw ConsistencyFault("VIC execution finished without a start state");
  discriminator_.add(discriminator_.key(*s0_, t.next_state), skill_of(t));
}

double VicReward::reward(const Transition& t) const {
  if (!t.last) return 0.0;
  return vic_reward(discriminator_, policy_, *s0_, t.next_state, skill_of(t));
}

}  // namespace imlab
