#include "imlab/curriculum.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "imlab/errors.hpp"

namespace imlab {

void ModuleSpec::validate(std::size_t feature_dim) const {
  if (id.empty()) throw ConfigError("module id must be non-empty");
  if (subspace.empty()) throw ConfigError("module '" + id + "' has an empty subspace");
  std::set<std::size_t> seen;
  for (std::size_t i : subspace) {
    if (i >= feature_dim) throw ConfigError("module '" + id + "' references feature " + std::to_string(i));
    if (!seen.insert(i).second) throw ConfigError("module '" + id + "' repeats feature " + std::to_string(i));
  }
}

std::vector<ModuleSpec> default_modules(const GridWorldConfig& config) {
  std::vector<ModuleSpec> out{{"agent", {0, 1}}};
  std::size_t f = 2;
  for (const ObjectSpec& o : config.objects) {
    if (o.toggleable()) out.push_back({o.id, {f++}});
  }
  for (const ObjectSpec& o : config.objects) {
    if (!o.toggleable()) {
      out.push_back({o.id, {f, f + 1}});
      f += 2;
    }
  }
  return out;
}

CompetenceQueue::CompetenceQueue(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ < 2 || capacity_ % 2 != 0) throw ConfigError("competence queue length must be even and >= 2");
}

void CompetenceQueue::push(bool success) {
  outcomes_.push_back(success ? 1 : 0);
  if (outcomes_.size() > capacity_) outcomes_.pop_front();
}

double competence(const CompetenceQueue& q) {
  if (q.size() == 0) throw NotReadyError("competence of an empty queue");
  double sum = 0.0;
  for (auto o : q.outcomes()) sum += o;
  return sum / static_cast<double>(q.size());
}

double learning_progress(const CompetenceQueue& q) {
  const std::size_t n = q.size();
  if (n < 2) throw NotReadyError("learning progress needs at least two outcomes");
  const std::size_t older = (n + 1) / 2;
  double old_sum = 0.0;
  double new_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) (i < older ? old_sum : new_sum) += q.outcomes()[i];
  return new_sum / static_cast<double>(n - older) - old_sum / static_cast<double>(older);
}

double learning_progress_or_zero(const CompetenceQueue& q) { return q.size() < 2 ? 0.0 : learning_progress(q); }

Eigen::VectorXd module_probabilities(const std::vector<double>& lps, double epsilon) {
  if (lps.empty()) throw ConfigError("module_probabilities needs at least one module");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in [0, 1]");
  const auto n = static_cast<Eigen::Index>(lps.size());
  Eigen::VectorXd abs_lp(n);
  for (Eigen::Index i = 0; i < n; ++i) abs_lp[i] = std::abs(lps[static_cast<std::size_t>(i)]);
  const double total = abs_lp.sum();
  const Eigen::VectorXd uniform = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  const Eigen::VectorXd progress = total > 0.0 ? Eigen::VectorXd(abs_lp / total) : uniform;
  return epsilon * uniform + (1.0 - epsilon) * progress;
}

std::size_t thompson_select(const std::vector<Belief>& beliefs, RngStream& rng) {
  if (beliefs.empty()) throw ConfigError("thompson_select needs at least one belief");
  std::size_t best = 0;
  double best_draw = -1.0;
  for (std::size_t i = 0; i < beliefs.size(); ++i) {
    const double draw = rng.beta(beliefs[i].alpha, beliefs[i].beta);
    if (draw > best_draw) {
      best_draw = draw;
      best = i;
    }
  }
  return best;
}

void belief_update(std::vector<Belief>& beliefs, std::size_t index, bool success) {
  (success ? beliefs.at(index).alpha : beliefs.at(index).beta) += 1.0;
}

FeatureVec restrict_to(const FeatureVec& phi, const ModuleSpec& module) {
  FeatureVec out(static_cast<Eigen::Index>(module.subspace.size()));
  for (std::size_t i = 0; i < module.subspace.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = phi[static_cast<Eigen::Index>(module.subspace[i])];
  }
  return out;
}

ModuleGoal sample_module_goal(const GoalBuffer& buffer, const ModuleSpec& module, RngStream& rng) {
  if (buffer.empty()) throw NotReadyError("goal buffer is empty; warm up with exploration first");
  const auto& entry = buffer.entries()[rng.uniform_index(buffer.size())];
  return {module.id, restrict_to(entry.phi, module)};
}

ModuleDistanceReward::ModuleDistanceReward(const GridWorldConfig& config, std::vector<ModuleSpec> modules,
                                           std::size_t buffer_capacity)
    : config_(&config), modules_(std::move(modules)), buffer_(buffer_capacity) {
  if (modules_.empty()) throw ConfigError("at least one module is required");
  std::set<ModuleId> ids;
  for (const ModuleSpec& m : modules_) {
    m.validate(config.feature_dim());
    if (!ids.insert(m.id).second) throw ConfigError("duplicate module id '" + m.id + "'");
  }
}

const ModuleSpec& ModuleDistanceReward::module(const ModuleId& id) const {
  auto it = std::find_if(modules_.begin(), modules_.end(), [&](const ModuleSpec& m) { return m.id == id; });
  if (it == modules_.end()) throw ConfigError("unknown module '" + id + "'");
  return *it;
}

double ModuleDistanceReward::distance(const State& s, const ModuleGoal& goal) const {
  const ModuleSpec& m = module(goal.module);
  if (goal.target.size() != static_cast<Eigen::Index>(m.subspace.size())) {
    throw ConfigError("module goal dimension differs from the module subspace");
  }
  return (restrict_to(features(s, *config_), m) - goal.target).norm();
}

void ModuleDistanceReward::observe(const Transition& t) {
  buffer_.record_visit(t.next_state, features(t.next_state, *config_));
}

double ModuleDistanceReward::reward(const Transition& t) const {
  if (!t.goal || !std::holds_alternative<ModuleGoal>(*t.goal)) throw ConfigError("module reward needs a ModuleGoal");
  return -distance(t.next_state, std::get<ModuleGoal>(*t.goal));
}

double ModuleDistanceReward::reward_bound() const {
  std::size_t widest = 0;
  for (const ModuleSpec& m : modules_) widest = std::max(widest, m.subspace.size());
  return std::sqrt(static_cast<double>(widest));
}

}  // namespace imlab
