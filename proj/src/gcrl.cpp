#include "imlab/gcrl.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "imlab/errors.hpp"

namespace imlab {

namespace {

nlohmann::json vec_to_json(const FeatureVec& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

}  // namespace

std::string describe(const Goal& goal) { return goal_to_json(goal).dump(); }

nlohmann::json goal_to_json(const Goal& goal) {
  return std::visit(
      [](const auto& g) -> nlohmann::json {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, SkillIndex>) {
          return {{"skill", g.k}};
        } else if constexpr (std::is_same_v<T, FeatureTarget>) {
          return {{"target", vec_to_json(g.vec)}};
        } else if constexpr (std::is_same_v<T, ModuleGoal>) {
          return {{"module", g.module}, {"target", vec_to_json(g.target)}};
        } else {
          return {{"event", g.event}};
        }
      },
      goal);
}

double QTable::get(const State& s, Action a) const {
  auto it = table_.find(s);
  return it == table_.end() ? default_value_ : it->second[static_cast<std::size_t>(a)];
}

ActionValues QTable::values(const State& s) const {
  auto it = table_.find(s);
  if (it != table_.end()) return it->second;
  ActionValues v;
  v.fill(default_value_);
  return v;
}

double QTable::max_value(const State& s) const {
  const ActionValues v = values(s);
  return *std::max_element(v.begin(), v.end());
}

void QTable::set(const State& s, Action a, double v) {
  auto [it, inserted] = table_.try_emplace(s);
  if (inserted) it->second.fill(default_value_);
  it->second[static_cast<std::size_t>(a)] = v;
}

double QTable::max_abs() const {
  double m = std::abs(default_value_);
  for (const auto& [_, v] : table_) {
    for (double x : v) m = std::max(m, std::abs(x));
  }
  return m;
}

void LearnerParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in [0, 1)");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in [0, 1]");
}

void q_update(QTable& q, const Transition& t, double reward, double alpha, double gamma, bool terminal) {
  if (!std::isfinite(reward)) throw RewardFault("non-finite reward passed to q_update");
  const double current = q.get(t.state, t.action);
  const double bootstrap = terminal ? 0.0 : gamma * q.max_value(t.next_state);
  q.set(t.state, t.action, current + alpha * (reward + bootstrap - current));
}

Action greedy(const QTable& q, const State& s) {
  const ActionValues v = q.values(s);
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return kAllActions[best];
}

Action epsilon_greedy(const QTable& q, const State& s, double epsilon, RngStream& rng) {
  if (epsilon > 0.0 && rng.uniform() < epsilon) return kAllActions[rng.uniform_index(kNumActions)];
  return greedy(q, s);
}

Rollout rollout(Skill& skill, const State& start, RewardModule& module, int horizon, RngStream& rng,
                const GridWorldConfig& config, const RolloutOptions& options) {
  if (horizon < 1) throw ConfigError("rollout horizon must be >= 1");
  const LearnerParams& lp = options.learner;
  const double bound = module.reward_bound();
  // Starting from default_value, |Q| stays within max(|default|, R_max / (1 - gamma)).
  const double q_bound =
      std::isfinite(bound) ? std::max(std::abs(skill.q.default_value()), bound / (1.0 - lp.gamma)) : bound;

  Rollout out;
  out.trajectory.reserve(static_cast<std::size_t>(horizon));
  State s = start;
  double discount = 1.0;
  for (int i = 0; i < horizon; ++i) {
    const Action a = epsilon_greedy(skill.q, s, lp.epsilon, rng);
    StepResult sr = step(s, a, config);
    Transition t{s, a, std::move(sr.next), std::move(sr.events), skill.goal, i + 1 == horizon};
    const bool stop = options.terminate && options.terminate(t);
    t.last = t.last || stop;

    module.observe(t);
    const double r = module.reward(t);
    if (!std::isfinite(r)) throw RewardFault("reward module returned a non-finite reward");
    if (std::abs(r) > bound) throw RewardFault("reward exceeds the module's declared bound");
    if (options.learn) {
      q_update(skill.q, t, r, lp.alpha, lp.gamma, stop);
      if (std::abs(skill.q.get(t.state, t.action)) > q_bound * (1.0 + 1e-12)) {
        throw ConsistencyFault("Q-value escaped R_max / (1 - gamma)");
      }
    }
    out.discounted_return += discount * r;
    discount *= lp.gamma;
    out.rewards.push_back(r);
    s = t.next_state;
    out.trajectory.push_back(std::move(t));
    if (stop) {
      out.terminated = true;
      break;
    }
  }
  return out;
}

}  // namespace imlab
