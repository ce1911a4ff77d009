#include "imlab/effectance.hpp"

namespace imlab {

std::uint64_t VisitCounts::count(const State& s) const {
  auto it = counts_.find(s);
  return it == counts_.end() ? 0 : it->second;
}

ControllabilityMask::ControllabilityMask(const GridWorldConfig& config, MaskParams params)
    : config_(&config),
      params_(params),
      changed_(config.feature_dim(), 0),
      attributed_(config.feature_dim(), 0),
      flags_(config.feature_dim(), false) {
  if (params_.window == 0) throw ConfigError("controllability window must be positive");
  if (!(params_.threshold >= 0.0 && params_.threshold <= 1.0)) {
    throw ConfigError("controllability threshold must lie in [0, 1]");
  }
}

void ControllabilityMask::update(const Transition& t) {
  const std::size_t n = dim();
  Record rec{std::vector<bool>(n, false), std::vector<bool>(n, false)};

  // Agent coordinates: moved by its own movement action.
  const bool moved = t.action != Action::interact;
  std::size_t f = 0;
  for (std::size_t axis = 0; axis < 2; ++axis, ++f) {
    const int before = axis == 0 ? t.state.agent.x : t.state.agent.y;
    const int after = axis == 0 ? t.next_state.agent.x : t.next_state.agent.y;
    if (before != after) {
      rec.changed[f] = true;
      rec.attributed[f] = moved;
    }
  }
  // Toggles: caused by interacting while standing on the object.
  std::size_t toggle = 0;
  std::size_t block = 0;
  std::vector<std::size_t> block_feature;
  for (const ObjectSpec& o : config_->objects) {
    if (!o.toggleable()) continue;
    if (t.state.object_on[toggle] != t.next_state.object_on[toggle]) {
      rec.changed[f] = true;
      rec.attributed[f] = t.action == Action::interact && t.state.agent == o.cell;
    }
    ++toggle;
    ++f;
  }
  // Blocks: caused by the agent stepping into the block's previous cell.
  for (; block < t.state.blocks.size(); ++block) {
    const Cell before = t.state.blocks[block];
    const Cell after = t.next_state.blocks[block];
    const bool pushed = moved && t.next_state.agent == before;
    if (before.x != after.x) {
      rec.changed[f] = true;
      rec.attributed[f] = pushed;
    }
    if (before.y != after.y) {
      rec.changed[f + 1] = true;
      rec.attributed[f + 1] = pushed;
    }
    f += 2;
  }

  for (std::size_t i = 0; i < n; ++i) {
    changed_[i] += rec.changed[i];
    attributed_[i] += rec.attributed[i];
  }
  window_.push_back(std::move(rec));
  if (window_.size() > params_.window) {
    const Record& old = window_.front();
    for (std::size_t i = 0; i < n; ++i) {
      changed_[i] -= old.changed[i];
      attributed_[i] -= old.attributed[i];
    }
    window_.pop_front();
  }
  recompute();
}

void ControllabilityMask::recompute() {
  for (std::size_t i = 0; i < dim(); ++i) {
    flags_[i] = changed_[i] > 0 &&
                static_cast<double>(attributed_[i]) >= params_.threshold * static_cast<double>(changed_[i]);
  }
}

FeatureVec ControllabilityMask::apply(const FeatureVec& phi) const {
  FeatureVec out = phi;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (!flags_[i]) out[static_cast<Eigen::Index>(i)] = 0.0;
  }
  return out;
}

EffectanceReward::EffectanceReward(const GridWorldConfig& config, MaskParams mask_params)
    : config_(&config), mask_(config, mask_params) {}

void EffectanceReward::observe(const Transition& t) {
  visits_.add(t.next_state);
  mask_.update(t);
}

double EffectanceReward::reward(const Transition& t) const {
  return impact_reward(mask_.apply(features(t.state, *config_)), mask_.apply(features(t.next_state, *config_)),
                       visits_.count(t.next_state));
}

double EffectanceReward::reward_bound() const {
  // Features live in [0, 1], so a masked difference has norm at most sqrt(dim).
  return std::sqrt(static_cast<double>(config_->feature_dim()));
}

}  // namespace imlab
