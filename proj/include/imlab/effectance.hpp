#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <unordered_map>
#include <vector>

#include "imlab/errors.hpp"
#include "imlab/gcrl.hpp"

namespace imlab {

// Impact of a transition scaled by state novelty:
//   ||phi_next - phi_s||_2 / sqrt(visits_next).
// Both feature vectors are expected to be masked already.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar impact_reward(const Eigen::MatrixBase<DerivedA>& phi_s,
                                        const Eigen::MatrixBase<DerivedB>& phi_next,
                                        std::uint64_t visits_next) {
  if (visits_next == 0) throw ConsistencyFault("impact reward queried for a state with zero visits");
  using Scalar = typename DerivedA::Scalar;
  return (phi_next - phi_s).norm() / std::sqrt(static_cast<Scalar>(visits_next));
}

class VisitCounts {
 public:
  void add(const State& s) { ++counts_[s]; }
  std::uint64_t count(const State& s) const;
  std::size_t distinct() const { return counts_.size(); }
  const std::unordered_map<State, std::uint64_t, StateHash>& table() const { return counts_; }

 private:
  std::unordered_map<State, std::uint64_t, StateHash> counts_;
};

struct MaskParams {
  std::size_t window = 500;
  double threshold = 0.9;
};

// Which features the agent's own actions control. Over the last `window`
// transitions a feature is flagged when it changed at least once and at least
// `threshold` of its changes happened on steps where the agent acted on the
// changing entity.
class ControllabilityMask {
 public:
  ControllabilityMask(const GridWorldConfig& config, MaskParams params = {});

  void update(const Transition& t);

  std::size_t dim() const { return flags_.size(); }
  bool controllable(std::size_t feature) const { return flags_[feature]; }
  const std::vector<bool>& flags() const { return flags_; }
  std::uint64_t changes(std::size_t feature) const { return changed_[feature]; }
  std::uint64_t attributed(std::size_t feature) const { return attributed_[feature]; }

  FeatureVec apply(const FeatureVec& phi) const;

 private:
  struct Record {
    std::vector<bool> changed;
    std::vector<bool> attributed;
  };

  void recompute();

  const GridWorldConfig* config_;
  MaskParams params_;
  std::deque<Record> window_;
  std::vector<std::uint64_t> changed_;
  std::vector<std::uint64_t> attributed_;
  std::vector<bool> flags_;
};

// Impact-driven reward over controllability-masked features with lifetime
// visit counts. The run's start state must be registered with
// note_initial_state so it counts as occupied.
class EffectanceReward final : public RewardModule {
 public:
  EffectanceReward(const GridWorldConfig& config, MaskParams mask_params = {});

  void note_initial_state(const State& s) { visits_.add(s); }
  void observe(const Transition& t) override;
  double reward(const Transition& t) const override;
  double reward_bound() const override;

  const VisitCounts& visits() const { return visits_; }
  const ControllabilityMask& mask() const { return mask_; }

 private:
  const GridWorldConfig* config_;
  VisitCounts visits_;
  ControllabilityMask mask_;
};

}  // namespace imlab
