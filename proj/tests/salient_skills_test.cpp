#include <cmath>

#include <gtest/gtest.h>

#include "imlab/errors.hpp"
#include "imlab/salient_skills.hpp"

using namespace imlab;

namespace {

Transition take(const State& s, Action a, const GridWorldConfig& g) {
  const StepResult r = step(s, a, g);
  return {s, a, r.next, r.events, std::nullopt, false};
}

}  // namespace

TEST(Surprise, Examples) {
  MultiTimeModel m;
  const State s = initial_state(default_playroom());
  EXPECT_EQ(imrl_reward(m, s, s, {}), 0.0);
  EXPECT_EQ(imrl_reward(m, s, s, {"bell_rung"}), 1.0);
  EXPECT_EQ(surprise(1.0), 0.0);
  EXPECT_EQ(surprise(0.0), 1.0);
  EXPECT_THROW(surprise(1.5), ConfigError);
  EXPECT_EQ(imrl_reward(m, s, s, {"bell_rung", "light_on"}, 0.5), 1.0);
}

TEST(MultiTimeModel, UpdateRule) {
  const State s = initial_state(default_playroom());
  MultiTimeModel full(1.0, 0.9);
  full.update(s, "light_on", 1, true);
  EXPECT_DOUBLE_EQ(full.get(s, "light_on"), 0.9);

  MultiTimeModel m(0.2, 0.9);
  m.update(s, "light_on", 1, true);
  double p = m.get(s, "light_on");
  for (int i = 0; i < 30; ++i) {
    m.update(s, "light_on", 2, false);
    const double next = m.get(s, "light_on");
    EXPECT_NEAR(next, 0.8 * p, 1e-15);
    p = next;
  }
  EXPECT_LT(p, 1e-3);
  EXPECT_THROW(MultiTimeModel(0.0, 0.9), ConfigError);
  EXPECT_THROW(m.update(s, "light_on", 0, true), ConfigError);
}

TEST(MultiTimeModel, ShorterPathsScoreHigher) {
  const State s = initial_state(default_playroom());
  MultiTimeModel one(0.2, 0.9), three(0.2, 0.9);
  for (int i = 0; i < 200; ++i) {
    one.update(s, "e", 1, true);
    three.update(s, "e", 3, true);
  }
  EXPECT_NEAR(one.get(s, "e"), 0.9, 1e-9);
  EXPECT_NEAR(three.get(s, "e"), std::pow(0.9, 3), 1e-9);
  EXPECT_GT(one.get(s, "e"), three.get(s, "e"));
}

TEST(Repertoire, SpawnsOncePerEvent) {
  SkillRepertoire r;
  EXPECT_EQ(r.maybe_spawn({"light_on"}), std::vector<EventId>{"light_on"});
  EXPECT_EQ(r.size(), 1U);
  EXPECT_TRUE(r.maybe_spawn({"light_on"}).empty());
  EXPECT_EQ(r.size(), 1U);
  r.maybe_spawn({"bell_rung", "light_on"});
  EXPECT_EQ(r.creation_order(), (std::vector<EventId>{"light_on", "bell_rung"}));
  EXPECT_TRUE(std::holds_alternative<SalientEvent>(r.skill("bell_rung").goal));
}

TEST(ImrlRewardModule, HabituatesToRepeatedEvent) {
  const GridWorldConfig g = default_playroom();
  ImrlReward r(g, 0.2, 0.9);
  State s = initial_state(g);
  s.agent = {0, 0};
  std::vector<double> rewards;
  for (int i = 0; i < 50; ++i) {
    r.begin_episode();
    const Transition t = take(s, Action::interact, g);
    r.observe(t);
    rewards.push_back(r.reward(t));
  }
  EXPECT_DOUBLE_EQ(rewards[0], 1.0);
  for (std::size_t i = 1; i < rewards.size(); ++i) {
    EXPECT_LE(rewards[i], rewards[i - 1]);
    EXPECT_NEAR(rewards[i], 1.0 - 0.9 * (1.0 - std::pow(0.8, static_cast<double>(i))), 1e-12);
  }
  EXPECT_NEAR(rewards.back(), 0.1, 1e-3);
}

TEST(ImrlRewardModule, ScriptedTourSpawnsBothSkills) {
  const GridWorldConfig g = default_playroom();  // start (2,2), light (0,0), bell (4,4)
  ImrlReward r(g, 0.2, 0.9);
  r.begin_episode();
  const std::vector<Action> tour = {Action::left, Action::left, Action::up,    Action::up,   Action::interact,
                                    Action::right, Action::right, Action::right, Action::right, Action::down,
                                    Action::down,  Action::down,  Action::down,  Action::interact};
  State s = initial_state(g);
  std::vector<EventId> fired;
  for (Action a : tour) {
    const Transition t = take(s, a, g);
    r.observe(t);
    fired.insert(fired.end(), t.events.begin(), t.events.end());
    if (!t.events.empty()) EXPECT_DOUBLE_EQ(r.reward(t), 1.0);
    s = t.next_state;
  }
  EXPECT_EQ(fired, (std::vector<EventId>{"light_on", "bell_rung"}));
  EXPECT_EQ(r.repertoire().size(), 2U);
  // Every state on the way to the light learned about it, closer ones more.
  const double near = r.model().get(take(initial_state(g), Action::left, g).next_state, "light_on");
  const double far = r.model().get(initial_state(g), "light_on");
  EXPECT_NEAR(far, 0.2 * std::pow(0.9, 5), 1e-12);
  EXPECT_NEAR(near, 0.2 * std::pow(0.9, 4), 1e-12);
  EXPECT_DOUBLE_EQ(r.reward_bound(), 2.0);
}
