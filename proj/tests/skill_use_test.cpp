#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "imlab/errors.hpp"
#include "imlab/metrics.hpp"
#include "imlab/skill_use.hpp"

using namespace imlab;

namespace {

State at(int x, int y) { return State{{x, y}, {}, {}}; }

}  // namespace

TEST(Discriminator, SmoothedPredictions) {
  Discriminator d(ConditionMode::current_state, 4, 1.0);
  const auto key = d.key(at(1, 1));
  for (std::size_t g = 0; g < 4; ++g) EXPECT_DOUBLE_EQ(d.predict(key, g), 0.25);
  d.add(key, 0, 9);
  EXPECT_NEAR(d.predict(key, 0), 10.0 / 13.0, 1e-15);
  for (std::size_t g = 1; g < 4; ++g) EXPECT_NEAR(d.predict(key, g), 1.0 / 13.0, 1e-15);
  EXPECT_EQ(d.argmax(key), 0U);
}

TEST(Discriminator, PredictionsSumToOne) {
  std::mt19937_64 gen(1);
  std::uniform_int_distribution<std::uint64_t> count(0, 1000);
  std::uniform_real_distribution<double> lambda(0.01, 5.0);
  for (int n = 0; n < 1000; ++n) {
    Discriminator d(ConditionMode::start_and_final, 2 + static_cast<std::size_t>(n % 7), lambda(gen));
    const auto key = d.key(at(0, 0), at(n % 5, 1));
    for (std::size_t g = 0; g < d.num_goals(); ++g) d.add(key, g, count(gen));
    EXPECT_NEAR(d.distribution(key).sum(), 1.0, 1e-12);
  }
}

TEST(Discriminator, KeyModeIsChecked) {
  Discriminator d(ConditionMode::current_state, 2);
  EXPECT_THROW(d.key(at(0, 0), at(1, 1)), ConfigError);
  EXPECT_THROW(Discriminator(ConditionMode::current_state, 1), ConfigError);
  EXPECT_THROW(Discriminator(ConditionMode::current_state, 2, 0.0), ConfigError);
}

TEST(VicReward, Examples) {
  const State s0 = at(0, 0), sf = at(2, 1);
  Discriminator d(ConditionMode::start_and_final, 4);
  GoalPolicy p(4);
  EXPECT_NEAR(vic_reward(d, p, s0, sf, 3), 0.0, 1e-12);
  d.add(d.key(s0, sf), 3, 1'000'000'000'000ULL);
  EXPECT_NEAR(vic_reward(d, p, s0, sf, 3), std::log(4.0), 1e-9);
  EXPECT_NEAR(vic_reward(d, p, s0, sf, 3), 1.386294, 1e-6);
}

TEST(VicReward, ExpectationIsMutualInformation) {
  // One start state, two skills, two final states. With the discriminator at
  // the exact posterior, E[log q(g|s0,sf) - log p(g|s0)] over goals and
  // outcomes equals I(G; Sf) for the start state. Both sides enumerated.
  const State s0 = at(0, 0);
  const std::array<State, 2> finals = {at(1, 0), at(0, 1)};
  const double reach[2][2] = {{0.9, 0.1}, {0.25, 0.75}};  // P(sf | g)

  GoalPolicy policy(2, 0.5);
  policy.update(s0, 1, 0.7);  // make p(g) non-uniform
  const Eigen::VectorXd pg = policy.probabilities(s0);

  Discriminator d(ConditionMode::start_and_final, 2, 1e-9);
  Eigen::MatrixXd joint(2, 2);
  constexpr double kScale = 1e12;
  for (std::size_t g = 0; g < 2; ++g) {
    for (std::size_t f = 0; f < 2; ++f) {
      joint(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(f)) = pg[static_cast<Eigen::Index>(g)] * reach[g][f];
      d.add(d.key(s0, finals[f]), g, static_cast<std::uint64_t>(std::llround(joint(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(f)) * kScale)));
    }
  }
  double expected_reward = 0.0;
  for (std::size_t g = 0; g < 2; ++g)
    for (std::size_t f = 0; f < 2; ++f)
      expected_reward += joint(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(f)) * vic_reward(d, policy, s0, finals[f], g);
  EXPECT_NEAR(expected_reward, mutual_information(joint), 1e-9);
}

TEST(DiaynReward, Examples) {
  Discriminator d(ConditionMode::current_state, 4);
  const State s = at(3, 3);
  EXPECT_NEAR(diayn_reward(d, s, 2), std::log(0.25), 1e-12);
  EXPECT_NEAR(diayn_reward(d, s, 2), -1.386294, 1e-6);
  d.add(d.key(s), 2, 3);
  d.add(d.key(s), 0, 1);
  EXPECT_NEAR(diayn_reward(d, s, 2), -0.693147, 1e-6);
  d.add(d.key(at(0, 0)), 1, 1'000'000'000'000ULL);
  EXPECT_NEAR(diayn_reward(d, at(0, 0), 1), 0.0, 1e-9);
}

TEST(DiaynReward, ModuleObservesNextState) {
  DiaynReward r(2, 1.0);
  Transition t{at(0, 0), Action::right, at(1, 0), {}, Goal{SkillIndex{1}}, false};
  r.observe(t);
  EXPECT_EQ(r.discriminator().count(r.discriminator().key(at(1, 0)), 1), 1U);
  EXPECT_NEAR(r.reward(t), std::log(2.0 / 3.0), 1e-12);
}

TEST(GoalPolicy, EqualRewardsKeepUniform) {
  GoalPolicy p(4, 0.3);
  const State s0 = at(0, 0);
  for (int round = 0; round < 50; ++round)
    for (std::size_t g = 0; g < 4; ++g) p.update(s0, g, 0.8);
  for (std::size_t g = 0; g < 4; ++g) EXPECT_NEAR(p.probability(s0, g), 0.25, 1e-12);
}

TEST(GoalPolicy, RewardedGoalDominatesQuickly) {
  GoalPolicy p(4, 0.5);
  const State s0 = at(0, 0);
  // Oracle: p0 <- p0 e^{0.5} / (p0 e^{0.5} + 1 - p0) while no entry hits the floor.
  double oracle = 0.25;
  int first_above = -1;
  for (int n = 1; n <= 200; ++n) {
    p.update(s0, 0, 1.0);
    oracle = oracle * std::exp(0.5) / (oracle * std::exp(0.5) + 1.0 - oracle);
    const Eigen::VectorXd probs = p.probabilities(s0);
    EXPECT_NEAR(probs.sum(), 1.0, 1e-12);
    EXPECT_GE(probs.minCoeff(), p.floor() - 1e-15);
    if ((1.0 - oracle) / 3.0 > p.floor()) EXPECT_NEAR(probs[0], oracle, 1e-12);
    if (first_above < 0 && probs[0] > 0.9) first_above = n;
  }
  EXPECT_GT(first_above, 0);
  EXPECT_LE(first_above, 200);
  EXPECT_NEAR(p.probability(s0, 1), p.floor(), 1e-15);
}

TEST(GoalPolicy, FloorProjection) {
  const Eigen::VectorXd p = project_with_floor(Eigen::Vector3d(0.998, 0.0015, 0.0005), 0.01);
  EXPECT_NEAR(p.sum(), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(p[1], 0.01);
  EXPECT_DOUBLE_EQ(p[2], 0.01);
  EXPECT_THROW(project_with_floor(Eigen::Vector3d(0.3, 0.3, 0.4), 0.5), ConfigError);
}

TEST(GoalSampling, UniformDiaynGoals) {
  RngStream rng(4, 0);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(diayn_goal_sample(1, rng), 0U);
  constexpr int kDraws = 10'000;
  std::array<int, 4> counts{};
  for (int i = 0; i < kDraws; ++i) ++counts[diayn_goal_sample(4, rng)];
  const double sigma = std::sqrt(kDraws * 0.25 * 0.75);
  for (int c : counts) EXPECT_LE(std::abs(c - kDraws * 0.25), 3 * sigma);

  RngStream a(9, 2), b(9, 2);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(diayn_goal_sample(4, a), diayn_goal_sample(4, b));
}

TEST(VicRewardModule, PaysOnlyOnLastStep) {
  VicReward r(2, 1.0, 0.1, 1e-3);
  const State s0 = at(0, 0);
  r.begin(s0);
  Transition mid{s0, Action::right, at(1, 0), {}, Goal{SkillIndex{0}}, false};
  r.observe(mid);
  EXPECT_EQ(r.reward(mid), 0.0);
  Transition last{at(1, 0), Action::right, at(2, 0), {}, Goal{SkillIndex{0}}, true};
  r.observe(last);
  const double expected = std::log(2.0 / 3.0) - std::log(0.5);
  EXPECT_NEAR(r.reward(last), expected, 1e-12);
  r.finish(0, expected);
  EXPECT_GT(r.policy().probability(s0, 0), 0.5);
}
