// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Core>

#include "imlab/curriculum.hpp"
#include "imlab/effectance.hpp"
#include "imlab/event_log.hpp"
#include "imlab/gcrl.hpp"
#include "imlab/goal_distance.hpp"
#include "imlab/harness.hpp"
#include "imlab/metrics.hpp"
#include "imlab/playroom.hpp"
#include "imlab/salient_skills.hpp"
#include "imlab/skill_use.hpp"

namespace fs = std::filesystem;
using namespace imlab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects sub-check failures with a short reason.
struct Checker {
  Outcome out;
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      out.pass = false;
      if (!out.detail.empty()) out.detail += "; ";
      out.detail += what;
    }
  }
  void near(double got, double want, double tol, const std::string& what) {
    std::ostringstream ss;
    ss.precision(17);
    ss << what << " got " << got << " want " << want;
    expect(std::abs(got - want) <= tol, ss.str());
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

State at(int x, int y) { return State{{x, y}, {}, {}}; }

// ---------------------------------------------------------------------------

Outcome formulas() {
  Checker c;
  const double tol = 1e-9;
  // Impact reward.
  Eigen::Vector2d zero(0.0, 0.0), d34(3.0, 4.0);
  c.near(impact_reward(d34, d34, 5), 0.0, tol, "impact equal phi");
  c.near(impact_reward(zero, d34, 25), 1.0, tol, "impact (3,4)/sqrt(25)");
  const double r1 = impact_reward(zero, d34, 1);
  c.near(impact_reward(zero, d34, 4) / r1, 0.5, tol, "impact ratio N=4");
  c.near(impact_reward(zero, d34, 9) / r1, 1.0 / 3.0, tol, "impact ratio N=9");

  // VIC reward.
  const State s0 = at(0, 0), sf = at(1, 1);
  {
    Discriminator d(ConditionMode::start_and_final, 4, 1.0);
    GoalPolicy p(4);
    c.near(vic_reward(d, p, s0, sf, 2), 0.0, tol, "vic q = p");
    d.add(d.key(s0, sf), 1, 1'000'000'000'000ULL);  // q -> 1
    c.near(vic_reward(d, p, s0, sf, 1), std::log(4.0), tol, "vic q=1 p=0.25");
  }
  // DIAYN reward.
  {
    Discriminator d(ConditionMode::current_state, 4, 1.0);
    c.near(diayn_reward(d, sf, 0), std::log(0.25), tol, "diayn zero counts");
    d.add(d.key(sf), 0, 3);
    d.add(d.key(sf), 1, 1);  // q(0) = (3 + 1) / (4 + 4)
    c.near(diayn_reward(d, sf, 0), std::log(0.5), tol, "diayn q=0.5");
    c.near(diayn_reward(d, sf, 0), -0.693147, 1e-6, "diayn q=0.5 decimal");
    d.add(d.key(s0), 2, 1'000'000'000'000ULL);
    c.near(diayn_reward(d, s0, 2), 0.0, tol, "diayn q=1");
  }
  // Distance reward.
  {
    const auto id = WeightMatrix::identity(2);
    c.near(rig_reward(d34, d34, id), 0.0, tol, "rig equal");
    c.near(rig_reward(d34, zero, id), -5.0, tol, "rig (3,4)");
    c.near(rig_reward(Eigen::Vector2d(1.0, 0.0), zero, WeightMatrix::diagonal(Eigen::Vector2d(4.0, 1.0))), -2.0, tol,
           "rig diag(4,1)");
  }
  // Module probabilities.
  {
    const Eigen::VectorXd u = module_probabilities({0.3, -0.1, 0.5, 0.0}, 1.0);
    for (int i = 0; i < 4; ++i) c.near(u[i], 0.25, tol, "eps=1 uniform");
    const Eigen::VectorXd a = module_probabilities({0.2, -0.2, 0.6}, 0.0);
    c.near(a[0], 0.2, tol, "eps=0 p0");
    c.near(a[1], 0.2, tol, "eps=0 p1");
    c.near(a[2], 0.6, tol, "eps=0 p2");
    const Eigen::VectorXd b = module_probabilities({0.3, 0.1}, 0.1);
    c.near(b[0], 0.725, tol, "eps=0.1 p0");
    c.near(b[1], 0.275, tol, "eps=0.1 p1");
  }
  // Surprise reward.
  {
    MultiTimeModel m(1.0, 0.9);
    const State s = at(0, 0);
    c.near(imrl_reward(m, s, s, {}), 0.0, tol, "imrl no event");
    c.near(imrl_reward(m, s, s, {"light_on"}), 1.0, tol, "imrl P=0");
    c.near(surprise(1.0), 0.0, tol, "imrl P=1");
    m.update(s, "light_on", 1, true);
    c.near(m.get(s, "light_on"), 0.9, tol, "model alpha=1 k=1");
    c.near(imrl_reward(m, s, s, {"light_on"}), 0.1, tol, "imrl P=0.9");
  }
  return c.out;
}

Outcome module_probability_limits() {
  Checker c;
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> lp(-1.0, 1.0);
  for (int n = 1; n <= 8; ++n) {
    std::vector<double> lps(static_cast<std::size_t>(n));
    for (double& v : lps) v = lp(gen);
    const Eigen::VectorXd u = module_probabilities(lps, 1.0);
    for (int i = 0; i < n; ++i) c.expect(u[i] == 1.0 / n, "eps=1 not exactly uniform at N=" + std::to_string(n));

    double total = 0.0;
    for (double v : lps) total += std::abs(v);
    const Eigen::VectorXd g = module_probabilities(lps, 0.0);
    for (int i = 0; i < n; ++i) c.near(g[i], std::abs(lps[static_cast<std::size_t>(i)]) / total, 1e-12, "eps=0 |LP|");

    const Eigen::VectorXd z = module_probabilities(std::vector<double>(static_cast<std::size_t>(n), 0.0), 0.3);
    for (int i = 0; i < n; ++i) c.near(z[i], 1.0 / n, 1e-15, "zero LP uniform");
  }
  return c.out;
}

Outcome novelty_decay() {
  Checker c;
  const Eigen::Vector3d phi_s(0.0, 0.25, 1.0), phi_next(0.5, 0.25, 0.0);
  const double base = impact_reward(phi_s, phi_next, 1);
  double prev = base;
  for (std::uint64_t n = 2; n <= 100; ++n) {
    const double r = impact_reward(phi_s, phi_next, n);
    c.expect(r < prev, "not strictly decreasing at N=" + std::to_string(n));
    c.near(r / base, 1.0 / std::sqrt(static_cast<double>(n)), 1e-12, "ratio at N=" + std::to_string(n));
    prev = r;
  }
  return c.out;
}

double quarter_mi(const RunRecord& r, bool last) {
  const std::uint64_t q = r.config.total_steps / 4;
  OutcomeTable table;
  for (const EpisodeSummary& e : r.episodes) {
    const bool in = last ? e.start_step >= r.config.total_steps - q : e.start_step < q;
    if (in && e.goal_index) table.add(*e.goal_index, e.final_state);
  }
  return mutual_information(table);
}

Outcome skill_distinguishability() {
  Checker c;
  std::vector<RunConfig> configs;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RunConfig rc;
    rc.name = "diayn";
    rc.environment = empty_room(5, 5, 10);
    rc.facet = Facet::diayn;
    rc.total_steps = 50'000;
    rc.seed = seed;
    configs.push_back(rc);
  }
  const auto records = run_many(configs, {}, std::thread::hardware_concurrency());
  int accurate = 0, rising = 0;
  std::string accs, mis;
  for (const RunRecord& r : records) {
    const double acc = r.eval_accuracy.value_or(0.0);
    const double first = quarter_mi(r, false), last = quarter_mi(r, true);
    accurate += acc >= 0.6;
    rising += last > first;
    accs += fmt(" %.2f", acc);
    mis += fmt(" %.3f", first) + fmt("->%.3f", last);
  }
  c.expect(accurate >= 8, "accuracy >= 0.6 in " + std::to_string(accurate) + "/10 seeds");
  c.expect(rising >= 8, "MI rose in " + std::to_string(rising) + "/10 seeds");
  c.out.detail = (c.out.detail.empty() ? "" : c.out.detail + " | ") + "accuracy" + accs + " | MI" + mis;
  return c.out;
}

Outcome habituation() {
  Checker c;
  GridWorldConfig env = default_playroom();
  ImrlReward reward(env, 0.2, 0.9);
  State s = initial_state(env);
  s.agent = {0, 0};  // on the light, light off
  const StepResult sr = step(s, Action::interact, env);
  c.expect(sr.events == std::vector<EventId>{"light_on"}, "scripted transition does not fire light_on");
  std::vector<double> rewards;
  for (int i = 0; i < 50; ++i) {
    reward.begin_episode();
    Transition t{s, Action::interact, sr.next, sr.events, std::nullopt, true};
    reward.observe(t);
    rewards.push_back(reward.reward(t));
  }
  for (std::size_t i = 1; i < rewards.size(); ++i) c.expect(rewards[i] <= rewards[i - 1], "reward increased");
  c.near(rewards.back(), 0.1, 1e-3, "final reward");
  c.out.detail = (c.out.detail.empty() ? "" : c.out.detail + " | ") + fmt("first %.4f", rewards.front()) +
                 fmt(" last %.6f", rewards.back());
  return c.out;
}

Outcome repertoire_growth() {
  Checker c;
  std::vector<RunConfig> configs;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RunConfig rc;
    rc.name = "explore";
    rc.environment = default_playroom();
    rc.facet = Facet::imrl;
    rc.learner.epsilon = 1.0;  // uniformly random actions
    rc.total_steps = 20'000;
    rc.seed = seed;
    configs.push_back(rc);
  }
  const auto records = run_many(configs, {}, std::thread::hardware_concurrency());
  int exact = 0;
  std::string sizes;
  for (const RunRecord& r : records) {
    exact += r.repertoire_size == 2;
    sizes += " " + std::to_string(r.repertoire_size);
    const MetricSeries* s = r.find("repertoire_size");
    c.expect(s && !s->empty(), "no repertoire series");
    if (!s) continue;
    for (std::size_t i = 1; i < s->points().size(); ++i) {
      c.expect(s->points()[i].value >= s->points()[i - 1].value, "repertoire shrank in " + r.run_id);
    }
  }
  c.expect(exact >= 9, "exactly 2 skills in " + std::to_string(exact) + "/10 seeds");
  c.out.detail = (c.out.detail.empty() ? "" : c.out.detail + " | ") + "sizes" + sizes;
  return c.out;
}

Outcome lp_curriculum() {
  Checker c;
  constexpr int kRamp = 3000;
  int wins = 0;
  std::string shares;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RngStream pick(seed, 1), outcome(seed, 2);
    std::vector<CompetenceQueue> queues(3, CompetenceQueue(40));
    int chosen_a = 0;
    for (int trial = 0; trial < kRamp; ++trial) {
      std::vector<double> lps;
      for (const auto& q : queues) lps.push_back(learning_progress_or_zero(q));
      const std::size_t m = sample_categorical(module_probabilities(lps, 0.1), pick);
      const double p_success = m == 0 ? static_cast<double>(trial) / (kRamp - 1) : (m == 1 ? 0.0 : 1.0);
      queues[m].push(outcome.uniform() < p_success);
      chosen_a += m == 0;
    }
    const double share = static_cast<double>(chosen_a) / kRamp;
    wins += share > 0.5;
    shares += fmt(" %.3f", share);
  }
  c.expect(wins >= 9, "module A majority in " + std::to_string(wins) + "/10 seeds");
  c.out.detail = (c.out.detail.empty() ? "" : c.out.detail + " | ") + "A share" + shares;
  return c.out;
}

Outcome thompson() {
  Checker c;
  RngStream rng(11, 0);
  constexpr int kDraws = 10'000;
  const std::vector<Belief> skewed{{100.0, 1.0}, {1.0, 100.0}};
  int first = 0;
  for (int i = 0; i < kDraws; ++i) first += thompson_select(skewed, rng) == 0;
  c.expect(first >= 0.99 * kDraws, "dominant arm chosen " + std::to_string(first) + "/10000");

  const std::vector<Belief> sym(3, Belief{2.0, 2.0});
  std::vector<int> counts(3, 0);
  for (int i = 0; i < kDraws; ++i) ++counts[thompson_select(sym, rng)];
  const double p = 1.0 / 3.0, sigma = std::sqrt(kDraws * p * (1 - p));
  for (int k : counts) c.expect(std::abs(k - kDraws * p) <= 3 * sigma, "symmetric arm count " + std::to_string(k));
  c.out.detail = (c.out.detail.empty() ? "" : c.out.detail + " | ") + "dominant " + std::to_string(first) +
                 "/10000, symmetric " + std::to_string(counts[0]) + "/" + std::to_string(counts[1]) + "/" +
                 std::to_string(counts[2]);
  return c.out;
}

// Straight double loop over cells, independent of the library code path.
double mi_oracle(const Eigen::MatrixXd& counts) {
  double total = 0.0;
  for (int i = 0; i < counts.rows(); ++i)
    for (int j = 0; j < counts.cols(); ++j) total += counts(i, j);
  std::vector<double> row(static_cast<std::size_t>(counts.rows()), 0.0), col(static_cast<std::size_t>(counts.cols()), 0.0);
  for (int i = 0; i < counts.rows(); ++i)
    for (int j = 0; j < counts.cols(); ++j) {
      row[static_cast<std::size_t>(i)] += counts(i, j) / total;
      col[static_cast<std::size_t>(j)] += counts(i, j) / total;
    }
  double mi = 0.0;
  for (int i = 0; i < counts.rows(); ++i)
    for (int j = 0; j < counts.cols(); ++j) {
      const double pij = counts(i, j) / total;
      if (pij > 0) mi += pij * (std::log(pij) - std::log(row[static_cast<std::size_t>(i)]) - std::log(col[static_cast<std::size_t>(j)]));
    }
  return mi;
}

std::uint64_t falling(std::uint64_t n, std::uint64_t k) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < k; ++i) r *= n - i;
  return r;
}

Outcome oracle_equivalence() {
  Checker c;
  // Mutual information.
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<int> dim(1, 6), cnt(0, 50);
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    Eigen::MatrixXd m(dim(gen), dim(gen));
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) m(i, j) = cnt(gen);
    m(0, 0) += 1.0;
    worst = std::max(worst, std::abs(mutual_information(m) - std::max(0.0, mi_oracle(m))));
  }
  c.expect(worst <= 1e-12, fmt("MI max error %.3g", worst));

  // Q-learning on a 2-state chain: "right" moves to the goal state b, every
  // other action returns to a; entering b pays 1.
  const State a = at(0, 0), b = at(1, 0);
  const double gamma = 0.9, alpha = 0.5;
  auto next_of = [&](Action act) { return act == Action::right ? b : a; };
  double vi[2][kNumActions] = {};
  for (int it = 0; it < 2000; ++it) {
    double nv[2][kNumActions];
    for (int s = 0; s < 2; ++s)
      for (std::size_t k = 0; k < kNumActions; ++k) {
        const int sn = kAllActions[k] == Action::right ? 1 : 0;
        double best = vi[sn][0];
        for (std::size_t k2 = 1; k2 < kNumActions; ++k2) best = std::max(best, vi[sn][k2]);
        nv[s][k] = (sn == 1 ? 1.0 : 0.0) + gamma * best;
      }
    std::copy(&nv[0][0], &nv[0][0] + 2 * kNumActions, &vi[0][0]);
  }
  QTable q;
  for (int sweep = 0; sweep < 100'000; ++sweep) {
    for (const State& s : {a, b}) {
      for (Action act : kAllActions) {
        Transition t{s, act, next_of(act), {}, std::nullopt, false};
        q_update(q, t, act == Action::right ? 1.0 : 0.0, alpha, gamma);
      }
    }
  }
  double q_err = 0.0;
  for (int s = 0; s < 2; ++s)
    for (std::size_t k = 0; k < kNumActions; ++k) q_err = std::max(q_err, std::abs(q.get(s ? b : a, kAllActions[k]) - vi[s][k]));
  c.expect(q_err <= 1e-6, fmt("Q error %.3g", q_err));

  // State counts against closed forms: 2^toggles * blocks placed on free
  // cells other than toggle cells * agent on any remaining free cell.
  struct Case {
    GridWorldConfig env;
    std::uint64_t expected;
  };
  std::vector<Case> cases;
  cases.push_back({empty_room(2, 2, 5), 4});
  {
    GridWorldConfig g = empty_room(2, 2, 5);
    g.agent_start = {0, 0};
    g.objects.push_back({"light", {1, 1}, ObjectKind::light, false});
    cases.push_back({g, 4 * 2});
  }
  {
    GridWorldConfig g = empty_room(3, 3, 5);
    g.objects.push_back({"light", {0, 0}, ObjectKind::light, false});
    g.objects.push_back({"bell", {2, 2}, ObjectKind::bell, false});
    cases.push_back({g, 9 * 4});
  }
  {
    GridWorldConfig g = empty_room(3, 3, 5);
    g.objects.push_back({"box", {0, 1}, ObjectKind::block, false});
    cases.push_back({g, falling(9, 1) * 8});
  }
  {
    GridWorldConfig g = empty_room(4, 3, 5);
    g.walls.push_back({3, 0});
    g.agent_start = {0, 0};
    g.objects.push_back({"b1", {1, 1}, ObjectKind::block, false});
    g.objects.push_back({"b2", {2, 1}, ObjectKind::block, false});
    g.objects.push_back({"light", {0, 2}, ObjectKind::light, false});
    cases.push_back({g, 2 * falling(10, 2) * 9});
  }
  cases.push_back({default_playroom(), 4 * falling(23, 1) * 24});
  for (const Case& k : cases) {
    const auto states = enumerate_states(k.env);
    c.expect(states.size() == k.expected, "enumerate gave " + std::to_string(states.size()) + " want " +
                                              std::to_string(k.expected));
  }
  c.out.detail = (c.out.detail.empty() ? "" : c.out.detail + " | ") + fmt("MI err %.2g", worst) +
                 fmt(", Q err %.2g", q_err);
  return c.out;
}

Outcome behavioural_divergence() {
  Checker c;
  std::vector<RunConfig> configs;
  for (Facet f : {Facet::effectance, Facet::diayn, Facet::rig}) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      RunConfig rc;
      rc.environment = default_playroom();
      rc.facet = f;
      rc.total_steps = 50'000;
      rc.seed = seed;
      configs.push_back(rc);
    }
  }
  const auto records = run_many(configs, {}, std::thread::hardware_concurrency());
  const ComparisonReport rep = compare(records);
  c.expect(rep.mean_between > rep.mean_within, "between not above within");
  c.out.detail = (c.out.detail.empty() ? "" : c.out.detail + " | ") + fmt("between %.4f", rep.mean_between) +
                 fmt(" within %.4f", rep.mean_within);
  return c.out;
}

Outcome determinism() {
  Checker c;
  const fs::path root = fs::temp_directory_path() / "imlab_acceptance_determinism";
  fs::remove_all(root);
  for (Facet f : {Facet::effectance, Facet::vic, Facet::diayn, Facet::rig, Facet::curious, Facet::imrl}) {
    RunConfig rc;
    rc.environment = default_playroom();
    rc.facet = f;
    rc.total_steps = 4000;
    rc.seed = 5;
    const std::string name(to_string(f));
    const RunRecord r1 = run(rc, {root / "a"});
    const RunRecord r2 = run(rc, {root / "b"});
    for (const char* file : {"events.jsonl", "metrics.csv"}) {
      const std::string x = read_file(r1.run_dir / file), y = read_file(r2.run_dir / file);
      c.expect(!x.empty() && x == y, name + " " + file + " differs");
    }
    const MetricTracker replay = replay_event_log(r1.run_dir / "events.jsonl");
    c.expect(replay.series() == r1.series, name + " replay differs");
    c.expect(parse_metrics_csv(read_file(r1.run_dir / "metrics.csv")) == r1.series, name + " csv round trip differs");
  }
  fs::remove_all(root);
  return c.out;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> fn;
  };
  const std::vector<Criterion> criteria = {
      {1, "formula conformance", formulas},
      {2, "module probability limits", module_probability_limits},
      {3, "novelty decay", novelty_decay},
      {4, "skill distinguishability", skill_distinguishability},
      {5, "habituation", habituation},
      {6, "repertoire growth", repertoire_growth},
      {7, "learning-progress curriculum", lp_curriculum},
      {8, "thompson sampling", thompson},
      {9, "oracle equivalence", oracle_equivalence},
      {10, "behavioural divergence", behavioural_divergence},
      {11, "determinism and replay", determinism},
  };
  int failures = 0;
  for (const Criterion& cr : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cr.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.pass;
    std::printf("criterion %2d %-30s %s (%.2fs)%s%s\n", cr.id, cr.name, o.pass ? "PASS" : "FAIL", secs,
                o.detail.empty() ? "" : "  ", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
