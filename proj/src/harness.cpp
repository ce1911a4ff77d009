#include "imlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

#include "imlab/curriculum.hpp"
#include "imlab/effectance.hpp"
#include "imlab/errors.hpp"
#include "imlab/event_log.hpp"
#include "imlab/goal_distance.hpp"
#include "imlab/salient_skills.hpp"
#include "imlab/skill_use.hpp"
#include "imlab/svg.hpp"

namespace imlab {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr std::uint64_t kPolicyStream = 1;
constexpr std::uint64_t kGoalStream = 2;
constexpr std::uint64_t kEvalStream = 3;

// Facet reward plus weighted auxiliary terms.
class CombinedReward final : public RewardModule {
 public:
  CombinedReward(RewardModule& primary, std::vector<std::pair<RewardModule*, double>> terms)
      : primary_(primary), terms_(std::move(terms)) {}

  void observe(const Transition& t) override {
    primary_.observe(t);
    for (auto& [m, _] : terms_) m->observe(t);
  }
  double reward(const Transition& t) const override {
    double r = primary_.reward(t);
    for (const auto& [m, w] : terms_) r += w * m->reward(t);
    return r;
  }
  double reward_bound() const override {
    double b = primary_.reward_bound();
    for (const auto& [m, w] : terms_) b += w * m->reward_bound();
    return b;
  }

 private:
  RewardModule& primary_;
  std::vector<std::pair<RewardModule*, double>> terms_;
};

struct EpisodePlan {
  Skill* skill = nullptr;
  State start;
  std::optional<std::size_t> goal_index;
  std::optional<ModuleId> module;
  std::function<bool(const Transition&)> terminate;
};

// Goal selection and bookkeeping around one facet's skill executions.
class FacetLoop {
 public:
  virtual ~FacetLoop() = default;
  virtual RewardModule& module() = 0;
  virtual EpisodePlan plan(const State& previous_final, RngStream& goal_rng) = 0;
  // Returns the trial outcome when the facet defines one.
  virtual std::optional<bool> finish(const EpisodePlan& plan, const Rollout& r) = 0;
  virtual void note_initial_state(const State&) {}
  virtual const Discriminator* discriminator() const { return nullptr; }
  virtual std::vector<Skill*> discrete_skills() { return {}; }
  virtual std::size_t repertoire_size() const { return 0; }
};

class EffectanceLoop final : public FacetLoop {
 public:
  EffectanceLoop(const RunConfig& c)
      : initial_(initial_state(c.environment)), skill_{SkillIndex{0}, QTable(c.initial_q())}, reward_(c.environment, c.mask) {}
  RewardModule& module() override { return reward_; }
  void note_initial_state(const State& s) override { reward_.note_initial_state(s); }
  EpisodePlan plan(const State&, RngStream&) override { return {&skill_, initial_, std::nullopt, std::nullopt, {}}; }
  std::optional<bool> finish(const EpisodePlan&, const Rollout&) override { return std::nullopt; }

 private:
  State initial_;
  Skill skill_;
  EffectanceReward reward_;
};

class DiaynLoop final : public FacetLoop {
 public:
  DiaynLoop(const RunConfig& c)
      : initial_(initial_state(c.environment)), reward_(c.skills.num_skills, c.skills.smoothing) {
    for (std::size_t k = 0; k < c.skills.num_skills; ++k) skills_.push_back({SkillIndex{k}, QTable(c.initial_q())});
  }
  RewardModule& module() override { return reward_; }
  EpisodePlan plan(const State&, RngStream& rng) override {
    const std::size_t g = diayn_goal_sample(skills_.size(), rng);
    return {&skills_[g], initial_, g, std::nullopt, {}};
  }
  std::optional<bool> finish(const EpisodePlan&, const Rollout&) override { return std::nullopt; }
  const Discriminator* discriminator() const override { return &reward_.discriminator(); }
  std::vector<Skill*> discrete_skills() override {
    std::vector<Skill*> out;
    for (Skill& s : skills_) out.push_back(&s);
    return out;
  }

 private:
  State initial_;
  std::vector<Skill> skills_;
  DiaynReward reward_;
};

class VicLoop final : public FacetLoop {
 public:
  VicLoop(const RunConfig& c)
      : reward_(c.skills.num_skills, c.skills.smoothing, c.skills.goal_learning_rate, c.skills.goal_floor) {
    for (std::size_t k = 0; k < c.skills.num_skills; ++k) skills_.push_back({SkillIndex{k}, QTable(c.initial_q())});
  }
  RewardModule& module() override { return reward_; }
  EpisodePlan plan(const State& previous_final, RngStream& rng) override {
    // s0 <- sf chaining: each execution starts where the last one ended.
    reward_.begin(previous_final);
    const std::size_t g = reward_.policy().sample(previous_final, rng);
    return {&skills_[g], previous_final, g, std::nullopt, {}};
  }
  std::optional<bool> finish(const EpisodePlan& plan, const Rollout& r) override {
    const Transition& last = r.trajectory.back();
    reward_.finish(*plan.goal_index, reward_.reward(last));
    return std::nullopt;
  }
  const Discriminator* discriminator() const override { return &reward_.discriminator(); }
  std::vector<Skill*> discrete_skills() override {
    std::vector<Skill*> out;
    for (Skill& s : skills_) out.push_back(&s);
    return out;
  }

 private:
  std::vector<Skill> skills_;
  VicReward reward_;
};

// Skills keyed by the exact goal vector they pursue.
template <typename Key>
class SkillBank {
 public:
  explicit SkillBank(double initial_q) : initial_q_(initial_q) {}

  Skill& get(const Key& key, Goal goal) {
    auto it = skills_.find(key);
    if (it == skills_.end()) it = skills_.emplace(key, Skill{std::move(goal), QTable(initial_q_)}).first;
    return it->second;
  }

 private:
  double initial_q_;
  std::map<Key, Skill> skills_;
};

std::vector<double> as_key(const FeatureVec& v) { return {v.data(), v.data() + v.size()}; }

class RigLoop final : public FacetLoop {
 public:
  RigLoop(const RunConfig& c)
      : config_(&c),
        initial_(initial_state(c.environment)),
        reward_(c.environment, weights(c), c.goals.buffer_capacity),
        bank_(c.initial_q()) {}
  RewardModule& module() override { return reward_; }
  void note_initial_state(const State& s) override { reward_.note_initial_state(s); }
  EpisodePlan plan(const State&, RngStream& rng) override {
    FeatureTarget target = sample_goal(reward_.buffer(), config_->goals.skew_alpha, rng);
    Skill& skill = bank_.get(as_key(target.vec), target);
    const GridWorldConfig* env = &config_->environment;
    const WeightMatrix* a = &reward_.weights();
    const double threshold = config_->goals.success_threshold;
    FeatureVec goal_vec = target.vec;
    return {&skill, initial_, std::nullopt, std::nullopt, [=](const Transition& t) {
              return goal_reached(features(t.next_state, *env), goal_vec, *a, threshold);
            }};
  }
  std::optional<bool> finish(const EpisodePlan&, const Rollout& r) override { return r.terminated; }

 private:
  static WeightMatrix weights(const RunConfig& c) {
    const auto dim = static_cast<Eigen::Index>(c.environment.feature_dim());
    if (c.goals.weights.empty()) return WeightMatrix::identity(dim);
    return WeightMatrix::diagonal(Eigen::Map<const Eigen::VectorXd>(c.goals.weights.data(), dim));
  }

  const RunConfig* config_;
  State initial_;
  RigReward reward_;
  SkillBank<std::vector<double>> bank_;
};

class CuriousLoop final : public FacetLoop {
 public:
  CuriousLoop(const RunConfig& c)
      : config_(&c),
        initial_(initial_state(c.environment)),
        reward_(c.environment, c.curious.modules.empty() ? default_modules(c.environment) : c.curious.modules,
                c.curious.buffer_capacity),
        bank_(c.initial_q()) {
    for (std::size_t i = 0; i < reward_.modules().size(); ++i) queues_.emplace_back(c.curious.queue_length);
  }
  RewardModule& module() override { return reward_; }
  void note_initial_state(const State& s) override { reward_.note_initial_state(s); }
  EpisodePlan plan(const State&, RngStream& rng) override {
    std::vector<double> lps;
    for (const CompetenceQueue& q : queues_) lps.push_back(learning_progress_or_zero(q));
    current_ = sample_categorical(module_probabilities(lps, config_->curious.module_epsilon), rng);
    const ModuleSpec& m = reward_.modules()[current_];
    ModuleGoal goal = sample_module_goal(reward_.buffer(), m, rng);
    Skill& skill = bank_.get({m.id, as_key(goal.target)}, goal);
    const ModuleDistanceReward* reward = &reward_;
    const double threshold = config_->curious.success_threshold;
    return {&skill, initial_, std::nullopt, m.id,
            [=](const Transition& t) { return reward->distance(t.next_state, goal) <= threshold; }};
  }
  std::optional<bool> finish(const EpisodePlan&, const Rollout& r) override {
    queues_[current_].push(r.terminated);
    return r.terminated;
  }

 private:
  const RunConfig* config_;
  State initial_;
  ModuleDistanceReward reward_;
  std::vector<CompetenceQueue> queues_;
  std::size_t current_ = 0;
  SkillBank<std::pair<ModuleId, std::vector<double>>> bank_;
};

class ImrlLoop final : public FacetLoop {
 public:
  ImrlLoop(const RunConfig& c)
      : initial_(initial_state(c.environment)),
        reward_(c.environment, c.imrl.model_step_size, c.imrl.model_discount, c.imrl.surprise_scale, c.initial_q()),
        explore_{SkillIndex{0}, QTable(c.initial_q())} {}
  RewardModule& module() override { return reward_; }
  EpisodePlan plan(const State&, RngStream& rng) override {
    reward_.begin_episode();
    const auto& order = reward_.repertoire().creation_order();
    const std::size_t pick = rng.uniform_index(order.size() + 1);
    if (pick == 0) return {&explore_, initial_, std::nullopt, std::nullopt, {}};
    const EventId e = order[pick - 1];
    active_event_ = e;
    return {&reward_.repertoire().skill(e), initial_, std::nullopt, std::nullopt, [e](const Transition& t) {
              return std::find(t.events.begin(), t.events.end(), e) != t.events.end();
            }};
  }
  std::optional<bool> finish(const EpisodePlan& plan, const Rollout& r) override {
    if (plan.skill == &explore_) return std::nullopt;
    if (!r.terminated) {
      reward_.model().update(plan.start, active_event_, static_cast<int>(r.trajectory.size()), false);
    }
    return r.terminated;
  }
  std::size_t repertoire_size() const override { return reward_.repertoire().size(); }

 private:
  State initial_;
  ImrlReward reward_;
  Skill explore_;
  EventId active_event_;
};

std::unique_ptr<FacetLoop> make_loop(const RunConfig& c) {
  switch (c.facet) {
    case Facet::effectance: return std::make_unique<EffectanceLoop>(c);
    case Facet::vic: return std::make_unique<VicLoop>(c);
    case Facet::diayn: return std::make_unique<DiaynLoop>(c);
    case Facet::rig: return std::make_unique<RigLoop>(c);
    case Facet::curious: return std::make_unique<CuriousLoop>(c);
    case Facet::imrl: return std::make_unique<ImrlLoop>(c);
  }
  throw ConfigError("unknown facet");
}

json events_json(const std::vector<EventId>& events) {
  json out = json::array();
  for (const EventId& e : events) out.push_back(e);
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string occupancy_csv(const RunRecord& r) {
  const auto states = enumerate_states(r.config.environment);
  std::string out = "state_index,count\n";
  for (std::size_t i = 0; i < states.size(); ++i) {
    auto it = r.terminal_counts.find(states[i]);
    if (it != r.terminal_counts.end()) out += std::to_string(i) + "," + std::to_string(it->second) + "\n";
  }
  return out;
}

double final_value(const RunRecord& r, const std::string& name) {
  const MetricSeries* s = r.find(name);
  return s && !s->empty() ? s->points().back().value : 0.0;
}

std::string file_stem(const std::string& metric) {
  std::string out = metric;
  for (char& ch : out) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '-') ch = '_';
  }
  return out;
}

}  // namespace

const MetricSeries* RunRecord::find(const std::string& name) const {
  for (const MetricSeries& s : series) {
    if (s.name() == name) return &s;
  }
  return nullptr;
}

RunRecord run(const RunConfig& config, const RunOptions& options) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();
  const GridWorldConfig& env = config.environment;

  RunRecord record;
  record.config = config;
  record.run_id = config.run_id();
  if (!options.out_root.empty()) {
    record.run_dir = options.out_root / record.run_id;
    fs::create_directories(record.run_dir);
  }
  EventLog log(record.run_dir.empty() ? fs::path() : record.run_dir / "events.jsonl");
  const json resolved = run_config_to_json(config);
  log.write({{"type", "run_start"}, {"run_id", record.run_id}, {"config", resolved}});

  auto loop = make_loop(config);
  std::unique_ptr<EffectanceReward> bonus;
  std::vector<std::pair<RewardModule*, double>> terms;
  for (const RewardTerm& term : config.combine) {
    bonus = std::make_unique<EffectanceReward>(env, config.mask);
    terms.emplace_back(bonus.get(), term.weight);
  }
  CombinedReward reward(loop->module(), terms);

  RngStream policy_rng(config.seed, kPolicyStream);
  RngStream goal_rng(config.seed, kGoalStream);
  const State initial = initial_state(env);
  loop->note_initial_state(initial);
  if (bonus) bonus->note_initial_state(initial);

  RolloutOptions ro;
  ro.learner = config.learner;
  std::set<EventId> seen_events;
  State previous_final = initial;
  std::uint64_t t = 0;
  for (std::uint64_t episode = 0; t < config.total_steps; ++episode) {
    const int horizon = static_cast<int>(std::min<std::uint64_t>(config.horizon(), config.total_steps - t));
    EpisodePlan plan = loop->plan(previous_final, goal_rng);
    json start = {{"type", "episode_start"},
                  {"episode", episode},
                  {"t", t},
                  {"start", state_to_json(plan.start)},
                  {"goal", goal_to_json(plan.skill->goal)}};
    if (plan.goal_index) start["goal_index"] = *plan.goal_index;
    if (plan.module) start["module"] = *plan.module;
    log.write(std::move(start));

    ro.terminate = plan.terminate;
    const Rollout r = rollout(*plan.skill, plan.start, reward, horizon, policy_rng, env, ro);
    const std::uint64_t episode_start_step = t;
    for (std::size_t i = 0; i < r.trajectory.size(); ++i) {
      const Transition& tr = r.trajectory[i];
      ++t;
      log.write({{"type", "step"},
                 {"t", t},
                 {"s", state_to_json(tr.state)},
                 {"a", std::string(to_string(tr.action))},
                 {"s2", state_to_json(tr.next_state)},
                 {"events", events_json(tr.events)},
                 {"r", r.rewards[i]}});
      if (config.facet == Facet::imrl) {
        for (const EventId& e : tr.events) {
          if (seen_events.insert(e).second) log.write({{"type", "skill_spawned"}, {"t", t}, {"event", e}});
        }
      }
    }
    const std::optional<bool> success = loop->finish(plan, r);
    json end = {{"type", "episode_end"}, {"episode", episode}, {"t", t}, {"final", state_to_json(r.final_state())}};
    if (success) end["success"] = *success;
    if (plan.goal_index) end["goal_index"] = *plan.goal_index;
    if (plan.module) end["module"] = *plan.module;
    log.write(std::move(end));

    record.episodes.push_back({episode_start_step, plan.start, r.final_state(), plan.goal_index, success});
    previous_final = r.final_state();
  }
  log.write({{"type", "run_end"}, {"t", t}});

  if (const Discriminator* d = loop->discriminator()) {
    RngStream eval_rng(config.seed, kEvalStream);
    ZeroReward zero;
    RolloutOptions eval;
    eval.learner = config.learner;
    eval.learn = false;
    std::size_t correct = 0;
    std::size_t total = 0;
    const auto skills = loop->discrete_skills();
    for (std::size_t g = 0; g < skills.size(); ++g) {
      for (std::size_t i = 0; i < options.eval_rollouts_per_skill; ++i) {
        const Rollout r = rollout(*skills[g], initial, zero, config.horizon(), eval_rng, env, eval);
        const ConditionKey key =
            d->mode() == ConditionMode::start_and_final ? d->key(initial, r.final_state()) : d->key(r.final_state());
        correct += d->argmax(key) == g;
        ++total;
      }
    }
    if (total > 0) record.eval_accuracy = static_cast<double>(correct) / static_cast<double>(total);
  }

  const MetricTracker& tracker = log.tracker();
  record.series = tracker.series();
  record.terminal_counts = tracker.terminal_counts();
  record.steps = t;
  record.repertoire_size = config.facet == Facet::imrl ? loop->repertoire_size() : 0;
  if (const MetricSeries* cov = record.find("coverage"); cov && !cov->empty()) {
    record.coverage = cov->points().back().value;
  }
  record.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  if (!record.run_dir.empty()) {
    write_text(record.run_dir / "config.json", resolved.dump(2) + "\n");
    write_text(record.run_dir / "metrics.csv", metrics_csv(record.run_id, record.series));
    write_text(record.run_dir / "terminal_occupancy.csv", occupancy_csv(record));
    json summary = {{"run_id", record.run_id},
                    {"artifact_version", record.artifact_version},
                    {"facet", std::string(to_string(config.facet))},
                    {"steps", record.steps},
                    {"episodes", record.episodes.size()},
                    {"coverage", record.coverage},
                    {"repertoire_size", record.repertoire_size},
                    {"wall_seconds", record.wall_seconds},
                    {"event_log", "events.jsonl"}};
    if (record.eval_accuracy) summary["eval_accuracy"] = *record.eval_accuracy;
    write_text(record.run_dir / "record.json", summary.dump(2) + "\n");
  }
  return record;
}

std::vector<RunRecord> run_many(const std::vector<RunConfig>& configs, const RunOptions& options, unsigned workers) {
  std::vector<RunRecord> out(configs.size());
  workers = std::max(1U, workers);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(configs.size());
  auto work = [&]() {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        out[i] = run(configs[i], options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < std::min<std::size_t>(workers, configs.size()); ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

RunRecord load_run(const fs::path& run_dir) {
  RunRecord r;
  r.run_dir = run_dir;
  const json cfg = json::parse(read_text(run_dir / "config.json"));
  r.config = run_config_from_json(cfg);
  const json summary = json::parse(read_text(run_dir / "record.json"));
  r.run_id = summary.at("run_id").get<std::string>();
  r.artifact_version = summary.value("artifact_version", std::string());
  r.steps = summary.value("steps", std::uint64_t{0});
  r.coverage = summary.value("coverage", 0.0);
  r.repertoire_size = summary.value("repertoire_size", std::size_t{0});
  r.wall_seconds = summary.value("wall_seconds", 0.0);
  if (summary.contains("eval_accuracy")) r.eval_accuracy = summary["eval_accuracy"].get<double>();
  r.series = parse_metrics_csv(read_text(run_dir / "metrics.csv"));

  const auto states = enumerate_states(r.config.environment);
  std::istringstream occ(read_text(run_dir / "terminal_occupancy.csv"));
  std::string line;
  std::getline(occ, line);
  while (std::getline(occ, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    const std::size_t index = std::stoul(line.substr(0, comma));
    if (index >= states.size()) throw ConfigError("occupancy index out of range in " + run_dir.string());
    r.terminal_counts[states[index]] = std::stoull(line.substr(comma + 1));
  }
  return r;
}

Eigen::VectorXd terminal_distribution(const RunRecord& record) {
  const auto states = enumerate_states(record.config.environment);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(states.size()));
  for (std::size_t i = 0; i < states.size(); ++i) {
    auto it = record.terminal_counts.find(states[i]);
    if (it != record.terminal_counts.end()) p[static_cast<Eigen::Index>(i)] = static_cast<double>(it->second);
  }
  const double total = p.sum();
  if (!(total > 0.0)) throw NotReadyError("run " + record.run_id + " has no finished episodes");
  return p / total;
}

ComparisonReport compare(const std::vector<RunRecord>& records) {
  if (records.size() < 2) throw ConfigError("compare needs at least two runs");
  for (const RunRecord& r : records) {
    if (!(r.config.environment == records.front().config.environment)) {
      throw ConfigError("runs " + records.front().run_id + " and " + r.run_id + " use different environments");
    }
  }
  std::vector<const RunRecord*> sorted;
  for (const RunRecord& r : records) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const RunRecord* a, const RunRecord* b) { return a->run_id < b->run_id; });
  std::vector<Eigen::VectorXd> dists;
  for (const RunRecord* r : sorted) dists.push_back(terminal_distribution(*r));

  ComparisonReport report;
  double between = 0.0;
  double within = 0.0;
  std::size_t n_between = 0;
  std::size_t n_within = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      const RunRecord& a = *sorted[i];
      const RunRecord& b = *sorted[j];
      PairComparison pc;
      pc.run_a = a.run_id;
      pc.run_b = b.run_id;
      pc.facet_a = std::string(to_string(a.config.facet));
      pc.facet_b = std::string(to_string(b.config.facet));
      pc.js_divergence = js_divergence(dists[i], dists[j]);
      pc.coverage_a = a.coverage;
      pc.coverage_b = b.coverage;
      pc.mi_a = final_value(a, "goal_state_mi");
      pc.mi_b = final_value(b, "goal_state_mi");
      if (pc.facet_a == pc.facet_b) {
        within += pc.js_divergence;
        ++n_within;
      } else {
        between += pc.js_divergence;
        ++n_between;
      }
      report.pairs.push_back(std::move(pc));
    }
  }
  report.mean_between = n_between ? between / static_cast<double>(n_between) : std::nan("");
  report.mean_within = n_within ? within / static_cast<double>(n_within) : std::nan("");
  return report;
}

std::string ComparisonReport::csv() const {
  std::string out = "run_a,run_b,facet_a,facet_b,js_divergence,coverage_a,coverage_b,coverage_delta,mi_a,mi_b\n";
  char buf[256];
  for (const PairComparison& p : pairs) {
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", p.js_divergence, p.coverage_a,
                  p.coverage_b, p.coverage_b - p.coverage_a, p.mi_a, p.mi_b);
    out += p.run_a + "," + p.run_b + "," + p.facet_a + "," + p.facet_b + buf;
  }
  return out;
}

std::string ComparisonReport::summary() const {
  std::ostringstream s;
  s.precision(6);
  s << "Compared " << pairs.size() << " run pair(s) by terminal-state occupancy.\n";
  s << "Mean Jensen-Shannon divergence between facets: ";
  if (std::isnan(mean_between)) s << "n/a"; else s << mean_between;
  s << " nats\nMean Jensen-Shannon divergence within a facet:  ";
  if (std::isnan(mean_within)) s << "n/a"; else s << mean_within;
  s << " nats\n";
  if (!std::isnan(mean_between) && !std::isnan(mean_within)) {
    s << (mean_between > mean_within ? "Facets behave more differently from each other than across seeds.\n"
                                     : "Facets are not separated beyond seed-to-seed variation.\n");
  }
  for (const PairComparison& p : pairs) {
    s << "  " << p.run_a << " vs " << p.run_b << ": js=" << p.js_divergence
      << " coverage_delta=" << (p.coverage_b - p.coverage_a) << "\n";
  }
  return s.str();
}

ComparisonReport compare_dirs(const std::vector<fs::path>& run_dirs, const fs::path& out_dir) {
  std::vector<RunRecord> records;
  for (const fs::path& d : run_dirs) records.push_back(load_run(d));
  ComparisonReport report = compare(records);
  fs::create_directories(out_dir);
  write_text(out_dir / "comparison.csv", report.csv());
  write_text(out_dir / "summary.txt", report.summary());
  return report;
}

std::vector<fs::path> report(const RunRecord& record, const fs::path& out_dir) {
  if (record.series.empty()) throw ConfigError("run " + record.run_id + " has no metric series to plot");
  fs::create_directories(out_dir);
  std::vector<fs::path> written;
  std::string index = "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>" + record.run_id +
                      "</title></head>\n<body>\n<h1>" + record.run_id + "</h1>\n";
  for (const MetricSeries& s : record.series) {
    const PlotStyle style =
        s.name() == "repertoire_size" || s.name() == "episodes" ? PlotStyle::step : PlotStyle::line;
    const std::string file = file_stem(s.name()) + ".svg";
    write_text(out_dir / file, render_series_svg(s, style));
    written.push_back(out_dir / file);
    index += "<figure><img src=\"" + file + "\" alt=\"" + s.name() + "\"><figcaption>" + s.name() +
             "</figcaption></figure>\n";
  }
  index += "</body></html>\n";
  write_text(out_dir / "index.html", index);
  written.push_back(out_dir / "index.html");
  return written;
}

}  // namespace imlab
