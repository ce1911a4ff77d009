#include "imlab/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "imlab/errors.hpp"
#include "imlab/goal_distance.hpp"
#include "imlab/skill_use.hpp"

namespace imlab {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError("key '" + std::string(key) + "' has the wrong type");
  }
}

constexpr Facet kFacets[] = {Facet::effectance, Facet::vic, Facet::diayn, Facet::rig, Facet::curious, Facet::imrl};

}  // namespace

std::string_view to_string(Facet facet) {
  switch (facet) {
    case Facet::effectance: return "effectance";
    case Facet::vic: return "vic";
    case Facet::diayn: return "diayn";
    case Facet::rig: return "rig";
    case Facet::curious: return "curious";
    case Facet::imrl: return "imrl";
  }
  return "?";
}

Facet facet_from_string(const std::string& s) {
  for (Facet f : kFacets) {
    if (to_string(f) == s) return f;
  }
  throw ConfigError("unknown facet '" + s + "'");
}

double RunConfig::initial_q() const {
  if (q_init) return *q_init;
  if (facet != Facet::diayn) return 0.0;
  const double per_step = -std::log(static_cast<double>(skills.num_skills));
  return per_step * (1.0 - std::pow(learner.gamma, horizon())) / (1.0 - learner.gamma);
}

std::string RunConfig::run_id() const {
  return (name.empty() ? std::string(to_string(facet)) : name) + "_seed" + std::to_string(seed);
}

void RunConfig::validate() const {
  environment.validate();
  learner.validate();
  if (total_steps < 1) throw ConfigError("total_steps must be >= 1");
  if (episode_horizon < 0) throw ConfigError("episode_horizon must be >= 1 when given");
  if (metric_cadence < 1) throw ConfigError("metric_cadence must be >= 1");
  if (q_init && !std::isfinite(*q_init)) throw ConfigError("q_init must be finite");
  if (!name.empty() && name.find_first_of("/\\ ") != std::string::npos) {
    throw ConfigError("run name must not contain path separators or spaces");
  }
  if (mask.window == 0 || !(mask.threshold >= 0.0 && mask.threshold <= 1.0)) {
    throw ConfigError("invalid controllability mask settings");
  }
  switch (facet) {
    case Facet::vic:
    case Facet::diayn:
      if (skills.num_skills < 2) throw ConfigError("num_skills must be >= 2");
      if (!(skills.smoothing > 0.0)) throw ConfigError("smoothing must be positive");
      if (facet == Facet::vic) GoalPolicy(skills.num_skills, skills.goal_learning_rate, skills.goal_floor);
      break;
    case Facet::rig:
      if (goals.skew_alpha > 0.0) throw ConfigError("skew_alpha must be <= 0");
      if (goals.buffer_capacity == 0) throw ConfigError("buffer_capacity must be positive");
      if (goals.success_threshold < 0.0) throw ConfigError("success_threshold must be >= 0");
      if (!goals.weights.empty()) {
        if (goals.weights.size() != environment.feature_dim()) {
          throw ConfigError("weights must have one entry per feature");
        }
        WeightMatrix::diagonal(Eigen::Map<const Eigen::VectorXd>(goals.weights.data(),
                                                                 static_cast<Eigen::Index>(goals.weights.size())));
      }
      break;
    case Facet::curious: {
      CompetenceQueue probe(curious.queue_length);
      (void)probe;
      if (!(curious.module_epsilon >= 0.0 && curious.module_epsilon <= 1.0)) {
        throw ConfigError("module_epsilon must lie in [0, 1]");
      }
      if (curious.buffer_capacity == 0) throw ConfigError("buffer_capacity must be positive");
      if (curious.success_threshold < 0.0) throw ConfigError("success_threshold must be >= 0");
      for (const ModuleSpec& m : curious.modules) m.validate(environment.feature_dim());
      break;
    }
    case Facet::imrl:
      if (environment.salient_events.empty()) throw ConfigError("imrl needs at least one salient event");
      if (!(imrl.model_step_size > 0.0 && imrl.model_step_size <= 1.0)) throw ConfigError("model_step_size must lie in (0, 1]");
      if (!(imrl.model_discount > 0.0 && imrl.model_discount < 1.0)) throw ConfigError("model_discount must lie in (0, 1)");
      if (!(imrl.surprise_scale > 0.0)) throw ConfigError("surprise_scale must be positive");
      break;
    case Facet::effectance:
      break;
  }
  for (const RewardTerm& term : combine) {
    if (term.facet != Facet::effectance) throw ConfigError("only the effectance reward can be combined");
    if (facet == Facet::effectance) throw ConfigError("effectance cannot be combined with itself");
    if (!std::isfinite(term.weight) || term.weight < 0.0) throw ConfigError("combination weights must be >= 0");
  }
}

RunConfig run_config_from_json(const json& doc, const std::filesystem::path& base_dir) {
  reject_unknown(doc,
                 {"name", "environment", "facet", "learner", "effectance", "vic", "diayn", "rig", "curious", "imrl",
                  "combine", "total_steps", "episode_horizon", "seed", "metric_cadence", "output_dir"},
                 "run config");
  RunConfig c;
  if (!doc.contains("facet") || !doc["facet"].is_string()) throw ConfigError("run config needs a string 'facet'");
  c.facet = facet_from_string(doc["facet"].get<std::string>());
  read(doc, "name", c.name);

  if (!doc.contains("environment")) throw ConfigError("run config needs an 'environment'");
  const json& env = doc["environment"];
  if (env.is_string()) {
    std::filesystem::path p = env.get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    c.environment = load_config(p);
  } else {
    c.environment = config_from_json(env);
  }

  if (doc.contains("learner")) {
    const json& l = doc["learner"];
    reject_unknown(l, {"alpha", "gamma", "epsilon", "q_init"}, "learner");
    read(l, "alpha", c.learner.alpha);
    read(l, "gamma", c.learner.gamma);
    read(l, "epsilon", c.learner.epsilon);
    if (l.contains("q_init")) {
      double q = 0.0;
      read(l, "q_init", q);
      c.q_init = q;
    }
  }

  // Only the chosen facet's section (and effectance when it is a combined
  // term) may appear.
  std::vector<Facet> allowed{c.facet};
  if (doc.contains("combine")) {
    const json& terms = doc["combine"];
    if (!terms.is_array()) throw ConfigError("combine must be an array");
    for (const json& t : terms) {
      reject_unknown(t, {"facet", "weight"}, "combine entry");
      RewardTerm term;
      term.facet = facet_from_string(t.value("facet", std::string()));
      read(t, "weight", term.weight);
      c.combine.push_back(term);
      allowed.push_back(term.facet);
    }
  }
  for (Facet f : kFacets) {
    const std::string key(to_string(f));
    if (doc.contains(key) && std::find(allowed.begin(), allowed.end(), f) == allowed.end()) {
      throw ConfigError("settings for facet '" + key + "' given but the run uses '" + std::string(to_string(c.facet)) +
                        "'");
    }
  }

  if (doc.contains("effectance")) {
    const json& s = doc["effectance"];
    reject_unknown(s, {"mask_window", "mask_threshold"}, "effectance settings");
    read(s, "mask_window", c.mask.window);
    read(s, "mask_threshold", c.mask.threshold);
  }
  for (const char* key : {"vic", "diayn"}) {
    if (!doc.contains(key)) continue;
    const json& s = doc[key];
    if (std::string(key) == "vic") {
      reject_unknown(s, {"num_skills", "smoothing", "goal_learning_rate", "goal_floor"}, "vic settings");
    } else {
      reject_unknown(s, {"num_skills", "smoothing"}, "diayn settings");
    }
    read(s, "num_skills", c.skills.num_skills);
    read(s, "smoothing", c.skills.smoothing);
    read(s, "goal_learning_rate", c.skills.goal_learning_rate);
    read(s, "goal_floor", c.skills.goal_floor);
  }
  if (doc.contains("rig")) {
    const json& s = doc["rig"];
    reject_unknown(s, {"skew_alpha", "buffer_capacity", "success_threshold", "weights"}, "rig settings");
    read(s, "skew_alpha", c.goals.skew_alpha);
    read(s, "buffer_capacity", c.goals.buffer_capacity);
    read(s, "success_threshold", c.goals.success_threshold);
    read(s, "weights", c.goals.weights);
  }
  if (doc.contains("curious")) {
    const json& s = doc["curious"];
    reject_unknown(s, {"modules", "queue_length", "module_epsilon", "buffer_capacity", "success_threshold"},
                   "curious settings");
    read(s, "queue_length", c.curious.queue_length);
    read(s, "module_epsilon", c.curious.module_epsilon);
    read(s, "buffer_capacity", c.curious.buffer_capacity);
    read(s, "success_threshold", c.curious.success_threshold);
    if (s.contains("modules")) {
      for (const json& m : s["modules"]) {
        reject_unknown(m, {"id", "subspace"}, "module spec");
        ModuleSpec spec;
        read(m, "id", spec.id);
        read(m, "subspace", spec.subspace);
        c.curious.modules.push_back(std::move(spec));
      }
    }
  }
  if (doc.contains("imrl")) {
    const json& s = doc["imrl"];
    reject_unknown(s, {"model_step_size", "model_discount", "surprise_scale"}, "imrl settings");
    read(s, "model_step_size", c.imrl.model_step_size);
    read(s, "model_discount", c.imrl.model_discount);
    read(s, "surprise_scale", c.imrl.surprise_scale);
  }

  read(doc, "total_steps", c.total_steps);
  read(doc, "episode_horizon", c.episode_horizon);
  read(doc, "seed", c.seed);
  read(doc, "metric_cadence", c.metric_cadence);
  if (doc.contains("output_dir")) {
    std::string out;
    read(doc, "output_dir", out);
    c.output_dir = out;
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open run config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("run config " + path.string() + " is not valid JSON: " + e.what());
  }
  return run_config_from_json(doc, path.parent_path());
}

json run_config_to_json(const RunConfig& c) {
  json doc = {{"facet", std::string(to_string(c.facet))},
              {"environment", config_to_json(c.environment)},
              {"learner", {{"alpha", c.learner.alpha}, {"gamma", c.learner.gamma}, {"epsilon", c.learner.epsilon}}},
              {"total_steps", c.total_steps},
              {"episode_horizon", c.horizon()},
              {"seed", c.seed},
              {"metric_cadence", c.metric_cadence}};
  if (!c.name.empty()) doc["name"] = c.name;
  if (c.q_init) doc["learner"]["q_init"] = *c.q_init;
  const bool uses_effectance =
      c.facet == Facet::effectance ||
      std::any_of(c.combine.begin(), c.combine.end(), [](const RewardTerm& t) { return t.facet == Facet::effectance; });
  if (uses_effectance) doc["effectance"] = {{"mask_window", c.mask.window}, {"mask_threshold", c.mask.threshold}};
  switch (c.facet) {
    case Facet::vic:
      doc["vic"] = {{"num_skills", c.skills.num_skills},
                    {"smoothing", c.skills.smoothing},
                    {"goal_learning_rate", c.skills.goal_learning_rate},
                    {"goal_floor", c.skills.goal_floor}};
      break;
    case Facet::diayn:
      doc["diayn"] = {{"num_skills", c.skills.num_skills}, {"smoothing", c.skills.smoothing}};
      break;
    case Facet::rig:
      doc["rig"] = {{"skew_alpha", c.goals.skew_alpha},
                    {"buffer_capacity", c.goals.buffer_capacity},
                    {"success_threshold", c.goals.success_threshold},
                    {"weights", c.goals.weights}};
      break;
    case Facet::curious: {
      json modules = json::array();
      const auto specs = c.curious.modules.empty() ? default_modules(c.environment) : c.curious.modules;
      for (const ModuleSpec& m : specs) modules.push_back({{"id", m.id}, {"subspace", m.subspace}});
      doc["curious"] = {{"modules", modules},
                        {"queue_length", c.curious.queue_length},
                        {"module_epsilon", c.curious.module_epsilon},
                        {"buffer_capacity", c.curious.buffer_capacity},
                        {"success_threshold", c.curious.success_threshold}};
      break;
    }
    case Facet::imrl:
      doc["imrl"] = {{"model_step_size", c.imrl.model_step_size},
                     {"model_discount", c.imrl.model_discount},
                     {"surprise_scale", c.imrl.surprise_scale}};
      break;
    case Facet::effectance:
      break;
  }
  if (!c.combine.empty()) {
    json terms = json::array();
    for (const RewardTerm& t : c.combine) terms.push_back({{"facet", std::string(to_string(t.facet))}, {"weight", t.weight}});
    doc["combine"] = terms;
  }
  return doc;
}

}  // namespace imlab
