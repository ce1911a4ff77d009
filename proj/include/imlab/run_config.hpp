#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "imlab/curriculum.hpp"
#include "imlab/effectance.hpp"
#include "imlab/gcrl.hpp"
#include "imlab/playroom.hpp"

namespace imlab {

inline constexpr const char* kArtifactVersion = "imlab 0.1.0";
inline constexpr int kEventSchemaVersion = 1;

enum class Facet { effectance, vic, diayn, rig, curious, imrl };

std::string_view to_string(Facet facet);
Facet facet_from_string(const std::string& s);

struct SkillSettings {
  std::size_t num_skills = 4;
  double smoothing = 1.0;
  // VIC goal policy only.
  double goal_learning_rate = 0.1;
  double goal_floor = 1e-3;
};

struct GoalSettings {
  double skew_alpha = -1.0;
  std::size_t buffer_capacity = 1000;
  double success_threshold = 0.0;
  // Diagonal of the weight matrix; empty means identity.
  std::vector<double> weights;
};

struct CuriousSettings {
  // Empty means default_modules(environment).
  std::vector<ModuleSpec> modules;
  std::size_t queue_length = 40;
  double module_epsilon = 0.1;
  std::size_t buffer_capacity = 1000;
  double success_threshold = 0.0;
};

struct ImrlSettings {
  double model_step_size = 0.2;
  double model_discount = 0.9;
  double surprise_scale = 1.0;
};

// Extra reward added to the facet's own reward with the given weight. Only
// the effectance reward can be used as a term.
struct RewardTerm {
  Facet facet = Facet::effectance;
  double weight = 0.0;
};

struct RunConfig {
  std::string name;
  GridWorldConfig environment;
  Facet facet = Facet::effectance;
  LearnerParams learner;
  SkillSettings skills;
  GoalSettings goals;
  CuriousSettings curious;
  ImrlSettings imrl;
  MaskParams mask;
  std::vector<RewardTerm> combine;
  std::uint64_t total_steps = 10'000;
  int episode_horizon = 0;  // 0 means the environment's horizon
  std::uint64_t seed = 0;
  std::uint64_t metric_cadence = 100;
  std::filesystem::path output_dir;

  // Initial Q-value for every table; unset means the facet's neutral value.
  std::optional<double> q_init;

  int horizon() const { return episode_horizon > 0 ? episode_horizon : environment.episode_horizon; }
  // q_init, or the discounted return of a horizon-long execution under an
  // uninformative discriminator (log(1/K) per step) for diayn, else 0.
  double initial_q() const;
  std::string run_id() const;
  // Throws ConfigError on any invalid or facet-mismatched setting.
  void validate() const;
};

// Parses a run document. A string "environment" is a path resolved relative
// to base_dir; an object is an inline environment.
RunConfig run_config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);
// Fully resolved form (environment inlined, defaults filled in).
nlohmann::json run_config_to_json(const RunConfig& config);

}  // namespace imlab
