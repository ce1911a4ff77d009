#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include "json.hpp"

namespace imlab {

using FeatureVec = Eigen::VectorXd;

struct Cell {
  int x = 0;
  int y = 0;
  auto operator<=>(const Cell&) const = default;
};

enum class ObjectKind { light, bell, block };

std::string_view to_string(ObjectKind kind);

struct ObjectSpec {
  std::string id;
  Cell cell;
  ObjectKind kind = ObjectKind::light;
  bool initial_on = false;

  bool toggleable() const { return kind != ObjectKind::block; }
  bool operator==(const ObjectSpec&) const = default;
};

// Salient events are named "<object id>_on" for lights and "<object id>_rung"
// for bells; they fire when the object switches from off to on.
using EventId = std::string;

EventId event_for(const ObjectSpec& object);

enum class Action : std::uint8_t { up = 0, down = 1, left = 2, right = 3, interact = 4 };

inline constexpr std::size_t kNumActions = 5;
inline constexpr std::array<Action, kNumActions> kAllActions = {
    Action::up, Action::down, Action::left, Action::right, Action::interact};

std::string_view to_string(Action action);

// Full world configuration: the agent, one boolean per toggleable object (in
// declaration order) and one cell per block (in declaration order).
struct State {
  Cell agent;
  std::vector<bool> object_on;
  std::vector<Cell> blocks;

  auto operator<=>(const State&) const = default;
  bool operator==(const State&) const = default;
};

struct StateHash {
  std::size_t operator()(const State& s) const noexcept;
};

struct GridWorldConfig {
  int width = 5;
  int height = 5;
  std::vector<Cell> walls;
  Cell agent_start;
  std::vector<ObjectSpec> objects;
  int episode_horizon = 20;
  std::vector<EventId> salient_events;

  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; }
  bool is_wall(Cell c) const;
  std::size_t num_toggleable() const;
  std::size_t num_blocks() const;
  std::size_t feature_dim() const { return 2 + num_toggleable() + 2 * num_blocks(); }

  // Throws ConfigError if any invariant fails.
  void validate() const;

  friend bool operator==(const GridWorldConfig&, const GridWorldConfig&) = default;
};

GridWorldConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const GridWorldConfig& config);
GridWorldConfig load_config(const std::filesystem::path& path);

// The built-in playroom: 5x5, a light, a bell and a block; both toggle events
// are salient.
GridWorldConfig default_playroom();
// Open width x height room with no objects, agent starting in the middle.
GridWorldConfig empty_room(int width, int height, int horizon);

State initial_state(const GridWorldConfig& config);

// Throws ConfigError when the state is inconsistent with the configuration.
void check_state(const State& state, const GridWorldConfig& config);

struct StepResult {
  State next;
  std::vector<EventId> events;
};

// Pure transition function. Moving into a block pushes it one cell further in
// the same direction when that cell is free; otherwise the move is a no-op.
// Interact toggles a light or bell under the agent.
StepResult step(const State& state, Action action, const GridWorldConfig& config);

inline constexpr std::uint64_t kDefaultStateCap = 1'000'000;

// Number of valid states, computed combinatorially.
std::uint64_t state_space_size(const GridWorldConfig& config);

// Every valid state exactly once, sorted ascending. Refuses with
// StateSpaceTooLarge above the cap.
std::vector<State> enumerate_states(const GridWorldConfig& config,
                                    std::uint64_t cap = kDefaultStateCap);

FeatureVec features(const State& state, const GridWorldConfig& config);

nlohmann::json state_to_json(const State& state);
State state_from_json(const nlohmann::json& doc);

}  // namespace imlab
