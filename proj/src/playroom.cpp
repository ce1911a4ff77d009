#include "imlab/playroom.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "imlab/errors.hpp"

namespace imlab {

namespace {

using nlohmann::json;

Cell offset(Cell c, Action a) {
  switch (a) {
    case Action::up: return {c.x, c.y - 1};
    case Action::down: return {c.x, c.y + 1};
    case Action::left: return {c.x - 1, c.y};
    case Action::right: return {c.x + 1, c.y};
    case Action::interact: return c;
  }
  return c;
}

Cell cell_from_json(const json& j, std::string_view what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw ConfigError(std::string(what) + " must be a [x, y] pair of integers");
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

json cell_to_json(Cell c) { return json::array({c.x, c.y}); }

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                         std::string_view where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

ObjectKind kind_from_string(const std::string& s) {
  if (s == "light") return ObjectKind::light;
  if (s == "bell") return ObjectKind::bell;
  if (s == "block") return ObjectKind::block;
  throw ConfigError("unknown object kind '" + s + "'");
}

template <typename T>
T required(const json& obj, const char* key, std::string_view where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError("missing key '" + std::string(key) + "' in " + std::string(where));
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError("key '" + std::string(key) + "' in " + std::string(where) + " has the wrong type");
  }
}

// Cells a block may never occupy: walls and the cells of toggleable objects.
bool block_forbidden(Cell c, const GridWorldConfig& config) {
  if (!config.in_bounds(c) || config.is_wall(c)) return true;
  return std::any_of(config.objects.begin(), config.objects.end(),
                     [&](const ObjectSpec& o) { return o.toggleable() && o.cell == c; });
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace

std::string_view to_string(ObjectKind kind) {
  switch (kind) {
    case ObjectKind::light: return "light";
    case ObjectKind::bell: return "bell";
    case ObjectKind::block: return "block";
  }
  return "?";
}

std::string_view to_string(Action action) {
  switch (action) {
    case Action::up: return "up";
    case Action::down: return "down";
    case Action::left: return "left";
    case Action::right: return "right";
    case Action::interact: return "interact";
  }
  return "?";
}

EventId event_for(const ObjectSpec& object) {
  switch (object.kind) {
    case ObjectKind::light: return object.id + "_on";
    case ObjectKind::bell: return object.id + "_rung";
    case ObjectKind::block: return {};
  }
  return {};
}

std::size_t StateHash::operator()(const State& s) const noexcept {
  std::uint64_t h = mix(static_cast<std::uint64_t>(s.agent.x), static_cast<std::uint64_t>(s.agent.y));
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < s.object_on.size(); ++i) bits |= std::uint64_t{s.object_on[i]} << (i % 64);
  h = mix(h, bits);
  for (const Cell& b : s.blocks) h = mix(mix(h, static_cast<std::uint64_t>(b.x)), static_cast<std::uint64_t>(b.y));
  return static_cast<std::size_t>(h);
}

bool GridWorldConfig::is_wall(Cell c) const {
  return std::find(walls.begin(), walls.end(), c) != walls.end();
}

std::size_t GridWorldConfig::num_toggleable() const {
  return static_cast<std::size_t>(
      std::count_if(objects.begin(), objects.end(), [](const ObjectSpec& o) { return o.toggleable(); }));
}

std::size_t GridWorldConfig::num_blocks() const { return objects.size() - num_toggleable(); }

void GridWorldConfig::validate() const {
  if (width < 2 || height < 2) throw ConfigError("grid must be at least 2x2");
  if (episode_horizon < 1) throw ConfigError("episode_horizon must be >= 1");
  for (const Cell& w : walls) {
    if (!in_bounds(w)) throw ConfigError("wall outside the grid");
  }
  std::set<Cell> wall_set(walls.begin(), walls.end());
  if (wall_set.size() >= static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw ConfigError("walls cover every cell");
  }
  if (!in_bounds(agent_start) || is_wall(agent_start)) throw ConfigError("agent_start must be a free cell");

  std::set<std::string> ids;
  std::set<Cell> occupied;
  for (const ObjectSpec& o : objects) {
    if (o.id.empty()) throw ConfigError("object id must be non-empty");
    if (!ids.insert(o.id).second) throw ConfigError("duplicate object id '" + o.id + "'");
    if (!in_bounds(o.cell) || is_wall(o.cell)) throw ConfigError("object '" + o.id + "' must sit on a free cell");
    if (!occupied.insert(o.cell).second) throw ConfigError("two objects share a cell at '" + o.id + "'");
    if (o.kind == ObjectKind::block) {
      if (o.initial_on) throw ConfigError("block '" + o.id + "' cannot be initially on");
      if (o.cell == agent_start) throw ConfigError("block '" + o.id + "' starts under the agent");
    }
  }
  std::set<EventId> declared;
  for (const ObjectSpec& o : objects) {
    if (o.toggleable()) declared.insert(event_for(o));
  }
  std::set<EventId> seen;
  for (const EventId& e : salient_events) {
    if (!declared.count(e)) throw ConfigError("salient event '" + e + "' does not name a light or bell");
    if (!seen.insert(e).second) throw ConfigError("salient event '" + e + "' listed twice");
  }
}

GridWorldConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("environment config must be a JSON object");
  reject_unknown_keys(doc,
                      {"width", "height", "walls", "agent_start", "objects", "episode_horizon", "salient_events"},
                      "environment config");
  GridWorldConfig c;
  c.width = required<int>(doc, "width", "environment config");
  c.height = required<int>(doc, "height", "environment config");
  c.episode_horizon = required<int>(doc, "episode_horizon", "environment config");
  c.agent_start = cell_from_json(doc.value("agent_start", json::array({0, 0})), "agent_start");
  for (const json& w : doc.value("walls", json::array())) c.walls.push_back(cell_from_json(w, "wall"));
  for (const json& o : doc.value("objects", json::array())) {
    if (!o.is_object()) throw ConfigError("object entry must be a JSON object");
    reject_unknown_keys(o, {"id", "kind", "cell", "initial_on"}, "object");
    ObjectSpec spec;
    spec.id = required<std::string>(o, "id", "object");
    spec.kind = kind_from_string(required<std::string>(o, "kind", "object"));
    spec.cell = cell_from_json(o.value("cell", json()), "object cell");
    spec.initial_on = o.value("initial_on", false);
    c.objects.push_back(std::move(spec));
  }
  for (const json& e : doc.value("salient_events", json::array())) {
    if (!e.is_string()) throw ConfigError("salient_events entries must be strings");
    c.salient_events.push_back(e.get<std::string>());
  }
  c.validate();
  return c;
}

json config_to_json(const GridWorldConfig& config) {
  json walls = json::array();
  for (const Cell& w : config.walls) walls.push_back(cell_to_json(w));
  json objects = json::array();
  for (const ObjectSpec& o : config.objects) {
    objects.push_back({{"id", o.id},
                       {"kind", std::string(to_string(o.kind))},
                       {"cell", cell_to_json(o.cell)},
                       {"initial_on", o.initial_on}});
  }
  return {{"width", config.width},
          {"height", config.height},
          {"walls", walls},
          {"agent_start", cell_to_json(config.agent_start)},
          {"objects", objects},
          {"episode_horizon", config.episode_horizon},
          {"salient_events", config.salient_events}};
}

GridWorldConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open environment config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("environment config " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(doc);
}

GridWorldConfig default_playroom() {
  GridWorldConfig c;
  c.width = 5;
  c.height = 5;
  c.agent_start = {2, 2};
  c.episode_horizon = 20;
  c.objects = {{"light", {0, 0}, ObjectKind::light, false},
               {"bell", {4, 4}, ObjectKind::bell, false},
               {"block", {2, 3}, ObjectKind::block, false}};
  c.salient_events = {"light_on", "bell_rung"};
  return c;
}

GridWorldConfig empty_room(int width, int height, int horizon) {
  GridWorldConfig c;
  c.width = width;
  c.height = height;
  c.agent_start = {width / 2, height / 2};
  c.episode_horizon = horizon;
  return c;
}

State initial_state(const GridWorldConfig& config) {
  State s;
  s.agent = config.agent_start;
  for (const ObjectSpec& o : config.objects) {
    if (o.toggleable()) {
      s.object_on.push_back(o.initial_on);
    } else {
      s.blocks.push_back(o.cell);
    }
  }
  return s;
}

void check_state(const State& state, const GridWorldConfig& config) {
  if (state.object_on.size() != config.num_toggleable() || state.blocks.size() != config.num_blocks()) {
    throw ConfigError("state shape does not match the configuration");
  }
  if (!config.in_bounds(state.agent) || config.is_wall(state.agent)) throw ConfigError("agent off the free cells");
  for (std::size_t i = 0; i < state.blocks.size(); ++i) {
    const Cell b = state.blocks[i];
    if (block_forbidden(b, config)) throw ConfigError("block on a forbidden cell");
    if (b == state.agent) throw ConfigError("block under the agent");
    for (std::size_t j = 0; j < i; ++j) {
      if (state.blocks[j] == b) throw ConfigError("two blocks share a cell");
    }
  }
}

StepResult step(const State& state, Action action, const GridWorldConfig& config) {
  check_state(state, config);
  StepResult result{state, {}};
  State& next = result.next;

  if (action == Action::interact) {
    std::size_t toggle_index = 0;
    for (const ObjectSpec& o : config.objects) {
      if (!o.toggleable()) continue;
      if (o.cell == state.agent) {
        const bool now_on = !state.object_on[toggle_index];
        next.object_on[toggle_index] = now_on;
        if (now_on) {
          EventId e = event_for(o);
          if (std::find(config.salient_events.begin(), config.salient_events.end(), e) !=
              config.salient_events.end()) {
            result.events.push_back(std::move(e));
          }
        }
      }
      ++toggle_index;
    }
    return result;
  }

  const Cell target = offset(state.agent, action);
  if (!config.in_bounds(target) || config.is_wall(target)) return result;

  auto pushed = std::find(next.blocks.begin(), next.blocks.end(), target);
  if (pushed != next.blocks.end()) {
    const Cell beyond = offset(target, action);
    const bool occupied = std::find(next.blocks.begin(), next.blocks.end(), beyond) != next.blocks.end();
    if (block_forbidden(beyond, config) || occupied) return result;
    *pushed = beyond;
  }
  next.agent = target;
  return result;
}

std::uint64_t state_space_size(const GridWorldConfig& config) {
  std::uint64_t free_cells = 0;
  std::uint64_t block_cells = 0;
  for (int y = 0; y < config.height; ++y) {
    for (int x = 0; x < config.width; ++x) {
      const Cell c{x, y};
      if (config.is_wall(c)) continue;
      ++free_cells;
      if (!block_forbidden(c, config)) ++block_cells;
    }
  }
  const std::uint64_t blocks = config.num_blocks();
  if (blocks > block_cells || blocks >= free_cells) return 0;
  std::uint64_t size = std::uint64_t{1} << config.num_toggleable();
  for (std::uint64_t i = 0; i < blocks; ++i) size *= block_cells - i;
  return size * (free_cells - blocks);
}

std::vector<State> enumerate_states(const GridWorldConfig& config, std::uint64_t cap) {
  const std::uint64_t size = state_space_size(config);
  if (size > cap) throw StateSpaceTooLarge(size, cap);

  std::vector<Cell> free_cells;
  std::vector<Cell> block_cells;
  for (int y = 0; y < config.height; ++y) {
    for (int x = 0; x < config.width; ++x) {
      const Cell c{x, y};
      if (config.is_wall(c)) continue;
      free_cells.push_back(c);
      if (!block_forbidden(c, config)) block_cells.push_back(c);
    }
  }

  const std::size_t toggles = config.num_toggleable();
  const std::size_t blocks = config.num_blocks();
  std::vector<State> out;
  out.reserve(size);

  // Blocks are placed recursively as distinct cells; the agent then takes any
  // remaining free cell.
  std::vector<Cell> placement;
  std::function<void()> place = [&]() {
    if (placement.size() == blocks) {
      for (const Cell& a : free_cells) {
        if (std::find(placement.begin(), placement.end(), a) != placement.end()) continue;
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << toggles); ++bits) {
          State s;
          s.agent = a;
          s.blocks = placement;
          s.object_on.resize(toggles);
          for (std::size_t i = 0; i < toggles; ++i) s.object_on[i] = (bits >> i) & 1U;
          out.push_back(std::move(s));
        }
      }
      return;
    }
    for (const Cell& c : block_cells) {
      if (std::find(placement.begin(), placement.end(), c) != placement.end()) continue;
      placement.push_back(c);
      place();
      placement.pop_back();
    }
  };
  place();
  std::sort(out.begin(), out.end());
  return out;
}

FeatureVec features(const State& state, const GridWorldConfig& config) {
  FeatureVec phi(static_cast<Eigen::Index>(config.feature_dim()));
  const double sx = 1.0 / (config.width - 1);
  const double sy = 1.0 / (config.height - 1);
  Eigen::Index i = 0;
  phi[i++] = state.agent.x * sx;
  phi[i++] = state.agent.y * sy;
  for (bool on : state.object_on) phi[i++] = on ? 1.0 : 0.0;
  for (const Cell& b : state.blocks) {
    phi[i++] = b.x * sx;
    phi[i++] = b.y * sy;
  }
  return phi;
}

json state_to_json(const State& state) {
  json blocks = json::array();
  for (const Cell& b : state.blocks) blocks.push_back(cell_to_json(b));
  json on = json::array();
  for (bool b : state.object_on) on.push_back(b ? 1 : 0);
  return {{"agent", cell_to_json(state.agent)}, {"on", on}, {"blocks", blocks}};
}

State state_from_json(const json& doc) {
  State s;
  s.agent = cell_from_json(doc.at("agent"), "agent");
  for (const json& b : doc.at("on")) s.object_on.push_back(b.get<int>() != 0);
  for (const json& b : doc.at("blocks")) s.blocks.push_back(cell_from_json(b, "block"));
  return s;
}

}  // namespace imlab
