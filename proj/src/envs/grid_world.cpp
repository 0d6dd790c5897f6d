#include "tdprobe/envs/grid_world.hpp"

#include <algorithm>

#include "json.hpp"
#include "tdprobe/errors.hpp"

namespace tdprobe {

GridWorldEnv::GridWorldEnv(GridConfig cfg) : cfg_(cfg) {
  if (cfg_.width < 1 || cfg_.height < 1) throw ConfigError("grid must be non-empty");
  auto inside = [&](GridCell c) {
    return c.x >= 0 && c.x < cfg_.width && c.y >= 0 && c.y < cfg_.height;
  };
  if (!inside(cfg_.start) || !inside(cfg_.goal))
    throw ConfigError("grid start/goal outside the grid");
  if (cfg_.start == cfg_.goal) throw ConfigError("grid start equals goal");
}

int GridWorldEnv::initial_state(std::int64_t, Rng& rng) const {
  if (!cfg_.randomize_start) return index(cfg_.start);
  int s = index(cfg_.goal);
  while (s == index(cfg_.goal)) s = rng.uniform_int(n_states());
  return s;
}

EnvStep GridWorldEnv::step_cell(GridCell c, int action) const {
  if (c == cfg_.goal)
    throw ConfigError("cannot step from the goal state; the episode is over");
  if (c.x < 0 || c.x >= cfg_.width || c.y < 0 || c.y >= cfg_.height)
    throw ConfigError("cell outside the grid");
  GridCell n = c;
  switch (action) {
    case grid::kUp: n.y += 1; break;
    case grid::kDown: n.y -= 1; break;
    case grid::kLeft: n.x -= 1; break;
    case grid::kRight: n.x += 1; break;
    default: throw ConfigError("grid action must be in {up,down,left,right}");
  }
  // Off-grid moves leave the position unchanged and still cost a step.
  if (n.x < 0 || n.x >= cfg_.width || n.y < 0 || n.y >= cfg_.height) n = c;
  if (n == cfg_.goal) return {index(n), cfg_.goal_reward, true};
  return {index(n), cfg_.step_reward, false};
}

EnvStep GridWorldEnv::step(int state, int action, std::int64_t) const {
  return step_cell(cell(state), action);
}

std::map<std::string, std::string> GridWorldEnv::meta() const {
  std::map<std::string, std::string> m;
  m["n_states"] = std::to_string(n_states());
  m["n_actions"] = "4";
  m["width"] = std::to_string(cfg_.width);
  m["height"] = std::to_string(cfg_.height);
  m["goal_state"] = std::to_string(goal_index());
  m["start_state"] = std::to_string(index(cfg_.start));
  m["action_names"] = "up,down,left,right";
  m["state_encoding"] = "y*width+x";
  return m;
}

GridConfig grid_config_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("grid config: ") + e.what());
  }
  GridConfig cfg;
  cfg.width = j.value("width", cfg.width);
  cfg.height = j.value("height", cfg.height);
  if (j.contains("start"))
    cfg.start = {j["start"].at(0).get<int>(), j["start"].at(1).get<int>()};
  if (j.contains("goal"))
    cfg.goal = {j["goal"].at(0).get<int>(), j["goal"].at(1).get<int>()};
  cfg.step_reward = j.value("step_reward", cfg.step_reward);
  cfg.goal_reward = j.value("goal_reward", cfg.goal_reward);
  cfg.max_steps_per_episode =
      j.value("max_steps_per_episode", cfg.max_steps_per_episode);
  cfg.randomize_start = j.value("randomize_start", cfg.randomize_start);
  return cfg;
}

}  // namespace tdprobe
