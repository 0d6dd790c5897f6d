#ifndef TDPROBE_ENVS_GRID_WORLD_HPP
#define TDPROBE_ENVS_GRID_WORLD_HPP

#include "tdprobe/envs/env.hpp"

namespace tdprobe {

struct GridCell {
  int x = 0;
  int y = 0;
  bool operator==(const GridCell&) const = default;
};

namespace grid {
inline constexpr int kUp = 0;
inline constexpr int kDown = 1;
inline constexpr int kLeft = 2;
inline constexpr int kRight = 3;
}  // namespace grid

struct GridConfig {
  int width = 5;
  int height = 5;
  GridCell start{0, 0};
  GridCell goal{4, 4};
  double step_reward = -1.0;
  double goal_reward = 1.0;
  int max_steps_per_episode = 500;
  // The paper's prompts show episodes starting from different cells; off by
  // default, the fixed-start setup is the documented one.
  bool randomize_start = false;
};

// 5x5 grid with four moves. Off-grid moves self-transition and still cost the
// step reward; entering the goal pays +1 and ends the episode.
class GridWorldEnv : public DiscreteEnv {
 public:
  explicit GridWorldEnv(GridConfig cfg = {});

  int n_states() const override { return cfg_.width * cfg_.height; }
  int n_actions() const override { return 4; }
  Task task() const override { return Task::grid_world; }
  int initial_state(std::int64_t episode, Rng& rng) const override;
  EnvStep step(int state, int action, std::int64_t episode) const override;
  std::map<std::string, std::string> meta() const override;

  int index(GridCell c) const { return c.y * cfg_.width + c.x; }
  GridCell cell(int index) const {
    return {index % cfg_.width, index / cfg_.width};
  }
  int goal_index() const { return index(cfg_.goal); }
  const GridConfig& config() const { return cfg_; }

  // Cell-level step, the primitive the index-based override wraps.
  EnvStep step_cell(GridCell c, int action) const;

 private:
  GridConfig cfg_;
};

GridConfig grid_config_from_json(const std::string& json_text);

}  // namespace tdprobe

#endif
