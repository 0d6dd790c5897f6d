#include "tdprobe/envs/controls.hpp"

#include "tdprobe/errors.hpp"
#include "tdprobe/rng.hpp"

namespace tdprobe {

TrajectoryLog randomize_rewards(const TrajectoryLog& traj,
                                RewardRandomization mode, std::uint64_t seed) {
  if (traj.task != Task::grid_world)
    throw ConfigError("reward randomization is defined for grid-world logs");
  TrajectoryLog out = traj;
  Rng rng(seed);
  for (auto& step : out.steps) {
    switch (mode) {
      case RewardRandomization::shuffle_sign:
        step.reward = rng.uniform() < 0.5 ? 1.0 : -1.0;
        break;
      case RewardRandomization::swap_sign:
        if (step.reward) step.reward = -*step.reward;
        break;
      case RewardRandomization::strip:
        step.reward.reset();
        break;
    }
  }
  switch (mode) {
    case RewardRandomization::shuffle_sign: out.meta["reward_control"] = "shuffle_sign"; break;
    case RewardRandomization::swap_sign: out.meta["reward_control"] = "swap_sign"; break;
    case RewardRandomization::strip: out.meta["reward_control"] = "strip"; break;
  }
  return out;
}

}  // namespace tdprobe
