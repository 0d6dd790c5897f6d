#ifndef TDPROBE_ENVS_CONTROLS_HPP
#define TDPROBE_ENVS_CONTROLS_HPP

#include <cstdint>

#include "tdprobe/store/trajectory.hpp"

namespace tdprobe {

// Reward-randomization controls for grid-world logs. States and actions are
// left untouched.
enum class RewardRandomization {
  shuffle_sign,  // i.i.d. uniform +1/-1
  swap_sign,     // r -> -r
  strip,         // rewards removed entirely
};

TrajectoryLog randomize_rewards(const TrajectoryLog& traj,
                                RewardRandomization mode, std::uint64_t seed);

}  // namespace tdprobe

#endif
