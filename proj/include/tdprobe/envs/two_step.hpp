#ifndef TDPROBE_ENVS_TWO_STEP_HPP
#define TDPROBE_ENVS_TWO_STEP_HPP

#include <array>
#include <cstdint>
#include <string>

#include "tdprobe/envs/env.hpp"

namespace tdprobe {

// States: 0 = start, 1 = apple, 2 = orange, 3 = terminal.
// Actions: 0 = left, 1 = right.
namespace two_step {
inline constexpr int kStart = 0;
inline constexpr int kApple = 1;
inline constexpr int kOrange = 2;
inline constexpr int kTerminal = 3;
inline constexpr int kLeft = 0;
inline constexpr int kRight = 1;
}  // namespace two_step

enum class TwoStepVariantKind { stationary, reward_change, transition_change };

struct TwoStepVariant {
  TwoStepVariantKind kind = TwoStepVariantKind::stationary;
  std::int64_t at_episode = 0;
};

// Second-stage reward table, indexed [state apple|orange][action left|right].
using TwoStepRewards = std::array<std::array<double, 2>, 2>;

struct TwoStepConfig {
  // Two entries are attested (orange/left = 6, apple/right = 9); the other
  // two default to 2 and 4 and are overridable.
  TwoStepRewards rewards{{{2.0, 9.0}, {6.0, 4.0}}};
  // Post-change table for the reward_change variant; defaults to the original
  // table with the apple and orange rows swapped.
  TwoStepRewards changed_rewards{{{6.0, 4.0}, {2.0, 9.0}}};
  // start/left -> apple, start/right -> orange; the transition_change variant
  // flips the mapping from at_episode onward.
  TwoStepVariant variant;
};

// Deterministic Two-Step Task: pick left/right from the start state to reach
// apple or orange (reward 0), pick again to receive the table reward and end
// the episode. Episodes are exactly two decisions long.
class TwoStepEnv : public DiscreteEnv {
 public:
  explicit TwoStepEnv(TwoStepConfig cfg = {});

  int n_states() const override { return 4; }
  int n_actions() const override { return 2; }
  Task task() const override { return Task::two_step; }
  int initial_state(std::int64_t, Rng&) const override { return two_step::kStart; }
  EnvStep step(int state, int action, std::int64_t episode) const override;
  std::map<std::string, std::string> meta() const override;

  // Second-stage state reached from start by `action` in `episode`.
  int transition(int action, std::int64_t episode) const;
  double reward_at(int second_state, int action, std::int64_t episode) const;
  double max_episode_reward(std::int64_t episode) const;

  const TwoStepConfig& config() const { return cfg_; }

 private:
  bool changed(std::int64_t episode) const;
  TwoStepConfig cfg_;
};

TwoStepConfig two_step_config_from_json(const std::string& json_text);

}  // namespace tdprobe

#endif
