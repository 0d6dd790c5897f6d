#include "tdprobe/envs/two_step.hpp"

#include <algorithm>

#include "json.hpp"
#include "tdprobe/errors.hpp"

namespace tdprobe {

using namespace two_step;

TwoStepEnv::TwoStepEnv(TwoStepConfig cfg) : cfg_(cfg) {}

bool TwoStepEnv::changed(std::int64_t episode) const {
  return cfg_.variant.kind != TwoStepVariantKind::stationary &&
         episode >= cfg_.variant.at_episode;
}

int TwoStepEnv::transition(int action, std::int64_t episode) const {
  bool flipped = cfg_.variant.kind == TwoStepVariantKind::transition_change &&
                 changed(episode);
  int base = action == kLeft ? kApple : kOrange;
  if (!flipped) return base;
  return base == kApple ? kOrange : kApple;
}

double TwoStepEnv::reward_at(int second_state, int action,
                             std::int64_t episode) const {
  const TwoStepRewards& table =
      (cfg_.variant.kind == TwoStepVariantKind::reward_change && changed(episode))
          ? cfg_.changed_rewards
          : cfg_.rewards;
  return table[second_state - kApple][action];
}

double TwoStepEnv::max_episode_reward(std::int64_t episode) const {
  double best = reward_at(kApple, kLeft, episode);
  for (int s : {kApple, kOrange})
    for (int a : {kLeft, kRight}) best = std::max(best, reward_at(s, a, episode));
  return best;
}

EnvStep TwoStepEnv::step(int state, int action, std::int64_t episode) const {
  if (action != kLeft && action != kRight)
    throw ConfigError("two-step action must be 0 (left) or 1 (right)");
  if (state == kStart) {
    // First transition always carries 0 reward.
    return {transition(action, episode), 0.0, false};
  }
  if (state == kApple || state == kOrange) {
    return {kTerminal, reward_at(state, action, episode), true};
  }
  throw ConfigError("cannot act from the terminal state of the two-step task");
}

std::map<std::string, std::string> TwoStepEnv::meta() const {
  std::map<std::string, std::string> m;
  m["n_states"] = "4";
  m["n_actions"] = "2";
  m["state_names"] = "start,apple,orange,terminal";
  m["action_names"] = "left,right";
  switch (cfg_.variant.kind) {
    case TwoStepVariantKind::stationary: m["variant"] = "stationary"; break;
    case TwoStepVariantKind::reward_change:
      m["variant"] = "reward_change@" + std::to_string(cfg_.variant.at_episode);
      break;
    case TwoStepVariantKind::transition_change:
      m["variant"] = "transition_change@" + std::to_string(cfg_.variant.at_episode);
      break;
  }
  return m;
}

TwoStepConfig two_step_config_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("two-step config: ") + e.what());
  }
  TwoStepConfig cfg;
  auto read_table = [&](const char* key, TwoStepRewards& into) {
    if (!j.contains(key)) return;
    const auto& t = j.at(key);
    into[0][0] = t.at("apple_left").get<double>();
    into[0][1] = t.at("apple_right").get<double>();
    into[1][0] = t.at("orange_left").get<double>();
    into[1][1] = t.at("orange_right").get<double>();
  };
  read_table("rewards", cfg.rewards);
  if (j.contains("changed_rewards")) {
    read_table("changed_rewards", cfg.changed_rewards);
  } else {
    cfg.changed_rewards = {cfg.rewards[1], cfg.rewards[0]};
  }
  if (j.contains("variant")) {
    std::string kind = j["variant"].at("kind").get<std::string>();
    if (kind == "stationary")
      cfg.variant.kind = TwoStepVariantKind::stationary;
    else if (kind == "reward_change")
      cfg.variant.kind = TwoStepVariantKind::reward_change;
    else if (kind == "transition_change")
      cfg.variant.kind = TwoStepVariantKind::transition_change;
    else
      throw ConfigError("unknown two-step variant '" + kind + "'");
    cfg.variant.at_episode = j["variant"].value("at_episode", std::int64_t{0});
  }
  return cfg;
}

}  // namespace tdprobe
