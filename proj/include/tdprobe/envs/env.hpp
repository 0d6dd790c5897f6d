#ifndef TDPROBE_ENVS_ENV_HPP
#define TDPROBE_ENVS_ENV_HPP

#include <map>
#include <string>

#include "tdprobe/rng.hpp"
#include "tdprobe/store/trajectory.hpp"

namespace tdprobe {

struct EnvStep {
  int next_state;
  double reward;
  bool done;
};

// Common face of the two decision tasks. Environments are immutable after
// construction; stepping is a pure function of (state, action, episode).
class DiscreteEnv {
 public:
  virtual ~DiscreteEnv() = default;

  virtual int n_states() const = 0;
  virtual int n_actions() const = 0;
  virtual Task task() const = 0;
  virtual int initial_state(std::int64_t episode, Rng& rng) const = 0;
  virtual EnvStep step(int state, int action, std::int64_t episode) const = 0;
  virtual std::map<std::string, std::string> meta() const { return {}; }
};

}  // namespace tdprobe

#endif
