#ifndef TDPROBE_AGENTS_TRANSITION_MODEL_HPP
#define TDPROBE_AGENTS_TRANSITION_MODEL_HPP

#include <Eigen/Dense>

#include "tdprobe/agents/signal_trace.hpp"
#include "tdprobe/store/trajectory.hpp"

namespace tdprobe {

// Count-based estimate of the one-step transition matrix. Rows that were
// never left read as uniform, which keeps surprise defined on first
// encounters.
struct TransitionModel {
  Eigen::MatrixXd counts;  // whole-valued
  explicit TransitionModel(int n_states)
      : counts(Eigen::MatrixXd::Zero(n_states, n_states)) {}

  int n_states() const { return static_cast<int>(counts.rows()); }
  double row_total(int s) const { return counts.row(s).sum(); }
  // Estimated probability of s -> s_next.
  double prob(int s, int s_next) const;
  Eigen::VectorXd row(int s) const;
};

void transition_update(TransitionModel& tm, int state, int next_state);

// Probabilities are clamped to [eps, 1 - eps] before taking logs.
inline constexpr double kSurpriseProbFloor = 1e-6;

// surprise(s, s') = -log T(s, s') at the observed successor and
// -log(1 - T(s, s')) elsewhere; one value per candidate state.
Eigen::VectorXd surprise(const TransitionModel& tm, int state,
                         int observed_next_state);

struct TransitionRunResult {
  TransitionModel model;
  SignalTrace t_rows;          // T(s_t, :) before the step's update
  SignalTrace surprise_rows;   // surprise(s_t, :) before the step's update
  std::vector<int> predicted;  // argmax next-state prediction per step
  double prediction_accuracy = 0.0;
};

// Feeds a walk through the counting learner, recording per-step rows,
// surprise, and argmax next-state predictions (made before each update).
TransitionRunResult run_transition_model_on_walk(const TrajectoryLog& walk,
                                                 int n_states,
                                                 bool record_traces = true);

}  // namespace tdprobe

#endif
