#ifndef TDPROBE_AGENTS_REPETITION_HPP
#define TDPROBE_AGENTS_REPETITION_HPP

#include <Eigen/Dense>

namespace tdprobe {

// Choice probabilities from how often each action was picked in a state,
// with additive smoothing: p(a|s) = (count + k) / (total + k * |A|).
struct RepetitionModel {
  Eigen::MatrixXd counts;  // n_states x n_actions
  double smoothing = 1.0;

  RepetitionModel(int n_states, int n_actions, double smoothing = 1.0)
      : counts(Eigen::MatrixXd::Zero(n_states, n_actions)),
        smoothing(smoothing) {}

  Eigen::VectorXd probs(int state) const {
    const auto na = counts.cols();
    Eigen::VectorXd numer =
        counts.row(state).transpose().array() + smoothing;
    return numer / (counts.row(state).sum() + smoothing * na);
  }

  void observe(int state, int action) { counts(state, action) += 1.0; }
};

}  // namespace tdprobe

#endif
