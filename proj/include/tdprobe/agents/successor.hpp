#ifndef TDPROBE_AGENTS_SUCCESSOR_HPP
#define TDPROBE_AGENTS_SUCCESSOR_HPP

#include <Eigen/Dense>
#include <string>

#include "tdprobe/agents/signal_trace.hpp"
#include "tdprobe/store/trajectory.hpp"

namespace tdprobe {

// Successor representation learned by TD: M(s, s') estimates the future
// discounted occupancy of s' from s. Initialized to the identity, which is
// the exact gamma = 0 fixed point.
struct SRMatrix {
  Eigen::MatrixXd m;
  double gamma = 0.9;
  double alpha = 0.05;  // graph-task default

  SRMatrix() = default;
  SRMatrix(int n_states, double gamma, double alpha)
      : m(Eigen::MatrixXd::Identity(n_states, n_states)),
        gamma(gamma),
        alpha(alpha) {}
};

// delta = onehot(s) + gamma * M(s', :) - M(s, :); M(s, :) += alpha * delta.
// Only row s changes. Returns the vector TD error.
Eigen::VectorXd sr_td_step(SRMatrix& sr, int state, int next_state);
Eigen::VectorXd sr_td_step(SRMatrix& sr, int state, int next_state,
                           double alpha_override);

struct SRRunResult {
  SRMatrix sr;
  SignalTrace sr_rows;    // M(s_t, :) before the step's update
  SignalTrace td_errors;  // vector TD error per transition
};

enum class SRAlphaSchedule { constant, robbins_monro };

// Feeds every transition of a (graph) trajectory through SR TD learning.
// robbins_monro decays the rate per visited row: alpha / visits(s)^0.75.
SRRunResult run_sr_on_walk(const TrajectoryLog& walk, int n_states, double gamma,
                           double alpha,
                           SRAlphaSchedule schedule = SRAlphaSchedule::constant,
                           bool record_traces = true);

// Analytic fixed point (I - gamma T)^-1 for a transition matrix T.
Eigen::MatrixXd sr_fixed_point(const Eigen::MatrixXd& transition, double gamma);

}  // namespace tdprobe

#endif
