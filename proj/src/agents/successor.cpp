#include "tdprobe/agents/successor.hpp"

#include <cmath>

#include "tdprobe/errors.hpp"

namespace tdprobe {

Eigen::VectorXd sr_td_step(SRMatrix& sr, int state, int next_state,
                           double alpha_override) {
  const Eigen::Index n = sr.m.rows();
  if (state < 0 || state >= n || next_state < 0 || next_state >= n)
    throw ConfigError("SR TD step: state index out of range");
  Eigen::VectorXd delta = sr.gamma * sr.m.row(next_state) - sr.m.row(state);
  delta(state) += 1.0;
  sr.m.row(state) += alpha_override * delta.transpose();
  return delta;
}

Eigen::VectorXd sr_td_step(SRMatrix& sr, int state, int next_state) {
  return sr_td_step(sr, state, next_state, sr.alpha);
}

SRRunResult run_sr_on_walk(const TrajectoryLog& walk, int n_states, double gamma,
                           double alpha, SRAlphaSchedule schedule,
                           bool record_traces) {
  SRRunResult out;
  out.sr = SRMatrix(n_states, gamma, alpha);
  Eigen::VectorXd visits = Eigen::VectorXd::Zero(n_states);

  const auto n = static_cast<Eigen::Index>(walk.steps.size());
  if (record_traces) {
    out.sr_rows.name = "sr_rows";
    out.sr_rows.run_id = walk.run_id;
    out.sr_rows.values.resize(n, n_states);
    out.td_errors.name = "sr_td_errors";
    out.td_errors.run_id = walk.run_id;
    out.td_errors.values.resize(n, n_states);
  }

  Eigen::Index i = 0;
  for (const auto& step : walk.steps) {
    if (record_traces) {
      out.sr_rows.values.row(i) = out.sr.m.row(step.state);
      out.sr_rows.align.emplace_back(step.episode, step.t);
      out.td_errors.align.emplace_back(step.episode, step.t);
    }
    double rate = alpha;
    if (schedule == SRAlphaSchedule::robbins_monro) {
      visits(step.state) += 1.0;
      rate = alpha / std::pow(visits(step.state), 0.75);
    }
    Eigen::VectorXd delta = sr_td_step(out.sr, step.state, step.next_state, rate);
    if (record_traces) out.td_errors.values.row(i) = delta.transpose();
    ++i;
  }
  return out;
}

Eigen::MatrixXd sr_fixed_point(const Eigen::MatrixXd& transition, double gamma) {
  const Eigen::Index n = transition.rows();
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - gamma * transition;
  return a.partialPivLu().solve(Eigen::MatrixXd::Identity(n, n));
}

}  // namespace tdprobe
