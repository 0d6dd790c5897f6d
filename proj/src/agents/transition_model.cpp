#include "tdprobe/agents/transition_model.hpp"

#include <algorithm>
#include <cmath>

#include "tdprobe/errors.hpp"

namespace tdprobe {

double TransitionModel::prob(int s, int s_next) const {
  double total = row_total(s);
  if (total <= 0.0) return 1.0 / static_cast<double>(n_states());
  return counts(s, s_next) / total;
}

Eigen::VectorXd TransitionModel::row(int s) const {
  double total = row_total(s);
  if (total <= 0.0)
    return Eigen::VectorXd::Constant(n_states(), 1.0 / n_states());
  return counts.row(s).transpose() / total;
}

void transition_update(TransitionModel& tm, int state, int next_state) {
  if (state < 0 || state >= tm.n_states() || next_state < 0 ||
      next_state >= tm.n_states())
    throw ConfigError("transition update: state index out of range");
  tm.counts(state, next_state) += 1.0;
}

Eigen::VectorXd surprise(const TransitionModel& tm, int state,
                         int observed_next_state) {
  const int n = tm.n_states();
  if (state < 0 || state >= n || observed_next_state < 0 ||
      observed_next_state >= n)
    throw ConfigError("surprise: state index out of range");
  Eigen::VectorXd row = tm.row(state);
  Eigen::VectorXd out(n);
  for (int j = 0; j < n; ++j) {
    double p = std::clamp(row(j), kSurpriseProbFloor, 1.0 - kSurpriseProbFloor);
    out(j) = j == observed_next_state ? -std::log(p) : -std::log(1.0 - p);
  }
  return out;
}

TransitionRunResult run_transition_model_on_walk(const TrajectoryLog& walk,
                                                 int n_states,
                                                 bool record_traces) {
  TransitionRunResult out{TransitionModel(n_states), {}, {}, {}, 0.0};
  const auto n = static_cast<Eigen::Index>(walk.steps.size());
  if (record_traces) {
    out.t_rows.name = "transition_rows";
    out.t_rows.run_id = walk.run_id;
    out.t_rows.values.resize(n, n_states);
    out.surprise_rows.name = "surprise_rows";
    out.surprise_rows.run_id = walk.run_id;
    out.surprise_rows.values.resize(n, n_states);
  }

  int correct = 0;
  Eigen::Index i = 0;
  for (const auto& step : walk.steps) {
    Eigen::VectorXd row = out.model.row(step.state);
    int pred = 0;
    row.maxCoeff(&pred);
    out.predicted.push_back(pred);
    if (pred == step.next_state) ++correct;

    if (record_traces) {
      out.t_rows.values.row(i) = row.transpose();
      out.t_rows.align.emplace_back(step.episode, step.t);
      out.surprise_rows.values.row(i) =
          surprise(out.model, step.state, step.next_state).transpose();
      out.surprise_rows.align.emplace_back(step.episode, step.t);
    }
    transition_update(out.model, step.state, step.next_state);
    ++i;
  }
  out.prediction_accuracy =
      walk.steps.empty() ? 0.0
                         : static_cast<double>(correct) /
                               static_cast<double>(walk.steps.size());
  return out;
}

}  // namespace tdprobe
