#ifndef TDPROBE_BEHAVIOR_FIT_FIT_HPP
#define TDPROBE_BEHAVIOR_FIT_FIT_HPP

#include <map>
#include <span>
#include <string>
#include <vector>

#include "tdprobe/agents/q_learning.hpp"
#include "tdprobe/store/report.hpp"
#include "tdprobe/store/trajectory.hpp"

namespace tdprobe {

enum class BehavioralModel { q_learning, myopic, repetition, chance };

const char* to_string(BehavioralModel m);

struct FitOptions {
  int n_actions = 2;
  // Grid search: 25 log-spaced learning rates and inverse temperatures.
  int alpha_points = 25;
  double alpha_lo = 0.01, alpha_hi = 1.0;
  int tau_points = 25;
  double tau_lo = 0.1, tau_hi = 20.0;
  int smoothing_points = 25;
  double smoothing_lo = 0.01, smoothing_hi = 100.0;
  // Value-model discounts are fixed, not fitted.
  double gamma_q = 0.99;
  ReplayWindow window = ReplayWindow::last(4);
};

struct FitResult {
  BehavioralModel model;
  std::map<std::string, double> params;  // alpha, tau, smoothing where used
  double nll = 0.0;
  std::int64_t n_choices = 0;
};

// Sequential likelihood of the logged choices under the model, updating
// beliefs with the observed actions. Value models act through a softmax with
// inverse temperature params["tau"].
double model_nll(BehavioralModel model, std::span<const TrajectoryLog> runs,
                 const std::map<std::string, double>& params,
                 const FitOptions& opts);

// Exhaustive, deterministic grid search; ties break lexicographically on
// (alpha, tau).
FitResult fit(BehavioralModel model, std::span<const TrajectoryLog> runs,
              const FitOptions& opts);

// NLL comparison table, ascending. With holdout_runs > 0 the last runs are
// held out: parameters are fitted on the rest and both train and test NLL
// columns are reported.
ReportTable compare(std::span<const TrajectoryLog> runs,
                    std::span<const BehavioralModel> models,
                    const FitOptions& opts, int holdout_runs = 0);

}  // namespace tdprobe

#endif
