#include "tdprobe/behavior_fit/fit.hpp"

#include <cmath>
#include <deque>

#include "tdprobe/agents/repetition.hpp"
#include "tdprobe/envs/two_step.hpp"
#include "tdprobe/errors.hpp"

namespace tdprobe {

const char* to_string(BehavioralModel m) {
  switch (m) {
    case BehavioralModel::q_learning: return "q_learning";
    case BehavioralModel::myopic: return "myopic";
    case BehavioralModel::repetition: return "repetition";
    case BehavioralModel::chance: return "chance";
  }
  return "?";
}

namespace {

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  double ratio = std::log(hi / lo);
  for (int i = 0; i < n; ++i)
    v[i] = lo * std::exp(ratio * static_cast<double>(i) / (n - 1));
  return v;
}

// Episode terminations are not logged explicitly; they are derived from the
// task structure so the value models can zero their bootstrap.
bool is_terminal(const TrajectoryLog& run, const TrajStep& step,
                 int goal_state) {
  switch (run.task) {
    case Task::two_step: return step.state != two_step::kStart;
    case Task::grid_world: return step.next_state == goal_state;
    case Task::graph: return false;
  }
  return false;
}

int goal_state_of(const TrajectoryLog& run) {
  auto it = run.meta.find("goal_state");
  return it == run.meta.end() ? -1 : std::stoi(it->second);
}

int max_state_of(std::span<const TrajectoryLog> runs) {
  int m = 0;
  for (const auto& run : runs)
    for (const auto& s : run.steps) {
      m = std::max(m, s.state);
      m = std::max(m, s.next_state);
    }
  return m + 1;
}

double value_model_nll(std::span<const TrajectoryLog> runs, double gamma,
                       double alpha, double tau, const FitOptions& opts) {
  double nll = 0.0;
  const int n_states = max_state_of(runs);
  for (const auto& run : runs) {
    QTable q(n_states, opts.n_actions, gamma, alpha, opts.window);
    std::deque<Transition> history;
    int goal = goal_state_of(run);
    for (const auto& step : run.steps) {
      if (!step.action) continue;
      Eigen::VectorXd p = softmax(q.q.row(step.state).transpose(), tau);
      nll -= std::log(p(*step.action));

      Transition tr{step.state, *step.action, step.reward.value_or(0.0),
                    step.next_state, is_terminal(run, step, goal)};
      history.push_back(tr);
      if (!opts.window.all &&
          history.size() > static_cast<std::size_t>(opts.window.k))
        history.pop_front();
      std::vector<Transition> window(history.begin(), history.end());
      q_update_windowed(q, window);
    }
  }
  return nll;
}

double repetition_nll(std::span<const TrajectoryLog> runs, double smoothing,
                      const FitOptions& opts) {
  double nll = 0.0;
  const int n_states = max_state_of(runs);
  for (const auto& run : runs) {
    RepetitionModel rep(n_states, opts.n_actions, smoothing);
    for (const auto& step : run.steps) {
      if (!step.action) continue;
      nll -= std::log(rep.probs(step.state)(*step.action));
      rep.observe(step.state, *step.action);
    }
  }
  return nll;
}

std::int64_t count_choices(std::span<const TrajectoryLog> runs) {
  std::int64_t n = 0;
  for (const auto& run : runs) n += run.n_decisions();
  return n;
}

}  // namespace

double model_nll(BehavioralModel model, std::span<const TrajectoryLog> runs,
                 const std::map<std::string, double>& params,
                 const FitOptions& opts) {
  switch (model) {
    case BehavioralModel::q_learning:
      return value_model_nll(runs, opts.gamma_q, params.at("alpha"),
                             params.at("tau"), opts);
    case BehavioralModel::myopic:
      return value_model_nll(runs, 0.0, params.at("alpha"), params.at("tau"),
                             opts);
    case BehavioralModel::repetition:
      return repetition_nll(runs, params.at("smoothing"), opts);
    case BehavioralModel::chance:
      return static_cast<double>(count_choices(runs)) *
             std::log(static_cast<double>(opts.n_actions));
  }
  throw ConfigError("unknown behavioral model");
}

FitResult fit(BehavioralModel model, std::span<const TrajectoryLog> runs,
              const FitOptions& opts) {
  if (count_choices(runs) < 1)
    throw ConfigError("behavioral fit requires at least one decision");

  FitResult best;
  best.model = model;
  best.n_choices = count_choices(runs);

  switch (model) {
    case BehavioralModel::chance: {
      best.nll = model_nll(model, runs, {}, opts);
      return best;
    }
    case BehavioralModel::repetition: {
      double best_nll = std::numeric_limits<double>::infinity();
      double best_k = opts.smoothing_lo;
      for (double k :
           log_spaced(opts.smoothing_lo, opts.smoothing_hi, opts.smoothing_points)) {
        double nll = repetition_nll(runs, k, opts);
        if (nll < best_nll) {
          best_nll = nll;
          best_k = k;
        }
      }
      best.nll = best_nll;
      best.params["smoothing"] = best_k;
      return best;
    }
    case BehavioralModel::q_learning:
    case BehavioralModel::myopic: {
      double gamma = model == BehavioralModel::q_learning ? opts.gamma_q : 0.0;
      double best_nll = std::numeric_limits<double>::infinity();
      double best_alpha = opts.alpha_lo, best_tau = opts.tau_lo;
      for (double alpha : log_spaced(opts.alpha_lo, opts.alpha_hi, opts.alpha_points)) {
        for (double tau : log_spaced(opts.tau_lo, opts.tau_hi, opts.tau_points)) {
          double nll = value_model_nll(runs, gamma, alpha, tau, opts);
          if (nll < best_nll) {  // strict: first (alpha, tau) wins ties
            best_nll = nll;
            best_alpha = alpha;
            best_tau = tau;
          }
        }
      }
      best.nll = best_nll;
      best.params["alpha"] = best_alpha;
      best.params["tau"] = best_tau;
      return best;
    }
  }
  throw ConfigError("unknown behavioral model");
}

ReportTable compare(std::span<const TrajectoryLog> runs,
                    std::span<const BehavioralModel> models,
                    const FitOptions& opts, int holdout_runs) {
  if (models.size() < 2) throw ConfigError("compare needs at least two models");
  if (holdout_runs < 0 || holdout_runs >= static_cast<int>(runs.size()))
    throw ConfigError("holdout_runs must leave at least one training run");

  std::span<const TrajectoryLog> train = runs.first(runs.size() - holdout_runs);
  std::span<const TrajectoryLog> test = runs.last(holdout_runs);

  std::vector<ReportColumn> cols{{"model", ColumnKind::text},
                                 {"nll", ColumnKind::real},
                                 {"alpha", ColumnKind::real},
                                 {"tau", ColumnKind::real},
                                 {"smoothing", ColumnKind::real},
                                 {"n_choices", ColumnKind::integer}};
  if (holdout_runs > 0) cols.insert(cols.begin() + 2, {"test_nll", ColumnKind::real});

  struct Row {
    FitResult fit;
    double test_nll;
  };
  std::vector<Row> fitted;
  for (BehavioralModel m : models) {
    Row row{fit(m, train, opts), 0.0};
    if (holdout_runs > 0) row.test_nll = model_nll(m, test, row.fit.params, opts);
    fitted.push_back(std::move(row));
  }
  std::stable_sort(fitted.begin(), fitted.end(),
                   [](const Row& a, const Row& b) { return a.fit.nll < b.fit.nll; });

  ReportTable table("behavior_fit", cols);
  auto param_or_nan = [](const FitResult& f, const char* key) {
    auto it = f.params.find(key);
    return it == f.params.end() ? std::numeric_limits<double>::quiet_NaN()
                                : it->second;
  };
  for (const auto& row : fitted) {
    std::vector<ReportCell> cells;
    cells.emplace_back(std::string(to_string(row.fit.model)));
    cells.emplace_back(row.fit.nll);
    if (holdout_runs > 0) cells.emplace_back(row.test_nll);
    cells.emplace_back(param_or_nan(row.fit, "alpha"));
    cells.emplace_back(param_or_nan(row.fit, "tau"));
    cells.emplace_back(param_or_nan(row.fit, "smoothing"));
    cells.emplace_back(row.fit.n_choices);
    table.add_row(std::move(cells));
  }
  return table;
}

}  // namespace tdprobe
