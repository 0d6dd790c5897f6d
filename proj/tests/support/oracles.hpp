#ifndef TDPROBE_TESTS_ORACLES_HPP
#define TDPROBE_TESTS_ORACLES_HPP

// Independent reference implementations used as test oracles. Everything in
// here is deliberately written without reusing the library's code paths.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <queue>
#include <vector>

namespace oracles {

struct StepFn {
  // (state, action) -> (next_state, reward, terminal)
  std::function<std::tuple<int, double, bool>(int, int)> step;
  int n_states;
  int n_actions;
  std::vector<bool> terminal;  // per state
};

// Synchronous value iteration on a deterministic MDP.
inline Eigen::MatrixXd value_iteration_q(const StepFn& mdp, double gamma,
                                         double tol = 1e-12,
                                         int max_sweeps = 1000000) {
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(mdp.n_states, mdp.n_actions);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double change = 0.0;
    Eigen::MatrixXd next = q;
    for (int s = 0; s < mdp.n_states; ++s) {
      if (mdp.terminal[static_cast<std::size_t>(s)]) continue;
      for (int a = 0; a < mdp.n_actions; ++a) {
        auto [s2, r, done] = mdp.step(s, a);
        double boot = done ? 0.0 : gamma * q.row(s2).maxCoeff();
        next(s, a) = r + boot;
        change = std::max(change, std::abs(next(s, a) - q(s, a)));
      }
    }
    q = next;
    if (change < tol) break;
  }
  return q;
}

// Connected components of an undirected graph given an edge predicate.
inline std::vector<std::vector<int>> connected_components(
    int n, const std::function<bool(int, int)>& edge) {
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<int>> out;
  for (int start = 0; start < n; ++start) {
    if (comp[static_cast<std::size_t>(start)] >= 0) continue;
    int id = static_cast<int>(out.size());
    out.emplace_back();
    std::queue<int> frontier;
    frontier.push(start);
    comp[static_cast<std::size_t>(start)] = id;
    while (!frontier.empty()) {
      int v = frontier.front();
      frontier.pop();
      out[static_cast<std::size_t>(id)].push_back(v);
      for (int w = 0; w < n; ++w) {
        if (comp[static_cast<std::size_t>(w)] < 0 && edge(v, w)) {
          comp[static_cast<std::size_t>(w)] = id;
          frontier.push(w);
        }
      }
    }
  }
  return out;
}

// Two-pass Pearson correlation with long double accumulation.
inline double pearson_two_pass(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const auto n = static_cast<long double>(x.size());
  long double mx = 0.0L, my = 0.0L;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    mx += x(i);
    my += y(i);
  }
  mx /= n;
  my /= n;
  long double sxx = 0.0L, syy = 0.0L, sxy = 0.0L;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    long double dx = x(i) - mx;
    long double dy = y(i) - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

// Surprise vector straight from raw transition counts.
inline Eigen::VectorXd surprise_from_counts(const Eigen::MatrixXd& counts,
                                            int state, int observed_next,
                                            double floor = 1e-6) {
  const Eigen::Index n = counts.cols();
  double total = counts.row(state).sum();
  Eigen::VectorXd out(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double p = total > 0.0 ? counts(state, j) / total
                           : 1.0 / static_cast<double>(n);
    p = std::min(std::max(p, floor), 1.0 - floor);
    out(j) = (j == observed_next) ? -std::log(p) : -std::log(1.0 - p);
  }
  return out;
}

// 95% normal-approximation band around 0.5 for k successes in n trials.
inline bool within_binomial_chance_band(int successes, int n) {
  double p = static_cast<double>(successes) / n;
  double half_width = 1.96 * std::sqrt(0.25 / static_cast<double>(n));
  return p >= 0.5 - half_width && p <= 0.5 + half_width;
}

}  // namespace oracles

#endif
