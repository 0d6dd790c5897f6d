#include "tdprobe/agents/q_learning.hpp"

#include <algorithm>
#include <cmath>

#include "tdprobe/errors.hpp"

namespace tdprobe {

double td_error_q(const QTable& q, int state, int action, double reward,
                  int next_state, bool terminal) {
  if (!std::isfinite(reward)) throw NumericalError("non-finite reward in TD error");
  double bootstrap = terminal ? 0.0 : q.gamma * q.max_q(next_state);
  return reward + bootstrap - q.q(state, action);
}

double q_update_windowed(QTable& q, std::span<const Transition> window,
                         const Eigen::MatrixXd* alpha_per_pair) {
  if (window.empty()) throw ConfigError("windowed update requires history");

  // All deltas against the pre-update table.
  std::vector<double> delta(window.size());
  double pooled = 0.0;
  for (std::size_t i = 0; i < window.size(); ++i) {
    const Transition& tr = window[i];
    delta[i] = td_error_q(q, tr.state, tr.action, tr.reward, tr.next_state,
                          tr.terminal);
    pooled += delta[i];
  }
  pooled /= static_cast<double>(window.size());

  // Group by (s, a); each pair moves by alpha * mean of its own deltas.
  std::vector<bool> used(window.size(), false);
  for (std::size_t i = 0; i < window.size(); ++i) {
    if (used[i]) continue;
    double sum = delta[i];
    int count = 1;
    for (std::size_t j = i + 1; j < window.size(); ++j) {
      if (window[j].state == window[i].state &&
          window[j].action == window[i].action) {
        used[j] = true;
        sum += delta[j];
        ++count;
      }
    }
    double alpha = alpha_per_pair
                       ? (*alpha_per_pair)(window[i].state, window[i].action)
                       : q.alpha;
    q.q(window[i].state, window[i].action) += alpha * (sum / count);
  }
  return pooled;
}

double epsilon_at(const ExplorationConfig& cfg, std::int64_t episode) {
  if (cfg.decay_episodes <= 0) return 0.0;
  if (episode >= cfg.decay_episodes) return 0.0;
  return cfg.epsilon0 *
         (1.0 - static_cast<double>(episode) / static_cast<double>(cfg.decay_episodes));
}

Eigen::VectorXd softmax(const Eigen::VectorXd& values, double tau) {
  Eigen::VectorXd z = tau * values;
  double m = z.maxCoeff();
  Eigen::VectorXd e = (z.array() - m).exp();
  return e / e.sum();
}

namespace {

int sample_categorical(const Eigen::VectorXd& p, Rng& rng) {
  double u = rng.uniform();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    acc += p(i);
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(p.size() - 1);
}

int choose_action(const QTable& q, int state, const ExplorationConfig& ex,
                  std::int64_t episode, int n_actions, Rng& rng) {
  switch (ex.kind) {
    case ExploreKind::epsilon_linear: {
      double eps = epsilon_at(ex, episode);
      if (rng.uniform() < eps) return rng.uniform_int(n_actions);
      return q.greedy(state);
    }
    case ExploreKind::random_then_softmax: {
      if (episode < ex.random_episodes) return rng.uniform_int(n_actions);
      Eigen::VectorXd p = softmax(q.q.row(state).transpose(), ex.inv_temperature);
      return sample_categorical(p, rng);
    }
  }
  return 0;
}

void push_scalar(std::vector<double>& trace, bool record, double v) {
  if (record) trace.push_back(v);
}

SignalTrace make_trace(const std::string& name, const std::string& run_id,
                       const std::vector<double>& values,
                       const std::vector<std::pair<std::int64_t, std::int64_t>>& align) {
  SignalTrace t;
  t.name = name;
  t.run_id = run_id;
  t.values.resize(static_cast<Eigen::Index>(values.size()), 1);
  for (std::size_t i = 0; i < values.size(); ++i)
    t.values(static_cast<Eigen::Index>(i), 0) = values[i];
  t.align = align;
  return t;
}

}  // namespace

AgentRunResult run_q_agent(const DiscreteEnv& env, const QAgentConfig& cfg) {
  if (cfg.alpha <= 0.0 || cfg.alpha > 1.0)
    throw ConfigError("alpha must lie in (0, 1]");
  if (cfg.gamma < 0.0 || cfg.gamma > 1.0)
    throw ConfigError("gamma must lie in [0, 1]");

  const int ns = env.n_states();
  const int na = env.n_actions();
  QTable q(ns, na, cfg.gamma, cfg.alpha, cfg.window);
  QTable myopic(ns, na, 0.0, cfg.alpha, cfg.window);

  Rng rng(cfg.seed);
  std::deque<Transition> history;
  Eigen::MatrixXd visits;
  Eigen::MatrixXd alpha_pair;
  if (cfg.alpha_inverse_visits) {
    visits = Eigen::MatrixXd::Zero(ns, na);
    alpha_pair = Eigen::MatrixXd::Ones(ns, na);
  }

  AgentRunResult out;
  out.traj.run_id = cfg.run_id;
  out.traj.task = env.task();
  out.traj.meta = env.meta();
  out.traj.meta["gamma"] = std::to_string(cfg.gamma);
  out.traj.meta["alpha"] = std::to_string(cfg.alpha);
  out.traj.meta["seed"] = std::to_string(cfg.seed);

  std::vector<double> tr_q, tr_td, tr_mq, tr_mtd;
  std::vector<std::pair<std::int64_t, std::int64_t>> align;

  int max_steps = 1 << 20;
  if (auto it = out.traj.meta.find("max_steps_per_episode");
      it != out.traj.meta.end())
    max_steps = std::stoi(it->second);

  for (std::int64_t ep = 0; ep < cfg.episodes; ++ep) {
    int state = env.initial_state(ep, rng);
    bool done = false;
    std::int64_t t = 0;
    while (!done && t < max_steps) {
      int action = choose_action(q, state, cfg.explore, ep, na, rng);
      EnvStep st = env.step(state, action, ep);

      if (cfg.record_traces) {
        tr_q.push_back(q.q(state, action));
        tr_mq.push_back(myopic.q(state, action));
        align.emplace_back(ep, t);
      }

      history.push_back({state, action, st.reward, st.next_state, st.done});
      if (!cfg.window.all &&
          history.size() > static_cast<std::size_t>(cfg.window.k))
        history.pop_front();

      std::vector<Transition> window(history.begin(), history.end());
      const Eigen::MatrixXd* ap = nullptr;
      if (cfg.alpha_inverse_visits) {
        visits(state, action) += 1.0;
        for (const auto& trn : window)
          alpha_pair(trn.state, trn.action) =
              1.0 / std::max(1.0, visits(trn.state, trn.action));
        ap = &alpha_pair;
      }
      double td = q_update_windowed(q, window, ap);
      double mtd = q_update_windowed(myopic, window, ap);
      push_scalar(tr_td, cfg.record_traces, td);
      push_scalar(tr_mtd, cfg.record_traces, mtd);

      TrajStep step;
      step.episode = ep;
      step.t = t;
      step.state = state;
      step.action = action;
      step.reward = st.reward;
      step.next_state = st.next_state;
      out.traj.steps.push_back(step);

      state = st.next_state;
      done = st.done;
      ++t;
    }
  }

  out.q_values = make_trace("q_values", cfg.run_id, tr_q, align);
  out.td_errors = make_trace("td_errors", cfg.run_id, tr_td, align);
  out.myopic_values = make_trace("myopic_values", cfg.run_id, tr_mq, align);
  out.myopic_errors = make_trace("myopic_errors", cfg.run_id, tr_mtd, align);
  out.final_q = std::move(q);
  out.final_myopic = std::move(myopic);
  return out;
}

}  // namespace tdprobe
