#ifndef TDPROBE_AGENTS_Q_LEARNING_HPP
#define TDPROBE_AGENTS_Q_LEARNING_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <vector>

#include "tdprobe/agents/signal_trace.hpp"
#include "tdprobe/envs/env.hpp"
#include "tdprobe/rng.hpp"
#include "tdprobe/store/trajectory.hpp"

namespace tdprobe {

// Number of most recent transitions averaged when computing the TD error.
struct ReplayWindow {
  int k = 1;
  bool all = false;

  static ReplayWindow last(int k) { return {k, false}; }
  static ReplayWindow all_history() { return {0, true}; }
};

struct Transition {
  int state;
  int action;
  double reward;
  int next_state;
  bool terminal;
};

// Tabular action-value function. Unseen pairs read as 0.
struct QTable {
  Eigen::MatrixXd q;  // n_states x n_actions, zero-initialized
  double gamma = 0.99;
  double alpha = 0.1;
  ReplayWindow window = ReplayWindow::last(1);

  QTable() = default;
  QTable(int n_states, int n_actions, double gamma, double alpha,
         ReplayWindow window = ReplayWindow::last(1))
      : q(Eigen::MatrixXd::Zero(n_states, n_actions)),
        gamma(gamma),
        alpha(alpha),
        window(window) {}

  double max_q(int state) const { return q.row(state).maxCoeff(); }
  // Lowest index wins ties, keeping greedy readout deterministic.
  int greedy(int state) const {
    int a = 0;
    q.row(state).maxCoeff(&a);
    return a;
  }
};

// One-step TD error: r + gamma * max_a Q(s', a) - Q(s, a), with a zero
// bootstrap on terminal transitions.
double td_error_q(const QTable& q, int state, int action, double reward,
                  int next_state, bool terminal);

// Windowed TD update. Every (s, a) occurring in the window moves by
// alpha * mean of its own TD errors, all errors measured against the
// pre-update table. Returns the mean TD error pooled over the whole window,
// which is the scalar TD signal emitted per step. An optional per-pair alpha
// matrix overrides the scalar rate (used by decayed-alpha harnesses).
double q_update_windowed(QTable& q, std::span<const Transition> window,
                         const Eigen::MatrixXd* alpha_per_pair = nullptr);

enum class ExploreKind {
  epsilon_linear,       // linear decay of epsilon over the first N episodes
  random_then_softmax,  // uniform for N episodes, then softmax over Q
};

struct ExplorationConfig {
  ExploreKind kind = ExploreKind::epsilon_linear;
  double epsilon0 = 1.0;
  int decay_episodes = 15;
  int random_episodes = 0;
  // Inverse temperature of the softmax policy; 1.0 matches sampling at
  // temperature 1.
  double inv_temperature = 1.0;
};

// epsilon(0) = epsilon0, linearly down to 0 at decay_episodes and after.
double epsilon_at(const ExplorationConfig& cfg, std::int64_t episode);

struct QAgentConfig {
  double alpha = 0.1;
  double gamma = 0.99;
  ReplayWindow window = ReplayWindow::all_history();
  ExplorationConfig explore;
  std::int64_t episodes = 50;
  std::uint64_t seed = 0;
  std::string run_id = "qrun";
  bool record_traces = true;
  // Test-harness option: per-pair alpha = 1 / visit count instead of the
  // configured constant rate.
  bool alpha_inverse_visits = false;
};

struct AgentRunResult {
  TrajectoryLog traj;
  SignalTrace q_values;       // Q(s_t, a_t) before the step's update
  SignalTrace td_errors;      // windowed mean TD error per step
  SignalTrace myopic_values;  // same quantities from the parallel gamma=0 learner
  SignalTrace myopic_errors;
  QTable final_q;
  QTable final_myopic;
};

// Runs an epsilon-greedy or softmax Q-learner on the environment, producing a
// trajectory plus aligned ground-truth signal traces. The myopic traces come
// from a gamma=0 learner fed the identical experience.
AgentRunResult run_q_agent(const DiscreteEnv& env, const QAgentConfig& cfg);

// Softmax with inverse temperature tau; probabilities sum to 1.
Eigen::VectorXd softmax(const Eigen::VectorXd& values, double tau);

}  // namespace tdprobe

#endif
