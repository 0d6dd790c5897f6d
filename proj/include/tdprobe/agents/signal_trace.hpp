#ifndef TDPROBE_AGENTS_SIGNAL_TRACE_HPP
#define TDPROBE_AGENTS_SIGNAL_TRACE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tdprobe {

// Per-step ground-truth signal emitted by a reference agent. Scalar signals
// are stored as a single column; vector signals (SR rows, surprise rows) as
// fixed-width rows aligned with the trajectory's steps.
struct SignalTrace {
  std::string name;
  std::string run_id;
  Eigen::MatrixXd values;  // n_steps x width
  std::vector<std::pair<std::int64_t, std::int64_t>> align;  // (episode, t)

  std::int64_t n_steps() const { return values.rows(); }
  std::int64_t width() const { return values.cols(); }
  Eigen::VectorXd column(int j = 0) const { return values.col(j); }
};

}  // namespace tdprobe

#endif
