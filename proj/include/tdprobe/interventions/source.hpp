#ifndef TDPROBE_INTERVENTIONS_SOURCE_HPP
#define TDPROBE_INTERVENTIONS_SOURCE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "tdprobe/interventions/plan.hpp"
#include "tdprobe/store/report.hpp"

namespace tdprobe {

// Hook invoked after each block's representation is formed; the returned
// vector replaces it before downstream blocks are computed (when the source
// can propagate).
using BlockEditFn = std::function<Eigen::VectorXd(
    int block, Eigen::Index step, const Eigen::VectorXd& h)>;

struct SourceRunOutput {
  std::vector<Eigen::MatrixXd> block_activations;  // per block, n_steps x d
  Eigen::MatrixXd logits;  // n_steps x n_outputs; empty when no readout exists
};

// Abstract multi-block representation stream that interventions act on.
class RepresentationSource {
 public:
  virtual ~RepresentationSource() = default;
  virtual int n_blocks() const = 0;
  virtual Eigen::Index n_steps() const = 0;
  virtual bool supports_propagation() const = 0;
  virtual SourceRunOutput run(const BlockEditFn& edit) = 0;
};

// Recorded activations replayed from disk or memory. Edits cannot propagate
// to later blocks, so plans touching non-final blocks are refused rather than
// silently producing stale downstream activations.
class ReplaySource : public RepresentationSource {
 public:
  explicit ReplaySource(std::vector<Eigen::MatrixXd> blocks);

  int n_blocks() const override { return static_cast<int>(blocks_.size()); }
  Eigen::Index n_steps() const override { return blocks_.front().rows(); }
  bool supports_propagation() const override { return false; }
  SourceRunOutput run(const BlockEditFn& edit) override;

 private:
  std::vector<Eigen::MatrixXd> blocks_;
};

struct InterventionRun {
  SourceRunOutput output;
  InterventionPlan plan;
};

// Applies the plan's edits (through each block's SAE) on every step. Throws
// CapabilityError when the plan requires propagation the source cannot do,
// and ConfigError when an edited block has no SAE.
InterventionRun run_with_plan(RepresentationSource& source,
                              const InterventionPlan& plan,
                              const std::map<int, SAEModel>& saes);

enum class EffectMetric {
  nll_vs_model,
  action_accuracy,
  next_state_accuracy,
  downstream_max_corr,
};

const char* to_string(EffectMetric m);

struct EffectEntry {
  std::string metric;
  double baseline = 0.0;
  double intervened = 0.0;
  double delta = 0.0;
  double null_lo = 0.0;  // 2.5% / 97.5% of the paired permutation null
  double null_hi = 0.0;
  bool outside_null = false;
};

// Per-step metric series (e.g. correct/incorrect indicators or per-step
// negative log-likelihoods) compared by mean difference against a paired
// sign-flip permutation null.
EffectEntry measure_effect_series(EffectMetric metric,
                                  const Eigen::VectorXd& baseline_series,
                                  const Eigen::VectorXd& intervened_series,
                                  int n_permutations, std::uint64_t seed);

// Per-step indicator of argmax agreement with the targets.
Eigen::VectorXd accuracy_series(const Eigen::MatrixXd& logits,
                                const std::vector<int>& targets);

// Per-step -log softmax(logits)[target].
Eigen::VectorXd nll_series(const Eigen::MatrixXd& logits,
                           const std::vector<int>& targets);

ReportTable effect_report(const std::vector<EffectEntry>& entries);

}  // namespace tdprobe

#endif
