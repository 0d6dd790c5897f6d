#include "tdprobe/interventions/source.hpp"

#include <algorithm>
#include <cmath>

#include "tdprobe/agents/q_learning.hpp"
#include "tdprobe/errors.hpp"
#include "tdprobe/rng.hpp"

namespace tdprobe {

ReplaySource::ReplaySource(std::vector<Eigen::MatrixXd> blocks)
    : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw ConfigError("replay source needs at least one block");
  for (const auto& b : blocks_)
    if (b.rows() != blocks_.front().rows())
      throw ConfigError("replay blocks disagree on step count");
}

SourceRunOutput ReplaySource::run(const BlockEditFn& edit) {
  SourceRunOutput out;
  out.block_activations = blocks_;
  if (!edit) return out;
  for (int b = 0; b < n_blocks(); ++b)
    for (Eigen::Index t = 0; t < n_steps(); ++t)
      out.block_activations[static_cast<std::size_t>(b)].row(t) =
          edit(b, t, blocks_[static_cast<std::size_t>(b)].row(t).transpose())
              .transpose();
  return out;
}

InterventionRun run_with_plan(RepresentationSource& source,
                              const InterventionPlan& plan,
                              const std::map<int, SAEModel>& saes) {
  plan.validate();
  const int n_blocks = source.n_blocks();
  for (const auto& e : plan.edits)
    if (e.block >= n_blocks)
      throw ConfigError("plan edits block " + std::to_string(e.block) +
                        " but the source has " + std::to_string(n_blocks));

  if (!source.supports_propagation()) {
    bool non_final = plan.substitute_reconstruction && n_blocks > 1;
    for (const auto& e : plan.edits)
      if (e.block < n_blocks - 1) non_final = true;
    if (non_final)
      throw CapabilityError(
          "replay cannot propagate edits below the final block; downstream "
          "activations would be stale");
  }

  // Blocks needing SAE passes: edited ones, or all when substituting.
  std::vector<bool> needs_sae(static_cast<std::size_t>(n_blocks), false);
  for (const auto& e : plan.edits) needs_sae[static_cast<std::size_t>(e.block)] = true;
  if (plan.substitute_reconstruction) needs_sae.assign(needs_sae.size(), true);
  for (int b = 0; b < n_blocks; ++b)
    if (needs_sae[static_cast<std::size_t>(b)] && !saes.count(b))
      throw ConfigError("no SAE provided for intervened block " + std::to_string(b));

  BlockEditFn fn;
  if (!plan.edits.empty() || plan.substitute_reconstruction) {
    fn = [&](int block, Eigen::Index, const Eigen::VectorXd& h) -> Eigen::VectorXd {
      if (!needs_sae[static_cast<std::size_t>(block)]) return h;
      auto edits = plan.edits_for_block(block);
      return apply_edits(saes.at(block), h, edits, plan.substitute_reconstruction);
    };
  }

  InterventionRun run;
  run.plan = plan;
  run.output = source.run(fn);
  return run;
}

const char* to_string(EffectMetric m) {
  switch (m) {
    case EffectMetric::nll_vs_model: return "nll_vs_model";
    case EffectMetric::action_accuracy: return "action_accuracy";
    case EffectMetric::next_state_accuracy: return "next_state_accuracy";
    case EffectMetric::downstream_max_corr: return "downstream_max_corr";
  }
  return "?";
}

Eigen::VectorXd accuracy_series(const Eigen::MatrixXd& logits,
                                const std::vector<int>& targets) {
  if (static_cast<std::size_t>(logits.rows()) != targets.size())
    throw ConfigError("accuracy_series: logs are misaligned");
  Eigen::VectorXd out(logits.rows());
  for (Eigen::Index t = 0; t < logits.rows(); ++t) {
    int best = 0;
    logits.row(t).maxCoeff(&best);
    out(t) = best == targets[static_cast<std::size_t>(t)] ? 1.0 : 0.0;
  }
  return out;
}

Eigen::VectorXd nll_series(const Eigen::MatrixXd& logits,
                           const std::vector<int>& targets) {
  if (static_cast<std::size_t>(logits.rows()) != targets.size())
    throw ConfigError("nll_series: logs are misaligned");
  Eigen::VectorXd out(logits.rows());
  for (Eigen::Index t = 0; t < logits.rows(); ++t) {
    Eigen::VectorXd p = softmax(logits.row(t).transpose(), 1.0);
    out(t) = -std::log(p(targets[static_cast<std::size_t>(t)]));
  }
  return out;
}

EffectEntry measure_effect_series(EffectMetric metric,
                                  const Eigen::VectorXd& baseline_series,
                                  const Eigen::VectorXd& intervened_series,
                                  int n_permutations, std::uint64_t seed) {
  if (baseline_series.size() != intervened_series.size())
    throw ConfigError("measure_effect: logs are misaligned");
  const Eigen::Index n = baseline_series.size();
  if (n < 1) throw ConfigError("measure_effect: empty series");

  EffectEntry e;
  e.metric = to_string(metric);
  e.baseline = baseline_series.mean();
  e.intervened = intervened_series.mean();
  e.delta = e.intervened - e.baseline;

  // Paired sign-flip null: under no effect the two logs are exchangeable
  // per step.
  Rng rng(seed);
  std::vector<double> null(static_cast<std::size_t>(n_permutations));
  for (int p = 0; p < n_permutations; ++p) {
    double acc = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) {
      double diff = intervened_series(t) - baseline_series(t);
      acc += rng.uniform() < 0.5 ? diff : -diff;
    }
    null[static_cast<std::size_t>(p)] = acc / static_cast<double>(n);
  }
  std::sort(null.begin(), null.end());
  auto quantile = [&](double q) {
    double idx = q * (null.size() - 1);
    std::size_t lo = static_cast<std::size_t>(idx);
    std::size_t hi = std::min(lo + 1, null.size() - 1);
    return null[lo] + (null[hi] - null[lo]) * (idx - lo);
  };
  e.null_lo = quantile(0.025);
  e.null_hi = quantile(0.975);
  e.outside_null = e.delta < e.null_lo || e.delta > e.null_hi;
  return e;
}

ReportTable effect_report(const std::vector<EffectEntry>& entries) {
  ReportTable table("intervention_effects",
                    {{"metric", ColumnKind::text},
                     {"baseline", ColumnKind::real},
                     {"intervened", ColumnKind::real},
                     {"delta", ColumnKind::real},
                     {"null_lo", ColumnKind::real},
                     {"null_hi", ColumnKind::real},
                     {"outside_null", ColumnKind::integer}});
  for (const auto& e : entries)
    table.add_row({e.metric, e.baseline, e.intervened, e.delta, e.null_lo,
                   e.null_hi, static_cast<std::int64_t>(e.outside_null ? 1 : 0)});
  return table;
}

}  // namespace tdprobe
