#include "tdprobe/analysis/correlation.hpp"

#include <algorithm>
#include <cmath>

#include "tdprobe/errors.hpp"
#include "tdprobe/rng.hpp"

namespace tdprobe {

std::optional<double> pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size())
    throw ConfigError("pearson: length mismatch");
  if (x.size() < 3) throw ConfigError("pearson: need at least 3 samples");
  const double n = static_cast<double>(x.size());
  double mx = x.mean(), my = y.mean();
  Eigen::ArrayXd dx = x.array() - mx;
  Eigen::ArrayXd dy = y.array() - my;
  double vx = dx.square().sum() / n;
  double vy = dy.square().sum() / n;
  if (vx < 1e-12 || vy < 1e-12) return std::nullopt;
  return (dx * dy).sum() / n / std::sqrt(vx * vy);
}

std::vector<int> nonzero_variance_columns(const Eigen::MatrixXd& m) {
  std::vector<int> cols;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    double mean = m.col(j).mean();
    double var = (m.col(j).array() - mean).square().mean();
    if (var >= 1e-12) cols.push_back(static_cast<int>(j));
  }
  return cols;
}

namespace {

double oriented(double r, CorrSign sign) {
  return sign == CorrSign::absolute ? std::abs(r) : r;
}

MaxCorrResult max_corr_over(const Eigen::MatrixXd& latents,
                            const std::vector<int>& pool,
                            const Eigen::MatrixXd& signal, CorrSign sign) {
  MaxCorrResult out;
  out.per_column.resize(signal.cols());
  out.best_latent.assign(signal.cols(), -1);

  double sum = 0.0;
  int counted = 0;
  for (Eigen::Index c = 0; c < signal.cols(); ++c) {
    double best = -std::numeric_limits<double>::infinity();
    int best_idx = -1;
    Eigen::VectorXd s = signal.col(c);
    for (int j : pool) {
      auto r = pearson(latents.col(j), s);
      if (!r) continue;  // undefined correlations are excluded, not zeroed
      double v = oriented(*r, sign);
      if (v > best) {
        best = v;
        best_idx = j;
      }
    }
    out.per_column[c] = best_idx < 0 ? std::numeric_limits<double>::quiet_NaN()
                                     : best;
    out.best_latent[c] = best_idx;
    if (best_idx >= 0) {
      sum += best;
      ++counted;
    }
  }
  if (counted == 0)
    throw NumericalError("max_corr: no defined correlations (constant inputs)");
  out.mean = sum / counted;
  return out;
}

}  // namespace

MaxCorrResult max_corr(const Eigen::MatrixXd& latents,
                       const Eigen::MatrixXd& signal, CorrSign sign) {
  if (latents.rows() != signal.rows())
    throw ConfigError("max_corr: step counts are not aligned");
  std::vector<int> pool = nonzero_variance_columns(latents);
  if (pool.empty())
    throw NumericalError("max_corr: every latent has zero variance");
  return max_corr_over(latents, pool, signal, sign);
}

double max_corr_protocol(const std::vector<Eigen::MatrixXd>& latents_per_run,
                         const std::vector<Eigen::MatrixXd>& signal_per_run,
                         CorrSign sign) {
  if (latents_per_run.size() != signal_per_run.size() || latents_per_run.empty())
    throw ConfigError("max_corr_protocol: run lists are not aligned");
  double sum = 0.0;
  for (std::size_t r = 0; r < latents_per_run.size(); ++r)
    sum += max_corr(latents_per_run[r], signal_per_run[r], sign).mean;
  return sum / static_cast<double>(latents_per_run.size());
}

PermutationBand max_corr_null(const Eigen::MatrixXd& latents,
                              const Eigen::MatrixXd& signal, int n_permutations,
                              std::uint64_t seed, CorrSign sign) {
  if (latents.rows() != signal.rows())
    throw ConfigError("max_corr_null: step counts are not aligned");
  if (n_permutations < 1)
    throw ConfigError("max_corr_null: need at least one permutation");

  std::vector<int> pool = nonzero_variance_columns(latents);
  if (pool.empty())
    throw NumericalError("max_corr_null: every latent has zero variance");

  Rng rng(seed);
  const Eigen::Index n = signal.rows();
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = static_cast<int>(i);

  PermutationBand band;
  band.samples.reserve(n_permutations);
  Eigen::MatrixXd shuffled(n, signal.cols());
  for (int p = 0; p < n_permutations; ++p) {
    rng.shuffle(perm);
    for (Eigen::Index i = 0; i < n; ++i)
      shuffled.row(i) = signal.row(perm[static_cast<std::size_t>(i)]);
    // Statistic pooled over columns: the largest correlation anywhere.
    MaxCorrResult r = max_corr_over(latents, pool, shuffled, sign);
    double stat = -std::numeric_limits<double>::infinity();
    for (double v : r.per_column)
      if (std::isfinite(v)) stat = std::max(stat, v);
    band.samples.push_back(stat);
  }
  std::sort(band.samples.begin(), band.samples.end());
  auto quantile = [&](double q) {
    double idx = q * (band.samples.size() - 1);
    std::size_t lo = static_cast<std::size_t>(idx);
    std::size_t hi = std::min(lo + 1, band.samples.size() - 1);
    double frac = idx - static_cast<double>(lo);
    return band.samples[lo] * (1.0 - frac) + band.samples[hi] * frac;
  };
  band.q95 = quantile(0.95);
  band.q99 = quantile(0.99);
  return band;
}

std::vector<double> smooth_blocks(const std::vector<double>& values,
                                  double sigma) {
  if (values.empty()) throw ConfigError("smooth_blocks: empty input");
  if (sigma <= 0.0) return values;

  const int n = static_cast<int>(values.size());
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> out(values.size());
  for (int i = 0; i < n; ++i) {
    double acc = 0.0, norm = 0.0;
    for (int j = std::max(0, i - radius); j <= std::min(n - 1, i + radius); ++j) {
      double d = static_cast<double>(j - i);
      double w = std::exp(-d * d / (2.0 * sigma * sigma));
      acc += w * values[static_cast<std::size_t>(j)];
      norm += w;
    }
    out[static_cast<std::size_t>(i)] = acc / norm;
  }
  return out;
}

}  // namespace tdprobe
