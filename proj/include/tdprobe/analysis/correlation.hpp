#ifndef TDPROBE_ANALYSIS_CORRELATION_HPP
#define TDPROBE_ANALYSIS_CORRELATION_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

namespace tdprobe {

// Pearson r. Undefined (nullopt) when either variance is below 1e-12 --
// deliberately distinct from 0.
std::optional<double> pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Column indices with variance above the zero-variance cutoff; the latent
// pool every correlation protocol draws from.
std::vector<int> nonzero_variance_columns(const Eigen::MatrixXd& m);

enum class CorrSign { absolute, signed_r };

struct MaxCorrResult {
  // best |r| (or signed r) per signal column, for one run
  std::vector<double> per_column;
  // index of the best latent per signal column
  std::vector<int> best_latent;
  double mean = 0.0;  // mean over signal columns
};

// For each signal column, the best correlation over all non-zero-variance
// latents. Throws when no latent qualifies.
MaxCorrResult max_corr(const Eigen::MatrixXd& latents,
                       const Eigen::MatrixXd& signal,
                       CorrSign sign = CorrSign::absolute);

// The multi-run protocol: per run take the per-column max over latents, then
// the mean over columns, then the mean over runs.
double max_corr_protocol(const std::vector<Eigen::MatrixXd>& latents_per_run,
                         const std::vector<Eigen::MatrixXd>& signal_per_run,
                         CorrSign sign = CorrSign::absolute);

struct PermutationBand {
  double q95 = 0.0;
  double q99 = 0.0;
  std::vector<double> samples;
};

// Null distribution of the max-correlation statistic under row shuffling of
// the signal (one shared permutation across signal columns per draw).
PermutationBand max_corr_null(const Eigen::MatrixXd& latents,
                              const Eigen::MatrixXd& signal, int n_permutations,
                              std::uint64_t seed,
                              CorrSign sign = CorrSign::absolute);

// Discrete Gaussian smoothing over the block index, kernel renormalized at
// the boundaries. sigma = 0 is the identity.
std::vector<double> smooth_blocks(const std::vector<double>& values,
                                  double sigma = 0.5);

}  // namespace tdprobe

#endif
