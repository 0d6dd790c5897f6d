#ifndef TDPROBE_ANALYSIS_MDS_HPP
#define TDPROBE_ANALYSIS_MDS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace tdprobe {

// D_ij = 1 - cos(x_i, x_j). Throws on zero rows.
Eigen::MatrixXd cosine_dissimilarity(const Eigen::MatrixXd& rows);

struct EmbeddingResult {
  Eigen::MatrixXd coords;  // n x dims
  double stress = 0.0;
  int n_iterations = 0;
  std::vector<double> stress_history;  // non-increasing by majorization
};

// Metric MDS by SMACOF stress majorization from a seeded random start.
// Stops when the stress decrease falls below 1e-9 or after 300 iterations.
EmbeddingResult mds(const Eigen::MatrixXd& dissimilarity, int dims = 2,
                    std::uint64_t seed = 0);

// Classical (Torgerson) scaling, kept as a cross-check rather than the
// default.
Eigen::MatrixXd classical_mds(const Eigen::MatrixXd& dissimilarity, int dims = 2);

double mds_stress(const Eigen::MatrixXd& dissimilarity,
                  const Eigen::MatrixXd& coords);

}  // namespace tdprobe

#endif
