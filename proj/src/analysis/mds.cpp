#include "tdprobe/analysis/mds.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "tdprobe/errors.hpp"
#include "tdprobe/rng.hpp"

namespace tdprobe {

Eigen::MatrixXd cosine_dissimilarity(const Eigen::MatrixXd& rows) {
  const Eigen::Index n = rows.rows();
  Eigen::VectorXd norms = rows.rowwise().norm();
  for (Eigen::Index i = 0; i < n; ++i)
    if (norms(i) <= 0.0)
      throw NumericalError("cosine_dissimilarity: zero row " + std::to_string(i));

  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double c = rows.row(i).dot(rows.row(j)) / (norms(i) * norms(j));
      d(i, j) = d(j, i) = 1.0 - c;
    }
  }
  return d;
}

namespace {

void validate_dissimilarity(const Eigen::MatrixXd& d) {
  if (d.rows() != d.cols()) throw ConfigError("mds: matrix must be square");
  if (d.rows() < 2) throw ConfigError("mds: need at least two points");
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    if (std::abs(d(i, i)) > 1e-12)
      throw ConfigError("mds: diagonal must be zero");
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      if (d(i, j) < 0.0) throw ConfigError("mds: dissimilarities must be >= 0");
      if (std::abs(d(i, j) - d(j, i)) > 1e-9)
        throw ConfigError("mds: matrix must be symmetric");
    }
  }
}

Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      d(i, j) = d(j, i) = (x.row(i) - x.row(j)).norm();
  return d;
}

}  // namespace

double mds_stress(const Eigen::MatrixXd& dissimilarity,
                  const Eigen::MatrixXd& coords) {
  Eigen::MatrixXd d = pairwise_distances(coords);
  double stress = 0.0;
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    for (Eigen::Index j = i + 1; j < d.cols(); ++j) {
      double e = dissimilarity(i, j) - d(i, j);
      stress += e * e;
    }
  return stress;
}

EmbeddingResult mds(const Eigen::MatrixXd& dissimilarity, int dims,
                    std::uint64_t seed) {
  validate_dissimilarity(dissimilarity);
  if (dims < 1) throw ConfigError("mds: dims must be >= 1");

  const Eigen::Index n = dissimilarity.rows();
  Rng rng(seed);

  // Random start scaled to the data's dissimilarity range.
  double scale = dissimilarity.maxCoeff();
  if (scale <= 0.0) scale = 1.0;
  Eigen::MatrixXd x(n, dims);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int k = 0; k < dims; ++k) x(i, k) = rng.uniform(-0.5, 0.5) * scale;

  EmbeddingResult out;
  double stress = mds_stress(dissimilarity, x);
  out.stress_history.push_back(stress);

  constexpr int kMaxIterations = 300;
  constexpr double kMinDecrease = 1e-9;
  for (int it = 0; it < kMaxIterations; ++it) {
    // Guttman transform: X <- (1/n) B(X) X.
    Eigen::MatrixXd dist = pairwise_distances(x);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double diag = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) continue;
        double v = dist(i, j) > 0.0 ? -dissimilarity(i, j) / dist(i, j) : 0.0;
        b(i, j) = v;
        diag -= v;
      }
      b(i, i) = diag;
    }
    x = (b * x) / static_cast<double>(n);

    double next = mds_stress(dissimilarity, x);
    out.stress_history.push_back(next);
    ++out.n_iterations;
    if (stress - next < kMinDecrease) {
      stress = next;
      break;
    }
    stress = next;
  }
  out.coords = x;
  out.stress = stress;
  return out;
}

Eigen::MatrixXd classical_mds(const Eigen::MatrixXd& dissimilarity, int dims) {
  validate_dissimilarity(dissimilarity);
  const Eigen::Index n = dissimilarity.rows();
  Eigen::MatrixXd d2 = dissimilarity.array().square();
  Eigen::MatrixXd j = Eigen::MatrixXd::Identity(n, n) -
                      Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  Eigen::MatrixXd b = -0.5 * j * d2 * j;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
  Eigen::MatrixXd coords(n, dims);
  // Eigenvalues come back ascending; take the top `dims`.
  for (int k = 0; k < dims; ++k) {
    Eigen::Index idx = n - 1 - k;
    double lambda = std::max(0.0, es.eigenvalues()(idx));
    coords.col(k) = es.eigenvectors().col(idx) * std::sqrt(lambda);
  }
  return coords;
}

}  // namespace tdprobe
