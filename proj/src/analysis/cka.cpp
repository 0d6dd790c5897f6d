#include "tdprobe/analysis/cka.hpp"

#include "tdprobe/errors.hpp"

namespace tdprobe {

double cka(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, bool center) {
  if (x.rows() != y.rows())
    throw ConfigError("cka: row counts (samples) must match");
  if (x.rows() < 2) throw ConfigError("cka: need at least 2 samples");

  Eigen::MatrixXd xc = x;
  Eigen::MatrixXd yc = y;
  if (center) {
    xc.rowwise() -= x.colwise().mean();
    yc.rowwise() -= y.colwise().mean();
  }

  double xx = (xc.transpose() * xc).norm();
  double yy = (yc.transpose() * yc).norm();
  if (xx <= 0.0 || yy <= 0.0)
    throw NumericalError("cka: zero matrix after centering");

  double cross = (yc.transpose() * xc).squaredNorm();
  return cross / (xx * yy);
}

}  // namespace tdprobe
