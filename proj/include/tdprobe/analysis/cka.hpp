#ifndef TDPROBE_ANALYSIS_CKA_HPP
#define TDPROBE_ANALYSIS_CKA_HPP

#include <Eigen/Dense>

namespace tdprobe {

// Linear centered kernel alignment:
//   ||Y^T X||_F^2 / (||X^T X||_F ||Y^T Y||_F)
// computed after column-centering both inputs (disable with center = false to
// reproduce the raw uncentered formula). Bounded in [0, 1]; invariant to
// orthogonal transforms and nonzero rescaling of either argument.
double cka(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
           bool center = true);

}  // namespace tdprobe

#endif
