#ifndef TDPROBE_SAE_MODEL_HPP
#define TDPROBE_SAE_MODEL_HPP

#include <Eigen/Dense>
#include <filesystem>

#include "tdprobe/store/trajectory.hpp"

namespace tdprobe {

// Input scaling fitted on the training matrix: H' = sqrt(d) * H / mean row
// norm. Invertible; substitution paths apply the inverse on the way back.
struct ScalingTransform {
  double mean_row_norm = 1.0;
  int dim = 1;

  double factor() const { return std::sqrt(static_cast<double>(dim)) / mean_row_norm; }

  Eigen::MatrixXd apply(const Eigen::MatrixXd& h) const { return h * factor(); }
  Eigen::MatrixXd inverse(const Eigen::MatrixXd& h) const { return h / factor(); }
  Eigen::VectorXd apply(const Eigen::VectorXd& h) const { return h * factor(); }
  Eigen::VectorXd inverse(const Eigen::VectorXd& h) const { return h / factor(); }
};

// After applying, the mean row L2 norm equals sqrt(d). Throws on all-zero
// input.
ScalingTransform fit_scaling(const Eigen::MatrixXd& h);

// Dense encoder, ReLU, dense decoder. Rows of the data matrices are samples.
struct SAEModel {
  Eigen::MatrixXd w_enc;  // m x d
  Eigen::VectorXd b_enc;  // m
  Eigen::MatrixXd w_dec;  // d x m
  Eigen::VectorXd b_dec;  // d
  ScalingTransform scale;

  int input_dim() const { return static_cast<int>(w_enc.cols()); }
  int latent_dim() const { return static_cast<int>(w_enc.rows()); }
};

// encode/decode operate in the model's (scaled) input space.
Eigen::VectorXd encode(const SAEModel& m, const Eigen::VectorXd& h);
Eigen::MatrixXd encode(const SAEModel& m, const Eigen::MatrixXd& h);
Eigen::VectorXd decode(const SAEModel& m, const Eigen::VectorXd& a);
Eigen::MatrixXd decode(const SAEModel& m, const Eigen::MatrixXd& a);
Eigen::VectorXd reconstruct(const SAEModel& m, const Eigen::VectorXd& h);
Eigen::MatrixXd reconstruct(const SAEModel& m, const Eigen::MatrixXd& h);

// Latent activations for raw (unscaled) data: encode(scale.apply(H)).
Eigen::MatrixXd latents_for(const SAEModel& m, const Eigen::MatrixXd& h_raw);

// Latent width rule: doubled for the two decision tasks, matched for the
// graph task.
int default_latent_dim(Task task, int input_dim);

// "SAEM" binary container: fixed prefix + JSON header + f64 weight payload.
void save_sae(const std::filesystem::path& path, const SAEModel& m);
SAEModel load_sae(const std::filesystem::path& path);

}  // namespace tdprobe

#endif
