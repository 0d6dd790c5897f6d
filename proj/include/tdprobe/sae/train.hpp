#ifndef TDPROBE_SAE_TRAIN_HPP
#define TDPROBE_SAE_TRAIN_HPP

#include <cstdint>
#include <vector>

#include "tdprobe/sae/model.hpp"

namespace tdprobe {

struct AdamParams {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct SAETrainConfig {
  double beta = 1e-5;  // sparsity weight
  double lr = 1e-4;
  int batch = 256;
  int epochs = 30;
  std::uint64_t seed = 0;
  AdamParams adam;
  bool shuffle = true;
  int latent_dim = 0;  // 0: use default_latent_dim for the task
  Task task = Task::two_step;
  // The printed objective squares the L1 term; this flag switches to the
  // conventional plain L1 penalty for sensitivity checks.
  bool l1_unsquared = false;
};

struct SAELossParts {
  double total = 0.0;
  double recon = 0.0;     // mean per-sample squared reconstruction error
  double sparsity = 0.0;  // mean per-sample (sum a)^2, or sum a if unsquared
};

// Loss over a batch (rows = samples), in the model's input space:
// mean_i ||h_i - h~_i||^2 + beta * mean_i (sum_j a_ij)^2.
// total == recon + beta * sparsity exactly.
SAELossParts sae_loss(const SAEModel& m, const Eigen::MatrixXd& batch,
                      double beta, bool l1_unsquared = false);

struct SAEGradients {
  Eigen::MatrixXd w_enc;
  Eigen::VectorXd b_enc;
  Eigen::MatrixXd w_dec;
  Eigen::VectorXd b_dec;
};

// Loss plus analytic gradients for every parameter.
SAELossParts sae_loss_grad(const SAEModel& m, const Eigen::MatrixXd& batch,
                           double beta, bool l1_unsquared, SAEGradients& grad);

struct SAETrainResult {
  SAEModel model;
  std::vector<double> epoch_loss;
  bool diverged = false;  // training stopped early; model is the last good epoch
};

// Fits the scaling transform on h_raw, then trains with Adam on shuffled
// minibatches. Deterministic given the seed. On divergence (non-finite loss)
// the last epoch-end checkpoint is returned with diverged = true; divergence
// in the first epoch throws NumericalError.
SAETrainResult train_sae(const Eigen::MatrixXd& h_raw, const SAETrainConfig& cfg);

// Random unit-norm decoder columns, encoder as the decoder transpose, zero
// biases.
SAEModel init_sae(int input_dim, int latent_dim, std::uint64_t seed);

// Number of latents whose activation variance over the dataset exceeds 1e-12.
int l0_profile(const SAEModel& m, const Eigen::MatrixXd& h_raw);

}  // namespace tdprobe

#endif
