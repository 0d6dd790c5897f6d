#include "tdprobe/sae/train.hpp"

#include <cmath>

#include "tdprobe/errors.hpp"
#include "tdprobe/rng.hpp"

namespace tdprobe {

SAELossParts sae_loss(const SAEModel& m, const Eigen::MatrixXd& batch,
                      double beta, bool l1_unsquared) {
  SAEGradients unused;
  return sae_loss_grad(m, batch, beta, l1_unsquared, unused);
}

SAELossParts sae_loss_grad(const SAEModel& m, const Eigen::MatrixXd& batch,
                           double beta, bool l1_unsquared, SAEGradients& grad) {
  const Eigen::Index n = batch.rows();
  if (n < 1) throw ConfigError("sae_loss: empty batch");
  if (batch.cols() != m.input_dim())
    throw ConfigError("sae_loss: batch dim mismatch");

  Eigen::MatrixXd z = batch * m.w_enc.transpose();
  z.rowwise() += m.b_enc.transpose();
  Eigen::MatrixXd a = z.array().max(0.0).matrix();
  Eigen::MatrixXd recon = a * m.w_dec.transpose();
  recon.rowwise() += m.b_dec.transpose();
  Eigen::MatrixXd r = recon - batch;

  if (!a.allFinite() || !r.allFinite())
    throw NumericalError("sae_loss: non-finite activations");

  const double inv_n = 1.0 / static_cast<double>(n);
  Eigen::VectorXd row_l1 = a.rowwise().sum();  // a >= 0, so sum == L1 norm

  SAELossParts parts;
  parts.recon = r.squaredNorm() * inv_n;
  parts.sparsity = l1_unsquared ? row_l1.sum() * inv_n
                                : row_l1.squaredNorm() * inv_n;
  parts.total = parts.recon + beta * parts.sparsity;

  // Backward pass.
  Eigen::MatrixXd d_recon = 2.0 * inv_n * r;      // dL/d h~
  grad.b_dec = d_recon.colwise().sum().transpose();
  grad.w_dec = d_recon.transpose() * a;           // d x m

  Eigen::MatrixXd d_a = d_recon * m.w_dec;        // n x m
  if (l1_unsquared) {
    d_a.array() += beta * inv_n;
  } else {
    // d/da_ij of (sum_j a_ij)^2 is 2 * row sum.
    d_a += (2.0 * beta * inv_n) * row_l1 * Eigen::RowVectorXd::Ones(a.cols());
  }
  Eigen::MatrixXd d_z =
      (z.array() > 0.0).select(d_a, Eigen::MatrixXd::Zero(n, a.cols()));
  grad.b_enc = d_z.colwise().sum().transpose();
  grad.w_enc = d_z.transpose() * batch;           // m x d
  return parts;
}

SAEModel init_sae(int input_dim, int latent_dim, std::uint64_t seed) {
  if (input_dim < 1 || latent_dim < 1)
    throw ConfigError("SAE dims must be positive");
  Rng rng(seed);
  SAEModel m;
  m.w_dec.resize(input_dim, latent_dim);
  for (int j = 0; j < latent_dim; ++j) {
    Eigen::VectorXd col(input_dim);
    for (int i = 0; i < input_dim; ++i) col(i) = rng.normal();
    m.w_dec.col(j) = col / col.norm();
  }
  m.w_enc = m.w_dec.transpose();
  m.b_enc = Eigen::VectorXd::Zero(latent_dim);
  m.b_dec = Eigen::VectorXd::Zero(input_dim);
  m.scale = ScalingTransform{1.0, input_dim};
  return m;
}

namespace {

// Per-parameter Adam state.
struct AdamState {
  Eigen::MatrixXd m_w_enc, v_w_enc, m_w_dec, v_w_dec;
  Eigen::VectorXd m_b_enc, v_b_enc, m_b_dec, v_b_dec;
  std::int64_t t = 0;

  explicit AdamState(const SAEModel& model) {
    m_w_enc = Eigen::MatrixXd::Zero(model.w_enc.rows(), model.w_enc.cols());
    v_w_enc = m_w_enc;
    m_w_dec = Eigen::MatrixXd::Zero(model.w_dec.rows(), model.w_dec.cols());
    v_w_dec = m_w_dec;
    m_b_enc = Eigen::VectorXd::Zero(model.b_enc.size());
    v_b_enc = m_b_enc;
    m_b_dec = Eigen::VectorXd::Zero(model.b_dec.size());
    v_b_dec = m_b_dec;
  }

  template <typename T>
  void update_one(T& param, const T& g, T& m1, T& v1, double lr,
                  const AdamParams& p, double bc1, double bc2) {
    m1 = p.beta1 * m1 + (1.0 - p.beta1) * g;
    v1 = p.beta2 * v1 + (1.0 - p.beta2) * g.cwiseProduct(g);
    param.array() -=
        lr * (m1.array() / bc1) / ((v1.array() / bc2).sqrt() + p.eps);
  }

  void step(SAEModel& model, const SAEGradients& g, double lr,
            const AdamParams& p) {
    ++t;
    double bc1 = 1.0 - std::pow(p.beta1, static_cast<double>(t));
    double bc2 = 1.0 - std::pow(p.beta2, static_cast<double>(t));
    update_one(model.w_enc, g.w_enc, m_w_enc, v_w_enc, lr, p, bc1, bc2);
    update_one(model.b_enc, g.b_enc, m_b_enc, v_b_enc, lr, p, bc1, bc2);
    update_one(model.w_dec, g.w_dec, m_w_dec, v_w_dec, lr, p, bc1, bc2);
    update_one(model.b_dec, g.b_dec, m_b_dec, v_b_dec, lr, p, bc1, bc2);
  }
};

}  // namespace

SAETrainResult train_sae(const Eigen::MatrixXd& h_raw, const SAETrainConfig& cfg) {
  if (cfg.batch < 1 || cfg.epochs < 1)
    throw ConfigError("SAE training needs batch >= 1 and epochs >= 1");
  if (!h_raw.allFinite())
    throw NumericalError("SAE training input contains NaN/Inf");

  const int d = static_cast<int>(h_raw.cols());
  const int m = cfg.latent_dim > 0 ? cfg.latent_dim
                                   : default_latent_dim(cfg.task, d);

  ScalingTransform scale = fit_scaling(h_raw);
  Eigen::MatrixXd h = scale.apply(h_raw);

  SAETrainResult out;
  out.model = init_sae(d, m, cfg.seed);
  out.model.scale = scale;

  Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<int> order(static_cast<std::size_t>(h.rows()));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

  AdamState adam(out.model);
  SAEModel checkpoint = out.model;
  SAEGradients grad;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.shuffle) rng.shuffle(order);

    double epoch_sum = 0.0;
    std::int64_t epoch_batches = 0;
    bool bad = false;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch) {
      std::size_t len = std::min<std::size_t>(cfg.batch, order.size() - start);
      Eigen::MatrixXd batch(static_cast<Eigen::Index>(len), d);
      for (std::size_t i = 0; i < len; ++i)
        batch.row(static_cast<Eigen::Index>(i)) = h.row(order[start + i]);

      SAELossParts parts;
      try {
        parts = sae_loss_grad(out.model, batch, cfg.beta, cfg.l1_unsquared, grad);
      } catch (const NumericalError&) {
        bad = true;
        break;
      }
      if (!std::isfinite(parts.total)) {
        bad = true;
        break;
      }
      adam.step(out.model, grad, cfg.lr, cfg.adam);
      epoch_sum += parts.total;
      ++epoch_batches;
    }

    if (bad) {
      if (epoch == 0)
        throw NumericalError("SAE training diverged in the first epoch");
      out.model = checkpoint;
      out.diverged = true;
      return out;
    }
    out.epoch_loss.push_back(epoch_sum / static_cast<double>(epoch_batches));
    checkpoint = out.model;
  }
  return out;
}

int l0_profile(const SAEModel& m, const Eigen::MatrixXd& h_raw) {
  if (h_raw.rows() < 1) return 0;
  Eigen::MatrixXd a = latents_for(m, h_raw);
  Eigen::RowVectorXd mean = a.colwise().mean();
  int count = 0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    double var = (a.col(j).array() - mean(j)).square().mean();
    if (var > 1e-12) ++count;
  }
  return count;
}

}  // namespace tdprobe
