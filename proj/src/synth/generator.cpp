#include "tdprobe/synth/generator.hpp"

#include <cmath>

#include "tdprobe/errors.hpp"
#include "tdprobe/rng.hpp"

namespace tdprobe {

Eigen::VectorXd standardize(const Eigen::VectorXd& x) {
  double mean = x.mean();
  double var = (x.array() - mean).square().mean();
  if (var < 1e-15)
    throw NumericalError("standardize: signal has zero variance");
  return (x.array() - mean).matrix() / std::sqrt(var);
}

SynthResult generate(const PlantSpec& spec,
                     const std::vector<Eigen::VectorXd>& signals) {
  const int k = static_cast<int>(signals.size());
  if (spec.n_atoms < k)
    throw ConfigError("generate: fewer atoms than planted signals");

  Eigen::Index n_steps = signals.empty() ? spec.n_steps : signals.front().size();
  for (const auto& s : signals)
    if (s.size() != n_steps)
      throw ConfigError("generate: planted signals differ in length");
  if (n_steps < 1)
    throw ConfigError("generate: need planted signals or an explicit n_steps");

  Rng rng(spec.seed);
  auto random_unit = [&]() {
    Eigen::VectorXd v(spec.dim);
    for (int i = 0; i < spec.dim; ++i) v(i) = rng.normal();
    return Eigen::VectorXd(v / v.norm());
  };

  SynthResult out;
  out.dictionary.resize(spec.n_atoms, spec.dim);
  // Planted atoms occupy the first k rows and are resampled until mutually
  // near-orthogonal.
  for (int j = 0; j < k; ++j) out.planted_atoms.push_back(j);
  for (int j = 0; j < spec.n_atoms; ++j) {
    for (int attempt = 0;; ++attempt) {
      Eigen::VectorXd atom = random_unit();
      bool ok = true;
      if (j < k) {
        for (int prev = 0; prev < j && ok; ++prev)
          if (std::abs(atom.dot(out.dictionary.row(prev).transpose())) >
              spec.max_planted_cos)
            ok = false;
      }
      if (ok) {
        out.dictionary.row(j) = atom.transpose();
        break;
      }
      if (attempt > 10000)
        throw NumericalError(
            "generate: cannot satisfy the planted near-orthogonality cap");
    }
  }

  out.coefficients = Eigen::MatrixXd::Zero(n_steps, spec.n_atoms);
  for (int j = 0; j < k; ++j)
    out.coefficients.col(j) = standardize(signals[static_cast<std::size_t>(j)]);

  const int n_distractors = spec.n_atoms - k;
  if (n_distractors > 0 && spec.distractor_sparsity > 0.0) {
    double p = std::min(1.0, spec.distractor_sparsity / n_distractors);
    for (Eigen::Index t = 0; t < n_steps; ++t)
      for (int j = k; j < spec.n_atoms; ++j)
        if (rng.uniform() < p) out.coefficients(t, j) = std::abs(rng.normal());
  }

  out.activations = out.coefficients * out.dictionary;
  if (spec.noise_std > 0.0)
    for (Eigen::Index t = 0; t < n_steps; ++t)
      for (int i = 0; i < spec.dim; ++i)
        out.activations(t, i) += rng.normal(0.0, spec.noise_std);
  return out;
}

}  // namespace tdprobe
