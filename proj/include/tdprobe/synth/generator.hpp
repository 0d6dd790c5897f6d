#ifndef TDPROBE_SYNTH_GENERATOR_HPP
#define TDPROBE_SYNTH_GENERATOR_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "tdprobe/agents/signal_trace.hpp"

namespace tdprobe {

// Planted-feature activation generator. Each planted signal is standardized
// and mixed along a dedicated dictionary atom; distractor atoms fire sparsely
// with half-normal coefficients; isotropic Gaussian noise on top.
struct PlantSpec {
  int dim = 256;
  int n_atoms = 512;
  double distractor_sparsity = 5.0;  // mean active distractors per step
  double noise_std = 0.1;
  double max_planted_cos = 0.3;  // pairwise between planted atoms
  std::uint64_t seed = 0;
  // Required when no signals are planted (negative-control datasets);
  // otherwise derived from the signal length.
  Eigen::Index n_steps = 0;
};

struct SynthResult {
  Eigen::MatrixXd activations;   // n_steps x dim
  Eigen::MatrixXd coefficients;  // n_steps x n_atoms, the exact oracle
  Eigen::MatrixXd dictionary;    // n_atoms x dim, unit rows
  std::vector<int> planted_atoms;  // atom index per planted signal
};

// Scalar signal columns to plant; all must share the activation length.
SynthResult generate(const PlantSpec& spec,
                     const std::vector<Eigen::VectorXd>& signals);

inline SynthResult generate(const PlantSpec& spec,
                            const std::vector<SignalTrace>& signals) {
  std::vector<Eigen::VectorXd> cols;
  for (const auto& s : signals) cols.push_back(s.column(0));
  return generate(spec, cols);
}

// (x - mean) / std over the vector; throws on zero variance.
Eigen::VectorXd standardize(const Eigen::VectorXd& x);

}  // namespace tdprobe

#endif
