#ifndef TDPROBE_SYNTH_STACK_HPP
#define TDPROBE_SYNTH_STACK_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "tdprobe/interventions/source.hpp"

namespace tdprobe {

enum class Nonlinearity { identity, relu, tanh_fn };

struct StackInjection {
  Eigen::VectorXd atom;   // unit direction the signal is mixed along
  Eigen::VectorXd trace;  // standardized per-step coefficients
};

struct StackBlock {
  Eigen::MatrixXd weight;  // d x d
  Eigen::VectorXd bias;
  Nonlinearity nonlin = Nonlinearity::identity;
  std::vector<StackInjection> injections;
};

// Deterministic multi-block representation source with known signal content:
// block b = nonlin(affine_b(block b-1)) + injections_b(t). Supports
// substitution of any block's vector before downstream blocks are computed,
// which is what makes desk-scale causal experiments possible.
class SyntheticStack : public RepresentationSource {
 public:
  SyntheticStack(Eigen::MatrixXd inputs, std::vector<StackBlock> blocks,
                 Eigen::MatrixXd readout_w, Eigen::VectorXd readout_b);

  int n_blocks() const override { return static_cast<int>(blocks_.size()); }
  Eigen::Index n_steps() const override { return inputs_.rows(); }
  bool supports_propagation() const override { return true; }
  SourceRunOutput run(const BlockEditFn& edit) override;

  int dim() const { return static_cast<int>(inputs_.cols()); }

 private:
  Eigen::MatrixXd inputs_;  // n_steps x d
  std::vector<StackBlock> blocks_;
  Eigen::MatrixXd readout_w_;  // n_outputs x d
  Eigen::VectorXd readout_b_;
};

struct SyntheticStackSpec {
  int dim = 32;
  int n_blocks = 4;
  Nonlinearity nonlin = Nonlinearity::identity;
  // 0 keeps identity affines; otherwise blocks mix with a random rotation-ish
  // map (1 - s) * I + s * R / sqrt(d).
  double mix_strength = 0.0;
  int n_outputs = 4;
  double input_noise_std = 1.0;
  std::uint64_t seed = 0;
};

struct PlannedInjection {
  int block = 0;
  Eigen::VectorXd trace;  // standardized internally
};

// Seeded builder: random inputs, per-block affines, unit injection atoms and
// a random readout.
SyntheticStack build_synthetic_stack(const SyntheticStackSpec& spec,
                                     Eigen::Index n_steps,
                                     const std::vector<PlannedInjection>& injections);

}  // namespace tdprobe

#endif
