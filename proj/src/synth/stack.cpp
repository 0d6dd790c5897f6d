#include "tdprobe/synth/stack.hpp"

#include <cmath>

#include "tdprobe/errors.hpp"
#include "tdprobe/rng.hpp"
#include "tdprobe/synth/generator.hpp"

namespace tdprobe {

namespace {

Eigen::VectorXd apply_nonlin(Nonlinearity f, const Eigen::VectorXd& x) {
  switch (f) {
    case Nonlinearity::identity: return x;
    case Nonlinearity::relu: return x.array().max(0.0).matrix();
    case Nonlinearity::tanh_fn: return x.array().tanh().matrix();
  }
  return x;
}

}  // namespace

SyntheticStack::SyntheticStack(Eigen::MatrixXd inputs,
                               std::vector<StackBlock> blocks,
                               Eigen::MatrixXd readout_w,
                               Eigen::VectorXd readout_b)
    : inputs_(std::move(inputs)),
      blocks_(std::move(blocks)),
      readout_w_(std::move(readout_w)),
      readout_b_(std::move(readout_b)) {
  if (blocks_.empty()) throw ConfigError("stack needs at least one block");
  const Eigen::Index d = inputs_.cols();
  for (const auto& b : blocks_) {
    if (b.weight.rows() != d || b.weight.cols() != d || b.bias.size() != d)
      throw ConfigError("stack block dims disagree with the input dim");
    for (const auto& inj : b.injections) {
      if (inj.atom.size() != d)
        throw ConfigError("injection atom dim disagrees with the input dim");
      if (inj.trace.size() != inputs_.rows())
        throw ConfigError("injection trace length disagrees with n_steps");
    }
  }
  if (readout_w_.size() > 0 && readout_w_.cols() != d)
    throw ConfigError("readout dims disagree with the input dim");
}

SourceRunOutput SyntheticStack::run(const BlockEditFn& edit) {
  SourceRunOutput out;
  const Eigen::Index n = n_steps();
  const Eigen::Index d = inputs_.cols();
  out.block_activations.assign(static_cast<std::size_t>(n_blocks()),
                               Eigen::MatrixXd(n, d));
  if (readout_w_.size() > 0) out.logits.resize(n, readout_w_.rows());

  for (Eigen::Index t = 0; t < n; ++t) {
    Eigen::VectorXd x = inputs_.row(t).transpose();
    for (int b = 0; b < n_blocks(); ++b) {
      const StackBlock& blk = blocks_[static_cast<std::size_t>(b)];
      x = apply_nonlin(blk.nonlin, blk.weight * x + blk.bias);
      for (const auto& inj : blk.injections) x += inj.trace(t) * inj.atom;
      if (edit) x = edit(b, t, x);
      out.block_activations[static_cast<std::size_t>(b)].row(t) = x.transpose();
    }
    if (readout_w_.size() > 0)
      out.logits.row(t) = (readout_w_ * x + readout_b_).transpose();
  }
  return out;
}

SyntheticStack build_synthetic_stack(const SyntheticStackSpec& spec,
                                     Eigen::Index n_steps,
                                     const std::vector<PlannedInjection>& injections) {
  if (spec.dim < 1 || spec.n_blocks < 1)
    throw ConfigError("stack spec needs positive dim and block count");
  Rng rng(spec.seed);

  Eigen::MatrixXd inputs(n_steps, spec.dim);
  for (Eigen::Index t = 0; t < n_steps; ++t)
    for (int i = 0; i < spec.dim; ++i)
      inputs(t, i) = rng.normal(0.0, spec.input_noise_std);

  std::vector<StackBlock> blocks(static_cast<std::size_t>(spec.n_blocks));
  for (auto& blk : blocks) {
    if (spec.mix_strength <= 0.0) {
      blk.weight = Eigen::MatrixXd::Identity(spec.dim, spec.dim);
    } else {
      Eigen::MatrixXd r(spec.dim, spec.dim);
      for (int i = 0; i < spec.dim; ++i)
        for (int j = 0; j < spec.dim; ++j) r(i, j) = rng.normal();
      blk.weight =
          (1.0 - spec.mix_strength) * Eigen::MatrixXd::Identity(spec.dim, spec.dim) +
          spec.mix_strength / std::sqrt(static_cast<double>(spec.dim)) * r;
    }
    blk.bias = Eigen::VectorXd::Zero(spec.dim);
    blk.nonlin = spec.nonlin;
  }

  for (const auto& inj : injections) {
    if (inj.block < 0 || inj.block >= spec.n_blocks)
      throw ConfigError("injection block out of range");
    StackInjection si;
    Eigen::VectorXd atom(spec.dim);
    for (int i = 0; i < spec.dim; ++i) atom(i) = rng.normal();
    si.atom = atom / atom.norm();
    si.trace = standardize(inj.trace);
    blocks[static_cast<std::size_t>(inj.block)].injections.push_back(std::move(si));
  }

  Eigen::MatrixXd readout_w(spec.n_outputs, spec.dim);
  for (int i = 0; i < spec.n_outputs; ++i)
    for (int j = 0; j < spec.dim; ++j) readout_w(i, j) = rng.normal();
  readout_w /= std::sqrt(static_cast<double>(spec.dim));
  Eigen::VectorXd readout_b = Eigen::VectorXd::Zero(spec.n_outputs);

  return SyntheticStack(std::move(inputs), std::move(blocks),
                        std::move(readout_w), std::move(readout_b));
}

}  // namespace tdprobe
