#ifndef TDPROBE_INTERVENTIONS_PLAN_HPP
#define TDPROBE_INTERVENTIONS_PLAN_HPP

#include <Eigen/Dense>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "tdprobe/sae/model.hpp"

namespace tdprobe {

enum class EditAction { lesion, clamp, none };

struct LatentEdit {
  int block = 0;
  int latent = 0;
  EditAction action = EditAction::lesion;
  double value = 0.0;  // clamp target
};

// Set of latent-space edits applied during replay or synthetic forward
// passes. At most one edit per (block, latent); clamp values must be finite.
struct InterventionPlan {
  std::vector<LatentEdit> edits;
  bool substitute_reconstruction = false;

  std::vector<LatentEdit> edits_for_block(int block) const;
  bool touches_block(int block) const;
  void validate() const;
};

InterventionPlan plan_from_json(const std::string& json_text);
std::string plan_to_json(const InterventionPlan& plan);
InterventionPlan load_plan(const std::filesystem::path& path);
void save_plan(const std::filesystem::path& path, const InterventionPlan& plan);

// Runs h through the SAE in scaled space, applies the edits to the latent
// code, and decodes back through the inverse scaling. With no effective edit
// and substitute = false, h is returned unchanged.
Eigen::VectorXd apply_edits(const SAEModel& model, const Eigen::VectorXd& h,
                            std::span<const LatentEdit> edits, bool substitute);

inline Eigen::VectorXd apply_edit(const SAEModel& model, const Eigen::VectorXd& h,
                                  const LatentEdit& edit,
                                  bool substitute = false) {
  return apply_edits(model, h, {&edit, 1}, substitute);
}

}  // namespace tdprobe

#endif
