#include "tdprobe/interventions/plan.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tdprobe/errors.hpp"

namespace tdprobe {

using nlohmann::json;

namespace {

const char* action_name(EditAction a) {
  switch (a) {
    case EditAction::lesion: return "lesion";
    case EditAction::clamp: return "clamp";
    case EditAction::none: return "none";
  }
  return "?";
}

EditAction action_from(const std::string& s) {
  if (s == "lesion") return EditAction::lesion;
  if (s == "clamp") return EditAction::clamp;
  if (s == "none") return EditAction::none;
  throw ConfigError("unknown edit action '" + s + "'");
}

}  // namespace

std::vector<LatentEdit> InterventionPlan::edits_for_block(int block) const {
  std::vector<LatentEdit> out;
  for (const auto& e : edits)
    if (e.block == block) out.push_back(e);
  return out;
}

bool InterventionPlan::touches_block(int block) const {
  for (const auto& e : edits)
    if (e.block == block) return true;
  return false;
}

void InterventionPlan::validate() const {
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edits) {
    if (e.block < 0 || e.latent < 0)
      throw ConfigError("plan edit indices must be non-negative");
    if (e.action == EditAction::clamp && !std::isfinite(e.value))
      throw ConfigError("clamp value must be finite");
    if (!seen.insert({e.block, e.latent}).second)
      throw ConfigError("duplicate edit for block " + std::to_string(e.block) +
                        ", latent " + std::to_string(e.latent));
  }
}

InterventionPlan plan_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("intervention plan: ") + e.what());
  }
  InterventionPlan plan;
  plan.substitute_reconstruction = j.value("substitute_reconstruction", false);
  if (j.contains("edits")) {
    for (const auto& je : j["edits"]) {
      LatentEdit e;
      e.block = je.at("block").get<int>();
      e.latent = je.at("latent").get<int>();
      e.action = action_from(je.at("action").get<std::string>());
      if (e.action == EditAction::clamp) e.value = je.at("value").get<double>();
      plan.edits.push_back(e);
    }
  }
  plan.validate();
  return plan;
}

std::string plan_to_json(const InterventionPlan& plan) {
  json j;
  j["substitute_reconstruction"] = plan.substitute_reconstruction;
  j["edits"] = json::array();
  for (const auto& e : plan.edits) {
    json je;
    je["block"] = e.block;
    je["latent"] = e.latent;
    je["action"] = action_name(e.action);
    if (e.action == EditAction::clamp) je["value"] = e.value;
    j["edits"].push_back(je);
  }
  return j.dump(2);
}

InterventionPlan load_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StoreError(StoreErrc::io_error, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return plan_from_json(ss.str());
}

void save_plan(const std::filesystem::path& path, const InterventionPlan& plan) {
  std::ofstream out(path);
  if (!out) throw StoreError(StoreErrc::io_error, "cannot open " + path.string());
  out << plan_to_json(plan) << '\n';
}

Eigen::VectorXd apply_edits(const SAEModel& model, const Eigen::VectorXd& h,
                            std::span<const LatentEdit> edits, bool substitute) {
  if (!h.allFinite())
    throw NumericalError("apply_edits: non-finite representation");

  bool effective = substitute;
  for (const auto& e : edits) {
    if (e.latent >= model.latent_dim())
      throw ConfigError("edit latent " + std::to_string(e.latent) +
                        " out of range for latent dim " +
                        std::to_string(model.latent_dim()));
    if (e.action != EditAction::none) effective = true;
  }
  if (!effective) return h;

  Eigen::VectorXd a = encode(model, model.scale.apply(h));
  for (const auto& e : edits) {
    switch (e.action) {
      case EditAction::lesion: a(e.latent) = 0.0; break;
      case EditAction::clamp: a(e.latent) = e.value; break;
      case EditAction::none: break;
    }
  }
  return model.scale.inverse(decode(model, a));
}

}  // namespace tdprobe
