#include "tdprobe/store/trajectory.hpp"

#include "json.hpp"
#include "tdprobe/errors.hpp"

namespace tdprobe {

using nlohmann::json;

const char* to_string(Task t) {
  switch (t) {
    case Task::two_step: return "two_step";
    case Task::grid_world: return "grid_world";
    case Task::graph: return "graph";
  }
  return "?";
}

Task task_from_string(const std::string& s) {
  if (s == "two_step") return Task::two_step;
  if (s == "grid_world") return Task::grid_world;
  if (s == "graph") return Task::graph;
  throw StoreError(StoreErrc::parse_error, "unknown task '" + s + "'");
}

std::int64_t TrajectoryLog::n_decisions() const {
  std::int64_t n = 0;
  for (const auto& s : steps)
    if (s.action) ++n;
  return n;
}

namespace {

json step_to_json(const TrajStep& s) {
  json j;
  j["episode"] = s.episode;
  j["t"] = s.t;
  j["state"] = s.state;
  if (s.action)
    j["action"] = *s.action;
  else
    j["action"] = nullptr;
  if (s.reward)
    j["reward"] = *s.reward;
  else
    j["reward"] = nullptr;
  j["next_state"] = s.next_state;
  return j;
}

TrajStep step_from_json(const json& j, std::size_t line_no) {
  try {
    TrajStep s;
    s.episode = j.at("episode").get<std::int64_t>();
    s.t = j.at("t").get<std::int64_t>();
    s.state = j.at("state").get<int>();
    if (j.contains("action") && !j.at("action").is_null())
      s.action = j.at("action").get<int>();
    if (j.contains("reward") && !j.at("reward").is_null())
      s.reward = j.at("reward").get<double>();
    s.next_state = j.at("next_state").get<int>();
    return s;
  } catch (const json::exception& e) {
    throw StoreError(StoreErrc::parse_error, "line " + std::to_string(line_no) +
                                                 ": " + e.what());
  }
}

bool key_extends(const std::optional<std::pair<std::int64_t, std::int64_t>>& last,
                 const TrajStep& s) {
  if (!last) return true;
  return std::pair<std::int64_t, std::int64_t>{s.episode, s.t} > *last;
}

// Last step line already in the file, if any (header lines are skipped).
std::optional<TrajStep> tail_step(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::string line, last;
  std::size_t line_no = 0, last_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || (j.contains("kind") && j["kind"] == "header")) continue;
    last = line;
    last_no = line_no;
  }
  if (last.empty()) return std::nullopt;
  json j;
  try {
    j = json::parse(last);
  } catch (const json::exception& e) {
    throw StoreError(StoreErrc::parse_error,
                     "line " + std::to_string(last_no) + ": " + e.what());
  }
  return step_from_json(j, last_no);
}

}  // namespace

TrajectoryWriter::TrajectoryWriter(const std::filesystem::path& path,
                                   const std::string& run_id, Task task,
                                   const std::map<std::string, std::string>& meta)
    : path_(path) {
  out_.open(path, std::ios::trunc);
  if (!out_)
    throw StoreError(StoreErrc::io_error, "cannot open " + path.string());
  json h;
  h["kind"] = "header";
  h["run_id"] = run_id;
  h["task"] = to_string(task);
  h["meta"] = meta;
  out_ << h.dump() << '\n';
}

void TrajectoryWriter::append(const TrajStep& step) {
  if (!key_extends(last_, step))
    throw StoreError(StoreErrc::order_violation,
                     "(episode,t)=(" + std::to_string(step.episode) + "," +
                         std::to_string(step.t) + ") does not extend the log");
  out_ << step_to_json(step).dump() << '\n';
  if (!out_)
    throw StoreError(StoreErrc::io_error, "short write to " + path_.string());
  last_ = {step.episode, step.t};
}

void append_trajectory(const std::filesystem::path& path, const TrajStep& step) {
  std::optional<std::pair<std::int64_t, std::int64_t>> last;
  if (std::filesystem::exists(path)) {
    if (auto tail = tail_step(path)) last = {tail->episode, tail->t};
  }
  if (!key_extends(last, step))
    throw StoreError(StoreErrc::order_violation,
                     "(episode,t)=(" + std::to_string(step.episode) + "," +
                         std::to_string(step.t) + ") does not extend the log");
  std::ofstream out(path, std::ios::app);
  if (!out)
    throw StoreError(StoreErrc::io_error, "cannot open " + path.string());
  out << step_to_json(step).dump() << '\n';
}

TrajectoryLog load_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw StoreError(StoreErrc::io_error, "cannot open " + path.string());

  TrajectoryLog log;
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::pair<std::int64_t, std::int64_t>> last;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw StoreError(StoreErrc::parse_error,
                       "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (j.contains("kind") && j["kind"] == "header") {
      log.run_id = j.value("run_id", "");
      if (j.contains("task")) log.task = task_from_string(j["task"]);
      if (j.contains("meta"))
        log.meta = j["meta"].get<std::map<std::string, std::string>>();
      continue;
    }
    TrajStep s = step_from_json(j, line_no);
    if (!key_extends(last, s))
      throw StoreError(StoreErrc::order_violation,
                       "line " + std::to_string(line_no) +
                           ": (episode,t) not strictly increasing");
    last = {s.episode, s.t};
    log.steps.push_back(s);
  }
  return log;
}

void save_trajectory(const std::filesystem::path& path, const TrajectoryLog& log) {
  TrajectoryWriter w(path, log.run_id, log.task, log.meta);
  for (const auto& s : log.steps) w.append(s);
}

}  // namespace tdprobe
