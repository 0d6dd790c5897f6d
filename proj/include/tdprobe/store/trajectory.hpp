#ifndef TDPROBE_STORE_TRAJECTORY_HPP
#define TDPROBE_STORE_TRAJECTORY_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tdprobe {

enum class Task { two_step, grid_world, graph };

const char* to_string(Task t);
Task task_from_string(const std::string& s);

struct TrajStep {
  std::int64_t episode = 0;
  std::int64_t t = 0;
  int state = 0;
  std::optional<int> action;     // none for the graph task
  std::optional<double> reward;  // none when the task provides no rewards
  int next_state = 0;
};

// Time-ordered record of steps, grouped into episodes, for one run.
struct TrajectoryLog {
  std::string run_id;
  Task task = Task::two_step;
  std::map<std::string, std::string> meta;
  std::vector<TrajStep> steps;

  std::int64_t n_decisions() const;  // steps that carry an action
};

// JSON-lines on disk: an optional header line followed by one step per line.
// Loading an appended file returns all steps in (episode, t) order; any
// order violation is rejected at append time.
class TrajectoryWriter {
 public:
  TrajectoryWriter(const std::filesystem::path& path, const std::string& run_id,
                   Task task, const std::map<std::string, std::string>& meta = {});

  void append(const TrajStep& step);

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  std::optional<std::pair<std::int64_t, std::int64_t>> last_;
};

// Appends a single step to an existing (or new) log, validating that it
// extends the (episode, t) order of what is already on disk.
void append_trajectory(const std::filesystem::path& path, const TrajStep& step);

// Parses a log. An empty file yields an empty TrajectoryLog. Parse failures
// report the offending line number.
TrajectoryLog load_trajectory(const std::filesystem::path& path);

void save_trajectory(const std::filesystem::path& path, const TrajectoryLog& log);

}  // namespace tdprobe

#endif
