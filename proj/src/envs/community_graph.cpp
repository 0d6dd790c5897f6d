#include "tdprobe/envs/community_graph.hpp"

#include <algorithm>

#include "tdprobe/errors.hpp"
#include "tdprobe/rng.hpp"

namespace tdprobe {

Eigen::MatrixXd CommunityGraph::walk_transition_matrix() const {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(kNodes, kNodes);
  for (int i = 0; i < kNodes; ++i)
    for (int j : neighbors[i]) t(i, j) = 1.0 / static_cast<double>(degree(i));
  return t;
}

CommunityGraph build_community_graph(std::uint64_t seed) {
  CommunityGraph g;
  g.adjacency.setConstant(false);
  g.bottleneck.assign(CommunityGraph::kNodes, false);

  auto connect = [&](int a, int b) {
    g.adjacency(a, b) = true;
    g.adjacency(b, a) = true;
  };

  const int n = CommunityGraph::kNodesPerCommunity;
  for (int c = 0; c < CommunityGraph::kCommunities; ++c) {
    int base = c * n;
    // Nodes base..base+2 are interior, base+3 and base+4 are bottlenecks.
    // Interior nodes connect to everyone in the community; the two
    // bottlenecks are not connected to each other.
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (!(i >= 3 && j >= 3)) connect(base + i, base + j);
    g.bottleneck[base + 3] = true;
    g.bottleneck[base + 4] = true;
  }
  // Ring of communities: the "out" bottleneck of community c meets the "in"
  // bottleneck of community c+1.
  for (int c = 0; c < CommunityGraph::kCommunities; ++c) {
    int next = (c + 1) % CommunityGraph::kCommunities;
    connect(c * n + 4, next * n + 3);
  }

  g.neighbors.resize(CommunityGraph::kNodes);
  for (int i = 0; i < CommunityGraph::kNodes; ++i) {
    for (int j = 0; j < CommunityGraph::kNodes; ++j)
      if (g.adjacency(i, j)) g.neighbors[i].push_back(j);
    std::sort(g.neighbors[i].begin(), g.neighbors[i].end());
  }

  // Seeded random labels stand in for sampled vocabularies; dynamics never
  // look at them.
  Rng rng(seed);
  g.labels.resize(CommunityGraph::kNodes);
  for (int i = 0; i < CommunityGraph::kNodes; ++i) {
    std::string name;
    for (int k = 0; k < 5; ++k)
      name.push_back(static_cast<char>('a' + rng.uniform_int(26)));
    g.labels[i] = name;
  }
  return g;
}

TrajectoryLog random_walk(const CommunityGraph& graph, int n_steps,
                          std::uint64_t seed, const std::string& run_id) {
  if (n_steps < 1) throw ConfigError("random walk needs n_steps >= 1");
  Rng rng(seed);

  TrajectoryLog log;
  log.run_id = run_id;
  log.task = Task::graph;
  log.meta["n_states"] = std::to_string(CommunityGraph::kNodes);
  std::string labels;
  for (int i = 0; i < CommunityGraph::kNodes; ++i) {
    if (i) labels += ',';
    labels += graph.labels[i];
  }
  log.meta["labels"] = labels;

  int state = rng.uniform_int(CommunityGraph::kNodes);
  log.meta["initial_state"] = std::to_string(state);
  for (int t = 0; t + 1 < n_steps; ++t) {
    const auto& nb = graph.neighbors[state];
    int next = nb[rng.uniform_int(static_cast<int>(nb.size()))];
    TrajStep s;
    s.episode = 0;
    s.t = t;
    s.state = state;
    s.next_state = next;
    log.steps.push_back(s);
    state = next;
  }
  return log;
}

}  // namespace tdprobe
