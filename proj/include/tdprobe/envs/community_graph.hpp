#ifndef TDPROBE_ENVS_COMMUNITY_GRAPH_HPP
#define TDPROBE_ENVS_COMMUNITY_GRAPH_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "tdprobe/store/trajectory.hpp"

namespace tdprobe {

// Three communities of five nodes each. Within a community the three
// non-bottleneck nodes connect to all four others; the two bottleneck nodes
// connect to those three plus exactly one bottleneck of the adjacent
// community, closing a ring. Every node has degree 4.
struct CommunityGraph {
  static constexpr int kCommunities = 3;
  static constexpr int kNodesPerCommunity = 5;
  static constexpr int kNodes = kCommunities * kNodesPerCommunity;

  Eigen::Matrix<bool, kNodes, kNodes> adjacency;
  std::vector<bool> bottleneck;          // per node
  std::vector<std::string> labels;       // per-run random names; never used by dynamics
  std::vector<std::vector<int>> neighbors;  // sorted adjacency lists

  int community_of(int node) const { return node / kNodesPerCommunity; }
  int degree(int node) const { return static_cast<int>(neighbors[node].size()); }

  // Row-normalized uniform-walk transition matrix (degree 4 everywhere).
  Eigen::MatrixXd walk_transition_matrix() const;
};

CommunityGraph build_community_graph(std::uint64_t seed);

// Uniform random walk emitting n_steps observations, i.e. n_steps - 1
// transition records. Rewards and actions are absent for this task.
TrajectoryLog random_walk(const CommunityGraph& graph, int n_steps,
                          std::uint64_t seed, const std::string& run_id = "walk");

}  // namespace tdprobe

#endif
