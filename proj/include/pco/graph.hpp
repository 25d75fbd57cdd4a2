#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pco {

using NodeId = std::size_t;

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Directed interaction graph. Edge (i <- j) means node i receives pulses
/// from node j. In-neighbor lists are kept sorted, so two graphs with the
/// same edge set compare equal.
class DirectedGraph {
 public:
  DirectedGraph() = default;
  explicit DirectedGraph(std::size_t node_count);

  static DirectedGraph from_in_neighbors(
      const std::vector<std::vector<NodeId>>& in_neighbors);

  void add_edge(NodeId receiver, NodeId source);

  [[nodiscard]] std::size_t node_count() const noexcept { return in_.size(); }
  [[nodiscard]] std::size_t edge_count() const noexcept;
  [[nodiscard]] bool has_edge(NodeId receiver, NodeId source) const;

  [[nodiscard]] std::span<const NodeId> in_neighbors(NodeId i) const;
  [[nodiscard]] std::span<const NodeId> out_neighbors(NodeId i) const;

  /// Position of `source` in the in-neighbor list of `receiver`; this is the
  /// index of the incoming channel the receiver observes.
  [[nodiscard]] std::size_t in_slot(NodeId receiver, NodeId source) const;

  bool operator==(const DirectedGraph& other) const { return in_ == other.in_; }

 private:
  void check_node(NodeId i) const;

  std::vector<std::vector<NodeId>> in_;
  std::vector<std::vector<NodeId>> out_;
};

/// d_i, the number of in-neighbors of node i.
std::size_t in_degree(const DirectedGraph& g, NodeId i);

inline constexpr std::size_t kDefaultRobustnessGuard = 14;

/// Exhaustive r-robustness test. Every assignment of the nodes to
/// {V1, V2, neither} with both subsets nonempty is checked; the graph is
/// r-robust iff each such pair has a node with at least r in-neighbors outside
/// its own subset. Throws GraphError when N < 2 or N exceeds `guard`.
bool is_r_robust(const DirectedGraph& g, std::size_t r,
                 std::size_t guard = kDefaultRobustnessGuard);

/// Largest r for which the graph is r-robust (0 if not 1-robust).
std::size_t max_robustness(const DirectedGraph& g,
                           std::size_t guard = kDefaultRobustnessGuard);

DirectedGraph random_digraph(std::size_t n, double edge_probability,
                             std::uint64_t seed);
DirectedGraph complete_digraph(std::size_t n);
DirectedGraph directed_ring(std::size_t n);

/// The shipped 8-node, 3-robust demonstration network. No normal node has
/// both node 0 and node 3 as in-neighbors, so those two can misbehave under a
/// 1-local attack.
DirectedGraph demo_graph();

// Text format: first non-comment line `N`, then lines `i <- j1 j2 ...`.
// `#` starts a comment.
DirectedGraph parse_graph(std::string_view text);
std::string format_graph(const DirectedGraph& g);
DirectedGraph load_graph_file(const std::filesystem::path& path);

}  // namespace pco
