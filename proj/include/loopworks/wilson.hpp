#ifndef LOOPWORKS_WILSON_HPP
#define LOOPWORKS_WILSON_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "loopworks/chain.hpp"

namespace loopworks {

// Simple undirected graph: no self-loops, no parallel edges.
struct Graph {
  std::vector<std::string> vertices;
  std::vector<std::pair<int, int>> edges;       // u < v
  std::vector<std::vector<int>> adjacency;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int degree(int v) const { return static_cast<int>(adjacency[static_cast<std::size_t>(v)].size()); }
};

Graph make_graph(std::vector<std::string> vertices,
                 std::vector<std::pair<int, int>> edges);

bool is_connected(const Graph& graph);

struct SpanningTree {
  std::vector<std::pair<int, int>> edges;  // sorted, u < v
  int root = 0;
};

bool is_spanning_tree(const Graph& graph, const SpanningTree& tree);

// Canonical string key for counting tree frequencies.
std::string tree_key(const SpanningTree& tree);

// Simple-random-walk chain on the graph with {root} as the boundary.
ChainSpec graph_chain(const Graph& graph, int root);

// Successive loop-erased walks to the growing tree, in the given visit
// order (a permutation of the non-root vertices; pass {} for index order).
SpanningTree wilson_ust(const Graph& graph, int root, const std::vector<int>& ordering,
                        Rng& rng);

// Selection probability of any fixed spanning tree:
// [prod_{j != root} deg(x_j)]^{-1} det G_A. Tree independent.
double tree_probability(const Graph& graph, int root);

// Matrix-tree count [prod deg] det(I - P_A), rounded; NonIntegerResult if
// the rounding residual exceeds 1e-6 relative.
std::int64_t count_spanning_trees(const Graph& graph, int root);

// Exhaustive oracle, guarded to 8 vertices.
std::vector<SpanningTree> enumerate_spanning_trees(const Graph& graph);

}  // namespace loopworks

#endif
