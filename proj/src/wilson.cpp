#include "loopworks/wilson.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "loopworks/linops.hpp"
#include "loopworks/path_algebra.hpp"

namespace loopworks {

Graph make_graph(std::vector<std::string> vertices,
                 std::vector<std::pair<int, int>> edges) {
  Graph graph;
  graph.vertices = std::move(vertices);
  if (graph.vertices.empty()) fail(ErrorCode::DomainError, "graph needs vertices");
  const int n = graph.n_vertices();
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : edges) {
    if (u > v) std::swap(u, v);
    if (u < 0 || v >= n) fail(ErrorCode::UnknownState, "edge endpoint out of range");
    if (u == v) fail(ErrorCode::DomainError, "self-loops are not allowed");
    if (!seen.insert({u, v}).second) fail(ErrorCode::DomainError, "parallel edge");
    graph.edges.emplace_back(u, v);
  }
  std::sort(graph.edges.begin(), graph.edges.end());
  graph.adjacency.assign(static_cast<std::size_t>(n), {});
  for (const auto& [u, v] : graph.edges) {
    graph.adjacency[static_cast<std::size_t>(u)].push_back(v);
    graph.adjacency[static_cast<std::size_t>(v)].push_back(u);
  }
  return graph;
}

bool is_connected(const Graph& graph) {
  const int n = graph.n_vertices();
  if (n == 0) return false;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int visited = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int u : graph.adjacency[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = 1;
        ++visited;
        stack.push_back(u);
      }
    }
  }
  return visited == n;
}

bool is_spanning_tree(const Graph& graph, const SpanningTree& tree) {
  const int n = graph.n_vertices();
  if (static_cast<int>(tree.edges.size()) != n - 1) return false;
  std::set<std::pair<int, int>> graph_edges(graph.edges.begin(), graph.edges.end());
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  };
  for (const auto& e : tree.edges) {
    if (graph_edges.find(e) == graph_edges.end()) return false;
    const int ru = find(e.first), rv = find(e.second);
    if (ru == rv) return false;  // cycle
    parent[static_cast<std::size_t>(ru)] = rv;
  }
  return true;  // n-1 acyclic edges on n vertices are connected
}

std::string tree_key(const SpanningTree& tree) {
  std::string key;
  for (const auto& [u, v] : tree.edges) {
    key += std::to_string(u);
    key += '-';
    key += std::to_string(v);
    key += ';';
  }
  return key;
}

ChainSpec graph_chain(const Graph& graph, int root) {
  if (root < 0 || root >= graph.n_vertices()) fail(ErrorCode::UnknownState, "root");
  if (!is_connected(graph)) fail(ErrorCode::DisconnectedGraph, "graph must be connected");
  std::vector<Transition> weights;
  for (int v = 0; v < graph.n_vertices(); ++v) {
    const double p = 1.0 / static_cast<double>(graph.degree(v));
    for (int u : graph.adjacency[static_cast<std::size_t>(v)]) {
      weights.push_back({graph.vertices[static_cast<std::size_t>(v)],
                         graph.vertices[static_cast<std::size_t>(u)], p});
    }
  }
  return build_chain(graph.vertices, {graph.vertices[static_cast<std::size_t>(root)]},
                     std::move(weights));
}

SpanningTree wilson_ust(const Graph& graph, int root, const std::vector<int>& ordering,
                        Rng& rng) {
  const int n = graph.n_vertices();
  if (root < 0 || root >= n) fail(ErrorCode::UnknownState, "root");
  if (!is_connected(graph)) fail(ErrorCode::DisconnectedGraph, "graph must be connected");

  std::vector<int> order = ordering;
  if (order.empty()) {
    for (int v = 0; v < n; ++v) {
      if (v != root) order.push_back(v);
    }
  } else {
    // Must visit every non-root vertex or the tree cannot span.
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    seen[static_cast<std::size_t>(root)] = 1;
    for (int v : order) {
      if (v < 0 || v >= n) fail(ErrorCode::UnknownState, "ordering vertex out of range");
      if (v == root) fail(ErrorCode::DomainError, "ordering must not contain the root");
      if (seen[static_cast<std::size_t>(v)]) fail(ErrorCode::DomainError, "duplicate in ordering");
      seen[static_cast<std::size_t>(v)] = 1;
    }
    if (static_cast<int>(order.size()) != n - 1) {
      fail(ErrorCode::DomainError, "ordering must cover all non-root vertices");
    }
  }

  std::vector<char> in_tree(static_cast<std::size_t>(n), 0);
  in_tree[static_cast<std::size_t>(root)] = 1;
  SpanningTree tree;
  tree.root = root;

  for (int start : order) {
    if (in_tree[static_cast<std::size_t>(start)]) continue;
    // Random walk from start to the current tree, then erase loops.
    Path walk{start};
    int current = start;
    while (!in_tree[static_cast<std::size_t>(current)]) {
      const auto& nbrs = graph.adjacency[static_cast<std::size_t>(current)];
      current = nbrs[static_cast<std::size_t>(
          std::min<std::size_t>(nbrs.size() - 1,
                                static_cast<std::size_t>(uniform01(rng) * nbrs.size())))];
      walk.push_back(current);
    }
    const Path branch = loop_erase(walk);
    for (std::size_t i = 0; i + 1 < branch.size(); ++i) {
      const int u = std::min(branch[i], branch[i + 1]);
      const int v = std::max(branch[i], branch[i + 1]);
      tree.edges.emplace_back(u, v);
      in_tree[static_cast<std::size_t>(branch[i])] = 1;
    }
  }
  std::sort(tree.edges.begin(), tree.edges.end());
  return tree;
}

namespace {

double log_degree_product(const Graph& graph, int root) {
  double sum = 0.0;
  for (int v = 0; v < graph.n_vertices(); ++v) {
    if (v != root) sum += std::log(static_cast<double>(graph.degree(v)));
  }
  return sum;
}

}  // namespace

double tree_probability(const Graph& graph, int root) {
  const ChainSpec chain = graph_chain(graph, root);
  return std::exp(chain.greens().log_det_greens() - log_degree_product(graph, root));
}

std::int64_t count_spanning_trees(const Graph& graph, int root) {
  const ChainSpec chain = graph_chain(graph, root);
  const double value =
      std::exp(log_degree_product(graph, root) - chain.greens().log_det_greens());
  const double rounded = std::round(value);
  if (std::abs(value - rounded) > 1e-6 * std::max(1.0, rounded)) {
    fail(ErrorCode::NonIntegerResult, "matrix-tree count is not near an integer");
  }
  return static_cast<std::int64_t>(rounded);
}

std::vector<SpanningTree> enumerate_spanning_trees(const Graph& graph) {
  const int n = graph.n_vertices();
  if (n > 8) fail(ErrorCode::TooLarge, "enumeration is guarded to 8 vertices");
  if (!is_connected(graph)) fail(ErrorCode::DisconnectedGraph, "graph must be connected");

  std::vector<SpanningTree> trees;
  const int m = static_cast<int>(graph.edges.size());
  std::vector<int> pick;
  auto choose = [&](auto&& self, int from, int remaining) -> void {
    if (remaining == 0) {
      SpanningTree tree;
      for (int e : pick) tree.edges.push_back(graph.edges[static_cast<std::size_t>(e)]);
      if (is_spanning_tree(graph, tree)) trees.push_back(std::move(tree));
      return;
    }
    for (int e = from; e <= m - remaining; ++e) {
      pick.push_back(e);
      self(self, e + 1, remaining - 1);
      pick.pop_back();
    }
  };
  choose(choose, 0, n - 1);
  return trees;
}

}  // namespace loopworks
