#include "loopworks/fixtures.hpp"

namespace loopworks {
namespace fixtures {

ChainSpec demo_chain_d3() {
  return build_chain({"1", "2", "3"}, {"3"},
                     {{"1", "1", 1.0 / 3.0},
                      {"1", "2", 1.0 / 3.0},
                      {"1", "3", 1.0 / 3.0},
                      {"2", "1", 1.0 / 2.0},
                      {"2", "2", 1.0 / 6.0},
                      {"2", "3", 1.0 / 3.0},
                      {"3", "3", 1.0}});
}

ChainSpec grid_chain(int rows, int cols) {
  const int full_rows = rows + 2, full_cols = cols + 2;
  auto name = [&](int r, int c) { return std::to_string(r) + "," + std::to_string(c); };
  std::vector<std::string> states;
  std::vector<std::string> boundary;
  for (int r = 0; r < full_rows; ++r) {
    for (int c = 0; c < full_cols; ++c) {
      states.push_back(name(r, c));
      if (r == 0 || c == 0 || r == full_rows - 1 || c == full_cols - 1) {
        boundary.push_back(name(r, c));
      }
    }
  }
  std::vector<Transition> weights;
  for (int r = 1; r <= rows; ++r) {
    for (int c = 1; c <= cols; ++c) {
      weights.push_back({name(r, c), name(r - 1, c), 0.25});
      weights.push_back({name(r, c), name(r + 1, c), 0.25});
      weights.push_back({name(r, c), name(r, c - 1), 0.25});
      weights.push_back({name(r, c), name(r, c + 1), 0.25});
    }
  }
  for (const auto& b : boundary) weights.push_back({b, b, 1.0});
  return build_chain(std::move(states), std::move(boundary), std::move(weights));
}

ChainSpec cycle_chain(int n, const std::vector<int>& boundary) {
  std::vector<std::string> states;
  for (int i = 0; i < n; ++i) states.push_back(std::to_string(i));
  std::vector<std::string> boundary_ids;
  std::vector<char> absorbing(static_cast<std::size_t>(n), 0);
  for (int b : boundary) {
    boundary_ids.push_back(std::to_string(b));
    absorbing[static_cast<std::size_t>(b)] = 1;
  }
  std::vector<Transition> weights;
  for (int i = 0; i < n; ++i) {
    if (absorbing[static_cast<std::size_t>(i)]) {
      weights.push_back({states[static_cast<std::size_t>(i)], states[static_cast<std::size_t>(i)], 1.0});
    } else {
      weights.push_back({states[static_cast<std::size_t>(i)],
                         states[static_cast<std::size_t>((i + 1) % n)], 0.5});
      weights.push_back({states[static_cast<std::size_t>(i)],
                         states[static_cast<std::size_t>((i + n - 1) % n)], 0.5});
    }
  }
  return build_chain(std::move(states), std::move(boundary_ids), std::move(weights));
}

ChainSpec acyclic_chain() {
  return build_chain({"1", "2", "3", "4"}, {"4"},
                     {{"1", "2", 0.5},
                      {"1", "4", 0.5},
                      {"2", "3", 0.5},
                      {"2", "4", 0.5},
                      {"3", "4", 1.0},
                      {"4", "4", 1.0}});
}

Graph complete_graph(int n) {
  std::vector<std::string> vertices;
  for (int i = 0; i < n; ++i) vertices.push_back(std::to_string(i));
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  }
  return make_graph(std::move(vertices), std::move(edges));
}

Graph cycle_graph(int n) {
  std::vector<std::string> vertices;
  for (int i = 0; i < n; ++i) vertices.push_back(std::to_string(i));
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return make_graph(std::move(vertices), std::move(edges));
}

Graph grid_graph(int rows, int cols) {
  auto id = [&](int r, int c) { return r * cols + c; };
  std::vector<std::string> vertices;
  for (int i = 0; i < rows * cols; ++i) vertices.push_back(std::to_string(i));
  std::vector<std::pair<int, int>> edges;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
    }
  }
  return make_graph(std::move(vertices), std::move(edges));
}

Graph path_graph(int n) {
  std::vector<std::string> vertices;
  for (int i = 0; i < n; ++i) vertices.push_back(std::to_string(i));
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return make_graph(std::move(vertices), std::move(edges));
}

Graph random_connected_graph() {
  return make_graph({"0", "1", "2", "3", "4", "5"},
                    {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 4}, {3, 4}, {3, 5}, {4, 5}, {0, 4}});
}

std::vector<ChainSpec> linops_fixtures() {
  std::vector<ChainSpec> chains;
  chains.push_back(demo_chain_d3());
  chains.push_back(grid_chain(2, 2));
  chains.push_back(grid_chain(2, 3));
  chains.push_back(cycle_chain(4, {0, 2}));
  chains.push_back(build_complete_graph_chain(4));
  chains.push_back(acyclic_chain());
  return chains;
}

}  // namespace fixtures
}  // namespace loopworks
