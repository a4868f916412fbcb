#include "loopworks/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>

namespace loopworks {

namespace {

std::string id_from_json(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
  fail(ErrorCode::ParseError, "state ids must be strings or integers");
}

double prob_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    try {
      std::size_t used = 0;
      const double value = std::stod(j.get<std::string>(), &used);
      if (used != j.get<std::string>().size()) {
        fail(ErrorCode::ParseError, "trailing characters in probability");
      }
      return value;
    } catch (const std::exception&) {
      fail(ErrorCode::ParseError, "cannot parse probability '" + j.get<std::string>() + "'");
    }
  }
  fail(ErrorCode::ParseError, "probabilities must be numbers or decimal strings");
}

Json id_to_json(const ChainSpec& chain, int state) {
  if (state == kCemetery) return Json(kCemeteryId);
  if (chain.numeric_ids()) return Json(std::stoll(chain.label(state)));
  return Json(chain.label(state));
}

}  // namespace

ChainSpec chain_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("states") || !j.contains("transitions")) {
    fail(ErrorCode::ParseError, "chain json needs 'states' and 'transitions'");
  }
  std::vector<std::string> states;
  for (const auto& s : j.at("states")) states.push_back(id_from_json(s));
  std::vector<std::string> boundary;
  if (j.contains("boundary")) {
    for (const auto& s : j.at("boundary")) boundary.push_back(id_from_json(s));
  }
  std::vector<Transition> transitions;
  for (const auto& t : j.at("transitions")) {
    transitions.push_back(
        {id_from_json(t.at("from")), id_from_json(t.at("to")), prob_from_json(t.at("p"))});
  }
  return build_chain(std::move(states), std::move(boundary), std::move(transitions));
}

Json chain_to_json(const ChainSpec& chain) {
  Json j;
  j["states"] = Json::array();
  for (int s = 0; s < chain.n_states(); ++s) j["states"].push_back(id_to_json(chain, s));
  j["boundary"] = Json::array();
  for (int s : chain.boundary()) j["boundary"].push_back(id_to_json(chain, s));
  j["transitions"] = Json::array();
  for (int s = 0; s < chain.n_states(); ++s) {
    for (const auto& [to, p] : chain.row(s)) {
      Json t;
      t["from"] = id_to_json(chain, s);
      t["to"] = id_to_json(chain, to);
      t["p"] = p;
      j["transitions"].push_back(std::move(t));
    }
  }
  return j;
}

ChainSpec load_chain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, "cannot open '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(ErrorCode::ParseError, std::string("invalid json: ") + e.what());
  }
  return chain_from_json(j);
}

Graph graph_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges")) {
    fail(ErrorCode::ParseError, "graph json needs 'vertices' and 'edges'");
  }
  std::vector<std::string> vertices;
  std::map<std::string, int> index;
  for (const auto& v : j.at("vertices")) {
    const std::string id = id_from_json(v);
    index[id] = static_cast<int>(vertices.size());
    vertices.push_back(id);
  }
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) fail(ErrorCode::ParseError, "edges are [u, v] pairs");
    auto u = index.find(id_from_json(e.at(0)));
    auto v = index.find(id_from_json(e.at(1)));
    if (u == index.end() || v == index.end()) {
      fail(ErrorCode::UnknownState, "edge references an unknown vertex");
    }
    edges.emplace_back(u->second, v->second);
  }
  return make_graph(std::move(vertices), std::move(edges));
}

Json graph_to_json(const Graph& graph) {
  Json j;
  j["vertices"] = graph.vertices;
  j["edges"] = Json::array();
  for (const auto& [u, v] : graph.edges) {
    j["edges"].push_back(Json::array({graph.vertices[static_cast<std::size_t>(u)],
                                      graph.vertices[static_cast<std::size_t>(v)]}));
  }
  return j;
}

Graph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, "cannot open '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(ErrorCode::ParseError, std::string("invalid json: ") + e.what());
  }
  return graph_from_json(j);
}

Json matrix_to_json(const ChainSpec& chain, const std::vector<int>& order, const Matrix& m) {
  Json j;
  j["order"] = Json::array();
  for (int s : order) j["order"].push_back(id_to_json(chain, s));
  j["rows"] = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    j["rows"].push_back(std::move(row));
  }
  return j;
}

void write_matrix_csv(std::ostream& os, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      if (k > 0) os << ',';
      os << format_double(m(i, k));
    }
    os << '\n';
  }
}

Json path_to_json(const ChainSpec& chain, const Path& path) {
  Json j = Json::array();
  for (int v : path) j.push_back(id_to_json(chain, v));
  return j;
}

Path path_from_json(const ChainSpec& chain, const Json& j) {
  if (!j.is_array()) fail(ErrorCode::ParseError, "paths are arrays of state ids");
  Path path;
  for (const auto& v : j) path.push_back(chain.index_of(id_from_json(v)));
  return path;
}

Json lerw_distribution_to_json(const ChainSpec& chain, const LerwDistribution& dist) {
  Json j = Json::array();
  for (const auto& [saw, p] : dist.entries) {
    Json entry;
    entry["saw"] = path_to_json(chain, saw);
    entry["p"] = p;
    j.push_back(std::move(entry));
  }
  return j;
}

Json tree_to_json(const Graph& graph, const SpanningTree& tree) {
  Json j;
  j["root"] = graph.vertices[static_cast<std::size_t>(tree.root)];
  j["edges"] = Json::array();
  for (const auto& [u, v] : tree.edges) {
    j["edges"].push_back(Json::array({graph.vertices[static_cast<std::size_t>(u)],
                                      graph.vertices[static_cast<std::size_t>(v)]}));
  }
  return j;
}

Json soup_to_json(const ChainSpec& chain, const SoupRealization& soup) {
  Json j;
  j["t"] = soup.t;
  j["loops"] = Json::array();
  switch (soup.flavor) {
    case SoupFlavor::Ordered: {
      j["flavor"] = "ordered";
      for (const auto& state : soup.site_loops) {
        Json entry;
        entry["loop"] = path_to_json(chain, state.loop);
        entry["count"] = 1;
        j["loops"].push_back(std::move(entry));
      }
      break;
    }
    case SoupFlavor::Rooted: {
      j["flavor"] = "rooted";
      std::map<Path, std::int64_t> grouped;
      for (const auto& loop : soup.loops) grouped[loop]++;
      for (const auto& [loop, count] : grouped) {
        Json entry;
        entry["loop"] = path_to_json(chain, loop);
        entry["count"] = count;
        j["loops"].push_back(std::move(entry));
      }
      break;
    }
    case SoupFlavor::Unrooted: {
      j["flavor"] = "unrooted";
      std::map<Path, std::int64_t> grouped;
      for (const auto& cls : soup.classes) grouped[cls.canonical]++;
      for (const auto& [loop, count] : grouped) {
        Json entry;
        entry["loop"] = path_to_json(chain, loop);
        entry["count"] = count;
        j["loops"].push_back(std::move(entry));
      }
      break;
    }
  }
  return j;
}

void write_measure_csv(std::ostream& os, const ChainSpec& chain, SoupFlavor flavor,
                       int truncation_len) {
  os << "loop,length,mass\n";
  // Enumerate nontrivial loops up to the cap; same guard as measure_total.
  const int cap = chain.n_interior() <= 3 ? 20 : 12;
  if (truncation_len > cap) fail(ErrorCode::TooLarge, "loop enumeration guard exceeded");

  std::map<Path, double> table;
  for (int x : chain.interior()) {
    Path stack{x};
    auto dfs = [&](auto&& self, int v, double w, int depth) -> void {
      if (depth > 0 && v == x) {
        if (flavor != SoupFlavor::Unrooted) {
          table[stack] = loop_measure(chain, stack, flavor);
        } else {
          const UnrootedLoop cls = canonical_unrooted(stack);
          if (cls.canonical == stack) {
            table[stack] = loop_measure(chain, stack, flavor);
          }
        }
      }
      if (depth == truncation_len) return;
      for (const auto& [u, p] : chain.row(v)) {
        if (p <= 0.0 || !chain.is_interior(u)) continue;
        stack.push_back(u);
        self(self, u, w * p, depth + 1);
        stack.pop_back();
      }
    };
    dfs(dfs, x, 1.0, 0);
  }
  for (const auto& [loop, mass] : table) {
    if (mass == 0.0) continue;
    for (std::size_t i = 0; i < loop.size(); ++i) {
      if (i > 0) os << ' ';
      os << chain.label(loop[i]);
    }
    os << ',' << path_length(loop) << ',' << format_double(mass) << '\n';
  }
}

Json check_to_json(const CheckResult& check) {
  Json j;
  j["check"] = check.name;
  j["statistic"] = check.statistic;
  j["threshold"] = check.threshold;
  j["pass"] = check.pass;
  j["N"] = check.n;
  j["seed"] = check.seed;
  return j;
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace loopworks
