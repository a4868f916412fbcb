#ifndef LOOPWORKS_IO_HPP
#define LOOPWORKS_IO_HPP

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "loopworks/chain.hpp"
#include "loopworks/lerw.hpp"
#include "loopworks/soup.hpp"
#include "loopworks/stats.hpp"
#include "loopworks/wilson.hpp"

namespace loopworks {

using Json = nlohmann::json;

// Chain schema: {"states":[...], "boundary":[...],
//                "transitions":[{"from":s,"to":t,"p":x}, ...]}.
// Unlisted pairs have weight zero; probabilities may be given as doubles or
// as decimal strings and survive a save/load round trip bit-faithfully.
ChainSpec chain_from_json(const Json& j);
Json chain_to_json(const ChainSpec& chain);
ChainSpec load_chain_file(const std::string& path);

// Graph schema: {"vertices":[...], "edges":[[u,v], ...]} with vertex ids.
Graph graph_from_json(const Json& j);
Json graph_to_json(const Graph& graph);
Graph load_graph_file(const std::string& path);

// Matrices as {"order":[states], "rows":[[...]]} or row-major CSV with
// 17 significant digits (exact round trip for doubles).
Json matrix_to_json(const ChainSpec& chain, const std::vector<int>& order, const Matrix& m);
void write_matrix_csv(std::ostream& os, const Matrix& m);

Json path_to_json(const ChainSpec& chain, const Path& path);
Path path_from_json(const ChainSpec& chain, const Json& j);

Json lerw_distribution_to_json(const ChainSpec& chain, const LerwDistribution& dist);
Json tree_to_json(const Graph& graph, const SpanningTree& tree);

// Soup schema: {"t":x, "flavor":"...", "loops":[{"loop":[...], "count":k}]}.
// Rooted/unrooted loops aggregate equal entries; ordered realizations list
// one growing loop per site.
Json soup_to_json(const ChainSpec& chain, const SoupRealization& soup);

// Measure table rows: loop, length, mass.
void write_measure_csv(std::ostream& os, const ChainSpec& chain, SoupFlavor flavor,
                       int truncation_len);

Json check_to_json(const CheckResult& check);

// 17 significant digits; round-trip exact for doubles.
std::string format_double(double value);

}  // namespace loopworks

#endif
