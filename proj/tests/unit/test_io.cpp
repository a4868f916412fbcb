#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "loopworks/fixtures.hpp"
#include "loopworks/io.hpp"
#include "loopworks/linops.hpp"

using namespace loopworks;

TEST_CASE("chain json round trip") {
  const ChainSpec chain = fixtures::demo_chain_d3();
  const Json j = chain_to_json(chain);
  const ChainSpec back = chain_from_json(j);
  CHECK(back.states() == chain.states());
  CHECK(back.boundary() == chain.boundary());
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) CHECK(back.weight(a, b) == chain.weight(a, b));
  }
  // Numeric ids stay numbers in json.
  CHECK(j.at("states").at(0).is_number_integer());

  // Probabilities survive a second round trip byte-for-byte.
  CHECK(chain_to_json(back).dump() == j.dump());
}

TEST_CASE("chain json accepts decimal strings and numbers") {
  const Json j = Json::parse(R"({
    "states": [1, 2, 3],
    "boundary": [3],
    "transitions": [
      {"from": 1, "to": 1, "p": "0.33333333333333331"},
      {"from": 1, "to": 2, "p": 0.33333333333333331},
      {"from": 1, "to": 3, "p": "0.33333333333333331"},
      {"from": 2, "to": 1, "p": 0.5},
      {"from": 2, "to": 2, "p": "0.16666666666666666"},
      {"from": 2, "to": 3, "p": 0.33333333333333331},
      {"from": 3, "to": 3, "p": 1}
    ]})");
  const ChainSpec chain = chain_from_json(j);
  CHECK(chain.weight(chain.index_of("1"), chain.index_of("1")) == 1.0 / 3.0);
  CHECK(chain.weight(chain.index_of("2"), chain.index_of("2")) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-15));

  // Unlisted pairs have weight zero.
  CHECK(chain.weight(chain.index_of("3"), chain.index_of("1")) == 0.0);

  CHECK_THROWS_AS(chain_from_json(Json::parse(R"({"states": [1]})")), Error);
  CHECK_THROWS_AS(chain_from_json(Json::parse(
                      R"({"states": [1], "transitions": [{"from": 1, "to": 1, "p": "x"}]})")),
                  Error);
}

TEST_CASE("graph json") {
  const Json j = Json::parse(R"({
    "vertices": ["a", "b", "c"],
    "edges": [["a", "b"], ["b", "c"], ["a", "c"]]})");
  const Graph graph = graph_from_json(j);
  CHECK(graph.n_vertices() == 3);
  CHECK(graph.edges.size() == 3);
  CHECK(graph_to_json(graph).at("edges").size() == 3);

  CHECK_THROWS_AS(graph_from_json(Json::parse(R"({"vertices": ["a"], "edges": [["a","z"]]})")),
                  Error);
}

TEST_CASE("matrix export formats") {
  const ChainSpec chain = fixtures::demo_chain_d3();
  const GreensBundle bundle = greens_bundle(chain);

  const Json j = matrix_to_json(chain, bundle.interior_order, bundle.greens);
  CHECK(j.at("order").size() == 2);
  CHECK(j.at("rows").at(0).at(0).get<double>() == bundle.greens(0, 0));

  std::ostringstream csv;
  write_matrix_csv(csv, bundle.greens);
  // 17 significant digits reparse to the same double.
  const std::string line = csv.str().substr(0, csv.str().find(','));
  CHECK(std::stod(line) == bundle.greens(0, 0));
}

TEST_CASE("paths and soup serialization") {
  const ChainSpec chain = fixtures::demo_chain_d3();
  const Path path{chain.index_of("1"), chain.index_of("2"), chain.index_of("3")};
  const Json j = path_to_json(chain, path);
  CHECK(path_from_json(chain, j) == path);

  Rng rng = derive_stream(9, 0);
  const SoupRealization soup = sample_rooted_soup(chain, 1.5, rng);
  const Json sj = soup_to_json(chain, soup);
  CHECK(sj.at("flavor") == "rooted");
  CHECK(sj.at("t") == 1.5);
  std::int64_t total = 0;
  for (const auto& entry : sj.at("loops")) total += entry.at("count").get<std::int64_t>();
  CHECK(total == static_cast<std::int64_t>(soup.loops.size()));
}

TEST_CASE("measure csv lists loop, length, mass") {
  const ChainSpec chain = fixtures::demo_chain_d3();
  std::ostringstream csv;
  write_measure_csv(csv, chain, SoupFlavor::Rooted, 4);
  const std::string text = csv.str();
  CHECK(text.find("loop,length,mass") == 0);
  CHECK(text.find("1 1,1,") != std::string::npos);  // the [1,1] loop with mass 1/3
}

TEST_CASE("check results as json") {
  CheckResult check;
  check.name = "demo";
  check.statistic = 0.5;
  check.threshold = 0.01;
  check.pass = true;
  check.n = 100;
  check.seed = 7;
  const Json j = check_to_json(check);
  CHECK(j.at("check") == "demo");
  CHECK(j.at("pass") == true);
  CHECK(j.at("N") == 100);
}

TEST_CASE("format_double round trips") {
  for (double v : {1.0 / 3.0, 18.0 / 7.0, 1e-300, 12345.678901234567}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}
