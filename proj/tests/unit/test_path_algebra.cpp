#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "loopworks/fixtures.hpp"
#include "loopworks/path_algebra.hpp"

using namespace loopworks;

namespace {

const ChainSpec& d3() {
  static const ChainSpec chain = fixtures::demo_chain_d3();
  return chain;
}

Path random_interior_path(const ChainSpec& chain, Rng& rng, int max_len) {
  const auto& interior = chain.interior();
  Path path{interior[static_cast<std::size_t>(uniform01(rng) * interior.size())]};
  const int len = 1 + static_cast<int>(uniform01(rng) * max_len);
  for (int i = 0; i < len; ++i) {
    // Steps restricted to interior successors with positive weight.
    std::vector<int> options;
    for (const auto& [v, p] : chain.row(path.back())) {
      if (p > 0.0 && chain.is_interior(v)) options.push_back(v);
    }
    if (options.empty()) break;
    path.push_back(options[static_cast<std::size_t>(uniform01(rng) * options.size())]);
  }
  return path;
}

}  // namespace

TEST_CASE("concat") {
  CHECK(concat({1, 2}, {2, 3}) == Path{1, 2, 3});
  CHECK(concat({1}, {1, 3}) == Path{1, 3});
  CHECK_THROWS_AS(concat({1, 2}, {3, 1}), Error);
}

TEST_CASE("path_weight step products") {
  const ChainSpec& chain = d3();
  const int s1 = chain.index_of("1"), s2 = chain.index_of("2"), s3 = chain.index_of("3");
  CHECK(path_weight(chain, {s1, s2, s3}) == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
  CHECK(path_weight(chain, {s1}) == 1.0);
  CHECK(path_weight(chain, {s1, s2, s1, s3}) == doctest::Approx(1.0 / 18.0).epsilon(1e-12));
  CHECK_THROWS_AS(path_weight(chain, {0, 99}), Error);
}

TEST_CASE("loop_erase follows the last-visit rule") {
  // w_1 = w_4 = b and w_2 = w_6 = c: the worked example.
  const Path omega{0, 1, 2, 3, 1, 4, 2, 5};  // a b c d b e c f
  CHECK(loop_erase(omega) == Path{0, 1, 4, 2, 5});
  CHECK(loop_erase_reverse(omega) == Path{0, 1, 2, 5});
  CHECK(loop_erase(omega) != loop_erase_reverse(omega));

  const Path saw{3, 1, 4};
  CHECK(loop_erase(saw) == saw);
  CHECK(loop_erase_reverse(saw) == saw);

  // A closed path erases to its base point.
  CHECK(loop_erase({7, 8, 7}) == Path{7});
}

TEST_CASE("loop erasure properties on random paths") {
  const ChainSpec& chain = d3();
  Rng rng = derive_stream(41, 0);
  for (int i = 0; i < 10000; ++i) {
    const Path path = random_interior_path(chain, rng, 12);
    const Path erased = loop_erase(path);
    CHECK(loop_erase(erased) == erased);      // idempotent
    CHECK(erased.front() == path.front());    // endpoints preserved
    CHECK(erased.back() == path.back());
    CHECK(is_self_avoiding(erased));

    const Path reverse_erased = loop_erase_reverse(path);
    CHECK(reverse_erased.front() == path.front());
    CHECK(reverse_erased.back() == path.back());
    CHECK(is_self_avoiding(reverse_erased));
  }
}

TEST_CASE("decompose_path reassembles exactly") {
  const ChainSpec& chain = d3();
  const int s1 = chain.index_of("1"), s2 = chain.index_of("2"), s3 = chain.index_of("3");

  const PathDecomposition parts = decompose_path(chain, {s1, s2, s1, s3});
  CHECK(parts.saw == Path{s1, s3});
  REQUIRE(parts.loops.size() == 1);
  CHECK(parts.loops[0] == Path{s1, s2, s1});

  // A self-avoiding exit path only has trivial loops.
  const PathDecomposition trivial = decompose_path(chain, {s2, s1, s3});
  CHECK(trivial.saw == Path{s2, s1, s3});
  for (const auto& loop : trivial.loops) CHECK(path_length(loop) == 0);

  CHECK_THROWS_AS(decompose_path(chain, {s1, s2}), Error);     // no boundary hit
  CHECK_THROWS_AS(decompose_path(chain, {s3, s3}), Error);     // starts on the boundary
}

TEST_CASE("decomposition weight identity over random exit paths") {
  const ChainSpec& chain = d3();
  Rng rng = derive_stream(42, 0);
  auto steps_of = [](const Path& path) {
    std::vector<std::pair<int, int>> steps;
    for (std::size_t i = 1; i < path.size(); ++i) steps.emplace_back(path[i - 1], path[i]);
    std::sort(steps.begin(), steps.end());
    return steps;
  };
  for (int i = 0; i < 10000; ++i) {
    const ExitSample sample = sample_exit_path(chain, chain.interior()[i % 2], rng);
    if (sample.exit == kCemetery) continue;
    const PathDecomposition parts = decompose_path(chain, sample.path);
    CHECK(reassemble_path(parts) == sample.path);

    // The two sides use the same multiset of steps, exactly.
    std::vector<std::pair<int, int>> recombined = steps_of(parts.saw);
    for (const auto& loop : parts.loops) {
      const auto extra = steps_of(loop);
      recombined.insert(recombined.end(), extra.begin(), extra.end());
    }
    std::sort(recombined.begin(), recombined.end());
    CHECK(recombined == steps_of(sample.path));

    double product = path_weight(chain, parts.saw);
    for (const auto& loop : parts.loops) product *= path_weight(chain, loop);
    CHECK(path_weight(chain, sample.path) == doctest::Approx(product).epsilon(1e-12));

    // Domain nesting: loop j avoids the earlier saw vertices.
    for (std::size_t j = 0; j < parts.loops.size(); ++j) {
      for (int v : parts.loops[j]) {
        for (std::size_t i2 = 0; i2 < j; ++i2) CHECK(v != parts.saw[i2]);
      }
    }
  }
}

TEST_CASE("loop_stats") {
  const LoopStats two = loop_stats({0, 1, 0, 1, 0});
  CHECK(two.rotations == 2);

  const LoopStats three = loop_stats({0, 1, 2, 0});
  CHECK(three.rotations == 3);

  const LoopStats pair = loop_stats({0, 1, 0});
  CHECK(pair.rotations == 2);
  CHECK(pair.returns.at(0) == 1);
  CHECK(pair.returns.at(1) == 1);
  CHECK(pair.rooted_rotations.at(0) == 1);

  const LoopStats trivial = loop_stats({5});
  CHECK(trivial.rotations == 1);
  CHECK(trivial.returns.empty());

  CHECK_THROWS_AS(loop_stats({0, 1}), Error);
}

TEST_CASE("loop_stats rotation identity on random loops") {
  const ChainSpec& chain = d3();
  Rng rng = derive_stream(43, 0);
  int tested = 0;
  while (tested < 10000) {
    Path path = random_interior_path(chain, rng, 10);
    if (path.front() != path.back() || path.size() < 2) continue;
    ++tested;
    const LoopStats stats = loop_stats(path);
    const int n = path_length(path);
    std::int64_t rooted_total = 0;
    for (const auto& [x, beta] : stats.returns) {
      // J(l; x) |l| = J(l) beta(l; x), exactly in integers.
      CHECK(stats.rooted_rotations.at(x) * n == stats.rotations * beta);
      rooted_total += stats.rooted_rotations.at(x);
    }
    CHECK(rooted_total == stats.rotations);
    CHECK(n % stats.rotations == 0);
  }
}

TEST_CASE("canonical_unrooted") {
  const UnrootedLoop canon = canonical_unrooted({2, 1, 2});
  CHECK(canon.canonical == Path{1, 2, 1});
  CHECK(canon.multiplicity == 2);

  CHECK(canonical_unrooted({0, 1, 0, 1, 0}).canonical ==
        canonical_unrooted({1, 0, 1, 0, 1}).canonical);

  const UnrootedLoop trivial = canonical_unrooted({4});
  CHECK(trivial.canonical == Path{4});
  CHECK(trivial.multiplicity == 1);
}

TEST_CASE("canonicalization is rotation invariant") {
  const ChainSpec& chain = d3();
  Rng rng = derive_stream(44, 0);
  int tested = 0;
  while (tested < 10000) {
    Path path = random_interior_path(chain, rng, 10);
    if (path.front() != path.back() || path.size() < 2) continue;
    ++tested;
    const UnrootedLoop canon = canonical_unrooted(path);
    for (int k = 0; k < path_length(path); ++k) {
      CHECK(canonical_unrooted(rotate_loop(path, k)).canonical == canon.canonical);
    }
    // The representative is a fixed point.
    CHECK(canonical_unrooted(canon.canonical).canonical == canon.canonical);
  }
}
