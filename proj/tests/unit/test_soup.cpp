#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "loopworks/fixtures.hpp"
#include "loopworks/soup.hpp"
#include "loopworks/stats.hpp"

using namespace loopworks;

namespace {

const ChainSpec& d3() {
  static const ChainSpec chain = fixtures::demo_chain_d3();
  return chain;
}

// All loops at x inside A with length <= max_len, by DFS.
std::vector<Path> loops_at(const ChainSpec& chain, int x, int max_len) {
  std::vector<Path> out;
  Path stack{x};
  auto dfs = [&](auto&& self, int v, int depth) -> void {
    if (depth > 0 && v == x) out.push_back(stack);
    if (depth == max_len) return;
    for (const auto& [u, p] : chain.row(v)) {
      if (p <= 0.0 || !chain.is_interior(u)) continue;
      stack.push_back(u);
      self(self, u, depth + 1);
      stack.pop_back();
    }
  };
  dfs(dfs, x, 0);
  return out;
}

// Mean and standard error of per-realization counts keyed by loop.
struct IntensityTable {
  std::map<Path, double> mean;
  std::map<Path, double> variance;
  std::int64_t n = 0;

  void add(const std::map<Path, std::int64_t>& realization) {
    ++n;
    for (const auto& [key, count] : realization) {
      // Online update of sums; variance finalized in `finish`.
      mean[key] += static_cast<double>(count);
      variance[key] += static_cast<double>(count) * static_cast<double>(count);
    }
  }
  void finish() {
    for (auto& [key, sum] : mean) {
      const double m = sum / static_cast<double>(n);
      variance[key] = variance[key] / static_cast<double>(n) - m * m;
      sum = m;
    }
  }
};

bool intensities_within_3se(const IntensityTable& a, const IntensityTable& b) {
  std::map<Path, char> keys;
  for (const auto& [key, m] : a.mean) keys[key] = 1;
  for (const auto& [key, m] : b.mean) keys[key] = 1;
  for (const auto& [key, unused] : keys) {
    const double ma = a.mean.count(key) ? a.mean.at(key) : 0.0;
    const double mb = b.mean.count(key) ? b.mean.at(key) : 0.0;
    const double va = a.variance.count(key) ? a.variance.at(key) : 0.0;
    const double vb = b.variance.count(key) ? b.variance.at(key) : 0.0;
    const double se = std::sqrt(va / static_cast<double>(a.n) + vb / static_cast<double>(b.n));
    if (std::abs(ma - mb) > 3.0 * se + 1e-9) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("elementary_mass closed forms") {
  const ChainSpec& chain = d3();
  CHECK(elementary_mass(chain, chain.index_of("1")) ==
        doctest::Approx(8.0 / 15.0).epsilon(1e-12));
  CHECK(elementary_mass(chain, chain.index_of("2")) ==
        doctest::Approx(5.0 / 12.0).epsilon(1e-12));

  const ChainSpec acyclic = fixtures::acyclic_chain();
  CHECK(elementary_mass(acyclic, acyclic.index_of("1")) == doctest::Approx(0.0));
}

TEST_CASE("sample_elementary_loop has law p(l)/f_x") {
  const ChainSpec& chain = d3();
  const int s1 = chain.index_of("1");
  const auto emp = empirical<Path>(100000, 71, [&](Rng& rng) {
    return sample_elementary_loop(chain, s1, rng);
  });
  CHECK(emp.freq({s1, s1}) == doctest::Approx(5.0 / 8.0).epsilon(0.016));
  CHECK(emp.freq({s1, chain.index_of("2"), s1}) == doctest::Approx(5.0 / 16.0).epsilon(0.032));

  const ChainSpec acyclic = fixtures::acyclic_chain();
  Rng rng = derive_stream(72, 0);
  CHECK_THROWS_AS(sample_elementary_loop(acyclic, acyclic.index_of("1"), rng), Error);
}

TEST_CASE("growing loop trivial probabilities") {
  const ChainSpec& chain = d3();
  const int s1 = chain.index_of("1"), s2 = chain.index_of("2");

  const auto trivial1 = empirical<int>(100000, 73, [&](Rng& rng) {
    return path_length(sample_growing_loop(chain, s1, 1.0, rng).loop) == 0 ? 1 : 0;
  });
  CHECK(trivial1.freq(1) == doctest::Approx(7.0 / 15.0).epsilon(0.022));

  const auto trivial2 = empirical<int>(100000, 74, [&](Rng& rng) {
    return path_length(sample_growing_loop(chain, s2, 1.0, rng).loop) == 0 ? 1 : 0;
  });
  CHECK(trivial2.freq(1) == doctest::Approx(7.0 / 12.0).epsilon(0.018));

  Rng rng = derive_stream(75, 0);
  const GrowingLoopState zero = sample_growing_loop(chain, s1, 0.0, rng);
  CHECK(path_length(zero.loop) == 0);
  CHECK(zero.elementary_count == 0);
}

TEST_CASE("growing_loop_pmf closed forms") {
  const ChainSpec& chain = d3();
  const int s1 = chain.index_of("1"), s2 = chain.index_of("2");

  CHECK(growing_loop_pmf(chain, s1, 1.0, {s1, s2, s1}) ==
        doctest::Approx(7.0 / 90.0).epsilon(1e-12));
  CHECK(growing_loop_pmf(chain, s1, 1.0, {s1}) == doctest::Approx(7.0 / 15.0).epsilon(1e-12));

  // Length-2 totals at t = 1.
  const double len2_x1 = growing_loop_pmf(chain, s1, 1.0, {s1, s1, s1}) +
                         growing_loop_pmf(chain, s1, 1.0, {s1, s2, s1});
  CHECK(len2_x1 == doctest::Approx(7.0 / 54.0).epsilon(1e-12));
  const double len2_x2 = growing_loop_pmf(chain, s2, 1.0, {s2, s2, s2}) +
                         growing_loop_pmf(chain, s2, 1.0, {s2, s1, s2});
  CHECK(len2_x2 == doctest::Approx(49.0 / 432.0).epsilon(1e-12));

  CHECK_THROWS_AS(growing_loop_pmf(chain, s1, 1.0, {s2, s2}), Error);
  CHECK_THROWS_AS(growing_loop_pmf(chain, s1, 0.0, {s1}), Error);
}

TEST_CASE("growing loop length-2 ratio closed forms") {
  // For the demo chain the ratio is (t+1)/(t+4) at x = 1 and
  // (t+1)/(t+13) at x = 2: the k = 2 self-concatenation carries the
  // Gamma(t+2)/(2 Gamma(t)) = t(t+1)/2 coefficient against t for k = 1.
  const ChainSpec& chain = d3();
  const int s1 = chain.index_of("1"), s2 = chain.index_of("2");

  auto expected1 = [](double t) { return (t + 1.0) / (t + 4.0); };
  auto expected2 = [](double t) { return (t + 1.0) / (t + 13.0); };
  for (double t : {1e-8, 1e-4, 0.5, 1.0, 10.0, 200.0}) {
    CHECK(growing_loop_length2_ratio(chain, s1, t) ==
          doctest::Approx(expected1(t)).epsilon(1e-9));
    CHECK(growing_loop_length2_ratio(chain, s2, t) ==
          doctest::Approx(expected2(t)).epsilon(1e-9));
  }

  // Limits: 1/4 (x = 1) and 1/13 (x = 2) as t drops to zero; 1 at infinity.
  CHECK(growing_loop_length2_ratio(chain, s1, 1e-10) == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(growing_loop_length2_ratio(chain, s2, 1e-10) ==
        doctest::Approx(1.0 / 13.0).epsilon(1e-8));
  CHECK(growing_loop_length2_ratio(chain, s1, 1e6) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("negative binomial law of the elementary count") {
  const ChainSpec& chain = d3();
  for (int site : {0, 1}) {
    const int x = chain.interior()[static_cast<std::size_t>(site)];
    const double f = elementary_mass(chain, x);
    for (double t : {0.5, 1.0, 2.0}) {
      // Exact pmf with an "other" tail bucket.
      std::map<std::int64_t, double> pmf;
      double p = std::pow(1.0 - f, t), cum = 0.0;
      for (std::int64_t k = 0; cum < 1.0 - 1e-12 && k < 400; ++k) {
        pmf[k] = p;
        cum += p;
        p *= f * (static_cast<double>(k) + t) / static_cast<double>(k + 1);
      }
      const auto emp = empirical<std::int64_t>(
          100000, 80 + static_cast<std::uint64_t>(site * 10 + static_cast<int>(t * 2)),
          [&](Rng& rng) { return sample_growing_loop(chain, x, t, rng).elementary_count; });
      CHECK(chi_square_pvalue(emp, pmf) > 0.001);
    }
  }
}

TEST_CASE("growing loop empirical law matches the pmf") {
  const ChainSpec& chain = d3();
  for (int x : chain.interior()) {
    std::map<Path, double> exact;
    exact[{x}] = growing_loop_pmf(chain, x, 1.0, {x});
    for (const Path& loop : loops_at(chain, x, 4)) {
      exact[loop] = growing_loop_pmf(chain, x, 1.0, loop);
    }
    const auto emp = empirical<Path>(100000, 90 + static_cast<std::uint64_t>(x),
                                     [&](Rng& rng) {
                                       Path loop = sample_growing_loop(chain, x, 1.0, rng).loop;
                                       if (path_length(loop) > 4) return Path{};  // "other"
                                       return loop;
                                     });
    CHECK(total_variation(emp, exact) < 0.015);
  }
}

TEST_CASE("growing loop via continuous-time jumps agrees at t = 1") {
  // Cross-check of the inverse-transform count against the rate description
  // lambda(n, n+k) = f^k / k: simulate arrivals with total rate log G and
  // logarithmic sizes.
  const ChainSpec& chain = d3();
  const int x = chain.index_of("1");
  const double f = elementary_mass(chain, x);
  const double total_rate = -std::log1p(-f);

  std::map<std::int64_t, double> pmf;
  {
    double p = std::pow(1.0 - f, 1.0), cum = 0.0;
    for (std::int64_t k = 0; cum < 1.0 - 1e-12 && k < 400; ++k) {
      pmf[k] = p;
      cum += p;
      p *= f * (static_cast<double>(k) + 1.0) / static_cast<double>(k + 1);
    }
  }

  const auto emp = empirical<std::int64_t>(100000, 95, [&](Rng& rng) {
    std::int64_t count = 0;
    double clock = sample_exponential(rng, total_rate);
    while (clock <= 1.0) {
      const double u = uniform01(rng) * total_rate;
      double cum = 0.0;
      std::int64_t k = 1;
      double term = f;
      for (;;) {
        cum += term / static_cast<double>(k);
        if (u < cum || term < 1e-300) break;
        term *= f;
        ++k;
      }
      count += k;
      clock += sample_exponential(rng, total_rate);
    }
    return count;
  });
  CHECK(chi_square_pvalue(emp, pmf) > 0.001);
}

TEST_CASE("ordered soup configuration") {
  const ChainSpec& chain = d3();
  const int s1 = chain.index_of("1"), s2 = chain.index_of("2");
  const std::vector<int> ordering{s1, s2};

  const auto both_trivial = empirical<int>(100000, 101, [&](Rng& rng) {
    const SoupRealization soup = sample_soup_config(chain, ordering, 1.0, rng);
    for (const auto& state : soup.site_loops) {
      if (path_length(state.loop) != 0) return 0;
    }
    return 1;
  });
  CHECK(both_trivial.freq(1) == doctest::Approx(7.0 / 18.0).epsilon(0.026));

  Rng rng = derive_stream(102, 0);
  const SoupRealization frozen = sample_soup_config(chain, ordering, 0.0, rng);
  for (const auto& state : frozen.site_loops) CHECK(path_length(state.loop) == 0);

  // Joint law: per-cell chi-square over (site-1 loop, site-2 loop) pairs
  // bucketed at length 2, against the product pmf.
  const ChainSpec domain2 = restrict_interior(chain, {s1});
  std::map<std::pair<Path, Path>, double> joint;
  std::vector<Path> site1{{s1}}, site2{{s2}};
  for (const Path& l : loops_at(chain, s1, 2)) site1.push_back(l);
  for (const Path& l : loops_at(domain2, s2, 2)) site2.push_back(l);
  for (const Path& a : site1) {
    for (const Path& b : site2) {
      joint[{a, b}] = growing_loop_pmf(chain, s1, 1.0, a) *
                      growing_loop_pmf(domain2, s2, 1.0, b);
    }
  }
  const auto emp = empirical<std::pair<Path, Path>>(100000, 103, [&](Rng& rng2) {
    const SoupRealization soup = sample_soup_config(chain, ordering, 1.0, rng2);
    Path a = soup.site_loops[0].loop, b = soup.site_loops[1].loop;
    if (path_length(a) > 2) a.clear();
    if (path_length(b) > 2) b.clear();
    return std::make_pair(a, b);
  });
  CHECK(chi_square_pvalue(emp, joint) > 0.001);
}

TEST_CASE("config_pmf") {
  const ChainSpec& chain = d3();
  const int s1 = chain.index_of("1"), s2 = chain.index_of("2");
  const std::vector<int> ordering{s1, s2};

  CHECK(config_pmf(chain, ordering, 1.0, {{s1}, {s2}}) ==
        doctest::Approx(7.0 / 18.0).epsilon(1e-12));

  // Independence: the joint pmf is the product of the site pmfs.
  const ChainSpec domain2 = restrict_interior(chain, {s1});
  const Path a{s1, s2, s1}, b{s2, s2, s2};
  CHECK(config_pmf(chain, ordering, 1.0, {a, b}) ==
        doctest::Approx(growing_loop_pmf(chain, s1, 1.0, a) *
                        growing_loop_pmf(domain2, s2, 1.0, b))
            .epsilon(1e-12));

  // The site-2 loop may not wander through site 1.
  CHECK_THROWS_AS(config_pmf(chain, ordering, 1.0, {{s1}, {s2, s1, s2}}), Error);

  // Truncated enumeration sums близко to one; the product over sites covers
  // the whole configuration space.
  double total1 = growing_loop_pmf(chain, s1, 1.0, {s1});
  for (const Path& l : loops_at(chain, s1, 20)) {
    total1 += growing_loop_pmf(chain, s1, 1.0, l);
  }
  double total2 = growing_loop_pmf(domain2, s2, 1.0, {s2});
  for (const Path& l : loops_at(domain2, s2, 20)) {
    total2 += growing_loop_pmf(domain2, s2, 1.0, l);
  }
  CHECK(total1 * total2 == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("loop_measure flavors") {
  const ChainSpec& chain = d3();
  const int s1 = chain.index_of("1"), s2 = chain.index_of("2");

  CHECK(loop_measure(chain, {s1, s1}, SoupFlavor::Rooted) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(loop_measure(chain, {s1, s2, s1}, SoupFlavor::Rooted) ==
        doctest::Approx(1.0 / 12.0).epsilon(1e-12));
  CHECK(loop_measure(chain, {s1, s2, s1}, SoupFlavor::Unrooted) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(loop_measure(chain, {s1, s2, s1}, SoupFlavor::Ordered, {s1, s2}) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  // Root 2 sits below 1 in the ordering, so the class is carried by site 1.
  CHECK(loop_measure(chain, {s2, s1, s2}, SoupFlavor::Ordered, {s1, s2}) == 0.0);

  CHECK_THROWS_AS(loop_measure(chain, {s1}, SoupFlavor::Rooted), Error);
}

TEST_CASE("measure totals approach log det G") {
  const ChainSpec& chain = d3();
  const double target = std::log(18.0 / 7.0);

  const MeasureTotal rooted = measure_total(chain, SoupFlavor::Rooted, 20);
  CHECK(std::abs(rooted.partial_sum - target) < 1e-4);
  CHECK(std::abs(rooted.partial_sum - target) <= rooted.tail_bound + 1e-12);

  const MeasureTotal unrooted = measure_total(chain, SoupFlavor::Unrooted, 20);
  CHECK(std::abs(unrooted.partial_sum - target) < 1e-4);
  CHECK(unrooted.partial_sum == doctest::Approx(rooted.partial_sum).epsilon(1e-12));

  const MeasureTotal ordered = measure_total(chain, SoupFlavor::Ordered, 20);
  CHECK(std::abs(ordered.partial_sum - target) < 1e-4);

  // Monotone in the truncation length.
  double previous = 0.0;
  for (int len : {4, 8, 12, 16, 20}) {
    const double partial = measure_total(chain, SoupFlavor::Rooted, len).partial_sum;
    CHECK(partial > previous);
    previous = partial;
  }

  CHECK_THROWS_AS(measure_total(chain, SoupFlavor::Rooted, 21), Error);
  CHECK_THROWS_AS(measure_total(fixtures::grid_chain(2, 2), SoupFlavor::Rooted, 13), Error);
}

TEST_CASE("ordered per-site subtotals") {
  const ChainSpec& chain = d3();
  const int s1 = chain.index_of("1"), s2 = chain.index_of("2");
  // Site x_j contributes log G_{A_j}(x_j, x_j).
  const ChainSpec domain2 = restrict_interior(chain, {s1});
  double site1 = 0.0;
  for (const Path& l : loops_at(chain, s1, 20)) {
    std::int64_t beta = 0;
    for (std::size_t i = 1; i < l.size(); ++i) beta += l[i] == s1 ? 1 : 0;
    site1 += path_weight(chain, l) / static_cast<double>(beta);
  }
  double site2 = 0.0;
  for (const Path& l : loops_at(domain2, s2, 20)) {
    std::int64_t beta = 0;
    for (std::size_t i = 1; i < l.size(); ++i) beta += l[i] == s2 ? 1 : 0;
    site2 += path_weight(chain, l) / static_cast<double>(beta);
  }
  CHECK(site1 == doctest::Approx(std::log(15.0 / 7.0)).epsilon(1e-4));
  CHECK(site2 == doctest::Approx(std::log(6.0 / 5.0)).epsilon(1e-6));
}

TEST_CASE("rooted soup realization statistics") {
  const ChainSpec& chain = d3();
  const int s1 = chain.index_of("1");

  const auto empty = empirical<int>(100000, 111, [&](Rng& rng) {
    return sample_rooted_soup(chain, 1.0, rng).loops.empty() ? 1 : 0;
  });
  CHECK(empty.freq(1) == doctest::Approx(7.0 / 18.0).epsilon(0.026));

  // Poisson intensity of the loop [1,1] is t * p / |l| = 1/3.
  double count_11 = 0.0;
  Rng rng = derive_stream(112, 0);
  const int reps = 100000;
  for (int i = 0; i < reps; ++i) {
    for (const auto& loop : sample_rooted_soup(chain, 1.0, rng).loops) {
      if (loop == Path{s1, s1}) count_11 += 1.0;
    }
  }
  CHECK(count_11 / reps == doctest::Approx(1.0 / 3.0).epsilon(0.03));

  CHECK(sample_rooted_soup(chain, 0.0, rng).loops.empty());
}

TEST_CASE("empty soup probability closed form") {
  const ChainSpec& chain = d3();
  CHECK(empty_soup_prob(chain, 1.0) == doctest::Approx(7.0 / 18.0).epsilon(1e-12));
  CHECK(empty_soup_prob(chain, 0.0) == 1.0);
  CHECK(empty_soup_prob(chain, 2.0) == doctest::Approx(49.0 / 324.0).epsilon(1e-12));

  for (double t : {0.5, 1.0, 2.0}) {
    const auto emp = empirical<int>(
        100000, 113 + static_cast<std::uint64_t>(t * 2), [&](Rng& rng) {
          return sample_rooted_soup(chain, t, rng).loops.empty() ? 1 : 0;
        });
    CHECK(std::abs(emp.freq(1) - empty_soup_prob(chain, t)) < 0.01);
  }
}

TEST_CASE("unrooted soup statistics") {
  const ChainSpec& chain = d3();
  const int s1 = chain.index_of("1"), s2 = chain.index_of("2");
  const Path class_121 = canonical_unrooted({s1, s2, s1}).canonical;

  double count = 0.0;
  Rng rng = derive_stream(121, 0);
  const int reps = 100000;
  for (int i = 0; i < reps; ++i) {
    for (const auto& cls : sample_unrooted_soup(chain, 1.0, rng).classes) {
      if (cls.canonical == class_121) count += 1.0;
    }
  }
  CHECK(count / reps == doctest::Approx(1.0 / 6.0).epsilon(0.06));

  const auto empty2 = empirical<int>(100000, 122, [&](Rng& rng2) {
    return sample_unrooted_soup(chain, 2.0, rng2).classes.empty() ? 1 : 0;
  });
  CHECK(std::abs(empty2.freq(1) - 49.0 / 324.0) < 0.01);

  CHECK(sample_unrooted_soup(chain, 0.0, rng).classes.empty());
}

TEST_CASE("rooted soup agrees with the direct truncated sampler") {
  const ChainSpec& chain = d3();
  const double t = 1.0;
  const int reps = 20000;

  IntensityTable via_ordered, via_direct;
  std::map<std::int64_t, std::int64_t> counts_ordered, counts_direct;
  Rng rng_a = derive_stream(131, 0);
  Rng rng_b = derive_stream(132, 0);
  for (int i = 0; i < reps; ++i) {
    std::map<Path, std::int64_t> real_a, real_b;
    std::int64_t short_a = 0, short_b = 0;
    for (const auto& loop : sample_rooted_soup(chain, t, rng_a).loops) {
      if (path_length(loop) <= 10) ++short_a;
      if (path_length(loop) <= 6) real_a[loop]++;
    }
    for (const auto& loop : sample_rooted_soup_direct(chain, t, 10, rng_b).loops) {
      if (path_length(loop) <= 10) ++short_b;
      if (path_length(loop) <= 6) real_b[loop]++;
    }
    via_ordered.add(real_a);
    via_direct.add(real_b);
    counts_ordered[short_a]++;
    counts_direct[short_b]++;
  }
  via_ordered.finish();
  via_direct.finish();

  CHECK(chi_square_two_sample_pvalue(counts_ordered, counts_direct) > 0.001);
  CHECK(intensities_within_3se(via_ordered, via_direct));

  // Both intensities also match the measure itself on the shortest class.
  const int s1 = chain.index_of("1");
  const double expected = t * loop_measure(chain, {s1, s1}, SoupFlavor::Rooted);
  CHECK(via_ordered.mean.at({s1, s1}) == doctest::Approx(expected).epsilon(0.05));
  CHECK(via_direct.mean.at({s1, s1}) == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("unrooted soup does not depend on the ordering") {
  const ChainSpec& chain = d3();
  const int s1 = chain.index_of("1"), s2 = chain.index_of("2");
  const int reps = 20000;

  IntensityTable fwd, bwd;
  Rng rng_a = derive_stream(141, 0);
  Rng rng_b = derive_stream(142, 0);
  for (int i = 0; i < reps; ++i) {
    std::map<Path, std::int64_t> real_a, real_b;
    for (const auto& cls : sample_unrooted_soup(chain, 1.0, rng_a, {s1, s2}).classes) {
      if (path_length(cls.canonical) <= 6) real_a[cls.canonical]++;
    }
    for (const auto& cls : sample_unrooted_soup(chain, 1.0, rng_b, {s2, s1}).classes) {
      if (path_length(cls.canonical) <= 6) real_b[cls.canonical]++;
    }
    fwd.add(real_a);
    bwd.add(real_b);
  }
  fwd.finish();
  bwd.finish();
  CHECK(intensities_within_3se(fwd, bwd));

  // Root forgetting: class intensity equals J(l) times the per-representative
  // rooted intensity, i.e. t J p / |l|.
  const Path class_121 = canonical_unrooted({s1, s2, s1}).canonical;
  const double expected = loop_measure(chain, class_121, SoupFlavor::Unrooted);
  CHECK(fwd.mean.at(class_121) == doctest::Approx(expected).epsilon(0.1));
}

TEST_CASE("site visit statistics") {
  const ChainSpec& chain = d3();
  const int s1 = chain.index_of("1"), s2 = chain.index_of("2");

  for (double t : {0.5, 1.0, 2.0}) {
    const SiteVisitStats stats = site_visit_stats(chain, s1, s2, t);
    CHECK(stats.visit_prob == doctest::Approx(1.0 - std::pow(0.7, t)).epsilon(1e-12));
    CHECK(stats.expected_count == doctest::Approx(18.0 / 35.0 * t).epsilon(1e-12));
  }
  const SiteVisitStats zero = site_visit_stats(chain, s1, s2, 0.0);
  CHECK(zero.visit_prob == 0.0);
  CHECK(zero.expected_count == 0.0);

  // Monte Carlo cross-check at t = 1 via the growing loop itself.
  const auto visits = empirical<int>(100000, 151, [&](Rng& rng) {
    const Path loop = sample_growing_loop(chain, s1, 1.0, rng).loop;
    for (int v : loop) {
      if (v == s2) return 1;
    }
    return 0;
  });
  CHECK(visits.freq(1) == doctest::Approx(0.3).epsilon(0.035));

  double twos = 0.0;
  Rng rng = derive_stream(152, 0);
  const int reps = 100000;
  for (int i = 0; i < reps; ++i) {
    for (int v : sample_growing_loop(chain, s1, 1.0, rng).loop) {
      if (v == s2) twos += 1.0;
    }
  }
  CHECK(twos / reps == doctest::Approx(18.0 / 35.0).epsilon(0.03));

  // Reverse direction: per hand computation the loop at 2 sees vertex 1
  // with rate coefficient (5/7)(9/10) = 9/14 and avoidance ratio
  // (6/5)/(12/7) = 7/10 again.
  const SiteVisitStats reverse = site_visit_stats(chain, s2, s1, 1.0);
  CHECK(reverse.visit_prob == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(reverse.expected_count == doctest::Approx(9.0 / 14.0).epsilon(1e-12));
  double ones = 0.0;
  for (int i = 0; i < reps; ++i) {
    for (int v : sample_growing_loop(chain, s2, 1.0, rng).loop) {
      if (v == s1) ones += 1.0;
    }
  }
  CHECK(ones / reps == doctest::Approx(9.0 / 14.0).epsilon(0.03));

  CHECK_THROWS_AS(site_visit_stats(chain, s1, s1, 1.0), Error);
}
