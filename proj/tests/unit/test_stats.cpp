#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "loopworks/fixtures.hpp"
#include "loopworks/linops.hpp"
#include "loopworks/stats.hpp"

using namespace loopworks;

TEST_CASE("empirical is deterministic and shards consistently") {
  auto coin = [](Rng& rng) { return uniform01(rng) < 0.5 ? 0 : 1; };

  const auto a = empirical<int>(100000, 99, coin);
  const auto b = empirical<int>(100000, 99, coin);
  CHECK(a.counts == b.counts);

  // Identical counts for any worker count.
  const auto threaded = empirical<int>(100000, 99, coin, 3);
  CHECK(a.counts == threaded.counts);

  // Fair coin: each side within 3 sigma of half.
  CHECK(std::abs(static_cast<double>(a.counts.at(0)) - 50000.0) < 500.0);

  const auto constant = empirical<int>(100, 1, [](Rng&) { return 7; });
  CHECK(constant.counts.at(7) == 100);
}

TEST_CASE("brute force oracle on the demo chain") {
  const ChainSpec chain = fixtures::demo_chain_d3();
  const int s1 = chain.index_of("1");

  const OracleMeasure exits = brute_force_paths(chain, s1, 20, PathPredicate::ExitPaths);
  CHECK(exits.total() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(1.0 - exits.total() <= exits.tail_bound + 1e-12);
  CHECK(exits.entry({s1, chain.index_of("3")}) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  // First-return loop mass approaches f_1 = 8/15.
  const OracleMeasure first = brute_force_paths(chain, s1, 20, PathPredicate::FirstReturnAt, s1);
  CHECK(std::abs(first.total() - 8.0 / 15.0) <= first.tail_bound + 1e-12);
  CHECK(first.total() == doctest::Approx(8.0 / 15.0).epsilon(1e-4));

  // Horizon 0 sees only the trivial path.
  const OracleMeasure trivial = brute_force_paths(chain, s1, 0, PathPredicate::LoopsAt, s1);
  CHECK(trivial.entries.size() == 1);
  CHECK(trivial.entry({s1}) == 1.0);
}

TEST_CASE("oracle matches closed forms within its tail bound") {
  for (const ChainSpec& chain : {fixtures::demo_chain_d3(), fixtures::grid_chain(2, 2)}) {
    const PoissonKernel kernel = poisson_kernel(chain);
    for (int x : chain.interior()) {
      // Loop mass at x adds up to the Green's diagonal.
      const OracleMeasure loops = brute_force_paths(chain, x, 14, PathPredicate::LoopsAt, x);
      const int xp = chain.interior_pos(x);
      const double g_diag = chain.greens().column(xp)(xp);
      CHECK(std::abs(loops.total() - g_diag) <= loops.tail_bound + 1e-10);

      // First-return mass is f_x.
      const OracleMeasure first =
          brute_force_paths(chain, x, 14, PathPredicate::FirstReturnAt, x);
      const double f_x = 1.0 - 1.0 / g_diag;
      CHECK(std::abs(first.total() - f_x) <= first.tail_bound + 1e-10);

      // Exit mass per boundary point matches the Poisson kernel row.
      const OracleMeasure exits = brute_force_paths(chain, x, 14, PathPredicate::ExitPaths);
      std::map<int, double> per_exit;
      for (const auto& [path, w] : exits.entries) per_exit[path.back()] += w;
      for (int z : chain.boundary()) {
        CHECK(std::abs(per_exit[z] - kernel.entry(chain, x, z)) <=
              exits.tail_bound + 1e-10);
      }
    }

    // F_V(A) as a product of oracle-derived first-return masses over
    // shrinking domains.
    double oracle_f = 1.0;
    double slack = 0.0;
    std::vector<int> removed;
    for (int x : chain.interior()) {
      const ChainSpec domain = removed.empty() ? chain : restrict_interior(chain, removed);
      const OracleMeasure first =
          brute_force_paths(domain, domain.index_of(chain.label(x)), 16,
                            PathPredicate::FirstReturnAt);
      oracle_f *= 1.0 / (1.0 - first.total());
      slack += first.tail_bound * 50.0;  // crude propagation through the product
      removed.push_back(x);
    }
    CHECK(std::abs(oracle_f - f_v(chain, chain.interior())) <= slack + 1e-9);
  }
}

TEST_CASE("total variation comparisons") {
  EmpiricalDist<int> emp;
  emp.n = 100;
  emp.counts[0] = 50;
  emp.counts[1] = 50;
  CHECK(total_variation(emp, {{0, 0.5}, {1, 0.5}}) == doctest::Approx(0.0));

  // Deliberately wrong reference: TV = |5/7 - 1/2| = 3/14.
  EmpiricalDist<int> lerw;
  lerw.n = 14000000;
  lerw.counts[0] = 10000000;  // 5/7
  lerw.counts[1] = 4000000;   // 2/7
  CHECK(total_variation(lerw, {{0, 0.5}, {1, 0.5}}) == doctest::Approx(3.0 / 14.0).epsilon(1e-9));

  const auto result = compare<int>("wrong-reference", lerw, {{0, 0.5}, {1, 0.5}},
                                   CompareMethod::TV, 0.01);
  CHECK(!result.pass);
}

TEST_CASE("chi-square survival values") {
  // Classic table entries.
  CHECK(chi2_sf(3.841, 1.0) == doctest::Approx(0.05).epsilon(0.001));
  CHECK(chi2_sf(16.919, 9.0) == doctest::Approx(0.05).epsilon(0.001));
  CHECK(chi2_sf(2.706, 1.0) == doctest::Approx(0.10).epsilon(0.001));
  CHECK(chi2_sf(0.0, 5.0) == 1.0);
}

TEST_CASE("kolmogorov survival values") {
  CHECK(kolmogorov_sf(1.36) == doctest::Approx(0.049).epsilon(0.02));
  CHECK(kolmogorov_sf(0.5) > 0.95);
  CHECK(kolmogorov_sf(2.5) < 1e-4);
}

TEST_CASE("ks test accepts exponential samples and rejects shifted ones") {
  Rng rng = derive_stream(77, 0);
  std::vector<double> samples;
  for (int i = 0; i < 100000; ++i) samples.push_back(sample_exponential(rng, 1.0));
  const auto cdf = [](double s) { return 1.0 - std::exp(-s); };
  CHECK(ks_pvalue(samples, cdf) > 0.001);

  std::vector<double> wrong;
  for (double s : samples) wrong.push_back(s * 1.1);
  CHECK(ks_pvalue(wrong, cdf) < 1e-6);
}

TEST_CASE("chi-square goodness of fit is calibrated under the null") {
  // 500 repeated harness runs at threshold 0.001 should essentially never
  // reject: allowed failure rate 0.002 means at most one rejection.
  const std::map<int, double> fair{{0, 0.25}, {1, 0.25}, {2, 0.25}, {3, 0.25}};
  int rejections = 0;
  for (int run = 0; run < 500; ++run) {
    const auto emp = empirical<int>(1000, 1000 + static_cast<std::uint64_t>(run),
                                    [](Rng& rng) { return static_cast<int>(uniform01(rng) * 4.0); });
    if (chi_square_pvalue(emp, fair) < 0.001) ++rejections;
  }
  CHECK(rejections <= 1);
}

TEST_CASE("two-sample chi-square distinguishes distributions") {
  Rng rng = derive_stream(78, 0);
  std::map<int, std::int64_t> a, b, c;
  for (int i = 0; i < 20000; ++i) {
    a[static_cast<int>(uniform01(rng) * 4.0)]++;
    b[static_cast<int>(uniform01(rng) * 4.0)]++;
    c[static_cast<int>(std::min(3.0, uniform01(rng) * 5.0))]++;  // skewed toward 3
  }
  CHECK(chi_square_two_sample_pvalue(a, b) > 0.001);
  CHECK(chi_square_two_sample_pvalue(a, c) < 1e-6);
}

TEST_CASE("oracle guards") {
  const ChainSpec chain = fixtures::demo_chain_d3();
  CHECK_THROWS_AS(brute_force_paths(chain, 0, 26, PathPredicate::ExitPaths), Error);
}
