#include "loopworks/acceptance.hpp"

#include <cmath>
#include <map>
#include <ostream>

#include "loopworks/fixtures.hpp"
#include "loopworks/lerw.hpp"
#include "loopworks/linops.hpp"
#include "loopworks/soup.hpp"
#include "loopworks/wilson.hpp"

namespace loopworks {

namespace {

struct Criterion {
  CriterionResult result;
  std::uint64_t seed = 0;
  std::uint64_t next_stream = 0;

  Criterion(int id, std::string name, std::uint64_t master_seed) {
    result.id = id;
    result.name = std::move(name);
    std::uint64_t s = master_seed + static_cast<std::uint64_t>(id) * 0x9e3779b97f4a7c15ULL;
    seed = splitmix64(s);
  }

  std::uint64_t stream() { return seed + (next_stream++); }

  void exact(const std::string& name, double measured, double expected, double tol,
             std::int64_t n = 0) {
    CheckResult check;
    check.name = name;
    check.statistic = std::abs(measured - expected);
    check.threshold = tol;
    check.pass = check.statistic < tol;
    check.n = n;
    check.seed = seed;
    result.pass = result.pass && check.pass;
    result.checks.push_back(std::move(check));
  }

  void relative(const std::string& name, double measured, double expected, double tol) {
    CheckResult check;
    check.name = name;
    check.statistic = std::abs(measured - expected) / std::max(std::abs(expected), 1e-300);
    check.threshold = tol;
    check.pass = check.statistic < tol;
    check.seed = seed;
    result.pass = result.pass && check.pass;
    result.checks.push_back(std::move(check));
  }

  void require(const std::string& name, bool pass, double statistic = 0.0,
               double threshold = 0.0) {
    CheckResult check;
    check.name = name;
    check.statistic = statistic;
    check.threshold = threshold;
    check.pass = pass;
    check.seed = seed;
    result.pass = result.pass && pass;
    result.checks.push_back(std::move(check));
  }

  void p_value(const std::string& name, double p, double alpha, std::int64_t n) {
    CheckResult check;
    check.name = name;
    check.statistic = p;
    check.threshold = alpha;
    check.pass = p > alpha;
    check.n = n;
    check.seed = seed;
    result.pass = result.pass && check.pass;
    result.checks.push_back(std::move(check));
  }
};

void report(std::ostream& log, const CriterionResult& result) {
  int passed = 0;
  for (const auto& check : result.checks) passed += check.pass ? 1 : 0;
  log << (result.pass ? "[PASS] " : "[FAIL] ") << result.id << ". " << result.name << " ("
      << passed << "/" << result.checks.size() << " checks)\n";
  for (const auto& check : result.checks) {
    if (!check.pass) {
      log << "       failed: " << check.name << "  statistic=" << check.statistic
          << "  threshold=" << check.threshold << "\n";
    }
  }
  log.flush();
}

// 1. Demo-chain closed forms, exact to 1e-12.
CriterionResult closed_forms(std::uint64_t master) {
  Criterion c(1, "demo-chain closed forms", master);
  const ChainSpec chain = fixtures::demo_chain_d3();
  const int s1 = chain.index_of("1"), s2 = chain.index_of("2");
  const double tol = 1e-12;

  c.exact("f_1", elementary_mass(chain, s1), 8.0 / 15.0, tol);
  c.exact("f_2", elementary_mass(chain, s2), 5.0 / 12.0, tol);

  const GreensBundle bundle = greens_bundle(chain);
  c.exact("G(1,1)", bundle.greens(0, 0), 15.0 / 7.0, tol);
  c.exact("G(2,2)", bundle.greens(1, 1), 12.0 / 7.0, tol);

  c.exact("P{l_1 trivial at 1}", growing_loop_pmf(chain, s1, 1.0, {s1}), 7.0 / 15.0, tol);
  c.exact("P{l_1 trivial at 2}", growing_loop_pmf(chain, s2, 1.0, {s2}), 7.0 / 12.0, tol);

  const double len2_x1 = growing_loop_pmf(chain, s1, 1.0, {s1, s1, s1}) +
                         growing_loop_pmf(chain, s1, 1.0, {s1, s2, s1});
  const double len2_x2 = growing_loop_pmf(chain, s2, 1.0, {s2, s2, s2}) +
                         growing_loop_pmf(chain, s2, 1.0, {s2, s1, s2});
  c.exact("P{|l_1|=2 at 1}", len2_x1, 7.0 / 54.0, tol);
  c.exact("P{|l_1|=2 at 2}", len2_x2, 49.0 / 432.0, tol);

  for (double t : {0.5, 1.0, 2.0}) {
    const SiteVisitStats stats = site_visit_stats(chain, s1, s2, t);
    c.exact("visit prob t=" + std::to_string(t), stats.visit_prob,
            1.0 - std::pow(0.7, t), tol);
    c.exact("expected count t=" + std::to_string(t), stats.expected_count,
            18.0 / 35.0 * t, tol);
  }
  return c.result;
}

// 2. Growing-loop ratio limits at the pinned times.
CriterionResult ratio_limits(std::uint64_t master) {
  Criterion c(2, "growing-loop length-2 ratio limits", master);
  const ChainSpec chain = fixtures::demo_chain_d3();
  for (const char* label : {"1", "2"}) {
    const int x = chain.index_of(label);
    c.exact(std::string("ratio x=") + label + " t=1e-4",
            growing_loop_length2_ratio(chain, x, 1e-4), 0.25, 0.01);
    c.exact(std::string("ratio x=") + label + " t=200",
            growing_loop_length2_ratio(chain, x, 200.0), 1.0, 0.01);
  }
  return c.result;
}

// 3. Exact LERW distribution and the sampler against it.
CriterionResult lerw_exactness(std::uint64_t master) {
  Criterion c(3, "loop-erased walk exact distribution", master);
  const ChainSpec chain = fixtures::demo_chain_d3();
  const int s1 = chain.index_of("1"), s2 = chain.index_of("2"), s3 = chain.index_of("3");

  const LerwDistribution from1 = enumerate_lerw(chain, s1);
  c.exact("p([1,3])", from1.prob_of({s1, s3}), 5.0 / 7.0, 1e-12);
  c.exact("p([1,2,3])", from1.prob_of({s1, s2, s3}), 2.0 / 7.0, 1e-12);
  const LerwDistribution from2 = enumerate_lerw(chain, s2);
  c.exact("p([2,3])", from2.prob_of({s2, s3}), 4.0 / 7.0, 1e-12);
  c.exact("p([2,1,3])", from2.prob_of({s2, s1, s3}), 3.0 / 7.0, 1e-12);

  const PoissonKernel kernel = poisson_kernel(chain);
  c.exact("total from 1 = H_A(1,3)", from1.total_to(s3), kernel.entry(chain, s1, s3), 1e-10);
  c.exact("total from 2 = H_A(2,3)", from2.total_to(s3), kernel.entry(chain, s2, s3), 1e-10);

  for (const auto& [label, start, dist] :
       {std::make_tuple("1", s1, &from1), std::make_tuple("2", s2, &from2)}) {
    std::map<Path, double> exact;
    for (const auto& [saw, p] : dist->entries) exact[saw] = p;
    const auto emp = empirical<Path>(100000, c.stream(), [&chain, start](Rng& rng) {
      return sample_lerw(chain, start, rng).saw;
    });
    const double tv = total_variation(emp, exact);
    c.require(std::string("sampler TV < 0.01 at N=1e5 from ") + label, tv < 0.01, tv, 0.01);
  }
  return c.result;
}

// 4. The Laplacian walk generates the LERW law step by step.
CriterionResult laplacian_walk_equivalence(std::uint64_t master) {
  Criterion c(4, "Laplacian-walk step products equal LERW", master);
  for (const ChainSpec& chain : {fixtures::demo_chain_d3(), fixtures::grid_chain(2, 2)}) {
    double worst = 0.0;
    int saws = 0;
    for (int start : chain.interior()) {
      for (const auto& [saw, p_hat] : enumerate_lerw(chain, start).entries) {
        double product = 1.0;
        Path prefix{saw.front()};
        for (std::size_t i = 1; i < saw.size(); ++i) {
          double step_p = 0.0;
          for (const auto& [y, p] : laplacian_walk_step(chain, prefix, chain.boundary())) {
            if (y == saw[i]) step_p = p;
          }
          product *= step_p;
          prefix.push_back(saw[i]);
        }
        worst = std::max(worst, std::abs(product - p_hat));
        ++saws;
      }
    }
    c.require("max |product - p_hat| over " + std::to_string(saws) + " walks (" +
                  std::to_string(chain.n_interior()) + " interior states)",
              worst < 1e-9, worst, 1e-9);
  }
  return c.result;
}

// 5. Decorating the LERW with loops reproduces the chain's exit law.
CriterionResult reconstruction(std::uint64_t master) {
  Criterion c(5, "loop decoration reconstructs the exit law", master);
  const ChainSpec chain = fixtures::demo_chain_d3();
  const int s1 = chain.index_of("1");

  const OracleMeasure oracle = brute_force_paths(chain, s1, 6, PathPredicate::ExitPaths);
  std::map<Path, double> exact;
  for (const auto& [path, w] : oracle.entries) {
    if (path_length(path) <= 6) exact[path] = w;
  }
  const auto decorated = empirical<Path>(100000, c.stream(), [&](Rng& rng) {
    const LerwSample sample = sample_lerw(chain, s1, rng);
    return decorate_with_loops(chain, sample.saw, rng);
  });
  const double tv = total_variation(decorated, exact);
  c.require("TV(decorated, direct) < 0.015 at N=1e5", tv < 0.015, tv, 0.015);
  return c.result;
}

// 6. Matrix-tree counting against enumeration and the complete-graph formula.
CriterionResult matrix_tree(std::uint64_t master) {
  Criterion c(6, "matrix-tree counts", master);
  const std::vector<Graph> graphs = {
      fixtures::complete_graph(3), fixtures::complete_graph(4), fixtures::cycle_graph(4),
      fixtures::cycle_graph(6),    fixtures::grid_graph(2, 3),  fixtures::path_graph(5),
      fixtures::random_connected_graph()};
  for (const Graph& graph : graphs) {
    const auto trees = enumerate_spanning_trees(graph);
    const std::int64_t counted = count_spanning_trees(graph, 0);
    c.require("count = enumeration on " + std::to_string(graph.n_vertices()) +
                  "-vertex graph (" + std::to_string(trees.size()) + " trees)",
              counted == static_cast<std::int64_t>(trees.size()),
              static_cast<double>(counted), static_cast<double>(trees.size()));
  }
  for (int n_plus_1 = 2; n_plus_1 <= 7; ++n_plus_1) {
    const std::int64_t expected =
        static_cast<std::int64_t>(std::llround(std::pow(n_plus_1, n_plus_1 - 2)));
    const std::int64_t counted = count_spanning_trees(fixtures::complete_graph(n_plus_1), 0);
    c.require("complete graph on " + std::to_string(n_plus_1) + " vertices",
              counted == expected, static_cast<double>(counted),
              static_cast<double>(expected));
  }
  return c.result;
}

// 7. Wilson sampling is uniform and ordering independent.
CriterionResult wilson_uniformity(std::uint64_t master) {
  Criterion c(7, "Wilson uniformity and ordering invariance", master);
  const std::pair<const char*, Graph> cases[] = {
      {"K4", fixtures::complete_graph(4)}, {"2x3 grid", fixtures::grid_graph(2, 3)}};
  for (const auto& [label, graph] : cases) {
    const auto trees = enumerate_spanning_trees(graph);
    std::map<std::string, double> uniform;
    for (const auto& tree : trees) {
      uniform[tree_key(tree)] = 1.0 / static_cast<double>(trees.size());
    }
    std::vector<int> forward, backward;
    for (int v = 1; v < graph.n_vertices(); ++v) forward.push_back(v);
    backward.assign(forward.rbegin(), forward.rend());

    for (const auto& [order_label, order] :
         {std::make_pair("forward", forward), std::make_pair("backward", backward)}) {
      const Graph* g = &graph;
      const std::vector<int>* ord = &order;
      const auto emp = empirical<std::string>(100000, c.stream(), [g, ord](Rng& rng) {
        return tree_key(wilson_ust(*g, 0, *ord, rng));
      });
      c.p_value(std::string(label) + " uniform chi-square, " + order_label + " ordering",
                chi_square_pvalue(emp, uniform), 0.001, emp.n);
    }
  }
  return c.result;
}

// 8. F_V is permutation invariant and a determinant ratio.
CriterionResult f_v_properties(std::uint64_t master) {
  Criterion c(8, "F_V permutation invariance and determinant ratio", master);
  for (const ChainSpec& chain : fixtures::linops_fixtures()) {
    if (chain.n_interior() > 5) continue;
    const GreensBundle bundle = greens_bundle(chain);
    double worst_perm = 0.0, worst_ratio = 0.0;
    const std::size_t n = chain.interior().size();
    for (std::size_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<int> subset;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) subset.push_back(chain.interior()[i]);
      }
      const double reference = f_v(chain, subset);
      std::vector<int> perm = subset;
      std::sort(perm.begin(), perm.end());
      do {
        worst_perm = std::max(worst_perm, std::abs(f_v_ordered(chain, perm) - reference) /
                                              std::max(reference, 1e-300));
      } while (std::next_permutation(perm.begin(), perm.end()));

      const ChainSpec rest = subset.empty() ? chain : restrict_interior(chain, subset);
      const double det_identity = reference * rest.greens().det_greens();
      worst_ratio = std::max(worst_ratio,
                             std::abs(det_identity - bundle.det_greens) / bundle.det_greens);
    }
    c.require("permutation invariance, |A|=" + std::to_string(n), worst_perm < 1e-10,
              worst_perm, 1e-10);
    c.require("det ratio, |A|=" + std::to_string(n), worst_ratio < 1e-9, worst_ratio, 1e-9);
  }
  return c.result;
}

// 9. Induced-chain Green's functions restrict G_A.
CriterionResult induced_chain_identity(std::uint64_t master) {
  Criterion c(9, "induced-chain restriction identity", master);
  for (const ChainSpec& chain : fixtures::linops_fixtures()) {
    const GreensBundle bundle = greens_bundle(chain);
    double worst = 0.0;
    const std::size_t n = chain.interior().size();
    for (std::size_t mask = 1; mask < (1u << n); ++mask) {
      std::vector<int> subset;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) subset.push_back(chain.interior()[i]);
      }
      const InducedChain induced = induced_chain(chain, subset);
      for (std::size_t i = 0; i < subset.size(); ++i) {
        for (std::size_t j = 0; j < subset.size(); ++j) {
          worst = std::max(worst, std::abs(induced.g_tilde(static_cast<Eigen::Index>(i),
                                                           static_cast<Eigen::Index>(j)) -
                                           bundle.greens(chain.interior_pos(subset[i]),
                                                         chain.interior_pos(subset[j]))));
        }
      }
    }
    c.require("max restriction error, |A|=" + std::to_string(n), worst < 1e-10, worst, 1e-10);
  }
  return c.result;
}

// 10. Loop-measure totals and the empty-soup probability.
CriterionResult soup_totals(std::uint64_t master) {
  Criterion c(10, "loop-measure totals and empty-soup probability", master);
  const ChainSpec chain = fixtures::demo_chain_d3();
  const double target = chain.greens().log_det_greens();

  for (const auto& [label, flavor] : {std::make_pair("rooted", SoupFlavor::Rooted),
                                      std::make_pair("unrooted", SoupFlavor::Unrooted),
                                      std::make_pair("ordered", SoupFlavor::Ordered)}) {
    const MeasureTotal total = measure_total(chain, flavor, 20);
    c.exact(std::string(label) + " total at length 20", total.partial_sum, target, 1e-4);
  }

  for (double t : {0.5, 1.0, 2.0}) {
    const auto emp = empirical<int>(100000, c.stream(), [&chain, t](Rng& rng) {
      return sample_rooted_soup(chain, t, rng).loops.empty() ? 1 : 0;
    });
    c.exact("empirical P{empty} at t=" + std::to_string(t), emp.freq(1),
            empty_soup_prob(chain, t), 0.01, emp.n);
  }
  return c.result;
}

namespace soup_equivalence {

struct Intensities {
  std::map<Path, double> mean;
  std::map<Path, double> second_moment;
  std::int64_t n = 0;
};

template <class Realize>
Intensities collect(std::int64_t reps, std::uint64_t seed, Realize&& realize) {
  Intensities table;
  Rng rng = derive_stream(seed, 0);
  for (std::int64_t i = 0; i < reps; ++i) {
    std::map<Path, std::int64_t> counts = realize(rng);
    table.n++;
    for (const auto& [key, count] : counts) {
      table.mean[key] += static_cast<double>(count);
      table.second_moment[key] += static_cast<double>(count) * static_cast<double>(count);
    }
  }
  for (auto& [key, sum] : table.mean) sum /= static_cast<double>(table.n);
  return table;
}

double worst_z(const Intensities& a, const Intensities& b) {
  std::map<Path, char> keys;
  for (const auto& [key, m] : a.mean) keys[key] = 1;
  for (const auto& [key, m] : b.mean) keys[key] = 1;
  double worst = 0.0;
  for (const auto& [key, unused] : keys) {
    const double ma = a.mean.count(key) ? a.mean.at(key) : 0.0;
    const double mb = b.mean.count(key) ? b.mean.at(key) : 0.0;
    const double va = (a.second_moment.count(key) ? a.second_moment.at(key) : 0.0) /
                          static_cast<double>(a.n) - ma * ma;
    const double vb = (b.second_moment.count(key) ? b.second_moment.at(key) : 0.0) /
                          static_cast<double>(b.n) - mb * mb;
    const double se = std::sqrt(std::max(va, 0.0) / static_cast<double>(a.n) +
                                std::max(vb, 0.0) / static_cast<double>(b.n));
    if (se == 0.0) continue;
    worst = std::max(worst, std::abs(ma - mb) / se);
  }
  return worst;
}

}  // namespace soup_equivalence

// 11. The ordered-construction soup equals the direct Poisson soup, and the
// unrooted soup forgets the ordering.
CriterionResult construction_equivalence(std::uint64_t master) {
  using soup_equivalence::collect;
  using soup_equivalence::worst_z;
  Criterion c(11, "soup construction equivalence", master);
  const ChainSpec chain = fixtures::demo_chain_d3();
  const std::int64_t reps = 20000;

  const auto via_ordered = collect(reps, c.stream(), [&](Rng& rng) {
    std::map<Path, std::int64_t> counts;
    for (const auto& loop : sample_rooted_soup(chain, 1.0, rng).loops) {
      if (path_length(loop) <= 6) counts[loop]++;
    }
    return counts;
  });
  const auto via_direct = collect(reps, c.stream(), [&](Rng& rng) {
    std::map<Path, std::int64_t> counts;
    for (const auto& loop : sample_rooted_soup_direct(chain, 1.0, 10, rng).loops) {
      if (path_length(loop) <= 6) counts[loop]++;
    }
    return counts;
  });
  const double z_rooted = worst_z(via_ordered, via_direct);
  c.require("rooted per-class intensities within 3 SE", z_rooted <= 3.0, z_rooted, 3.0);

  // Law of the short-loop total count across the two constructions.
  std::map<std::int64_t, std::int64_t> count_a, count_b;
  {
    Rng rng = derive_stream(c.stream(), 0);
    for (std::int64_t i = 0; i < reps; ++i) {
      std::int64_t total = 0;
      for (const auto& loop : sample_rooted_soup(chain, 1.0, rng).loops) {
        if (path_length(loop) <= 10) ++total;
      }
      count_a[total]++;
    }
    for (std::int64_t i = 0; i < reps; ++i) {
      count_b[static_cast<std::int64_t>(
          sample_rooted_soup_direct(chain, 1.0, 10, rng).loops.size())]++;
    }
  }
  c.p_value("short-loop count law, two-sample chi-square",
            chi_square_two_sample_pvalue(count_a, count_b), 0.001, reps);

  const int s1 = chain.index_of("1"), s2 = chain.index_of("2");
  const auto fwd = collect(reps, c.stream(), [&](Rng& rng) {
    std::map<Path, std::int64_t> counts;
    for (const auto& cls : sample_unrooted_soup(chain, 1.0, rng, {s1, s2}).classes) {
      if (path_length(cls.canonical) <= 6) counts[cls.canonical]++;
    }
    return counts;
  });
  const auto bwd = collect(reps, c.stream(), [&](Rng& rng) {
    std::map<Path, std::int64_t> counts;
    for (const auto& cls : sample_unrooted_soup(chain, 1.0, rng, {s2, s1}).classes) {
      if (path_length(cls.canonical) <= 6) counts[cls.canonical]++;
    }
    return counts;
  });
  const double z_order = worst_z(fwd, bwd);
  c.require("unrooted intensities ordering independent within 3 SE", z_order <= 3.0,
            z_order, 3.0);
  return c.result;
}

// 12. Binary-tree Green's values under depth-12 truncation.
CriterionResult binary_tree_greens(std::uint64_t master) {
  Criterion c(12, "binary-tree Green's values at depth 12", master);
  const ChainSpec tree = build_binary_tree_chain(12);
  const int root = tree.interior_pos(tree.index_of(""));
  const Vector to_root = tree.greens().column(root);  // G(., root)
  const Vector from_root = tree.greens().row(root);   // G(root, .)

  c.exact("G(root, root)", to_root(root), 2.0, 0.01);
  for (const std::string& b : {"0", "01", "010"}) {
    const int pos = tree.interior_pos(tree.index_of(b));
    const double scale = std::pow(0.5, static_cast<double>(b.size()));
    c.exact("G(" + b + ", root)", to_root(pos), 2.0 * scale, 0.01);
    c.exact("G(root, " + b + ")", from_root(pos), 3.0 * scale, 0.01);
  }
  return c.result;
}

// 13. Integer-walk return asymptotics and classification.
CriterionResult walk_asymptotics(std::uint64_t master) {
  Criterion c(13, "integer-walk return asymptotics", master);
  const double m = 1e4;
  const double p = nn_walk_return_prob(0.5, 20000);
  c.exact("sqrt(pi m) p_{2m} at m=1e4", std::sqrt(M_PI * m) * p, 1.0, 0.01);
  c.require("q=1/2 recurrent", classify_nn_walk(0.5) == WalkClass::Recurrent);
  c.require("q=0.6 transient", classify_nn_walk(0.6) == WalkClass::Transient);
  c.require("q=1/2+1e-16 within tolerance",
            classify_nn_walk(0.5 + 1e-16) == WalkClass::Recurrent);
  return c.result;
}

// 14. Continuous-time embedding: exponential holding and rate additivity.
CriterionResult ctmc_embedding(std::uint64_t master) {
  Criterion c(14, "continuous-time embedding", master);
  const ChainSpec chain = fixtures::demo_chain_d3();
  const int x = chain.index_of("1");
  const std::vector<double> rates(3, 1.0);

  std::vector<double> holdings;
  holdings.reserve(100000);
  {
    Rng rng = derive_stream(c.stream(), 0);
    for (int i = 0; i < 100000; ++i) {
      holdings.push_back(sample_ctmc_jump(chain, rates, x, rng).holding_time);
    }
  }
  c.p_value("KS of holding times vs exp(1)",
            ks_pvalue(holdings, [](double s) { return 1.0 - std::exp(-s); }), 0.001, 100000);

  // Min of exp(1), exp(2), exp(3) fits rate 6 within 2%.
  Rng r1 = derive_stream(c.stream(), 0);
  Rng r2 = derive_stream(c.stream(), 0);
  Rng r3 = derive_stream(c.stream(), 0);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    sum += std::min({sample_exponential(r1, 1.0), sample_exponential(r2, 2.0),
                     sample_exponential(r3, 3.0)});
  }
  const double fitted = static_cast<double>(n) / sum;
  c.relative("fitted minimum rate vs 6", fitted, 6.0, 0.02);
  return c.result;
}

}  // namespace

std::vector<CriterionResult> run_acceptance_suite(std::uint64_t seed, std::ostream& log) {
  std::vector<CriterionResult> results;
  const auto run = [&](CriterionResult (*criterion)(std::uint64_t)) {
    results.push_back(criterion(seed));
    report(log, results.back());
  };
  run(closed_forms);
  run(ratio_limits);
  run(lerw_exactness);
  run(laplacian_walk_equivalence);
  run(reconstruction);
  run(matrix_tree);
  run(wilson_uniformity);
  run(f_v_properties);
  run(induced_chain_identity);
  run(soup_totals);
  run(construction_equivalence);
  run(binary_tree_greens);
  run(walk_asymptotics);
  run(ctmc_embedding);
  return results;
}

bool all_pass(const std::vector<CriterionResult>& results) {
  for (const auto& result : results) {
    if (!result.pass) return false;
  }
  return true;
}

}  // namespace loopworks
