#ifndef LOOPWORKS_STATS_HPP
#define LOOPWORKS_STATS_HPP

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "loopworks/chain.hpp"
#include "loopworks/rng.hpp"

namespace loopworks {

// Worker cap from LOOPWORKS_THREADS; defaults to 1.
int harness_threads();

// Counted outcomes of N reproducible draws. The same (seed, N) pair replays
// to identical counts regardless of the worker count: draws are split into
// fixed-size shards, shard i always uses stream (seed, i), and counts merge
// additively.
template <class Key>
struct EmpiricalDist {
  std::map<Key, std::int64_t> counts;
  std::int64_t n = 0;
  std::uint64_t seed = 0;

  double freq(const Key& key) const {
    auto it = counts.find(key);
    return it == counts.end() ? 0.0
                              : static_cast<double>(it->second) / static_cast<double>(n);
  }
};

inline constexpr std::int64_t kEmpiricalShard = 8192;

template <class Key, class Sampler>
EmpiricalDist<Key> empirical(std::int64_t n, std::uint64_t seed, Sampler&& draw,
                             int threads = 0) {
  if (n <= 0) fail(ErrorCode::DomainError, "N must be positive");
  if (threads <= 0) threads = harness_threads();
  const std::int64_t shards = (n + kEmpiricalShard - 1) / kEmpiricalShard;
  threads = static_cast<int>(std::min<std::int64_t>(threads, shards));

  std::vector<std::map<Key, std::int64_t>> partial(static_cast<std::size_t>(threads));
  std::atomic<std::int64_t> next_shard{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  auto work = [&](int worker) {
    auto& local = partial[static_cast<std::size_t>(worker)];
    for (;;) {
      const std::int64_t shard = next_shard.fetch_add(1);
      if (shard >= shards) return;
      Rng rng = derive_stream(seed, static_cast<std::uint64_t>(shard));
      const std::int64_t begin = shard * kEmpiricalShard;
      const std::int64_t count = std::min(kEmpiricalShard, n - begin);
      for (std::int64_t i = 0; i < count; ++i) local[draw(rng)]++;
    }
  };

  if (threads == 1) {
    work(0);
  } else {
    auto guarded = [&](int worker) {
      try {
        work(worker);
      } catch (...) {
        std::lock_guard<std::mutex> hold(failure_lock);
        if (!failure) failure = std::current_exception();
        next_shard.store(shards);  // drain remaining work
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(guarded, w);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  EmpiricalDist<Key> dist;
  dist.n = n;
  dist.seed = seed;
  for (const auto& local : partial) {
    for (const auto& [key, count] : local) dist.counts[key] += count;
  }
  return dist;
}

// Exact path weights from exhaustive enumeration, plus an upper bound on the
// mass the horizon cut off. Backs the closed-form checks.
struct OracleMeasure {
  std::map<Path, double> entries;
  int horizon = 0;
  double tail_bound = 0.0;

  double total() const;
  double entry(const Path& path) const;
};

enum class PathPredicate {
  ExitPaths,        // record when the walk leaves A; cemetery key appends -1
  LoopsAt,          // every return to the site, branches stay in A
  FirstReturnAt,    // stop each branch at its first return to the site
};

OracleMeasure brute_force_paths(const ChainSpec& chain, int start, int horizon,
                                PathPredicate predicate, int site = -1);

// Statistical comparison of an empirical distribution against an exact one.
// Mass not covered by `exact` keys is treated as an implicit "other" bucket.
enum class CompareMethod { TV, ChiSquare, KS };

struct CheckResult {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::int64_t n = 0;
  std::uint64_t seed = 0;
};

template <class Key>
double total_variation(const EmpiricalDist<Key>& emp, const std::map<Key, double>& exact) {
  double exact_covered = 0.0, emp_covered = 0.0, tv = 0.0;
  for (const auto& [key, p] : exact) {
    tv += std::abs(emp.freq(key) - p);
    exact_covered += p;
    auto it = emp.counts.find(key);
    if (it != emp.counts.end()) {
      emp_covered += static_cast<double>(it->second) / static_cast<double>(emp.n);
    }
  }
  tv += std::abs((1.0 - emp_covered) - (1.0 - exact_covered));
  return 0.5 * tv;
}

double chi_square_pvalue_from_cells(const std::vector<std::pair<std::int64_t, double>>& cells,
                                    std::int64_t n);

// Pools cells with expected count below 5 (together with the implicit
// "other" bucket) before computing the statistic.
template <class Key>
double chi_square_pvalue(const EmpiricalDist<Key>& emp, const std::map<Key, double>& exact) {
  std::vector<std::pair<std::int64_t, double>> cells;
  std::int64_t other_count = emp.n;
  double other_mass = 1.0;
  for (const auto& [key, p] : exact) {
    std::int64_t c = 0;
    auto it = emp.counts.find(key);
    if (it != emp.counts.end()) c = it->second;
    cells.emplace_back(c, p);
    other_count -= c;
    other_mass -= p;
  }
  if (other_mass > 1e-15 || other_count > 0) {
    cells.emplace_back(other_count, std::max(other_mass, 0.0));
  }
  return chi_square_pvalue_from_cells(cells, emp.n);
}

// Two-sample chi-square over shared keys (homogeneity test).
template <class Key>
double chi_square_two_sample_pvalue(const std::map<Key, std::int64_t>& a,
                                    const std::map<Key, std::int64_t>& b);

// One-sample Kolmogorov-Smirnov p-value against a continuous CDF.
double ks_pvalue(std::vector<double> samples, const std::function<double(double)>& cdf);

// Upper tail of the chi-square distribution (regularized incomplete gamma).
double chi2_sf(double statistic, double dof);
// Kolmogorov distribution tail Q_KS(lambda).
double kolmogorov_sf(double lambda);
double regularized_gamma_q(double a, double x);

template <class Key>
CheckResult compare(const std::string& name, const EmpiricalDist<Key>& emp,
                    const std::map<Key, double>& exact, CompareMethod method,
                    double threshold) {
  if (emp.n <= 0 || (emp.counts.empty() && exact.empty())) {
    fail(ErrorCode::EmptyDistribution, "nothing to compare");
  }
  CheckResult result;
  result.name = name;
  result.threshold = threshold;
  result.n = emp.n;
  result.seed = emp.seed;
  switch (method) {
    case CompareMethod::TV:
      result.statistic = total_variation(emp, exact);
      result.pass = result.statistic < threshold;
      break;
    case CompareMethod::ChiSquare:
      result.statistic = chi_square_pvalue(emp, exact);
      result.pass = result.statistic > threshold;
      break;
    case CompareMethod::KS:
      fail(ErrorCode::DomainError, "KS comparison takes real-valued samples; use ks_pvalue");
  }
  return result;
}

template <class Key>
double chi_square_two_sample_pvalue(const std::map<Key, std::int64_t>& a,
                                    const std::map<Key, std::int64_t>& b) {
  std::map<Key, std::pair<std::int64_t, std::int64_t>> merged;
  std::int64_t na = 0, nb = 0;
  for (const auto& [key, c] : a) {
    merged[key].first += c;
    na += c;
  }
  for (const auto& [key, c] : b) {
    merged[key].second += c;
    nb += c;
  }
  if (na == 0 || nb == 0) fail(ErrorCode::EmptyDistribution, "empty sample");

  // Pool cells until every expected count is at least 5 in both rows.
  std::vector<std::pair<double, double>> cells;
  double pool_a = 0.0, pool_b = 0.0;
  const double min_total = 5.0 * (static_cast<double>(na + nb) /
                                  std::min(static_cast<double>(na), static_cast<double>(nb)));
  for (const auto& [key, pair] : merged) {
    const double total = static_cast<double>(pair.first + pair.second);
    if (total >= min_total) {
      cells.emplace_back(static_cast<double>(pair.first), static_cast<double>(pair.second));
    } else {
      pool_a += static_cast<double>(pair.first);
      pool_b += static_cast<double>(pair.second);
    }
  }
  if (pool_a + pool_b > 0.0) cells.emplace_back(pool_a, pool_b);
  if (cells.size() < 2) return 1.0;

  double stat = 0.0;
  const double total = static_cast<double>(na + nb);
  for (const auto& [ca, cb] : cells) {
    const double share = (ca + cb) / total;
    const double ea = share * static_cast<double>(na);
    const double eb = share * static_cast<double>(nb);
    if (ea > 0.0) stat += (ca - ea) * (ca - ea) / ea;
    if (eb > 0.0) stat += (cb - eb) * (cb - eb) / eb;
  }
  return chi2_sf(stat, static_cast<double>(cells.size() - 1));
}

}  // namespace loopworks

#endif
