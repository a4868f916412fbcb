#include "loopworks/stats.hpp"

#include "loopworks/linops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace loopworks {

int harness_threads() {
  const char* env = std::getenv("LOOPWORKS_THREADS");
  if (env == nullptr) return 1;
  const int value = std::atoi(env);
  return value > 0 ? value : 1;
}

double OracleMeasure::total() const {
  double sum = 0.0;
  for (const auto& [path, w] : entries) sum += w;
  return sum;
}

double OracleMeasure::entry(const Path& path) const {
  auto it = entries.find(path);
  return it == entries.end() ? 0.0 : it->second;
}

namespace {

constexpr double kPruneWeight = 1e-15;
constexpr std::int64_t kMaxOracleEntries = 10'000'000;

struct OracleDfs {
  const ChainSpec& chain;
  PathPredicate predicate;
  int site;
  int horizon;
  Vector future_visits;  // LoopsAt: G(., site), expected future recordings
  OracleMeasure out;
  Path stack;
  std::int64_t touched = 0;

  void record(double weight, int exit = kCemetery, bool with_exit = false) {
    Path key = stack;
    if (with_exit) key.push_back(exit);
    out.entries[key] += weight;
    if (++touched > kMaxOracleEntries) {
      fail(ErrorCode::TooLarge, "oracle enumeration exceeds the entry guard");
    }
  }

  // A live branch of weight w at vertex v can still contribute at most w
  // times the expected number of future recordings from v.
  void cut_branch(int v, double weight) {
    if (predicate == PathPredicate::LoopsAt) {
      out.tail_bound += weight * future_visits(chain.interior_pos(v));
    } else {
      out.tail_bound += weight;
    }
  }

  void walk(int v, double weight, int depth) {
    if (weight < kPruneWeight) {
      cut_branch(v, weight);
      return;
    }
    switch (predicate) {
      case PathPredicate::ExitPaths:
        break;
      case PathPredicate::LoopsAt:
        if (v == site) record(weight);
        break;
      case PathPredicate::FirstReturnAt:
        if (depth > 0 && v == site) {
          record(weight);
          return;
        }
        break;
    }
    if (depth == horizon) {
      cut_branch(v, weight);
      return;
    }
    double moved = 0.0;
    for (const auto& [u, p] : chain.row(v)) {
      moved += p;
      if (chain.is_interior(u)) {
        stack.push_back(u);
        walk(u, weight * p, depth + 1);
        stack.pop_back();
      } else if (predicate == PathPredicate::ExitPaths) {
        stack.push_back(u);
        record(weight * p);
        stack.pop_back();
      }
    }
    if (predicate == PathPredicate::ExitPaths) {
      const double killed = weight * (1.0 - moved);
      if (killed > 0.0) record(killed, kCemetery, true);
    }
  }
};

}  // namespace

OracleMeasure brute_force_paths(const ChainSpec& chain, int start, int horizon,
                                PathPredicate predicate, int site) {
  if (horizon < 0 || horizon > 25) fail(ErrorCode::TooLarge, "horizon must be in [0, 25]");
  if (!chain.is_interior(start)) fail(ErrorCode::DomainError, "start must be interior");
  if (predicate != PathPredicate::ExitPaths && site < 0) site = start;

  OracleDfs dfs{chain, predicate, site, horizon, {}, {}, {}, 0};
  if (predicate == PathPredicate::LoopsAt) {
    dfs.future_visits = chain.greens().column(chain.interior_pos(site));
  }
  dfs.out.horizon = horizon;
  dfs.stack.push_back(start);
  dfs.walk(start, 1.0, 0);
  return dfs.out;
}

// Regularized upper incomplete gamma Q(a, x): series for x < a + 1,
// continued fraction otherwise.
double regularized_gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) fail(ErrorCode::DomainError, "gamma_q domain");
  if (x == 0.0) return 1.0;
  const double log_gamma = std::lgamma(a);
  if (x < a + 1.0) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-15) break;
    }
    const double p = sum * std::exp(-x + a * std::log(x) - log_gamma);
    return 1.0 - p;
  }
  // Lentz continued fraction for Q.
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + a * std::log(x) - log_gamma);
}

double chi2_sf(double statistic, double dof) {
  if (dof <= 0.0) return 1.0;
  if (statistic <= 0.0) return 1.0;
  return regularized_gamma_q(0.5 * dof, 0.5 * statistic);
}

double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double chi_square_pvalue_from_cells(const std::vector<std::pair<std::int64_t, double>>& raw,
                                    std::int64_t n) {
  if (n <= 0) fail(ErrorCode::EmptyDistribution, "empty sample");
  // Pool small-expectation cells so every cell has expected count >= 5.
  std::vector<std::pair<double, double>> cells;  // observed, expected
  double pooled_obs = 0.0, pooled_exp = 0.0;
  for (const auto& [count, p] : raw) {
    const double expected = p * static_cast<double>(n);
    if (expected >= 5.0) {
      cells.emplace_back(static_cast<double>(count), expected);
    } else {
      pooled_obs += static_cast<double>(count);
      pooled_exp += expected;
    }
  }
  if (pooled_exp > 0.0 || pooled_obs > 0.0) cells.emplace_back(pooled_obs, pooled_exp);
  if (cells.size() < 2) return 1.0;
  double stat = 0.0;
  for (const auto& [obs, expected] : cells) {
    if (expected <= 0.0) {
      if (obs > 0.0) return 0.0;  // observed outcomes deemed impossible
      continue;
    }
    stat += (obs - expected) * (obs - expected) / expected;
  }
  return chi2_sf(stat, static_cast<double>(cells.size() - 1));
}

double ks_pvalue(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) fail(ErrorCode::EmptyDistribution, "empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, std::abs(f - lo), std::abs(hi - f)});
  }
  const double sqrt_n = std::sqrt(n);
  return kolmogorov_sf((sqrt_n + 0.12 + 0.11 / sqrt_n) * d);
}

}  // namespace loopworks
