#include "loopworks/soup.hpp"

#include <algorithm>
#include <cmath>

#include "loopworks/linops.hpp"

namespace loopworks {

double elementary_mass(const ChainSpec& chain, int x) {
  if (!chain.is_interior(x)) fail(ErrorCode::DomainError, "x must be interior");
  const GreensSolver& solver = chain.greens();
  if (solver.singular()) fail(ErrorCode::SingularInterior, "I - P_A is not invertible");
  const int xp = chain.interior_pos(x);
  return 1.0 - 1.0 / solver.column(xp)(xp);
}

Path sample_elementary_loop(const ChainSpec& chain, int x, Rng& rng,
                            std::int64_t max_retries, std::int64_t max_steps) {
  if (elementary_mass(chain, x) <= 0.0) {
    fail(ErrorCode::ZeroMass, "no first-return loops at this site");
  }
  for (std::int64_t attempt = 0; attempt < max_retries; ++attempt) {
    Path loop{x};
    int current = x;
    bool rejected = false;
    for (std::int64_t step = 0; step < max_steps; ++step) {
      const double u = uniform01(rng);
      double acc = 0.0;
      int next = kCemetery;
      for (const auto& [v, p] : chain.row(current)) {
        acc += p;
        if (u < acc) {
          next = v;
          break;
        }
      }
      if (next == kCemetery || !chain.is_interior(next)) {
        rejected = true;  // left A before returning
        break;
      }
      loop.push_back(next);
      if (next == x) return loop;
      current = next;
    }
    if (!rejected) fail(ErrorCode::MaxStepsExceeded, "first-return excursion too long");
  }
  fail(ErrorCode::MaxRetriesExceeded, "rejection sampler failed to return");
}

namespace {

// Inverse transform on the closed-form negative-binomial pmf
// P{K_t = k} = (1-f)^t Gamma(k+t)/(k! Gamma(t)) f^k.
std::int64_t sample_elementary_count(double f, double t, Rng& rng) {
  if (t == 0.0 || f <= 0.0) return 0;
  const double u = uniform01(rng);
  double pmf = std::pow(1.0 - f, t);
  double cum = pmf;
  std::int64_t k = 0;
  while (u >= cum) {
    pmf *= f * (static_cast<double>(k) + t) / static_cast<double>(k + 1);
    cum += pmf;
    ++k;
    if (pmf < 1e-300 && k > 64) break;  // exhausted double precision
  }
  return k;
}

}  // namespace

GrowingLoopState sample_growing_loop(const ChainSpec& chain, int x, double t, Rng& rng) {
  if (!chain.is_interior(x)) fail(ErrorCode::DomainError, "x must be interior");
  if (t < 0.0) fail(ErrorCode::DomainError, "t must be nonnegative");

  GrowingLoopState state;
  state.site = x;
  state.t = t;
  state.loop = Path{x};
  if (t == 0.0) return state;

  const double f = elementary_mass(chain, x);
  state.elementary_count = sample_elementary_count(f, t, rng);
  for (std::int64_t i = 0; i < state.elementary_count; ++i) {
    state.loop = concat(state.loop, sample_elementary_loop(chain, x, rng));
  }
  return state;
}

double growing_loop_pmf(const ChainSpec& chain, int x, double t, const Path& loop) {
  if (!chain.is_interior(x)) fail(ErrorCode::DomainError, "x must be interior");
  if (!(t > 0.0)) fail(ErrorCode::DomainError, "t must be positive");
  if (!is_loop(loop) || loop.front() != x) {
    fail(ErrorCode::NotALoopAtX, "need a loop rooted at x");
  }
  std::int64_t k = 0;
  for (std::size_t i = 1; i < loop.size(); ++i) {
    if (!chain.is_interior(loop[i])) fail(ErrorCode::NotALoopAtX, "loop leaves A");
    if (loop[i] == x) ++k;
  }
  const double weight = path_weight(chain, loop);
  if (weight <= 0.0) return 0.0;

  const int xp = chain.interior_pos(x);
  const double log_g = std::log(chain.greens().column(xp)(xp));
  const double log_coeff = std::lgamma(static_cast<double>(k) + t) - std::lgamma(t) -
                           std::lgamma(static_cast<double>(k) + 1.0);
  return std::exp(-t * log_g + log_coeff + std::log(weight));
}

double growing_loop_length2_ratio(const ChainSpec& chain, int x, double t) {
  if (!(t > 0.0)) fail(ErrorCode::DomainError, "t must be positive");
  // The common G^{-t} factor cancels in the ratio, so work with the log
  // weights log[Gamma(k+t)/(k! Gamma(t)) p(l)] to stay finite for large t.
  auto log_weight = [&](std::int64_t k, double p) {
    return std::lgamma(static_cast<double>(k) + t) - std::lgamma(t) -
           std::lgamma(static_cast<double>(k) + 1.0) + std::log(p);
  };
  const double p_self = chain.weight(x, x) * chain.weight(x, x);
  if (p_self <= 0.0) return 0.0;
  const double self_log = log_weight(2, p_self);  // [x,x,x] has two returns
  double others = 0.0;
  for (int y : chain.interior()) {
    if (y == x) continue;
    const double p = chain.weight(x, y) * chain.weight(y, x);
    if (p > 0.0) others += std::exp(log_weight(1, p) - self_log);
  }
  return 1.0 / (1.0 + others);
}

std::size_t SoupRealization::loop_count() const {
  switch (flavor) {
    case SoupFlavor::Ordered: {
      std::size_t count = 0;
      for (const auto& state : site_loops) count += state.elementary_count > 0 ? 1 : 0;
      return count;
    }
    case SoupFlavor::Rooted:
      return loops.size();
    case SoupFlavor::Unrooted:
      return classes.size();
  }
  return 0;
}

namespace {

std::vector<int> default_ordering(const ChainSpec& chain) { return chain.interior(); }

void check_ordering(const ChainSpec& chain, const std::vector<int>& ordering) {
  std::vector<char> seen(static_cast<std::size_t>(chain.n_states()), 0);
  for (int x : ordering) {
    if (!chain.is_interior(x)) fail(ErrorCode::DomainError, "ordering must list interior states");
    if (seen[static_cast<std::size_t>(x)]) fail(ErrorCode::DomainError, "duplicate in ordering");
    seen[static_cast<std::size_t>(x)] = 1;
  }
  if (ordering.size() != static_cast<std::size_t>(chain.n_interior())) {
    fail(ErrorCode::DomainError, "ordering must be a permutation of A");
  }
}

// Shrinking domains along the ordering: A_j excludes x_1 .. x_{j-1}.
std::vector<ChainSpec> nested_domains(const ChainSpec& chain, const std::vector<int>& ordering) {
  std::vector<ChainSpec> domains;
  domains.reserve(ordering.size());
  std::vector<int> removed;
  for (std::size_t j = 0; j < ordering.size(); ++j) {
    domains.push_back(j == 0 ? chain : restrict_interior(chain, removed));
    removed.push_back(ordering[j]);
  }
  return domains;
}

}  // namespace

SoupRealization sample_soup_config(const ChainSpec& chain, const std::vector<int>& ordering,
                                   double t, Rng& rng) {
  check_ordering(chain, ordering);
  if (t < 0.0) fail(ErrorCode::DomainError, "t must be nonnegative");

  SoupRealization soup;
  soup.flavor = SoupFlavor::Ordered;
  soup.t = t;
  soup.ordering = ordering;
  const std::vector<ChainSpec> domains = nested_domains(chain, ordering);
  for (std::size_t j = 0; j < ordering.size(); ++j) {
    soup.site_loops.push_back(sample_growing_loop(domains[j], ordering[j], t, rng));
  }
  return soup;
}

double config_pmf(const ChainSpec& chain, const std::vector<int>& ordering, double t,
                  const std::vector<Path>& config) {
  check_ordering(chain, ordering);
  if (config.size() != ordering.size()) {
    fail(ErrorCode::DomainMismatch, "one loop per ordering site required");
  }
  const std::vector<ChainSpec> domains = nested_domains(chain, ordering);
  double pmf = 1.0;
  for (std::size_t j = 0; j < ordering.size(); ++j) {
    const Path& loop = config[j];
    if (!is_loop(loop) || loop.front() != ordering[j]) {
      fail(ErrorCode::DomainMismatch, "loop is not rooted at its site");
    }
    for (int v : loop) {
      if (!domains[j].is_interior(v)) {
        fail(ErrorCode::DomainMismatch, "loop leaves its nested domain");
      }
    }
    pmf *= growing_loop_pmf(domains[j], ordering[j], t, loop);
  }
  return pmf;
}

double loop_measure(const ChainSpec& chain, const Path& loop, SoupFlavor flavor,
                    const std::vector<int>& ordering) {
  if (!is_loop(loop)) fail(ErrorCode::NotALoop, "measures are defined on loops");
  if (path_length(loop) == 0) fail(ErrorCode::TrivialLoop, "trivial loops carry no mass");
  for (int v : loop) {
    if (!chain.is_interior(v)) fail(ErrorCode::NotALoop, "loop must stay in A");
  }
  const double weight = path_weight(chain, loop);
  const double length = static_cast<double>(path_length(loop));

  switch (flavor) {
    case SoupFlavor::Rooted:
      return weight / length;
    case SoupFlavor::Unrooted:
      return static_cast<double>(loop_stats(loop).rotations) * weight / length;
    case SoupFlavor::Ordered: {
      const std::vector<int> order = ordering.empty() ? default_ordering(chain) : ordering;
      std::vector<int> rank(static_cast<std::size_t>(chain.n_states()), -1);
      for (std::size_t j = 0; j < order.size(); ++j) rank[static_cast<std::size_t>(order[j])] = static_cast<int>(j);
      const int root_rank = rank[static_cast<std::size_t>(loop.front())];
      for (int v : loop) {
        if (rank[static_cast<std::size_t>(v)] < root_rank) return 0.0;  // outside the root's domain
      }
      const auto stats = loop_stats(loop);
      return weight / static_cast<double>(stats.returns.at(loop.front()));
    }
  }
  return 0.0;
}

namespace {

// Sum of a per-loop functional over all loops at x inside the domain with
// length <= max_len, by depth-first enumeration.
template <class Fn>
void for_each_loop_at(const ChainSpec& domain, int x, int max_len, Fn&& fn) {
  Path stack{x};
  auto dfs = [&](auto&& self, int v, double weight, int depth) -> void {
    if (depth > 0 && v == x) fn(stack, weight);
    if (depth == max_len) return;
    for (const auto& [u, p] : domain.row(v)) {
      if (p <= 0.0 || !domain.is_interior(u)) continue;
      stack.push_back(u);
      self(self, u, weight * p, depth + 1);
      stack.pop_back();
    }
  };
  dfs(dfs, x, 1.0, 0);
}

void check_truncation_guard(const ChainSpec& chain, int truncation_len) {
  if (truncation_len < 1) fail(ErrorCode::DomainError, "truncation length must be positive");
  const int cap = chain.n_interior() <= 3 ? 20 : 12;
  if (truncation_len > cap) {
    fail(ErrorCode::TooLarge, "loop enumeration guard exceeded");
  }
}

// Upper bound on mass of loops at x longer than len: sum_{n > len} P^n(x,x),
// evaluated as (P^{len+1} G)(x,x).
Vector long_loop_mass(const ChainSpec& domain, int len) {
  const Matrix p = domain.interior_matrix();
  const int n = domain.n_interior();
  Matrix power = Matrix::Identity(n, n);
  for (int i = 0; i <= len; ++i) power = power * p;
  const Matrix tail = power * domain.greens().inverse();
  return tail.diagonal();
}

}  // namespace

MeasureTotal measure_total(const ChainSpec& chain, SoupFlavor flavor, int truncation_len,
                           const std::vector<int>& ordering) {
  check_truncation_guard(chain, truncation_len);
  MeasureTotal result;

  if (flavor == SoupFlavor::Ordered) {
    const std::vector<int> order = ordering.empty() ? default_ordering(chain) : ordering;
    check_ordering(chain, order);
    const std::vector<ChainSpec> domains = nested_domains(chain, order);
    for (std::size_t j = 0; j < order.size(); ++j) {
      const int x = order[j];
      for_each_loop_at(domains[j], x, truncation_len, [&](const Path& loop, double w) {
        std::int64_t beta = 0;
        for (std::size_t i = 1; i < loop.size(); ++i) beta += loop[i] == x ? 1 : 0;
        result.partial_sum += w / static_cast<double>(beta);
      });
      const int xp = domains[j].interior_pos(x);
      result.tail_bound += long_loop_mass(domains[j], truncation_len)(xp);
    }
    return result;
  }

  // Rooted and unrooted totals agree: an unrooted class of J rotations is
  // counted once with mass J p / |l|, the rooted sum counts each rotation
  // with mass p / |l|. The enumeration meets every class exactly once at its
  // canonical representative.
  for (int x : chain.interior()) {
    for_each_loop_at(chain, x, truncation_len, [&](const Path& loop, double w) {
      if (flavor == SoupFlavor::Rooted) {
        result.partial_sum += w / static_cast<double>(path_length(loop));
      } else {
        const UnrootedLoop cls = canonical_unrooted(loop);
        if (cls.canonical == loop) {
          result.partial_sum += static_cast<double>(cls.multiplicity) * w /
                                static_cast<double>(path_length(loop));
        }
      }
    });
  }
  const Vector tails = long_loop_mass(chain, truncation_len);
  result.tail_bound = tails.sum() / static_cast<double>(truncation_len + 1);
  return result;
}

namespace {

// One site's Poisson arrival events for the growing loop: an event of size k
// arrives with rate f^k / k and contributes the concatenation of k
// elementary loops. The event count over [0, t] is Poisson(t log G(x,x)).
void append_site_events(const ChainSpec& domain, int x, double t, Rng& rng,
                        std::vector<Path>& out) {
  const double f = elementary_mass(domain, x);
  if (f <= 0.0) return;
  const double total_rate = -std::log1p(-f);
  const std::int64_t events = sample_poisson(rng, t * total_rate);
  for (std::int64_t e = 0; e < events; ++e) {
    // Logarithmic size distribution P{k} = f^k / (k total_rate).
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
    Path loop{x};
    for (std::int64_t i = 0; i < k; ++i) {
      loop = concat(loop, sample_elementary_loop(domain, x, rng));
    }
    // Re-root uniformly among the |l| translations.
    const int shift = static_cast<int>(
        std::min<double>(static_cast<double>(path_length(loop)) - 1.0,
                         uniform01(rng) * static_cast<double>(path_length(loop))));
    out.push_back(rotate_loop(loop, shift));
  }
}

}  // namespace

SoupRealization sample_rooted_soup(const ChainSpec& chain, double t, Rng& rng) {
  return sample_rooted_soup(chain, t, rng, default_ordering(chain));
}

SoupRealization sample_rooted_soup(const ChainSpec& chain, double t, Rng& rng,
                                   const std::vector<int>& ordering) {
  check_ordering(chain, ordering);
  if (t < 0.0) fail(ErrorCode::DomainError, "t must be nonnegative");

  SoupRealization soup;
  soup.flavor = SoupFlavor::Rooted;
  soup.t = t;
  soup.ordering = ordering;
  if (t == 0.0) return soup;
  const std::vector<ChainSpec> domains = nested_domains(chain, ordering);
  for (std::size_t j = 0; j < ordering.size(); ++j) {
    append_site_events(domains[j], ordering[j], t, rng, soup.loops);
  }
  return soup;
}

SoupRealization sample_unrooted_soup(const ChainSpec& chain, double t, Rng& rng) {
  return sample_unrooted_soup(chain, t, rng, default_ordering(chain));
}

SoupRealization sample_unrooted_soup(const ChainSpec& chain, double t, Rng& rng,
                                     const std::vector<int>& ordering) {
  SoupRealization rooted = sample_rooted_soup(chain, t, rng, ordering);
  SoupRealization soup;
  soup.flavor = SoupFlavor::Unrooted;
  soup.t = t;
  soup.ordering = rooted.ordering;
  soup.classes.reserve(rooted.loops.size());
  for (const auto& loop : rooted.loops) soup.classes.push_back(canonical_unrooted(loop));
  return soup;
}

SoupRealization sample_rooted_soup_direct(const ChainSpec& chain, double t,
                                          int max_loop_len, Rng& rng) {
  check_truncation_guard(chain, max_loop_len);
  if (t < 0.0) fail(ErrorCode::DomainError, "t must be nonnegative");

  SoupRealization soup;
  soup.flavor = SoupFlavor::Rooted;
  soup.t = t;
  for (int x : chain.interior()) {
    for_each_loop_at(chain, x, max_loop_len, [&](const Path& loop, double w) {
      const double intensity = t * w / static_cast<double>(path_length(loop));
      const std::int64_t count = sample_poisson(rng, intensity);
      for (std::int64_t i = 0; i < count; ++i) soup.loops.push_back(loop);
    });
  }
  return soup;
}

double empty_soup_prob(const ChainSpec& chain, double t) {
  if (t < 0.0) fail(ErrorCode::DomainError, "t must be nonnegative");
  return std::exp(-t * chain.greens().log_det_greens());
}

SiteVisitStats site_visit_stats(const ChainSpec& chain, int x, int w, double t) {
  if (!chain.is_interior(x) || !chain.is_interior(w) || x == w) {
    fail(ErrorCode::DomainError, "x and w must be distinct interior states");
  }
  if (t < 0.0) fail(ErrorCode::DomainError, "t must be nonnegative");

  const int xp = chain.interior_pos(x);
  const double g_xx = chain.greens().column(xp)(xp);

  // Avoiding w shrinks the elementary mass to that of A minus {w}.
  const ChainSpec without_w = restrict_interior(chain, {w});
  const double g_avoid = without_w.greens()
                             .column(without_w.interior_pos(x))(without_w.interior_pos(x));

  SiteVisitStats stats;
  stats.visit_prob = 1.0 - std::pow(g_avoid / g_xx, t);

  // Expected w-visits per elementary loop: (sum_y p(x,y) G_{A\x}(y,w)) q(w->x) / f_x,
  // then E[K_t] = t f_x / (1 - f_x) elementary loops.
  const double f = 1.0 - 1.0 / g_xx;
  if (f <= 0.0) {
    stats.expected_count = 0.0;
    return stats;
  }
  const ChainSpec without_x = restrict_interior(chain, {x});
  const Vector g_col_w = without_x.greens().column(without_x.interior_pos(w));
  double reach = 0.0;
  for (const auto& [y, p] : chain.row(x)) {
    const int yp = without_x.interior_pos(y);
    if (yp >= 0) reach += p * g_col_w(yp);
  }
  const PoissonKernel kernel = poisson_kernel(without_x);
  const double q_return = kernel.entry(without_x, w, x);
  stats.expected_count = t * (f / (1.0 - f)) * (reach * q_return / f);
  return stats;
}

}  // namespace loopworks
