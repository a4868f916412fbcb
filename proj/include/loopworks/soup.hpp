#ifndef LOOPWORKS_SOUP_HPP
#define LOOPWORKS_SOUP_HPP

#include <cstdint>
#include <vector>

#include "loopworks/chain.hpp"
#include "loopworks/path_algebra.hpp"

namespace loopworks {

// Total weight of first-return loops at x inside A: f_x = 1 - 1/G_A(x,x).
double elementary_mass(const ChainSpec& chain, int x);

// One first-return loop at x with law p(l)/f_x, sampled by rejection: run
// the chain and accept the trajectory through its first return to x when
// that return precedes leaving A.
Path sample_elementary_loop(const ChainSpec& chain, int x, Rng& rng,
                            std::int64_t max_retries = 1'000'000,
                            std::int64_t max_steps = 1'000'000);

// Growing loop at x after time t: a negative-binomial number K_t of
// elementary loops, concatenated in arrival order.
struct GrowingLoopState {
  int site = -1;
  double t = 0.0;
  std::int64_t elementary_count = 0;
  Path loop;
};

GrowingLoopState sample_growing_loop(const ChainSpec& chain, int x, double t, Rng& rng);

// P{l_t = l} = G_A(x,x)^{-t} Gamma(k+t)/(k! Gamma(t)) p(l) where k counts
// the returns of l to x. Requires t > 0; the trivial loop has k = 0.
double growing_loop_pmf(const ChainSpec& chain, int x, double t, const Path& loop);

// P{l_t = [x,x,x]} / P{|l_t| = 2}; the diagnostic ratio of Example-style
// growing-loop checks.
double growing_loop_length2_ratio(const ChainSpec& chain, int x, double t);

enum class SoupFlavor { Ordered, Rooted, Unrooted };

// A realization of one of the three soup constructions at time t. Ordered
// realizations keep one growing loop per site (domains shrink along the
// ordering); rooted realizations keep individual loops; unrooted ones keep
// rotation-class representatives.
struct SoupRealization {
  SoupFlavor flavor = SoupFlavor::Rooted;
  double t = 0.0;
  std::vector<int> ordering;
  std::vector<GrowingLoopState> site_loops;  // Ordered
  std::vector<Path> loops;                   // Rooted
  std::vector<UnrootedLoop> classes;         // Unrooted

  std::size_t loop_count() const;
};

// Independent growing loops l^j at x_j inside A_j = A minus the earlier
// ordering vertices.
SoupRealization sample_soup_config(const ChainSpec& chain, const std::vector<int>& ordering,
                                   double t, Rng& rng);

// Joint pmf of an ordered configuration (one loop per ordering site).
double config_pmf(const ChainSpec& chain, const std::vector<int>& ordering, double t,
                  const std::vector<Path>& config);

// Mass of a nontrivial loop under the chosen measure:
//   Rooted    p(l) / |l|
//   Unrooted  J(l) p(l) / |l|
//   Ordered   p(l) / beta(l; root), zero unless the root is the loop's
//             minimal vertex under the ordering (so l fits its domain).
double loop_measure(const ChainSpec& chain, const Path& loop, SoupFlavor flavor,
                    const std::vector<int>& ordering = {});

// Partial measure total over loops of length <= truncation_len, with a
// rigorous bound on the omitted tail. All three flavors converge to
// log det G_A.
struct MeasureTotal {
  double partial_sum = 0.0;
  double tail_bound = 0.0;
};

MeasureTotal measure_total(const ChainSpec& chain, SoupFlavor flavor, int truncation_len,
                           const std::vector<int>& ordering = {});

// Rooted soup via the ordered construction: sample the per-site Poisson
// arrival events (an event of size k contributes one loop made of k
// elementary pieces), then re-root each event's loop at a uniform rotation.
SoupRealization sample_rooted_soup(const ChainSpec& chain, double t, Rng& rng);
SoupRealization sample_rooted_soup(const ChainSpec& chain, double t, Rng& rng,
                                   const std::vector<int>& ordering);

// Rooted soup with the roots forgotten (canonical rotation representatives).
SoupRealization sample_unrooted_soup(const ChainSpec& chain, double t, Rng& rng);
SoupRealization sample_unrooted_soup(const ChainSpec& chain, double t, Rng& rng,
                                     const std::vector<int>& ordering);

// Direct Poissonian sampler over the rooted measure truncated at
// max_loop_len; cross-checks the ordered-construction route.
SoupRealization sample_rooted_soup_direct(const ChainSpec& chain, double t,
                                          int max_loop_len, Rng& rng);

// P{soup empty at time t} = (det G_A)^{-t}.
double empty_soup_prob(const ChainSpec& chain, double t);

// Closed forms for the growing loop at x: probability that it ever visits w
// by time t, and the expected number of w-visits it accumulates.
struct SiteVisitStats {
  double visit_prob = 0.0;
  double expected_count = 0.0;
};

SiteVisitStats site_visit_stats(const ChainSpec& chain, int x, int w, double t);

}  // namespace loopworks

#endif
