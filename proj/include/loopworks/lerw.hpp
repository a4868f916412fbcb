#ifndef LOOPWORKS_LERW_HPP
#define LOOPWORKS_LERW_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "loopworks/chain.hpp"
#include "loopworks/path_algebra.hpp"

namespace loopworks {

struct LerwSample {
  Path saw;
  int exit = kCemetery;
};

// Run the chain from x to the boundary, then erase loops chronologically.
// On a killing event the erased interior path is returned with exit set to
// the cemetery.
LerwSample sample_lerw(const ChainSpec& chain, int x, Rng& rng,
                       std::int64_t max_steps = 1'000'000);

// Exact loop-erased walk probability p(eta) * F_eta(A), the product running
// over eta's interior vertices in shrinking domains.
double lerw_prob(const ChainSpec& chain, const Path& saw);

// Exact distribution over all exit SAWs from x, sorted by probability
// descending with lexicographic tie-break.
struct LerwDistribution {
  int start = -1;
  std::vector<std::pair<Path, double>> entries;

  double prob_of(const Path& saw) const;
  double total_to(int exit_state) const;
  double total() const;
};

LerwDistribution enumerate_lerw(const ChainSpec& chain, int x);

// One step of the Laplacian walk: given the visited SAW prefix, the next
// vertex y is chosen proportionally to p(x, y) H(y, V) on the slit domain
// A minus the prefix, with H(y, V) = 1 for y already in V. Throws DeadEnd
// when no continuation carries mass.
std::vector<std::pair<int, double>> laplacian_walk_step(const ChainSpec& chain,
                                                        const Path& prefix,
                                                        const std::vector<int>& targets);

// Put the loops back: independently decorate each saw vertex with a loop in
// its shrinking domain (simulate until the domain is left, truncate at the
// last visit to the vertex) and reassemble. The output has the law of the
// chain from saw[0] stopped at the boundary.
Path decorate_with_loops(const ChainSpec& chain, const Path& saw, Rng& rng,
                         std::int64_t max_steps = 1'000'000);

}  // namespace loopworks

#endif
