#include "loopworks/lerw.hpp"

#include <algorithm>

#include "loopworks/linops.hpp"

namespace loopworks {

LerwSample sample_lerw(const ChainSpec& chain, int x, Rng& rng, std::int64_t max_steps) {
  const ExitSample exit = sample_exit_path(chain, x, rng, max_steps);
  LerwSample sample;
  sample.exit = exit.exit;
  sample.saw = loop_erase(exit.path);
  return sample;
}

namespace {

void check_exit_saw(const ChainSpec& chain, const Path& saw) {
  if (saw.size() < 2) fail(ErrorCode::NotExitSaw, "need at least one step");
  if (!is_self_avoiding(saw)) fail(ErrorCode::NotExitSaw, "walk revisits a vertex");
  for (std::size_t i = 0; i + 1 < saw.size(); ++i) {
    if (!chain.is_interior(saw[i])) fail(ErrorCode::NotExitSaw, "interior prefix required");
  }
  if (!chain.is_boundary(saw.back())) fail(ErrorCode::NotExitSaw, "must end on the boundary");
}

}  // namespace

double lerw_prob(const ChainSpec& chain, const Path& saw) {
  check_exit_saw(chain, saw);
  std::vector<int> interior_vertices(saw.begin(), saw.end() - 1);
  return path_weight(chain, saw) * f_v_ordered(chain, interior_vertices);
}

double LerwDistribution::prob_of(const Path& saw) const {
  for (const auto& [path, p] : entries) {
    if (path == saw) return p;
  }
  return 0.0;
}

double LerwDistribution::total_to(int exit_state) const {
  double sum = 0.0;
  for (const auto& [path, p] : entries) {
    if (path.back() == exit_state) sum += p;
  }
  return sum;
}

double LerwDistribution::total() const {
  double sum = 0.0;
  for (const auto& [path, p] : entries) sum += p;
  return sum;
}

LerwDistribution enumerate_lerw(const ChainSpec& chain, int x) {
  if (!chain.is_interior(x)) fail(ErrorCode::DomainError, "start must be interior");
  if (chain.n_interior() > 12) {
    fail(ErrorCode::TooLarge, "SAW enumeration is guarded to 12 interior states");
  }

  LerwDistribution dist;
  dist.start = x;
  std::vector<char> used(static_cast<std::size_t>(chain.n_states()), 0);
  Path prefix{x};
  used[static_cast<std::size_t>(x)] = 1;

  auto dfs = [&](auto&& self, int v) -> void {
    for (const auto& [u, p] : chain.row(v)) {
      if (p <= 0.0) continue;
      if (chain.is_boundary(u)) {
        prefix.push_back(u);
        dist.entries.emplace_back(prefix, lerw_prob(chain, prefix));
        prefix.pop_back();
      } else if (!used[static_cast<std::size_t>(u)]) {
        used[static_cast<std::size_t>(u)] = 1;
        prefix.push_back(u);
        self(self, u);
        prefix.pop_back();
        used[static_cast<std::size_t>(u)] = 0;
      }
    }
  };
  dfs(dfs, x);

  std::sort(dist.entries.begin(), dist.entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return dist;
}

std::vector<std::pair<int, double>> laplacian_walk_step(const ChainSpec& chain,
                                                        const Path& prefix,
                                                        const std::vector<int>& targets) {
  if (prefix.empty()) fail(ErrorCode::DomainError, "prefix must be nonempty");
  if (!is_self_avoiding(prefix)) fail(ErrorCode::DomainError, "prefix must be a SAW");
  for (int v : prefix) {
    if (!chain.is_interior(v)) fail(ErrorCode::DomainError, "prefix must stay interior");
  }
  std::vector<char> is_target(static_cast<std::size_t>(chain.n_states()), 0);
  for (int z : targets) {
    if (!chain.is_boundary(z)) fail(ErrorCode::DomainError, "targets must be boundary states");
    is_target[static_cast<std::size_t>(z)] = 1;
  }

  // Slit domain: every visited vertex is promoted to the boundary.
  const ChainSpec slit = restrict_interior(chain, prefix);
  const PoissonKernel kernel = poisson_kernel(slit);

  const int x = prefix.back();
  std::vector<std::pair<int, double>> step;
  double total = 0.0;
  for (const auto& [y, p] : chain.row(x)) {
    double h;
    if (is_target[static_cast<std::size_t>(y)]) {
      h = 1.0;
    } else if (slit.is_interior(y)) {
      h = kernel.row_to(slit, y, targets);
    } else {
      h = 0.0;  // visited or non-target boundary
    }
    const double mass = p * h;
    if (mass > 0.0) {
      step.emplace_back(y, mass);
      total += mass;
    }
  }
  if (total <= 0.0) fail(ErrorCode::DeadEnd, "no admissible continuation");
  for (auto& [y, p] : step) p /= total;
  return step;
}

Path decorate_with_loops(const ChainSpec& chain, const Path& saw, Rng& rng,
                         std::int64_t max_steps) {
  check_exit_saw(chain, saw);

  PathDecomposition parts;
  parts.saw = saw;
  std::vector<char> erased(static_cast<std::size_t>(chain.n_states()), 0);
  for (std::size_t j = 0; j + 1 < saw.size(); ++j) {
    const int root = saw[j];
    // Walk in A minus the earlier saw vertices until the domain is left,
    // then keep the prefix through the last visit to the root.
    Path excursion{root};
    std::size_t last_visit = 0;
    int current = root;
    for (std::int64_t step = 0;; ++step) {
      if (step >= max_steps) fail(ErrorCode::MaxStepsExceeded, "loop excursion too long");
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
      if (next == kCemetery || !chain.is_interior(next) ||
          erased[static_cast<std::size_t>(next)]) {
        break;
      }
      excursion.push_back(next);
      if (next == root) last_visit = excursion.size() - 1;
      current = next;
    }
    excursion.resize(last_visit + 1);
    parts.loops.push_back(std::move(excursion));
    erased[static_cast<std::size_t>(root)] = 1;
  }
  return reassemble_path(parts);
}

}  // namespace loopworks
