#include "loopworks/path_algebra.hpp"

#include <algorithm>
#include <set>

namespace loopworks {

Path concat(const Path& a, const Path& b) {
  if (a.empty() || b.empty()) fail(ErrorCode::DomainError, "paths must be nonempty");
  if (a.back() != b.front()) {
    fail(ErrorCode::EndpointMismatch, "a ends where b does not begin");
  }
  Path out = a;
  out.insert(out.end(), b.begin() + 1, b.end());
  return out;
}

double path_weight(const ChainSpec& chain, const Path& path) {
  if (path.empty()) fail(ErrorCode::DomainError, "path must be nonempty");
  double w = 1.0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i] < 0 || path[i] >= chain.n_states()) {
      fail(ErrorCode::UnknownState, "path vertex out of range");
    }
    if (i > 0) w *= chain.weight(path[i - 1], path[i]);
  }
  return w;
}

bool is_self_avoiding(const Path& path) {
  std::set<int> seen(path.begin(), path.end());
  return seen.size() == path.size();
}

bool is_loop(const Path& path) {
  return !path.empty() && path.front() == path.back();
}

Path loop_erase(const Path& path) {
  if (path.empty()) fail(ErrorCode::DomainError, "path must be nonempty");
  Path saw;
  saw.push_back(path.front());
  const int target = path.back();
  std::size_t from = 0;
  while (saw.back() != target) {
    // Jump past the last visit of the current endpoint.
    std::size_t last = from;
    for (std::size_t j = from; j < path.size(); ++j) {
      if (path[j] == saw.back()) last = j;
    }
    saw.push_back(path[last + 1]);
    from = last + 1;
  }
  return saw;
}

Path loop_erase_reverse(const Path& path) {
  Path reversed(path.rbegin(), path.rend());
  Path erased = loop_erase(reversed);
  return Path(erased.rbegin(), erased.rend());
}

Path rotate_loop(const Path& loop, int k) {
  if (!is_loop(loop)) fail(ErrorCode::NotALoop, "rotation needs a loop");
  const int n = path_length(loop);
  if (n == 0) return loop;
  k = ((k % n) + n) % n;
  Path out;
  out.reserve(loop.size());
  for (int i = 0; i <= n; ++i) out.push_back(loop[static_cast<std::size_t>((k + i) % n)]);
  out.back() = out.front();
  return out;
}

LoopStats loop_stats(const Path& loop) {
  if (!is_loop(loop)) fail(ErrorCode::NotALoop, "stats need a loop");
  LoopStats stats;
  const int n = path_length(loop);
  if (n == 0) {
    stats.rotations = 1;
    stats.rooted_rotations[loop.front()] = 1;
    return stats;
  }
  // J = minimal period of the cyclic vertex word (w_0 .. w_{n-1}).
  for (int period = 1; period <= n; ++period) {
    if (n % period != 0) continue;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      ok = loop[static_cast<std::size_t>(i)] ==
           loop[static_cast<std::size_t>((i + period) % n)];
    }
    if (ok) {
      stats.rotations = period;
      break;
    }
  }
  for (int k = 1; k <= n; ++k) stats.returns[loop[static_cast<std::size_t>(k)]]++;
  for (const auto& [x, beta] : stats.returns) {
    const std::int64_t num = stats.rotations * beta;
    stats.rooted_rotations[x] = num / n;  // exact: J divides n and J*beta/n is integral
  }
  return stats;
}

UnrootedLoop canonical_unrooted(const Path& loop) {
  if (!is_loop(loop)) fail(ErrorCode::NotALoop, "canonical form needs a loop");
  UnrootedLoop out;
  out.canonical = loop;
  const int n = path_length(loop);
  for (int k = 1; k < n; ++k) {
    Path rotated = rotate_loop(loop, k);
    if (rotated < out.canonical) out.canonical = rotated;
  }
  out.multiplicity = loop_stats(loop).rotations;
  return out;
}

PathDecomposition decompose_path(const ChainSpec& chain, const Path& exit_path) {
  if (exit_path.size() < 2) fail(ErrorCode::NotExitPath, "exit path needs at least one step");
  for (std::size_t i = 0; i + 1 < exit_path.size(); ++i) {
    if (!chain.is_interior(exit_path[i])) {
      fail(ErrorCode::NotExitPath, "non-terminal vertex lies on the boundary");
    }
  }
  if (!chain.is_boundary(exit_path.back())) {
    fail(ErrorCode::NotExitPath, "path does not end on the boundary");
  }

  PathDecomposition parts;
  parts.saw = loop_erase(exit_path);
  // The erased loop at saw[j] is the window from the first arrival (just
  // after the previous window) to the global last visit of saw[j].
  std::size_t begin = 0;
  for (std::size_t j = 0; j + 1 < parts.saw.size(); ++j) {
    std::size_t last = begin;
    for (std::size_t i = begin; i < exit_path.size(); ++i) {
      if (exit_path[i] == parts.saw[j]) last = i;
    }
    parts.loops.emplace_back(exit_path.begin() + static_cast<std::ptrdiff_t>(begin),
                             exit_path.begin() + static_cast<std::ptrdiff_t>(last) + 1);
    begin = last + 1;
  }
  return parts;
}

Path reassemble_path(const PathDecomposition& parts) {
  Path out;
  for (std::size_t j = 0; j < parts.loops.size(); ++j) {
    out = out.empty() ? parts.loops[j] : concat(out, parts.loops[j]);
    out = concat(out, Path{parts.saw[j], parts.saw[j + 1]});
  }
  if (out.empty()) out = parts.saw;
  return out;
}

}  // namespace loopworks
