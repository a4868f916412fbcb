#ifndef LOOPWORKS_PATH_ALGEBRA_HPP
#define LOOPWORKS_PATH_ALGEBRA_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "loopworks/chain.hpp"

namespace loopworks {

// Concatenation a + b requires a's terminal vertex to equal b's initial one;
// the trivial path is the identity element.
Path concat(const Path& a, const Path& b);

// Product of step weights; 1 for a trivial path.
double path_weight(const ChainSpec& chain, const Path& path);

bool is_self_avoiding(const Path& path);
bool is_loop(const Path& path);

// Chronological loop erasure: repeatedly jump past the last visit of the
// current endpoint. Returns a self-avoiding walk with the same endpoints.
Path loop_erase(const Path& path);

// Reverse, erase chronologically, reverse back.
Path loop_erase_reverse(const Path& path);

// The loop started at index k instead: [w_k, ..., w_n = w_0, ..., w_k].
Path rotate_loop(const Path& loop, int k);

// Rotation count J, per-site return counts beta, and per-site rooted
// rotation counts J(l; x) = J * beta(x) / |l|.
struct LoopStats {
  std::int64_t rotations = 1;
  std::map<int, std::int64_t> returns;
  std::map<int, std::int64_t> rooted_rotations;
};

LoopStats loop_stats(const Path& loop);

// Rotation class representative: the lexicographically least rotation.
struct UnrootedLoop {
  Path canonical;
  std::int64_t multiplicity = 1;  // J of the class

  bool operator<(const UnrootedLoop& other) const { return canonical < other.canonical; }
  bool operator==(const UnrootedLoop& other) const { return canonical == other.canonical; }
};

UnrootedLoop canonical_unrooted(const Path& loop);

// Split an exit path into its loop erasure and the erased excursions; the
// j-th loop sits at saw[j], stays in A minus the earlier saw vertices, and
// reassembling loops and saw steps reproduces the path exactly.
struct PathDecomposition {
  Path saw;
  std::vector<Path> loops;
};

PathDecomposition decompose_path(const ChainSpec& chain, const Path& exit_path);

// Inverse of decompose_path.
Path reassemble_path(const PathDecomposition& parts);

}  // namespace loopworks

#endif
