#ifndef LOOPWORKS_CHAIN_HPP
#define LOOPWORKS_CHAIN_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "loopworks/errors.hpp"
#include "loopworks/rng.hpp"

namespace loopworks {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

class GreensSolver;

// A path is a nonempty vertex sequence [w_0, ..., w_n] over state indices;
// its length is the number of steps n. A single vertex is the trivial path.
using Path = std::vector<int>;

inline int path_length(const Path& p) { return static_cast<int>(p.size()) - 1; }

// Exit state index used when the row-sum deficit (killing) fires.
inline constexpr int kCemetery = -1;
inline constexpr const char* kCemeteryId = "__cemetery__";

struct Transition {
  std::string from;
  std::string to;
  double p = 0.0;
};

// Finite state space split into interior A and boundary dA, with one-step
// transition weights. Rows may sum to less than one; the deficit is killing
// and routes samplers to the cemetery. Construction validates that I - P_A
// is invertible and keeps the factorization for reuse.
class ChainSpec {
 public:
  ChainSpec() = default;

  const std::vector<std::string>& states() const { return states_; }
  int n_states() const { return static_cast<int>(states_.size()); }
  const std::vector<int>& interior() const { return interior_; }
  const std::vector<int>& boundary() const { return boundary_; }
  int n_interior() const { return static_cast<int>(interior_.size()); }

  const std::string& label(int s) const { return states_.at(static_cast<std::size_t>(s)); }
  int index_of(std::string_view id) const;  // UnknownState if absent
  bool is_interior(int s) const { return interior_pos(s) >= 0; }
  bool is_boundary(int s) const { return s >= 0 && s < n_states() && !is_interior(s); }
  // Position of state s in the interior ordering, -1 if s is not interior.
  int interior_pos(int s) const {
    return (s >= 0 && s < n_states()) ? interior_pos_[static_cast<std::size_t>(s)] : -1;
  }
  // Position of state s in the boundary ordering, -1 otherwise.
  int boundary_pos(int s) const {
    return (s >= 0 && s < n_states()) ? boundary_pos_[static_cast<std::size_t>(s)] : -1;
  }

  double weight(int from, int to) const;
  const std::vector<std::pair<int, double>>& row(int s) const {
    return rows_[static_cast<std::size_t>(s)];
  }
  double row_sum(int s) const { return row_sums_[static_cast<std::size_t>(s)]; }
  double kill_mass(int s) const { return 1.0 - row_sum(s); }

  Matrix interior_matrix() const;  // P_A in interior order
  Matrix full_matrix() const;      // P over all states (dense; small chains)

  // Shared factorization of I - P_A, computed once at construction.
  const GreensSolver& greens() const { return *solver_; }

  bool numeric_ids() const { return numeric_ids_; }

  friend ChainSpec build_chain(std::vector<std::string> states,
                               std::vector<std::string> boundary,
                               std::vector<Transition> weights);

 private:
  std::vector<std::string> states_;
  std::vector<int> interior_;
  std::vector<int> boundary_;
  std::vector<int> interior_pos_;
  std::vector<int> boundary_pos_;
  std::vector<std::vector<std::pair<int, double>>> rows_;
  std::vector<double> row_sums_;
  std::shared_ptr<const GreensSolver> solver_;
  bool numeric_ids_ = false;
};

// Exit path: starts in A, ends at the first boundary visit. On a killing
// event the path stays interior and `exit` is kCemetery.
struct ExitSample {
  Path path;
  int exit = kCemetery;
};

struct JumpEvent {
  double holding_time = 0.0;
  int next_state = kCemetery;
};

// Validates invariants and factorizes I - P_A. Throws NegativeWeight,
// RowSumExceedsOne, UnknownState, or SingularInterior.
ChainSpec build_chain(std::vector<std::string> states,
                      std::vector<std::string> boundary,
                      std::vector<Transition> weights);

// Same chain with the given interior vertices promoted to boundary. Their
// outgoing rows are kept but, as for any boundary state, samplers stop there.
ChainSpec restrict_interior(const ChainSpec& chain, const std::vector<int>& promote);

// P^n over all states; P^0 = I.
Matrix n_step_matrix(const ChainSpec& chain, int n);

ExitSample sample_exit_path(const ChainSpec& chain, int start, Rng& rng,
                            std::int64_t max_steps = 1'000'000);

// Return probability of the +-1 walk on Z with up-probability q after n
// steps: zero for odd n, C(2m,m) q^m (1-q)^m for n = 2m.
double nn_walk_return_prob(double q, std::int64_t n);

enum class WalkClass { Recurrent, Transient };

WalkClass classify_nn_walk(double q);

// Walk on binary strings of length <= depth; strings of full length form an
// absorbing truncation boundary. Interior vertices step to parent and both
// children with weight 1/3 each; the root splits evenly between its two
// children, which reproduces the infinite-tree Green's values
// G(root,root) = 2 and G(b,root) = 2^{1-|b|} under truncation.
ChainSpec build_binary_tree_chain(int depth);

// Simple random walk on the complete graph K_{n+1}; vertex "0" is the
// designated boundary/root for spanning-tree work.
ChainSpec build_complete_graph_chain(int n_plus_1);

// One continuous-time jump from interior x: exponential holding time with
// rate site_rates[x], then a discrete step by p(x,.). Jointly this realizes
// competing exponential clocks with rates lambda(x)p(x,y).
JumpEvent sample_ctmc_jump(const ChainSpec& chain, const std::vector<double>& site_rates,
                           int x, Rng& rng);

}  // namespace loopworks

#endif
