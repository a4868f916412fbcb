#ifndef LOOPWORKS_LINOPS_HPP
#define LOOPWORKS_LINOPS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "loopworks/chain.hpp"
#include "loopworks/rng.hpp"

namespace loopworks {

// LU of the interior Laplacian L_A = I - P_A. For a substochastic
// nonnegative P_A the matrix is invertible exactly when every interior
// vertex can reach the boundary (or the cemetery), so a rank check here is
// the construction-time validation of the chain.
class GreensSolver {
 public:
  explicit GreensSolver(const Matrix& laplacian);

  int size() const { return n_; }
  bool singular() const { return singular_; }

  double det_laplacian() const;           // may underflow for huge chains
  double log_det_greens() const;          // -log det L_A
  double det_greens() const;              // exp of the above

  Vector column(int j) const;             // G_A e_j
  Vector row(int i) const;                // e_i^T G_A (transposed solve)
  Vector solve(const Vector& rhs) const;  // G_A rhs
  Matrix solve(const Matrix& rhs) const;
  Matrix inverse() const;                 // full G_A; intended for small A

 private:
  int n_ = 0;
  bool singular_ = true;
  double log_abs_det_ = 0.0;
  int det_sign_ = 1;
  Eigen::PartialPivLU<Matrix> lu_;
};

// L_A, G_A and their determinants, indexed by the chain's interior order.
struct GreensBundle {
  std::vector<int> interior_order;
  Matrix laplacian;
  Matrix greens;
  double det_greens = 1.0;
  double det_laplacian = 1.0;
  double log_det_greens = 0.0;
};

Matrix laplacian_matrix(const ChainSpec& chain);

// Full bundle with the explicit inverse; meant for small interiors. For a
// single Green's row/column on a large chain use chain.greens() directly.
GreensBundle greens_bundle(const ChainSpec& chain);

// F_V(A): product of G_{A_j}(x_j, x_j) over shrinking domains, taken in the
// chain's interior order. Non-interior members of V are dropped; F_empty = 1.
double f_v(const ChainSpec& chain, const std::vector<int>& v);

// Same product but evaluated in the order given (the value is order
// independent; keeping the knob makes that testable).
double f_v_ordered(const ChainSpec& chain, const std::vector<int>& ordered_v);

// Chain viewed only on V: first-return transition matrix via the Schur
// complement P_VV + P_VW (I - P_WW)^{-1} P_WV with W = A \ V.
struct InducedChain {
  std::vector<int> sites;  // state indices, in the order given
  Matrix p_tilde;
  Matrix g_tilde;          // (I - P_tilde)^{-1}
};

InducedChain induced_chain(const ChainSpec& chain, const std::vector<int>& v);

// Exit distribution H_A(x, z) for every state x (boundary rows are
// indicators). `cemetery` carries the killed mass so each row plus its
// cemetery entry sums to one.
struct PoissonKernel {
  std::vector<int> row_states;      // all states, chain order
  std::vector<int> boundary_order;  // column states
  Matrix h;
  Vector cemetery;

  double entry(const ChainSpec& chain, int x, int z) const;
  double row_to(const ChainSpec& chain, int x, const std::vector<int>& targets) const;
};

PoissonKernel poisson_kernel(const ChainSpec& chain);

// Boundary-to-boundary path measure H_{dA}(z, w); diagonal entries are 1 by
// convention. The marked overload promotes interior vertex x to the
// boundary first (domain A \ {x}).
struct BoundaryKernel {
  std::vector<int> boundary_order;
  Matrix h;

  double entry_for(const std::vector<int>& order, int z, int w) const;
};

BoundaryKernel boundary_poisson_kernel(const ChainSpec& chain);
BoundaryKernel boundary_poisson_kernel(const ChainSpec& chain, int mark);

// Unique bounded solution of L h = 0 on A with h = f on dA. `boundary_values`
// follows the chain's boundary order; the result covers all states.
Vector solve_dirichlet(const ChainSpec& chain, const Vector& boundary_values);

// sup |L f| over the subset; f is indexed by state. Killing contributes as a
// cemetery value of zero.
double harmonic_residual(const ChainSpec& chain, const Vector& f,
                         const std::vector<int>& subset);

// Monte Carlo mean-value Laplacian: 2d (sphere average - f(x)) / eps^2 with
// n_samples uniform points on the radius-eps sphere.
double mean_value_laplacian_estimate(const std::function<double(const Vector&)>& f,
                                     const Vector& x, double epsilon,
                                     std::int64_t n_samples, Rng& rng);

}  // namespace loopworks

#endif
