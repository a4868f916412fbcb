#include "loopworks/linops.hpp"

#include <algorithm>
#include <cmath>

namespace loopworks {

GreensSolver::GreensSolver(const Matrix& laplacian)
    : n_(static_cast<int>(laplacian.rows())), lu_(laplacian) {
  if (laplacian.rows() != laplacian.cols()) {
    fail(ErrorCode::DomainError, "laplacian must be square");
  }
  if (n_ == 0) {
    singular_ = false;
    return;
  }
  // Rank check on the LU pivots; exact singularities (absorbing interior,
  // exitless cycles) surface as zero pivots.
  double max_piv = 0.0, min_piv = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_; ++i) {
    const double piv = std::abs(lu_.matrixLU()(i, i));
    max_piv = std::max(max_piv, piv);
    min_piv = std::min(min_piv, piv);
  }
  singular_ = (max_piv == 0.0) || (min_piv <= max_piv * n_ * 1e-14);
  if (singular_) return;

  log_abs_det_ = 0.0;
  det_sign_ = lu_.permutationP().determinant() > 0 ? 1 : -1;
  for (int i = 0; i < n_; ++i) {
    const double piv = lu_.matrixLU()(i, i);
    log_abs_det_ += std::log(std::abs(piv));
    if (piv < 0.0) det_sign_ = -det_sign_;
  }
}

double GreensSolver::det_laplacian() const {
  return det_sign_ * std::exp(log_abs_det_);
}

double GreensSolver::log_det_greens() const { return -log_abs_det_; }

double GreensSolver::det_greens() const {
  return std::exp(-log_abs_det_) * det_sign_;
}

Vector GreensSolver::column(int j) const {
  Vector e = Vector::Zero(n_);
  e(j) = 1.0;
  return lu_.solve(e);
}

Vector GreensSolver::row(int i) const {
  Vector e = Vector::Zero(n_);
  e(i) = 1.0;
  return lu_.transpose().solve(e);
}

Vector GreensSolver::solve(const Vector& rhs) const { return lu_.solve(rhs); }

Matrix GreensSolver::solve(const Matrix& rhs) const { return lu_.solve(rhs); }

Matrix GreensSolver::inverse() const {
  return lu_.solve(Matrix::Identity(n_, n_));
}

Matrix laplacian_matrix(const ChainSpec& chain) {
  const int n = chain.n_interior();
  return Matrix::Identity(n, n) - chain.interior_matrix();
}

GreensBundle greens_bundle(const ChainSpec& chain) {
  const GreensSolver& solver = chain.greens();
  if (solver.singular()) fail(ErrorCode::SingularInterior, "I - P_A is not invertible");
  GreensBundle bundle;
  bundle.interior_order = chain.interior();
  bundle.laplacian = laplacian_matrix(chain);
  bundle.greens = solver.inverse();
  bundle.det_laplacian = solver.det_laplacian();
  bundle.det_greens = solver.det_greens();
  bundle.log_det_greens = solver.log_det_greens();
  return bundle;
}

namespace {

// G_D(x, x) for the subdomain D of interior vertices (positions into the
// chain's interior order are not needed; D holds state indices).
double greens_diag_on(const ChainSpec& chain, const std::vector<int>& domain, int x) {
  const int n = static_cast<int>(domain.size());
  std::vector<int> pos(static_cast<std::size_t>(chain.n_states()), -1);
  for (int i = 0; i < n; ++i) pos[static_cast<std::size_t>(domain[static_cast<std::size_t>(i)])] = i;
  Matrix l = Matrix::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    for (const auto& [j, p] : chain.row(domain[static_cast<std::size_t>(i)])) {
      const int jp = pos[static_cast<std::size_t>(j)];
      if (jp >= 0) l(i, jp) -= p;
    }
  }
  GreensSolver solver(l);
  if (solver.singular()) {
    fail(ErrorCode::SingularInterior, "sub-domain Laplacian is singular");
  }
  return solver.column(pos[static_cast<std::size_t>(x)])(pos[static_cast<std::size_t>(x)]);
}

}  // namespace

double f_v_ordered(const ChainSpec& chain, const std::vector<int>& ordered_v) {
  std::vector<int> domain = chain.interior();
  std::vector<char> seen(static_cast<std::size_t>(chain.n_states()), 0);
  double product = 1.0;
  for (int x : ordered_v) {
    if (!chain.is_interior(x)) continue;  // F_V(A) = F_{V cap A}(A)
    if (seen[static_cast<std::size_t>(x)]) continue;
    seen[static_cast<std::size_t>(x)] = 1;
    product *= greens_diag_on(chain, domain, x);
    domain.erase(std::find(domain.begin(), domain.end(), x));
  }
  return product;
}

double f_v(const ChainSpec& chain, const std::vector<int>& v) {
  // Canonical evaluation order: the chain's interior order restricted to V.
  std::vector<char> wanted(static_cast<std::size_t>(chain.n_states()), 0);
  for (int x : v) {
    if (x < 0 || x >= chain.n_states()) fail(ErrorCode::UnknownState, "F_V member");
    wanted[static_cast<std::size_t>(x)] = 1;
  }
  std::vector<int> ordered;
  for (int x : chain.interior()) {
    if (wanted[static_cast<std::size_t>(x)]) ordered.push_back(x);
  }
  return f_v_ordered(chain, ordered);
}

InducedChain induced_chain(const ChainSpec& chain, const std::vector<int>& v) {
  if (v.empty()) fail(ErrorCode::DomainError, "V must be nonempty");
  std::vector<char> in_v(static_cast<std::size_t>(chain.n_states()), 0);
  for (int x : v) {
    if (!chain.is_interior(x)) fail(ErrorCode::DomainError, "V must be a subset of A");
    if (in_v[static_cast<std::size_t>(x)]) fail(ErrorCode::DomainError, "duplicate in V");
    in_v[static_cast<std::size_t>(x)] = 1;
  }

  std::vector<int> w;
  for (int x : chain.interior()) {
    if (!in_v[static_cast<std::size_t>(x)]) w.push_back(x);
  }

  const int nv = static_cast<int>(v.size());
  const int nw = static_cast<int>(w.size());
  std::vector<int> vpos(static_cast<std::size_t>(chain.n_states()), -1);
  std::vector<int> wpos(static_cast<std::size_t>(chain.n_states()), -1);
  for (int i = 0; i < nv; ++i) vpos[static_cast<std::size_t>(v[static_cast<std::size_t>(i)])] = i;
  for (int i = 0; i < nw; ++i) wpos[static_cast<std::size_t>(w[static_cast<std::size_t>(i)])] = i;

  Matrix pvv = Matrix::Zero(nv, nv), pvw = Matrix::Zero(nv, nw);
  Matrix pwv = Matrix::Zero(nw, nv), pww = Matrix::Zero(nw, nw);
  auto scatter = [&](int from, int to, double p) {
    const int fv = vpos[static_cast<std::size_t>(from)], fw = wpos[static_cast<std::size_t>(from)];
    const int tv = vpos[static_cast<std::size_t>(to)], tw = wpos[static_cast<std::size_t>(to)];
    if (fv >= 0 && tv >= 0) pvv(fv, tv) += p;
    else if (fv >= 0 && tw >= 0) pvw(fv, tw) += p;
    else if (fw >= 0 && tv >= 0) pwv(fw, tv) += p;
    else if (fw >= 0 && tw >= 0) pww(fw, tw) += p;
  };
  for (int x : chain.interior()) {
    for (const auto& [j, p] : chain.row(x)) scatter(x, j, p);
  }

  InducedChain induced;
  induced.sites = v;
  if (nw == 0) {
    induced.p_tilde = pvv;
  } else {
    GreensSolver inner(Matrix::Identity(nw, nw) - pww);
    if (inner.singular()) fail(ErrorCode::SingularInterior, "I - P_WW is singular");
    induced.p_tilde = pvv + pvw * inner.solve(pwv);
  }
  GreensSolver outer(Matrix::Identity(nv, nv) - induced.p_tilde);
  if (outer.singular()) fail(ErrorCode::SingularInterior, "induced Laplacian is singular");
  induced.g_tilde = outer.inverse();
  return induced;
}

double PoissonKernel::entry(const ChainSpec& chain, int x, int z) const {
  const int zp = chain.boundary_pos(z);
  if (zp < 0) fail(ErrorCode::UnknownState, "z must be a boundary state");
  return h(x, zp);
}

double PoissonKernel::row_to(const ChainSpec& chain, int x,
                             const std::vector<int>& targets) const {
  double total = 0.0;
  for (int z : targets) total += entry(chain, x, z);
  return total;
}

PoissonKernel poisson_kernel(const ChainSpec& chain) {
  const GreensSolver& solver = chain.greens();
  if (solver.singular()) fail(ErrorCode::SingularInterior, "I - P_A is not invertible");

  const int n = chain.n_states();
  const int na = chain.n_interior();
  const int nb = static_cast<int>(chain.boundary().size());

  // Interior block: H = G_A P_{A,dA}, the resolvent form of the exit law.
  Matrix p_ab = Matrix::Zero(na, nb);
  for (int i = 0; i < na; ++i) {
    for (const auto& [j, p] : chain.row(chain.interior()[static_cast<std::size_t>(i)])) {
      const int jb = chain.boundary_pos(j);
      if (jb >= 0) p_ab(i, jb) += p;
    }
  }
  const Matrix h_interior = nb > 0 ? Matrix(solver.solve(p_ab)) : Matrix::Zero(na, 0);

  PoissonKernel kernel;
  kernel.row_states.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) kernel.row_states[static_cast<std::size_t>(i)] = i;
  kernel.boundary_order = chain.boundary();
  kernel.h = Matrix::Zero(n, nb);
  kernel.cemetery = Vector::Zero(n);
  for (int s = 0; s < n; ++s) {
    const int ip = chain.interior_pos(s);
    if (ip >= 0) {
      for (int z = 0; z < nb; ++z) kernel.h(s, z) = h_interior(ip, z);
    } else {
      kernel.h(s, chain.boundary_pos(s)) = 1.0;  // T = 0 on the boundary
    }
    kernel.cemetery(s) = std::max(0.0, 1.0 - kernel.h.row(s).sum());
  }
  return kernel;
}

double BoundaryKernel::entry_for(const std::vector<int>& order, int z, int w) const {
  auto zi = std::find(order.begin(), order.end(), z);
  auto wi = std::find(order.begin(), order.end(), w);
  if (zi == order.end() || wi == order.end()) {
    fail(ErrorCode::UnknownState, "state is not on the boundary");
  }
  return h(zi - order.begin(), wi - order.begin());
}

namespace {

BoundaryKernel boundary_kernel_of(const ChainSpec& original, const ChainSpec& shrunk) {
  const PoissonKernel inner = poisson_kernel(shrunk);
  const int nb = static_cast<int>(shrunk.boundary().size());

  BoundaryKernel kernel;
  kernel.boundary_order = shrunk.boundary();
  kernel.h = Matrix::Zero(nb, nb);
  for (int zi = 0; zi < nb; ++zi) {
    const int z = kernel.boundary_order[static_cast<std::size_t>(zi)];
    for (int wi = 0; wi < nb; ++wi) {
      const int w = kernel.boundary_order[static_cast<std::size_t>(wi)];
      if (z == w) {
        kernel.h(zi, wi) = 1.0;
        continue;
      }
      // First-step decomposition over the original outgoing row of z.
      double mass = 0.0;
      for (const auto& [y, p] : original.row(z)) {
        if (y == w) {
          mass += p;
        } else if (shrunk.is_interior(y)) {
          mass += p * inner.h(y, wi);
        }
      }
      kernel.h(zi, wi) = mass;
    }
  }
  return kernel;
}

}  // namespace

BoundaryKernel boundary_poisson_kernel(const ChainSpec& chain) {
  return boundary_kernel_of(chain, chain);
}

BoundaryKernel boundary_poisson_kernel(const ChainSpec& chain, int mark) {
  if (!chain.is_interior(mark)) fail(ErrorCode::DomainError, "mark must be interior");
  return boundary_kernel_of(chain, restrict_interior(chain, {mark}));
}

Vector solve_dirichlet(const ChainSpec& chain, const Vector& boundary_values) {
  const int nb = static_cast<int>(chain.boundary().size());
  if (boundary_values.size() != nb) {
    fail(ErrorCode::DomainError, "boundary data must cover all of dA");
  }
  const GreensSolver& solver = chain.greens();
  if (solver.singular()) fail(ErrorCode::SingularInterior, "I - P_A is not invertible");

  const int na = chain.n_interior();
  Vector rhs = Vector::Zero(na);
  for (int i = 0; i < na; ++i) {
    for (const auto& [j, p] : chain.row(chain.interior()[static_cast<std::size_t>(i)])) {
      const int jb = chain.boundary_pos(j);
      if (jb >= 0) rhs(i) += p * boundary_values(jb);
    }
  }
  const Vector h_interior = solver.solve(rhs);

  Vector h = Vector::Zero(chain.n_states());
  for (int s = 0; s < chain.n_states(); ++s) {
    const int ip = chain.interior_pos(s);
    h(s) = ip >= 0 ? h_interior(ip)
                   : boundary_values(chain.boundary_pos(s));
  }
  return h;
}

double harmonic_residual(const ChainSpec& chain, const Vector& f,
                         const std::vector<int>& subset) {
  if (f.size() != chain.n_states()) fail(ErrorCode::DomainError, "f must cover all states");
  double residual = 0.0;
  for (int x : subset) {
    double mean = 0.0;
    for (const auto& [y, p] : chain.row(x)) mean += p * f(y);
    residual = std::max(residual, std::abs(f(x) - mean));
  }
  return residual;
}

double mean_value_laplacian_estimate(const std::function<double(const Vector&)>& f,
                                     const Vector& x, double epsilon,
                                     std::int64_t n_samples, Rng& rng) {
  const int d = static_cast<int>(x.size());
  if (d < 1) fail(ErrorCode::DomainError, "dimension must be at least 1");
  if (!(epsilon > 0.0)) fail(ErrorCode::DomainError, "epsilon must be positive");
  if (n_samples <= 0) fail(ErrorCode::DomainError, "n_samples must be positive");

  std::normal_distribution<double> gauss(0.0, 1.0);
  double sum = 0.0;
  Vector u(d);
  for (std::int64_t i = 0; i < n_samples; ++i) {
    for (int k = 0; k < d; ++k) u(k) = gauss(rng);
    const double norm = u.norm();
    if (norm == 0.0) {
      --i;
      continue;
    }
    sum += f(x + (epsilon / norm) * u);
  }
  const double mean_value = sum / static_cast<double>(n_samples);
  return 2.0 * d * (mean_value - f(x)) / (epsilon * epsilon);
}

}  // namespace loopworks
