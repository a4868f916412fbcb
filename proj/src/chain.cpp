#include "loopworks/chain.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "loopworks/linops.hpp"

namespace loopworks {

namespace {

constexpr double kRowSumSlack = 1e-12;

bool all_numeric(const std::vector<std::string>& ids) {
  for (const auto& id : ids) {
    if (id.empty() || id.size() > 18) return false;
    std::size_t i = (id[0] == '-') ? 1 : 0;
    if (i == id.size()) return false;
    for (; i < id.size(); ++i) {
      if (id[i] < '0' || id[i] > '9') return false;
    }
  }
  return !ids.empty();
}

}  // namespace

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::RowSumExceedsOne: return "RowSumExceedsOne";
    case ErrorCode::SingularInterior: return "SingularInterior";
    case ErrorCode::UnknownState: return "UnknownState";
    case ErrorCode::MaxStepsExceeded: return "MaxStepsExceeded";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::EndpointMismatch: return "EndpointMismatch";
    case ErrorCode::NotExitPath: return "NotExitPath";
    case ErrorCode::NotALoop: return "NotALoop";
    case ErrorCode::NotExitSaw: return "NotExitSaw";
    case ErrorCode::NotALoopAtX: return "NotALoopAtX";
    case ErrorCode::DeadEnd: return "DeadEnd";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::ZeroMass: return "ZeroMass";
    case ErrorCode::MaxRetriesExceeded: return "MaxRetriesExceeded";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::TrivialLoop: return "TrivialLoop";
    case ErrorCode::EmptyDistribution: return "EmptyDistribution";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::NonIntegerResult: return "NonIntegerResult";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "UnknownError";
}

int ChainSpec::index_of(std::string_view id) const {
  for (int i = 0; i < n_states(); ++i) {
    if (states_[static_cast<std::size_t>(i)] == id) return i;
  }
  fail(ErrorCode::UnknownState, "state '" + std::string(id) + "' is not in the chain");
}

double ChainSpec::weight(int from, int to) const {
  for (const auto& [j, p] : row(from)) {
    if (j == to) return p;
  }
  return 0.0;
}

Matrix ChainSpec::interior_matrix() const {
  const int n = n_interior();
  Matrix p = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (const auto& [j, w] : row(interior_[static_cast<std::size_t>(i)])) {
      const int jp = interior_pos(j);
      if (jp >= 0) p(i, jp) += w;
    }
  }
  return p;
}

Matrix ChainSpec::full_matrix() const {
  const int n = n_states();
  Matrix p = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (const auto& [j, w] : row(i)) p(i, j) += w;
  }
  return p;
}

ChainSpec build_chain(std::vector<std::string> states,
                      std::vector<std::string> boundary,
                      std::vector<Transition> weights) {
  if (states.empty()) fail(ErrorCode::DomainError, "state list is empty");

  ChainSpec chain;
  chain.states_ = std::move(states);
  const int n = chain.n_states();

  std::unordered_map<std::string, int> index;
  index.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto [it, fresh] = index.emplace(chain.states_[static_cast<std::size_t>(i)], i);
    if (!fresh) fail(ErrorCode::DomainError, "duplicate state id '" + it->first + "'");
  }

  chain.interior_pos_.assign(static_cast<std::size_t>(n), -1);
  chain.boundary_pos_.assign(static_cast<std::size_t>(n), -1);
  std::vector<char> is_boundary(static_cast<std::size_t>(n), 0);
  for (const auto& id : boundary) {
    auto it = index.find(id);
    if (it == index.end()) fail(ErrorCode::UnknownState, "boundary state '" + id + "'");
    if (!is_boundary[static_cast<std::size_t>(it->second)]) {
      is_boundary[static_cast<std::size_t>(it->second)] = 1;
      chain.boundary_pos_[static_cast<std::size_t>(it->second)] =
          static_cast<int>(chain.boundary_.size());
      chain.boundary_.push_back(it->second);
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!is_boundary[static_cast<std::size_t>(i)]) {
      chain.interior_pos_[static_cast<std::size_t>(i)] = static_cast<int>(chain.interior_.size());
      chain.interior_.push_back(i);
    }
  }

  chain.rows_.assign(static_cast<std::size_t>(n), {});
  for (const auto& t : weights) {
    auto from = index.find(t.from);
    if (from == index.end()) fail(ErrorCode::UnknownState, "transition from '" + t.from + "'");
    auto to = index.find(t.to);
    if (to == index.end()) fail(ErrorCode::UnknownState, "transition to '" + t.to + "'");
    if (t.p < 0.0) {
      fail(ErrorCode::NegativeWeight,
           "p(" + t.from + "," + t.to + ") = " + std::to_string(t.p));
    }
    if (t.p == 0.0) continue;
    auto& row = chain.rows_[static_cast<std::size_t>(from->second)];
    bool merged = false;
    for (auto& [j, p] : row) {
      if (j == to->second) {
        p += t.p;
        merged = true;
        break;
      }
    }
    if (!merged) row.emplace_back(to->second, t.p);
  }

  chain.row_sums_.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (const auto& [j, p] : chain.rows_[static_cast<std::size_t>(i)]) sum += p;
    if (sum > 1.0 + kRowSumSlack) {
      fail(ErrorCode::RowSumExceedsOne,
           "row of '" + chain.states_[static_cast<std::size_t>(i)] + "' sums to " +
               std::to_string(sum));
    }
    chain.row_sums_[static_cast<std::size_t>(i)] = std::min(sum, 1.0);
  }

  chain.numeric_ids_ = all_numeric(chain.states_);

  auto solver = std::make_shared<GreensSolver>(Matrix::Identity(chain.n_interior(), chain.n_interior()) -
                                               chain.interior_matrix());
  if (solver->singular()) {
    fail(ErrorCode::SingularInterior, "I - P_A is not invertible");
  }
  chain.solver_ = std::move(solver);
  return chain;
}

ChainSpec restrict_interior(const ChainSpec& chain, const std::vector<int>& promote) {
  std::vector<std::string> boundary;
  for (int b : chain.boundary()) boundary.push_back(chain.label(b));
  for (int s : promote) {
    if (s < 0 || s >= chain.n_states()) fail(ErrorCode::UnknownState, "restrict target");
    boundary.push_back(chain.label(s));
  }
  std::vector<Transition> weights;
  for (int i = 0; i < chain.n_states(); ++i) {
    for (const auto& [j, p] : chain.row(i)) {
      weights.push_back({chain.label(i), chain.label(j), p});
    }
  }
  return build_chain(chain.states(), std::move(boundary), std::move(weights));
}

Matrix n_step_matrix(const ChainSpec& chain, int n) {
  if (n < 0) fail(ErrorCode::DomainError, "n must be nonnegative");
  Matrix result = Matrix::Identity(chain.n_states(), chain.n_states());
  if (n == 0) return result;
  const Matrix p = chain.full_matrix();
  for (int k = 0; k < n; ++k) result = result * p;
  return result;
}

namespace {

// One discrete step from s; kCemetery when the killing deficit fires.
int step_from(const ChainSpec& chain, int s, Rng& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  for (const auto& [j, p] : chain.row(s)) {
    acc += p;
    if (u < acc) return j;
  }
  return kCemetery;
}

}  // namespace

ExitSample sample_exit_path(const ChainSpec& chain, int start, Rng& rng,
                            std::int64_t max_steps) {
  if (!chain.is_interior(start)) fail(ErrorCode::DomainError, "start must be interior");
  if (max_steps <= 0) fail(ErrorCode::DomainError, "max_steps must be positive");

  ExitSample out;
  out.path.push_back(start);
  int current = start;
  for (std::int64_t step = 0; step < max_steps; ++step) {
    const int next = step_from(chain, current, rng);
    if (next == kCemetery) {
      out.exit = kCemetery;
      return out;
    }
    out.path.push_back(next);
    if (!chain.is_interior(next)) {
      out.exit = next;
      return out;
    }
    current = next;
  }
  fail(ErrorCode::MaxStepsExceeded, "no boundary hit within the step cap");
}

double nn_walk_return_prob(double q, std::int64_t n) {
  if (!(q > 0.0 && q < 1.0)) fail(ErrorCode::DomainError, "q must lie in (0,1)");
  if (n < 0) fail(ErrorCode::DomainError, "n must be nonnegative");
  if (n % 2 != 0) return 0.0;
  if (n == 0) return 1.0;
  const double m = static_cast<double>(n / 2);
  const double log_binom =
      std::lgamma(2.0 * m + 1.0) - 2.0 * std::lgamma(m + 1.0);
  return std::exp(log_binom + m * std::log(q) + m * std::log1p(-q));
}

WalkClass classify_nn_walk(double q) {
  if (!(q > 0.0 && q < 1.0)) fail(ErrorCode::DomainError, "q must lie in (0,1)");
  return std::abs(q - 0.5) <= 1e-15 ? WalkClass::Recurrent : WalkClass::Transient;
}

ChainSpec build_binary_tree_chain(int depth) {
  if (depth < 1) fail(ErrorCode::DomainError, "depth must be at least 1");

  std::vector<std::string> states;
  states.emplace_back("");
  std::vector<std::string> level{""};
  for (int d = 1; d <= depth; ++d) {
    std::vector<std::string> next;
    next.reserve(level.size() * 2);
    for (const auto& s : level) {
      next.push_back(s + "0");
      next.push_back(s + "1");
    }
    for (const auto& s : next) states.push_back(s);
    level = std::move(next);
  }

  std::vector<std::string> boundary;
  std::vector<Transition> weights;
  for (const auto& s : states) {
    const int len = static_cast<int>(s.size());
    if (len == depth) {
      boundary.push_back(s);
      weights.push_back({s, s, 1.0});  // absorbing truncation boundary
      continue;
    }
    if (len == 0) {
      weights.push_back({s, s + "0", 0.5});
      weights.push_back({s, s + "1", 0.5});
    } else {
      weights.push_back({s, s.substr(0, s.size() - 1), 1.0 / 3.0});
      weights.push_back({s, s + "0", 1.0 / 3.0});
      weights.push_back({s, s + "1", 1.0 / 3.0});
    }
  }
  return build_chain(std::move(states), std::move(boundary), std::move(weights));
}

ChainSpec build_complete_graph_chain(int n_plus_1) {
  if (n_plus_1 < 2) fail(ErrorCode::DomainError, "need at least 2 vertices");
  std::vector<std::string> states;
  states.reserve(static_cast<std::size_t>(n_plus_1));
  for (int i = 0; i < n_plus_1; ++i) states.push_back(std::to_string(i));
  const double p = 1.0 / static_cast<double>(n_plus_1 - 1);
  std::vector<Transition> weights;
  for (int i = 0; i < n_plus_1; ++i) {
    for (int j = 0; j < n_plus_1; ++j) {
      if (i != j) weights.push_back({states[static_cast<std::size_t>(i)],
                                     states[static_cast<std::size_t>(j)], p});
    }
  }
  return build_chain(std::move(states), {"0"}, std::move(weights));
}

JumpEvent sample_ctmc_jump(const ChainSpec& chain, const std::vector<double>& site_rates,
                           int x, Rng& rng) {
  if (!chain.is_interior(x)) fail(ErrorCode::DomainError, "x must be interior");
  if (x >= static_cast<int>(site_rates.size()) || site_rates[static_cast<std::size_t>(x)] <= 0.0) {
    fail(ErrorCode::DomainError, "site rate must be positive");
  }
  JumpEvent event;
  event.holding_time = sample_exponential(rng, site_rates[static_cast<std::size_t>(x)]);
  event.next_state = step_from(chain, x, rng);
  return event;
}

}  // namespace loopworks
