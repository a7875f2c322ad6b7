#pragma once

// Markov chains induced by the IFS on a finite invariant set: transition
// matrix, stationary distribution and expected Lyapunov exponent.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tosscatch/engine.hpp"
#include "tosscatch/errors.hpp"
#include "tosscatch/structures.hpp"

namespace tosscatch {

/// Tolerance used when deriving transitions from a constructed set.
inline constexpr double kTransitionTol = 1e-9;

/// Row-stochastic n x n matrix; entry (i, j) is the probability of moving
/// from point i to point j in one step.
class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  explicit TransitionMatrix(std::size_t n) : n_(n), entries_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }

  /// Largest |row sum - 1|.
  double row_sum_error() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n_; ++j) s += (*this)(i, j);
      worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
  }

  /// Every state reaches every other state through positive entries.
  bool is_irreducible() const {
    for (std::size_t s = 0; s < n_; ++s) {
      if (reachable_from(s).size() != n_) return false;
    }
    return true;
  }

  /// gcd of cycle lengths through state 0 (1 means aperiodic). Meaningful for
  /// irreducible chains only.
  std::size_t period() const {
    if (n_ == 0) return 0;
    // BFS levels; every edge u->v contributes level[u] + 1 - level[v].
    std::vector<long> level(n_, -1);
    std::vector<std::size_t> queue{0};
    level[0] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t u = queue[head];
      for (std::size_t v = 0; v < n_; ++v) {
        if ((*this)(u, v) > 0.0 && level[v] < 0) {
          level[v] = level[u] + 1;
          queue.push_back(v);
        }
      }
    }
    long g = 0;
    for (std::size_t u = 0; u < n_; ++u) {
      if (level[u] < 0) continue;
      for (std::size_t v = 0; v < n_; ++v) {
        if ((*this)(u, v) > 0.0 && level[v] >= 0) {
          g = std::gcd(g, std::abs(level[u] + 1 - level[v]));
        }
      }
    }
    return static_cast<std::size_t>(g);
  }

 private:
  std::vector<std::size_t> reachable_from(std::size_t s) const {
    std::vector<bool> seen(n_, false);
    std::vector<std::size_t> stack{s}, out;
    seen[s] = true;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      out.push_back(u);
      for (std::size_t v = 0; v < n_; ++v) {
        if ((*this)(u, v) > 0.0 && !seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
      }
    }
    return out;
  }

  std::size_t n_ = 0;
  std::vector<double> entries_;
};

/// Entry (i, j) = p [g(x_i) = x_j] + (1 - p) [h(x_i) = x_j], with images
/// matched to set points by verify_invariance.
inline TransitionMatrix build_transition_matrix(const FiniteInvariantSet& set,
                                                const IfsConfig& cfg,
                                                double tol = kTransitionTol) {
  const auto report = verify_invariance(set, cfg, tol);
  if (!report.passed) {
    throw InvarianceError("build_transition_matrix: set is not invariant (max distance " +
                          std::to_string(report.max_distance) + ")");
  }
  TransitionMatrix P(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    P(i, report.g_targets[i]) += cfg.p;
    P(i, report.h_targets[i]) += 1.0 - cfg.p;
  }
  return P;
}

struct StationaryDistribution {
  std::vector<double> weights;
  double residual = 0.0;  // max_j |(pi P)_j - pi_j|
};

/// Unique probability vector with pi P = pi. One balance equation is replaced
/// by sum(pi) = 1 and the system solved directly.
inline StationaryDistribution stationary_distribution(const TransitionMatrix& P) {
  const auto n = static_cast<Eigen::Index>(P.size());
  if (n == 0) throw DomainError("stationary_distribution: empty chain");
  Eigen::MatrixXd A(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      A(i, j) = P(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) - (i == j ? 1.0 : 0.0);
    }
  }
  A.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (lu.rank() < n) {
    throw NonUniqueStationaryError("stationary_distribution: chain has several closed classes");
  }
  const Eigen::VectorXd pi = lu.solve(b);

  StationaryDistribution out;
  out.weights.assign(pi.data(), pi.data() + n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double flow = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      flow += pi(i) * P(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
    out.residual = std::max(out.residual, std::abs(flow - pi(j)));
  }
  return out;
}

/// sum_i pi_i [p ln|g'(x_i)| + (1 - p) ln|h'(x_i)|].
inline double expected_lyapunov(const FiniteInvariantSet& set, const IfsConfig& cfg) {
  const auto pi = stationary_distribution(build_transition_matrix(set, cfg)).weights;
  double total = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double x = set.points[i];
    for (const auto& [map, weight] : {std::pair{&cfg.g, cfg.p}, std::pair{&cfg.h, 1.0 - cfg.p}}) {
      if (weight == 0.0 || pi[i] == 0.0) continue;
      const double d = std::abs(map->slope(x));
      if (d < 1e-300) {
        throw SingularDerivativeError("expected_lyapunov: critical point in the set");
      }
      total += pi[i] * weight * std::log(d);
    }
  }
  return total;
}

/// Fraction of kept states nearest to each set point, with batch-means errors.
inline std::vector<MeanEstimate> occupation_estimates(const Trajectory& traj,
                                                      const FiniteInvariantSet& set,
                                                      std::size_t n_batches = 100) {
  const auto kept = traj.kept_states();
  std::vector<std::size_t> nearest(kept.size());
  for (std::size_t k = 0; k < kept.size(); ++k) nearest[k] = nearest_index(set.points, kept[k]);
  std::vector<MeanEstimate> out;
  std::vector<double> indicator(kept.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t k = 0; k < kept.size(); ++k) indicator[k] = nearest[k] == i ? 1.0 : 0.0;
    out.push_back(batch_means(indicator, n_batches));
  }
  return out;
}

namespace detail {

inline double checked_log(double v, const char* what) {
  if (!(v > 0.0)) throw DomainError(std::string("closed_form_lyapunov: ") + what + " <= 0");
  return std::log(v);
}

}  // namespace detail

/// Closed-form E[lambda_p] for the cases that have one: L2 (params.first =
/// alpha), LT1/LT2/LT3 (params.first = mu). L3 and L5 only have the exact
/// pipeline of expected_lyapunov.
inline double closed_form_lyapunov(TacKind kind, TacParams params, double p) {
  const double q = 1.0 - p;
  switch (kind) {
    case TacKind::L2: {
      const double a = params.first;
      return p * detail::checked_log(std::abs(2.0 - a), "|2 - alpha|") +
             q * detail::checked_log(std::abs((a - 2.0) / (a - 1.0)), "|(alpha-2)/(alpha-1)|");
    }
    case TacKind::LT1: {
      const double mu = params.first;
      return p * detail::checked_log(mu - 1.0, "mu - 1") + q * detail::checked_log(mu, "mu");
    }
    case TacKind::LT2: {
      const double mu = params.first;
      return p * detail::checked_log((mu - 1.0) / mu, "(mu-1)/mu") +
             q * detail::checked_log(mu, "mu");
    }
    case TacKind::LT3: {
      const double mu = params.first;
      return p * (3.0 - p) / (2.0 - p) * detail::checked_log(mu - 1.0, "mu - 1") +
             p * q / (2.0 - p) * detail::checked_log(mu + 1.0, "mu + 1") +
             (1.0 - 2.0 * p) * detail::checked_log(mu, "mu");
    }
    default:
      throw DomainError("closed_form_lyapunov: no closed form for case " +
                        std::string(to_string(kind)));
  }
}

/// Bisection for a sign change of f on [lo, hi]. Values with |f| <= ftol
/// count as roots, so an endpoint sitting on the zero is accepted.
inline double bisect_sign_change(const std::function<double(double)>& f, double lo, double hi,
                                 double xtol = 1e-13, double ftol = 0.0) {
  double flo = f(lo), fhi = f(hi);
  if (std::abs(flo) <= ftol) return lo;
  if (std::abs(fhi) <= ftol) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) throw DomainError("bisect_sign_change: no sign change");
  while (hi - lo > xtol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (std::abs(fm) <= ftol) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace tosscatch
