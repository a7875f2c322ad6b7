#pragma once

// Toss-and-catch structures: finite sets L with L = g(L) u h(L) for the
// logistic pair (g, h) = (f_alpha, f_beta) and the logistic-tent pair
// (g, h) = (f_gamma, tent_mu). Each case comes with the parameter condition
// that creates it and the closed-form point list.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tosscatch/engine.hpp"
#include "tosscatch/errors.hpp"
#include "tosscatch/maps.hpp"

namespace tosscatch {

/// Logistic 2/3/5-point and logistic-tent 1/2/3-point structures.
enum class TacKind { L2, L3, L5, LT1, LT2, LT3 };

inline constexpr std::array<TacKind, 6> kAllTacKinds = {
    TacKind::L2, TacKind::L3, TacKind::L5, TacKind::LT1, TacKind::LT2, TacKind::LT3};

inline constexpr std::string_view to_string(TacKind kind) {
  switch (kind) {
    case TacKind::L2: return "l2";
    case TacKind::L3: return "l3";
    case TacKind::L5: return "l5";
    case TacKind::LT1: return "lt1";
    case TacKind::LT2: return "lt2";
    case TacKind::LT3: return "lt3";
  }
  return "?";
}

inline std::optional<TacKind> parse_tac_kind(std::string_view name) {
  for (TacKind k : kAllTacKinds) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

constexpr bool is_logistic_pair(TacKind kind) {
  return kind == TacKind::L2 || kind == TacKind::L3 || kind == TacKind::L5;
}

enum class PointRole { FixedOfG, FixedOfH, FixedOfBoth, PeriodicOfG, PeriodicOfH, Bridging };

/// Role of a point in the set; period is 0 for bridging points.
struct PointLabel {
  PointRole role = PointRole::Bridging;
  int period = 0;

  friend bool operator==(const PointLabel&, const PointLabel&) = default;
};

inline std::string to_string(const PointLabel& label) {
  switch (label.role) {
    case PointRole::FixedOfG: return "fixed_g";
    case PointRole::FixedOfH: return "fixed_h";
    case PointRole::FixedOfBoth: return "fixed_gh";
    case PointRole::PeriodicOfG: return "periodic_g" + std::to_string(label.period);
    case PointRole::PeriodicOfH: return "periodic_h" + std::to_string(label.period);
    case PointRole::Bridging: return "bridging";
  }
  return "?";
}

/// (alpha, beta) for the logistic cases, (mu, gamma) for logistic-tent.
struct TacParams {
  double first = 0.0;
  double second = 0.0;
};

struct FiniteInvariantSet {
  TacKind kind = TacKind::L2;
  std::vector<double> points;
  std::vector<PointLabel> labels;
  TacParams params;

  std::size_t size() const { return points.size(); }

  std::size_t bridging_count() const {
    std::size_t n = 0;
    for (const auto& l : labels) n += l.role == PointRole::Bridging ? 1 : 0;
    return n;
  }

  /// The IFS whose invariant set this is.
  IfsConfig config(double p = kDefaultP, std::uint64_t seed = 0) const {
    if (is_logistic_pair(kind)) {
      return {Map1D::logistic(params.first), Map1D::logistic(params.second), p, seed};
    }
    return {Map1D::logistic(params.second), Map1D::tent(params.first), p, seed};
  }
};

struct AlphaBeta {
  double alpha = 0.0;
  double beta = 0.0;
};

// ---------------------------------------------------------------------------
// Parameter conditions

/// 2-point condition alpha = beta / (beta - 1). An involution: the pair of
/// fixed points swaps roles when alpha and beta are exchanged.
inline double c2_alpha(double beta) {
  if (beta == 1.0) throw SingularityError("c2_alpha: beta = 1");
  return beta / (beta - 1.0);
}

/// Exact solution of the 3-point system. alpha - 1 is the real root of
/// t^3 = t + 1.
inline AlphaBeta solve_c3() {
  const double r69 = std::sqrt(69.0);
  const double alpha =
      (3.0 + std::cbrt(0.5 * (27.0 - 3.0 * r69)) + std::cbrt(0.5 * (27.0 + 3.0 * r69))) / 3.0;
  const double beta =
      (2.0 + std::cbrt(0.5 * (97.0 - 3.0 * r69)) + std::cbrt(0.5 * (97.0 + 3.0 * r69))) / 3.0;
  return {alpha, beta};
}

/// Exact solution of the 5-point system; beta = 2 alpha - 1.
inline AlphaBeta solve_c5() {
  const double r33 = std::sqrt(33.0);
  const double s = std::cbrt(54.0 - 6.0 * r33) + std::cbrt(54.0 + 6.0 * r33);
  return {1.0 + s / 6.0, 1.0 + s / 3.0};
}

/// Residuals of the three 3-point equations at (alpha, beta):
///   lo(beta) = (alpha-1)/alpha,  h(1/alpha) = hi(beta),  g(hi(beta)) = 1/alpha
/// with (lo, hi) the period-2 orbit of h.
inline std::array<double, 3> c3_residuals(double alpha, double beta) {
  const auto [lo, hi] = logistic_period2(beta);
  const Map1D g = Map1D::logistic(alpha), h = Map1D::logistic(beta);
  return {lo - (alpha - 1.0) / alpha, h.apply(1.0 / alpha) - hi, g.apply(hi) - 1.0 / alpha};
}

/// Residuals of the five 5-point equations:
///   h((a-1)/a) = hi,  g(lo) = (a-1)/a,  g((b-1)/b) = lo,  g(1/b) = lo,  g(hi) = 1/b.
inline std::array<double, 5> c5_residuals(double alpha, double beta) {
  const auto [lo, hi] = logistic_period2(beta);
  const Map1D g = Map1D::logistic(alpha), h = Map1D::logistic(beta);
  const double fix_g = (alpha - 1.0) / alpha;
  return {h.apply(fix_g) - hi, g.apply(lo) - fix_g, g.apply((beta - 1.0) / beta) - lo,
          g.apply(1.0 / beta) - lo, g.apply(hi) - 1.0 / beta};
}

/// Logistic parameter gamma paired with tent slope mu for the logistic-tent
/// cases: 1 + mu (LT1), (1 + mu)/mu (LT2), (1 + mu^2)/mu (LT3).
inline double lt_gamma(TacKind kind, double mu) {
  if (mu == 1.0) throw DegenerateParameterError("lt_gamma: mu = 1 makes the tent trivial");
  if (!(mu > 1.0 && mu <= 2.0)) throw RangeError("lt_gamma: mu must lie in (1, 2]");
  double gamma = 0.0;
  switch (kind) {
    case TacKind::LT1: gamma = 1.0 + mu; break;
    case TacKind::LT2: gamma = (1.0 + mu) / mu; break;
    case TacKind::LT3: gamma = (1.0 + mu * mu) / mu; break;
    default: throw DomainError("lt_gamma: not a logistic-tent case");
  }
  if (gamma > 4.0) throw RangeError("lt_gamma: gamma > 4");
  return gamma;
}

// ---------------------------------------------------------------------------
// Construction

namespace detail {

inline void require_distinct(const FiniteInvariantSet& set) {
  for (std::size_t i = 0; i < set.points.size(); ++i) {
    for (std::size_t j = i + 1; j < set.points.size(); ++j) {
      if (std::abs(set.points[i] - set.points[j]) <= 1e-9) {
        throw DegenerateParameterError("build_tac: points " + std::to_string(i) + " and " +
                                       std::to_string(j) + " coincide");
      }
    }
  }
}

inline double require_free_param(TacKind kind, const std::optional<double>& free_param) {
  if (!free_param) {
    throw DomainError("build_tac: case " + std::string(to_string(kind)) +
                      " needs a free parameter");
  }
  return *free_param;
}

}  // namespace detail

/// Builds the finite invariant set of `kind`. free_param is beta for L2 and
/// mu for the logistic-tent cases; L3 and L5 have fixed parameters.
/// Points are listed in the conventional order for each case.
inline FiniteInvariantSet build_tac(TacKind kind, std::optional<double> free_param = std::nullopt) {
  constexpr PointLabel fixed_g{PointRole::FixedOfG, 1};
  constexpr PointLabel fixed_h{PointRole::FixedOfH, 1};
  constexpr PointLabel period2_h{PointRole::PeriodicOfH, 2};
  constexpr PointLabel bridging{PointRole::Bridging, 0};

  FiniteInvariantSet set;
  set.kind = kind;
  switch (kind) {
    case TacKind::L2: {
      const double beta = detail::require_free_param(kind, free_param);
      double alpha = c2_alpha(beta);
      if (alpha > 4.0 && alpha - 4.0 <= 1e-12) alpha = 4.0;  // beta = 4/3 rounds just past 4
      if (!(alpha > 0.0 && alpha <= 4.0 && beta > 0.0 && beta <= 4.0)) {
        throw RangeError("build_tac: l2 needs beta in [4/3, 4]");
      }
      set.params = {alpha, beta};
      set.points = {(alpha - 1.0) / alpha, 1.0 / alpha};
      set.labels = {fixed_g, fixed_h};
      break;
    }
    case TacKind::L3: {
      if (free_param) throw DomainError("build_tac: l3 has no free parameter");
      const auto [alpha, beta] = solve_c3();
      set.params = {alpha, beta};
      set.points = {1.0 / alpha, (alpha - 1.0) / alpha, logistic_period2(beta).second};
      set.labels = {bridging, period2_h, period2_h};
      break;
    }
    case TacKind::L5: {
      if (free_param) throw DomainError("build_tac: l5 has no free parameter");
      const auto [alpha, beta] = solve_c5();
      const auto [lo, hi] = logistic_period2(beta);
      set.params = {alpha, beta};
      set.points = {1.0 / beta, lo, (alpha - 1.0) / alpha, (beta - 1.0) / beta, hi};
      set.labels = {bridging, period2_h, fixed_g, fixed_h, period2_h};
      break;
    }
    case TacKind::LT1: {
      const double mu = detail::require_free_param(kind, free_param);
      const double gamma = lt_gamma(kind, mu);
      set.params = {mu, gamma};
      set.points = {mu / (1.0 + mu)};
      set.labels = {{PointRole::FixedOfBoth, 1}};
      break;
    }
    case TacKind::LT2: {
      const double mu = detail::require_free_param(kind, free_param);
      const double gamma = lt_gamma(kind, mu);
      set.params = {mu, gamma};
      set.points = {1.0 - 1.0 / gamma, mu / (1.0 + mu)};
      set.labels = {fixed_g, fixed_h};
      break;
    }
    case TacKind::LT3: {
      const double mu = detail::require_free_param(kind, free_param);
      const double gamma = lt_gamma(kind, mu);
      const auto [lo, hi] = tent_period2(mu);
      set.params = {mu, gamma};
      set.points = {lo, 1.0 - 1.0 / gamma, hi};
      set.labels = {period2_h, fixed_g, period2_h};
      break;
    }
  }
  detail::require_distinct(set);
  return set;
}

// ---------------------------------------------------------------------------
// Verification

struct InvarianceReport {
  bool passed = false;
  double max_distance = 0.0;
  std::vector<std::size_t> g_targets;  // index of the set point nearest g(x_i)
  std::vector<std::size_t> h_targets;
};

/// Index of the point nearest to y; ties go to the lowest index.
inline std::size_t nearest_index(const std::vector<double>& points, double y) {
  std::size_t best = 0;
  double best_dist = std::abs(points.at(0) - y);
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double d = std::abs(points[i] - y);
    if (d < best_dist) {
      best = i;
      best_dist = d;
    }
  }
  return best;
}

/// Checks forward invariance of `set` under both maps of `cfg`. Failure is
/// reported through `passed`, never thrown.
inline InvarianceReport verify_invariance(const FiniteInvariantSet& set, const IfsConfig& cfg,
                                          double tol) {
  InvarianceReport report;
  if (set.points.empty()) return report;
  for (double x : set.points) {
    for (const Map1D* m : {&cfg.g, &cfg.h}) {
      const double y = m->apply(x);
      const std::size_t j = nearest_index(set.points, y);
      report.max_distance = std::max(report.max_distance, std::abs(set.points[j] - y));
      (m == &cfg.g ? report.g_targets : report.h_targets).push_back(j);
    }
  }
  report.passed = report.max_distance <= tol;
  return report;
}

inline constexpr int kDefaultMaxPeriod = 4;
inline constexpr double kDefaultClassifyTol = 1e-9;

namespace detail {

/// Smallest k in [1, k_max] with |m^k(x) - x| <= tol, or 0.
inline int minimal_period(const Map1D& m, double x, int k_max, double tol) {
  double y = x;
  for (int k = 1; k <= k_max; ++k) {
    y = m.apply(y);
    if (std::abs(y - x) <= tol) return k;
  }
  return 0;
}

}  // namespace detail

/// Labels each point by its periodicity under g and h. A nontrivial orbit
/// takes precedence over a fixed point of the other map, so a point that is
/// fixed by g and lies on a period-2 orbit of h is labelled periodic_h2.
inline std::vector<PointLabel> classify_bridging(const FiniteInvariantSet& set,
                                                 const IfsConfig& cfg,
                                                 int k_max = kDefaultMaxPeriod,
                                                 double tol = kDefaultClassifyTol) {
  if (k_max < 2) throw DomainError("classify_bridging: k_max must be at least 2");
  std::vector<PointLabel> labels;
  labels.reserve(set.points.size());
  for (double x : set.points) {
    const int kg = detail::minimal_period(cfg.g, x, k_max, tol);
    const int kh = detail::minimal_period(cfg.h, x, k_max, tol);
    if (kh >= 2) {
      labels.push_back({PointRole::PeriodicOfH, kh});
    } else if (kg >= 2) {
      labels.push_back({PointRole::PeriodicOfG, kg});
    } else if (kg == 1 && kh == 1) {
      labels.push_back({PointRole::FixedOfBoth, 1});
    } else if (kg == 1) {
      labels.push_back({PointRole::FixedOfG, 1});
    } else if (kh == 1) {
      labels.push_back({PointRole::FixedOfH, 1});
    } else {
      labels.push_back({PointRole::Bridging, 0});
    }
  }
  return labels;
}

}  // namespace tosscatch
