#pragma once

// Logistic and tent maps on [0,1]: evaluation, derivatives, and the closed-form
// fixed points, period-2 orbits and preimages used by the toss-and-catch
// constructions.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "tosscatch/errors.hpp"

namespace tosscatch {

enum class MapKind { Logistic, Tent };

/// Roots of the preimage quadratic closer than this are reported once.
inline constexpr double kRootMergeTol = 1e-12;

/// A one-parameter map of the unit interval.
///
/// Logistic: x -> gamma x (1 - x), gamma in [0,4].
/// Tent:     x -> mu x on [0, 0.5), mu (1 - x) on [0.5, 1], mu in [0,2].
///
/// Parameters outside those ranges are representable (the simulation engine
/// reports the resulting escape); in_standard_range() tells them apart.
class Map1D {
 public:
  constexpr Map1D() = default;
  constexpr Map1D(MapKind kind, double param) : kind_(kind), param_(param) {}

  static constexpr Map1D logistic(double gamma) { return {MapKind::Logistic, gamma}; }
  static constexpr Map1D tent(double mu) { return {MapKind::Tent, mu}; }

  constexpr MapKind kind() const { return kind_; }
  constexpr double param() const { return param_; }

  constexpr bool in_standard_range() const {
    const double hi = kind_ == MapKind::Logistic ? 4.0 : 2.0;
    return param_ >= 0.0 && param_ <= hi;
  }

  /// Map value without the domain check; callers guarantee x in [0,1].
  constexpr double apply(double x) const {
    if (kind_ == MapKind::Logistic) return param_ * x * (1.0 - x);
    return x < 0.5 ? param_ * x : param_ * (1.0 - x);
  }

  /// Slope without the domain check. The tent kink x = 0.5 takes the
  /// right-branch slope -mu.
  constexpr double slope(double x) const {
    if (kind_ == MapKind::Logistic) return param_ * (1.0 - 2.0 * x);
    return x < 0.5 ? param_ : -param_;
  }

  friend constexpr bool operator==(const Map1D&, const Map1D&) = default;

 private:
  MapKind kind_ = MapKind::Logistic;
  double param_ = 0.0;
};

namespace detail {

inline void require_unit_interval(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError(std::string(what) + ": x = " + std::to_string(x) +
                      " is outside [0,1]");
  }
}

}  // namespace detail

inline double eval(const Map1D& map, double x) {
  detail::require_unit_interval(x, "eval");
  return map.apply(x);
}

inline double deriv(const Map1D& map, double x) {
  detail::require_unit_interval(x, "deriv");
  return map.slope(x);
}

/// Nontrivial fixed point (gamma - 1) / gamma of the logistic map.
inline double logistic_fixed_point(double gamma) {
  if (gamma == 0.0) throw SingularityError("logistic_fixed_point: gamma = 0");
  return (gamma - 1.0) / gamma;
}

/// Period-2 orbit of the logistic map as (minus-root, plus-root):
/// (beta + 1 -/+ sqrt((beta + 1)(beta - 3))) / (2 beta).
inline std::pair<double, double> logistic_period2(double beta) {
  if (!(beta >= 3.0)) {
    throw NoRealOrbitError("logistic_period2: beta = " + std::to_string(beta) +
                           " < 3 has no real period-2 orbit");
  }
  const double root = std::sqrt((beta + 1.0) * (beta - 3.0));
  return {(beta + 1.0 - root) / (2.0 * beta), (beta + 1.0 + root) / (2.0 * beta)};
}

/// Solutions of gamma x (1 - x) = y inside [0,1], ascending. At most two;
/// the vertex case yields the single point 0.5.
inline std::vector<double> logistic_preimages(double gamma, double y) {
  if (!(gamma > 0.0)) throw DomainError("logistic_preimages: gamma must be positive");
  double disc = 1.0 - 4.0 * y / gamma;
  if (disc < 0.0) {
    // y = f(0.5) can overshoot gamma/4 by an ulp.
    if (disc < -4.0 * kRootMergeTol) return {};
    disc = 0.0;
  }
  const double s = std::sqrt(disc);
  const double upper = 0.5 * (1.0 + s);
  // Product of roots is y / gamma; avoids cancellation in (1 - s) / 2.
  const double lower = upper > 0.0 ? y / (gamma * upper) : 0.5 * (1.0 - s);
  std::vector<double> out;
  if (upper - lower <= kRootMergeTol) {
    const double mid = 0.5 * (lower + upper);
    if (mid >= 0.0 && mid <= 1.0) out.push_back(mid);
    return out;
  }
  for (double r : {lower, upper}) {
    if (r >= 0.0 && r <= 1.0) out.push_back(r);
  }
  return out;
}

/// Fixed points of the tent map: {0} for mu < 1, {0, mu/(1+mu)} for mu > 1.
/// At mu = 1 the left branch is the identity and the fixed set is a continuum.
inline std::vector<double> tent_fixed_points(double mu) {
  if (mu == 1.0) {
    throw DegenerateParameterError("tent_fixed_points: mu = 1 fixes all of [0, 0.5]");
  }
  if (!(mu >= 0.0 && mu <= 2.0)) throw DomainError("tent_fixed_points: mu outside [0,2]");
  if (mu < 1.0) return {0.0};
  return {0.0, mu / (1.0 + mu)};
}

/// Period-2 orbit (mu/(1+mu^2), mu^2/(1+mu^2)) of the tent map, mu in (1,2].
inline std::pair<double, double> tent_period2(double mu) {
  if (!(mu > 1.0)) {
    throw DegenerateParameterError("tent_period2: mu <= 1 has no period-2 orbit");
  }
  if (mu > 2.0) throw DomainError("tent_period2: mu > 2");
  const double denom = 1.0 + mu * mu;
  return {mu / denom, mu * mu / denom};
}

}  // namespace tosscatch
