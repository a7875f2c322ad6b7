#pragma once

// Seeded simulation of the random IFS x_{n+1} = F_n(x_n), where F_n is g with
// probability p and h with probability 1 - p, drawn i.i.d. at every step.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tosscatch/errors.hpp"
#include "tosscatch/maps.hpp"
#include "tosscatch/rng.hpp"

namespace tosscatch {

inline constexpr double kDefaultP = 0.5;
inline constexpr std::size_t kDefaultTransient = 10000;
inline constexpr std::size_t kDefaultKeep = 1000;
inline constexpr double kDefaultX0 = 0.3;
inline constexpr double kEscapeTol = 1e-9;

struct IfsConfig {
  Map1D g;
  Map1D h;
  double p = kDefaultP;  // probability of applying g
  std::uint64_t seed = 0;
};

enum class Choice : std::uint8_t { G, H };

inline const Map1D& chosen_map(const IfsConfig& cfg, Choice c) {
  return c == Choice::G ? cfg.g : cfg.h;
}

/// Kept part of a simulated orbit. states[0] is the state reached after the
/// transient; choices[k] is the map that took states[k] to states[k+1].
struct Trajectory {
  std::vector<double> states;
  std::vector<Choice> choices;
  std::size_t transient_len = 0;

  std::size_t steps() const { return choices.size(); }
  /// The n_keep states produced inside the kept window (states[1..]).
  std::span<const double> kept_states() const {
    return std::span<const double>(states).subspan(1);
  }
};

namespace detail {

inline double checked_step(const Map1D& map, double x) {
  double y = map.apply(x);
  if (!(y >= -kEscapeTol && y <= 1.0 + kEscapeTol)) {
    throw EscapeError("simulate: iterate " + std::to_string(y) + " left [0,1]");
  }
  // Rounding slack only; never triggers for parameters in the standard range.
  if (y < 0.0) y = 0.0;
  if (y > 1.0) y = 1.0;
  return y;
}

}  // namespace detail

/// Runs n_transient + n_keep random steps from x0 and returns the last n_keep
/// steps. The result depends only on the arguments.
inline Trajectory simulate(const IfsConfig& cfg, double x0,
                           std::size_t n_transient = kDefaultTransient,
                           std::size_t n_keep = kDefaultKeep) {
  if (!(cfg.p >= 0.0 && cfg.p <= 1.0)) throw DomainError("simulate: p outside [0,1]");
  detail::require_unit_interval(x0, "simulate");
  if (n_keep < 1) throw DomainError("simulate: n_keep must be at least 1");

  SplitMix64 rng(cfg.seed);
  double x = x0;
  for (std::size_t k = 0; k < n_transient; ++k) {
    x = detail::checked_step(rng.next_unit() < cfg.p ? cfg.g : cfg.h, x);
  }

  Trajectory traj;
  traj.transient_len = n_transient;
  traj.states.reserve(n_keep + 1);
  traj.choices.reserve(n_keep);
  traj.states.push_back(x);
  for (std::size_t k = 0; k < n_keep; ++k) {
    const Choice c = rng.next_unit() < cfg.p ? Choice::G : Choice::H;
    x = detail::checked_step(chosen_map(cfg, c), x);
    traj.choices.push_back(c);
    traj.states.push_back(x);
  }
  return traj;
}

/// Recomputes the states of `traj` from its entry state and recorded choices.
inline std::vector<double> replay(const Trajectory& traj, const IfsConfig& cfg) {
  std::vector<double> out;
  if (traj.states.empty()) return out;
  out.reserve(traj.states.size());
  out.push_back(traj.states.front());
  for (Choice c : traj.choices) out.push_back(eval(chosen_map(cfg, c), out.back()));
  return out;
}

/// Per-step log-derivative terms ln|m_k'(x_k)| over the kept steps.
inline std::vector<double> log_derivative_terms(const Trajectory& traj, const IfsConfig& cfg) {
  std::vector<double> terms;
  terms.reserve(traj.steps());
  for (std::size_t k = 0; k < traj.steps(); ++k) {
    const double d = std::abs(chosen_map(cfg, traj.choices[k]).slope(traj.states[k]));
    if (d < 1e-300) {
      throw SingularDerivativeError("finite_time_lyapunov: zero derivative at step " +
                                    std::to_string(k));
    }
    terms.push_back(std::log(d));
  }
  return terms;
}

/// Mean of a correlated series with a batch-means standard error.
struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

inline MeanEstimate batch_means(std::span<const double> xs, std::size_t n_batches = 100) {
  MeanEstimate est;
  if (xs.empty()) return est;
  double total = 0.0;
  for (double v : xs) total += v;
  est.mean = total / static_cast<double>(xs.size());

  const std::size_t batch = xs.size() / n_batches;
  if (n_batches < 2 || batch == 0) return est;
  std::vector<double> means(n_batches, 0.0);
  for (std::size_t b = 0; b < n_batches; ++b) {
    double s = 0.0;
    for (std::size_t k = b * batch; k < (b + 1) * batch; ++k) s += xs[k];
    means[b] = s / static_cast<double>(batch);
  }
  double grand = 0.0;
  for (double m : means) grand += m;
  grand /= static_cast<double>(n_batches);
  double var = 0.0;
  for (double m : means) var += (m - grand) * (m - grand);
  var /= static_cast<double>(n_batches - 1);
  est.std_error = std::sqrt(var / static_cast<double>(n_batches));
  return est;
}

/// (1/N) sum ln|deriv(chosen map, state)| over the kept steps.
inline double finite_time_lyapunov(const Trajectory& traj, const IfsConfig& cfg) {
  if (traj.steps() == 0) throw DomainError("finite_time_lyapunov: empty trajectory");
  const auto terms = log_derivative_terms(traj, cfg);
  return batch_means(terms, 0).mean;
}

/// finite_time_lyapunov together with its batch-means standard error.
inline MeanEstimate finite_time_lyapunov_estimate(const Trajectory& traj, const IfsConfig& cfg,
                                                  std::size_t n_batches = 100) {
  if (traj.steps() == 0) throw DomainError("finite_time_lyapunov: empty trajectory");
  const auto terms = log_derivative_terms(traj, cfg);
  return batch_means(terms, n_batches);
}

}  // namespace tosscatch
