#pragma once

// Attractor size by greedy epsilon-cover, and the two parameter-space drivers
// built on it: bifurcation sweeps and 2-D cover-count heatmaps.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "tosscatch/engine.hpp"
#include "tosscatch/errors.hpp"
#include "tosscatch/maps.hpp"
#include "tosscatch/rng.hpp"

namespace tosscatch {

inline constexpr double kDefaultEpsilon = 1e-6;
inline constexpr int kEscapeSentinel = -1;

struct CoverResult {
  double epsilon = 0.0;
  std::size_t count = 0;
  std::vector<double> left_endpoints;
};

/// Covers the points with closed intervals [l, l + 2 eps], each anchored at
/// the leftmost point not yet covered. Optimal in one dimension.
inline CoverResult greedy_cover(std::span<const double> points, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("greedy_cover: epsilon must be positive");
  std::vector<double> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());
  CoverResult out;
  out.epsilon = epsilon;
  const double width = 2.0 * epsilon;
  std::size_t i = 0;
  while (i < sorted.size()) {
    const double left = sorted[i];
    out.left_endpoints.push_back(left);
    while (i < sorted.size() && sorted[i] <= left + width) ++i;
  }
  out.count = out.left_endpoints.size();
  return out;
}

/// Simulation settings shared by the scan drivers.
struct ScanOptions {
  double p = kDefaultP;
  std::size_t transient = kDefaultTransient;
  std::size_t keep = kDefaultKeep;
  double x0 = kDefaultX0;
  std::uint64_t base_seed = 0;
  double epsilon = kDefaultEpsilon;
};

inline void validate(const ScanOptions& opts) {
  if (!(opts.p >= 0.0 && opts.p <= 1.0)) throw DomainError("scan: p outside [0,1]");
  if (!(opts.x0 >= 0.0 && opts.x0 <= 1.0)) throw DomainError("scan: x0 outside [0,1]");
  if (opts.keep < 1) throw DomainError("scan: keep must be at least 1");
  if (!(opts.epsilon > 0.0)) throw DomainError("scan: epsilon must be positive");
}

/// Evenly spaced samples lo, ..., hi (n >= 2).
struct Sweep {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t n = 2;

  double at(std::size_t k) const {
    if (k + 1 == n) return hi;
    return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  }
};

// ---------------------------------------------------------------------------
// Bifurcation sweeps

enum class BifurcationFamilyKind { LogisticPair, LogisticTent };

/// LogisticPair(delta): alpha = gamma (1 - delta), beta = gamma (1 + delta).
/// LogisticTent(mu): g = f_gamma, h = tent_mu. The sweep variable is gamma.
struct BifurcationFamily {
  BifurcationFamilyKind kind = BifurcationFamilyKind::LogisticPair;
  double fixed = 0.0;  // delta or mu

  static BifurcationFamily logistic_pair(double delta) {
    return {BifurcationFamilyKind::LogisticPair, delta};
  }
  static BifurcationFamily logistic_tent(double mu) {
    return {BifurcationFamilyKind::LogisticTent, mu};
  }

  IfsConfig config(double gamma, double p, std::uint64_t seed) const {
    IfsConfig cfg;
    if (kind == BifurcationFamilyKind::LogisticPair) {
      cfg.g = Map1D::logistic(gamma * (1.0 - fixed));
      cfg.h = Map1D::logistic(gamma * (1.0 + fixed));
    } else {
      cfg.g = Map1D::logistic(gamma);
      cfg.h = Map1D::tent(fixed);
    }
    if (!cfg.g.in_standard_range() || !cfg.h.in_standard_range()) {
      throw RangeError("bifurcation: gamma = " + std::to_string(gamma) +
                       " gives map parameters outside their range");
    }
    cfg.p = p;
    cfg.seed = seed;
    return cfg;
  }
};

struct BifurcationRow {
  double sweep_value = 0.0;
  std::vector<double> states;  // kept states
};

/// One simulation per sweep value; row k uses seed cell_seed(base_seed, k, 0).
/// All sweep values are validated before any simulation runs. With
/// skip_out_of_range, values whose maps leave their standard range are
/// dropped instead of raising RangeError; kept rows keep their seed index.
inline std::vector<BifurcationRow> bifurcation_scan(const BifurcationFamily& family,
                                                    const Sweep& sweep,
                                                    const ScanOptions& opts = {},
                                                    bool skip_out_of_range = false) {
  if (sweep.n < 2) throw DomainError("bifurcation_scan: need at least two sweep values");
  validate(opts);
  std::vector<std::pair<double, IfsConfig>> configs;
  configs.reserve(sweep.n);
  for (std::size_t k = 0; k < sweep.n; ++k) {
    try {
      configs.emplace_back(sweep.at(k),
                           family.config(sweep.at(k), opts.p,
                                         cell_seed(opts.base_seed, static_cast<std::uint32_t>(k), 0)));
    } catch (const RangeError&) {
      if (!skip_out_of_range) throw;
    }
  }
  std::vector<BifurcationRow> rows;
  rows.reserve(configs.size());
  for (const auto& [value, cfg] : configs) {
    const auto traj = simulate(cfg, opts.x0, opts.transient, opts.keep);
    const auto kept = traj.kept_states();
    rows.push_back({value, std::vector<double>(kept.begin(), kept.end())});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Heatmaps

enum class HeatmapFamily { Logistic, LogisticTent };

struct Axis {
  std::string name;
  Sweep range;
};

/// Logistic: x = alpha, y = beta over [0,4]^2 (default 401 per axis).
/// Logistic-tent: x = mu in [0,2], y = gamma in [0,4] (default 501).
struct GridSpec {
  HeatmapFamily family = HeatmapFamily::Logistic;
  Axis x_axis;
  Axis y_axis;

  static GridSpec logistic(std::size_t n = 401) {
    return {HeatmapFamily::Logistic, {"alpha", {0.0, 4.0, n}}, {"beta", {0.0, 4.0, n}}};
  }
  static GridSpec logistic_tent(std::size_t n = 501) {
    return {HeatmapFamily::LogisticTent, {"mu", {0.0, 2.0, n}}, {"gamma", {0.0, 4.0, n}}};
  }
};

inline IfsConfig heatmap_config(HeatmapFamily family, double x, double y, double p,
                                std::uint64_t seed) {
  if (family == HeatmapFamily::Logistic) {
    return {Map1D::logistic(x), Map1D::logistic(y), p, seed};
  }
  return {Map1D::logistic(y), Map1D::tent(x), p, seed};
}

/// Cover count of one heatmap cell at parameters (x, y); escape gives -1.
inline int cell_cover_count(HeatmapFamily family, double x, double y, const ScanOptions& opts,
                            std::uint64_t seed) {
  try {
    const auto traj =
        simulate(heatmap_config(family, x, y, opts.p, seed), opts.x0, opts.transient, opts.keep);
    return static_cast<int>(greedy_cover(traj.kept_states(), opts.epsilon).count);
  } catch (const EscapeError&) {
    return kEscapeSentinel;
  }
}

struct ScanGrid {
  GridSpec spec;
  ScanOptions options;
  std::vector<int> values;  // row-major, row j = y index, column i = x index

  std::size_t nx() const { return spec.x_axis.range.n; }
  std::size_t ny() const { return spec.y_axis.range.n; }
  int at(std::size_t i, std::size_t j) const { return values[j * nx() + i]; }
};

/// Fills every cell (i, j) with cell_cover_count at seed
/// cell_seed(base_seed, i, j). Rows are handed out to `threads` workers;
/// the grid does not depend on the thread count.
inline ScanGrid heatmap_scan(const GridSpec& spec, const ScanOptions& opts = {},
                             unsigned threads = 1) {
  if (spec.x_axis.range.n < 2 || spec.y_axis.range.n < 2) {
    throw DomainError("heatmap_scan: need at least two samples per axis");
  }
  validate(opts);
  ScanGrid grid{spec, opts, {}};
  const std::size_t nx = grid.nx(), ny = grid.ny();
  grid.values.assign(nx * ny, 0);

  std::atomic<std::size_t> next_row{0};
  auto worker = [&] {
    for (std::size_t j = next_row++; j < ny; j = next_row++) {
      const double y = spec.y_axis.range.at(j);
      for (std::size_t i = 0; i < nx; ++i) {
        const auto seed = cell_seed(opts.base_seed, static_cast<std::uint32_t>(i),
                                    static_cast<std::uint32_t>(j));
        grid.values[j * nx + i] =
            cell_cover_count(spec.family, spec.x_axis.range.at(i), y, opts, seed);
      }
    }
  };

  threads = std::max(1u, threads);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return grid;
}

}  // namespace tosscatch
