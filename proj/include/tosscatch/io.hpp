#pragma once

// Plain-text exports: CSV tables and ASCII PGM images. Reals are written with
// 15 significant digits.

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "tosscatch/engine.hpp"
#include "tosscatch/errors.hpp"
#include "tosscatch/geometry.hpp"
#include "tosscatch/structures.hpp"

namespace tosscatch::io {

inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

/// step,x,choice with one row per kept step; choice is the map that produced x.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "step,x,choice\n";
  for (std::size_t k = 1; k < traj.states.size(); ++k) {
    os << traj.transient_len + k << ',' << format_real(traj.states[k]) << ','
       << (traj.choices[k - 1] == Choice::G ? 'g' : 'h') << '\n';
  }
}

inline void write_invariant_set_csv(std::ostream& os, const FiniteInvariantSet& set) {
  os << "index,point,label,param1,param2\n";
  for (std::size_t i = 0; i < set.size(); ++i) {
    os << i << ',' << format_real(set.points[i]) << ',' << to_string(set.labels[i]) << ','
       << format_real(set.params.first) << ',' << format_real(set.params.second) << '\n';
  }
}

struct LyapunovRow {
  double p = 0.0;
  double value = 0.0;
};

inline void write_lyapunov_csv(std::ostream& os, const std::vector<LyapunovRow>& rows) {
  os << "p,E_lambda\n";
  for (const auto& r : rows) os << format_real(r.p) << ',' << format_real(r.value) << '\n';
}

inline void write_stationary_csv(std::ostream& os, const FiniteInvariantSet& set,
                                 const std::vector<double>& weights) {
  os << "index,point,pi\n";
  for (std::size_t i = 0; i < set.size(); ++i) {
    os << i << ',' << format_real(set.points[i]) << ',' << format_real(weights.at(i)) << '\n';
  }
}

inline void write_bifurcation_csv(std::ostream& os, const std::vector<BifurcationRow>& rows) {
  os << "sweep_value,x\n";
  for (const auto& row : rows) {
    const std::string s = format_real(row.sweep_value);
    for (double x : row.states) os << s << ',' << format_real(x) << '\n';
  }
}

inline std::string family_name(HeatmapFamily f) {
  return f == HeatmapFamily::Logistic ? "logistic" : "logistic-tent";
}

/// `#`-prefixed metadata lines, then ny rows (y ascending) of nx counts.
inline void write_scan_grid_csv(std::ostream& os, const ScanGrid& grid) {
  const auto axis = [](const Axis& a) {
    return a.name + "," + format_real(a.range.lo) + "," + format_real(a.range.hi) + "," +
           std::to_string(a.range.n);
  };
  const auto& o = grid.options;
  os << "# family=" << family_name(grid.spec.family) << '\n'
     << "# x_axis=" << axis(grid.spec.x_axis) << '\n'
     << "# y_axis=" << axis(grid.spec.y_axis) << '\n'
     << "# epsilon=" << format_real(o.epsilon) << '\n'
     << "# transient=" << o.transient << '\n'
     << "# keep=" << o.keep << '\n'
     << "# p=" << format_real(o.p) << '\n'
     << "# x0=" << format_real(o.x0) << '\n'
     << "# seed_policy=splitmix64(base_seed ^ (i << 32 | j)), i=x index, j=y index\n"
     << "# base_seed=" << o.base_seed << '\n'
     << "# rows=y ascending, columns=x ascending, -1=escape\n";
  for (std::size_t j = 0; j < grid.ny(); ++j) {
    for (std::size_t i = 0; i < grid.nx(); ++i) {
      if (i) os << ',';
      os << grid.at(i, j);
    }
    os << '\n';
  }
}

inline constexpr int kDefaultPgmCap = 100;

/// Gray level 255 min(v, cap) / cap, rounded; escape cells are 0.
inline int pgm_gray(int v, int cap = kDefaultPgmCap) {
  if (v < 0) return 0;
  const double scaled = 255.0 * std::min(v, cap) / static_cast<double>(cap);
  return static_cast<int>(scaled + 0.5);
}

/// ASCII P2 image with the largest y in the top row.
inline void write_scan_grid_pgm(std::ostream& os, const ScanGrid& grid,
                                int cap = kDefaultPgmCap) {
  if (cap <= 0) throw DomainError("write_scan_grid_pgm: cap must be positive");
  os << "P2\n# " << family_name(grid.spec.family) << ' ' << grid.spec.x_axis.name
     << " horizontal, " << grid.spec.y_axis.name << " vertical (top = max), cap=" << cap
     << '\n'
     << grid.nx() << ' ' << grid.ny() << "\n255\n";
  for (std::size_t r = 0; r < grid.ny(); ++r) {
    const std::size_t j = grid.ny() - 1 - r;
    for (std::size_t i = 0; i < grid.nx(); ++i) {
      if (i) os << ' ';
      os << pgm_gray(grid.at(i, j), cap);
    }
    os << '\n';
  }
}

/// Reads the named column of a CSV with a header row; `#` lines are skipped.
inline std::vector<double> read_csv_column(std::istream& is, const std::string& column) {
  std::string line;
  std::vector<std::string> header;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) header.push_back(cell);
    break;
  }
  const auto it = std::find(header.begin(), header.end(), column);
  if (it == header.end()) throw DomainError("read_csv_column: no column '" + column + "'");
  const auto index = static_cast<std::size_t>(it - header.begin());

  std::vector<double> out;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    for (std::size_t c = 0; c <= index; ++c) {
      if (!std::getline(ss, cell, ',')) {
        throw DomainError("read_csv_column: short row '" + line + "'");
      }
    }
    try {
      out.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw DomainError("read_csv_column: not a number '" + cell + "'");
    }
  }
  return out;
}

}  // namespace tosscatch::io
