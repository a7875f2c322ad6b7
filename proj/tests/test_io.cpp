#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include "tosscatch/io.hpp"
#include "tosscatch/spectrum.hpp"

using namespace tosscatch;

namespace {

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST(Io, FormatRealRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -0.5526743062384443, 3.0795956234914383}) {
    EXPECT_NEAR(std::stod(io::format_real(v)), v, 1e-15 * std::abs(v) + 1e-300);
  }
  EXPECT_EQ(io::format_real(0.5), "0.5");
}

TEST(Io, TrajectoryCsvRowsAndStepNumbers) {
  const IfsConfig cfg{Map1D::logistic(1.5), Map1D::logistic(3.0), 0.5, 2};
  const auto traj = simulate(cfg, 0.3, 10, 4);
  std::ostringstream os;
  io::write_trajectory_csv(os, traj);
  const auto lines = lines_of(os.str());
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0], "step,x,choice");
  EXPECT_EQ(lines[1].substr(0, 3), "11,");
  EXPECT_EQ(lines[4].substr(0, 3), "14,");
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const char c = lines[k].back();
    EXPECT_EQ(c, traj.choices[k - 1] == Choice::G ? 'g' : 'h');
  }

  std::istringstream in(os.str());
  const auto xs = io::read_csv_column(in, "x");
  ASSERT_EQ(xs.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(xs[k], traj.states[k + 1], 1e-14);
}

TEST(Io, InvariantSetAndStationaryCsv) {
  const auto set = build_tac(TacKind::L5);
  std::ostringstream os;
  io::write_invariant_set_csv(os, set);
  auto lines = lines_of(os.str());
  ASSERT_EQ(lines.size(), 6u);
  EXPECT_EQ(lines[0], "index,point,label,param1,param2");
  EXPECT_NE(lines[1].find(",bridging,"), std::string::npos);
  EXPECT_NE(lines[2].find(",periodic_h2,"), std::string::npos);

  const auto pi = stationary_distribution(build_transition_matrix(set, set.config())).weights;
  std::ostringstream ps;
  io::write_stationary_csv(ps, set, pi);
  std::istringstream in(ps.str());
  const auto col = io::read_csv_column(in, "pi");
  ASSERT_EQ(col.size(), 5u);
  EXPECT_NEAR(col[0], 0.125, 1e-14);
}

TEST(Io, LyapunovAndBifurcationCsv) {
  std::ostringstream os;
  io::write_lyapunov_csv(os, {{0.0, -1.0}, {0.5, 0.25}});
  EXPECT_EQ(os.str(), "p,E_lambda\n0,-1\n0.5,0.25\n");

  std::ostringstream bs;
  io::write_bifurcation_csv(bs, {{2.5, {0.6, 0.6}}, {3.0, {0.5}}});
  EXPECT_EQ(bs.str(), "sweep_value,x\n2.5,0.6\n2.5,0.6\n3,0.5\n");
}

TEST(Io, ScanGridCsvAndPgmOrientation) {
  ScanGrid grid{GridSpec::logistic(2), ScanOptions{}, {1, 2, 3, -1}};
  // (i, j): (0,0)=1 (1,0)=2 (0,1)=3 (1,1)=-1
  std::ostringstream cs;
  io::write_scan_grid_csv(cs, grid);
  auto lines = lines_of(cs.str());
  std::vector<std::string> data;
  for (const auto& l : lines) {
    if (l[0] != '#') data.push_back(l);
  }
  EXPECT_EQ(data, (std::vector<std::string>{"1,2", "3,-1"}));
  EXPECT_EQ(lines[0], "# family=logistic");
  EXPECT_EQ(lines[1], "# x_axis=alpha,0,4,2");

  std::ostringstream ps;
  io::write_scan_grid_pgm(ps, grid, 3);
  lines = lines_of(ps.str());
  ASSERT_EQ(lines.size(), 6u);
  EXPECT_EQ(lines[0], "P2");
  EXPECT_EQ(lines[2], "2 2");
  EXPECT_EQ(lines[3], "255");
  EXPECT_EQ(lines[4], "255 0");  // top row is the largest y
  EXPECT_EQ(lines[5], "85 170");
  EXPECT_THROW(io::write_scan_grid_pgm(ps, grid, 0), DomainError);
}

TEST(Io, PgmGrayScale) {
  EXPECT_EQ(io::pgm_gray(-1), 0);
  EXPECT_EQ(io::pgm_gray(0), 0);
  EXPECT_EQ(io::pgm_gray(100), 255);
  EXPECT_EQ(io::pgm_gray(1000), 255);
  EXPECT_EQ(io::pgm_gray(50), 128);
}

TEST(Io, ReadCsvColumnErrors) {
  std::istringstream missing("a,b\n1,2\n");
  EXPECT_THROW(io::read_csv_column(missing, "x"), DomainError);
  std::istringstream bad("x\n0.1\nfoo\n");
  EXPECT_THROW(io::read_csv_column(bad, "x"), DomainError);
  std::istringstream shorter("a,x\n1\n");
  EXPECT_THROW(io::read_csv_column(shorter, "x"), DomainError);
  std::istringstream comments("# meta\nx\n# more\n0.25\n");
  EXPECT_EQ(io::read_csv_column(comments, "x"), (std::vector<double>{0.25}));
}
