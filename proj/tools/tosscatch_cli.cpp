// tosscatch: command-line front end. Every subcommand that writes to a file
// also writes <out>.manifest.json; `tosscatch replay --manifest m.json`
// re-runs it and reproduces the output bytes.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tosscatch/tosscatch.hpp"

using namespace tosscatch;
using nlohmann::json;

namespace {

constexpr int kExitNumeric = 1;
constexpr int kExitUsage = 2;

// Options that name where things go rather than what is computed; they are
// left out of the manifest's argument list so a replay can redirect them.
const std::vector<std::string> kOutputOptions = {"out", "pgm", "manifest"};

Map1D parse_map(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw CLI::ValidationError("map", "expected kind:param, got '" + text + "'");
  }
  const std::string kind = text.substr(0, colon);
  double param = 0.0;
  try {
    std::size_t used = 0;
    param = std::stod(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw CLI::ValidationError("map", "bad parameter in '" + text + "'");
  }
  if (kind == "logistic") return Map1D::logistic(param);
  if (kind == "tent") return Map1D::tent(param);
  throw CLI::ValidationError("map", "unknown map kind '" + kind + "' (logistic or tent)");
}

Sweep parse_sweep(const std::string& name, const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() != 3) throw CLI::ValidationError(name, "expected lo:hi:n, got '" + text + "'");
  Sweep s;
  try {
    s.lo = std::stod(parts[0]);
    s.hi = std::stod(parts[1]);
    const long n = std::stol(parts[2]);
    if (n < 2) throw CLI::ValidationError(name, "n must be at least 2");
    s.n = static_cast<std::size_t>(n);
  } catch (const CLI::ValidationError&) {
    throw;
  } catch (const std::exception&) {
    throw CLI::ValidationError(name, "expected lo:hi:n, got '" + text + "'");
  }
  if (!(s.lo <= s.hi)) throw CLI::ValidationError(name, "lo must not exceed hi");
  return s;
}

TacKind parse_case(const std::string& text) {
  if (auto kind = parse_tac_kind(text)) return *kind;
  throw CLI::ValidationError("case", "unknown case '" + text + "' (l2 l3 l5 lt1 lt2 lt3)");
}

std::optional<double> free_param(TacKind kind, const std::optional<double>& beta,
                                 const std::optional<double>& mu) {
  switch (kind) {
    case TacKind::L2:
      if (!beta) throw CLI::ValidationError("beta", "case l2 needs --beta");
      return beta;
    case TacKind::L3:
    case TacKind::L5:
      return std::nullopt;
    default:
      if (!mu) throw CLI::ValidationError("mu", "cases lt1, lt2 and lt3 need --mu");
      return mu;
  }
}

// Output file or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) : path_(path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw std::runtime_error("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void close() {
    if (file_) {
      file_->close();
      if (!*file_) throw std::runtime_error("error writing '" + path_ + "'");
    }
  }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
};

// Resolved argument list of a parsed subcommand: every option that was given
// or has a default, excluding output locations.
std::vector<std::string> resolved_args(const CLI::App& sub, json& params) {
  std::vector<std::string> args;
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help") continue;
    if (std::find(kOutputOptions.begin(), kOutputOptions.end(), name) != kOutputOptions.end()) {
      continue;
    }
    if (opt->get_expected_max() == 0) {  // flag
      if (opt->count() > 0) {
        args.push_back("--" + name);
        params[name] = true;
      }
      continue;
    }
    std::string value;
    if (!opt->results().empty()) {  // given on the command line or via its env var
      value = opt->results().front();
    } else if (!opt->get_default_str().empty()) {
      value = opt->get_default_str();
    } else {
      continue;
    }
    args.push_back("--" + name);
    args.push_back(value);
    params[name] = value;
  }
  return args;
}

void write_manifest(const std::string& path, const CLI::App& sub,
                    const std::vector<std::string>& outputs,
                    const std::map<std::string, std::string>& output_args) {
  json params = json::object();
  const auto args = resolved_args(sub, params);
  json manifest;
  manifest["tool"] = "tosscatch";
  manifest["version"] = kVersion;
  manifest["subcommand"] = sub.get_name();
  manifest["args"] = args;
  manifest["params"] = params;
  if (params.contains("seed")) manifest["seed"] = params["seed"];
  manifest["outputs"] = outputs;
  manifest["output_args"] = output_args;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os << manifest.dump(2) << '\n';
}

std::string manifest_path(const std::string& out, const std::string& explicit_path) {
  if (!explicit_path.empty()) return explicit_path;
  if (!out.empty()) return out + ".manifest.json";
  return {};
}

struct Common {
  double p = kDefaultP;
  std::size_t transient = kDefaultTransient;
  std::size_t keep = kDefaultKeep;
  double x0 = kDefaultX0;
  std::uint64_t seed = 0;
  double eps = kDefaultEpsilon;
  std::string out;
  std::string manifest;
};

void add_p(CLI::App* sub, Common& c) {
  sub->add_option("--p", c.p, "probability of applying g at each step")
      ->check(CLI::Range(0.0, 1.0));
}
void add_sim(CLI::App* sub, Common& c) {
  sub->add_option("--transient", c.transient, "discarded initial steps");
  sub->add_option("--keep", c.keep, "recorded steps after the transient")
      ->check(CLI::PositiveNumber);
  sub->add_option("--x0", c.x0, "initial state")->check(CLI::Range(0.0, 1.0));
  sub->add_option("--seed", c.seed, "RNG seed (splitmix64)");
}
void add_eps(CLI::App* sub, Common& c) {
  sub->add_option("--eps", c.eps, "cover radius epsilon")->check(CLI::PositiveNumber);
}
void add_out(CLI::App* sub, Common& c, bool required = false) {
  auto* o = sub->add_option("--out", c.out,
                            required ? "output file"
                                     : "output file (stdout if omitted; no manifest then)");
  if (required) o->required();
  sub->add_option("--manifest", c.manifest, "manifest path (default <out>.manifest.json)");
}

std::string describe_params(TacKind kind, const TacParams& params) {
  std::ostringstream os;
  if (is_logistic_pair(kind)) {
    os << "# alpha=" << io::format_real(params.first) << '\n'
       << "# beta=" << io::format_real(params.second) << '\n';
  } else {
    os << "# mu=" << io::format_real(params.first) << '\n'
       << "# gamma=" << io::format_real(params.second) << '\n';
  }
  return os.str();
}

unsigned default_threads() {
  return std::max(1u, std::thread::hardware_concurrency());
}

int run(std::vector<std::string> argv);

int run_replay(const std::string& path, const std::string& out, const std::string& pgm) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read manifest '" + path + "'");
  const json m = json::parse(is);
  if (m.value("tool", "") != "tosscatch") throw std::runtime_error("not a tosscatch manifest");
  if (m.value("version", "") != kVersion) {
    std::cerr << "tosscatch: warning: manifest version " << m.value("version", "?")
              << " differs from " << kVersion << '\n';
  }
  std::vector<std::string> argv{"tosscatch", m.at("subcommand").get<std::string>()};
  for (const auto& a : m.at("args")) argv.push_back(a.get<std::string>());
  auto outputs = m.value("output_args", std::map<std::string, std::string>{});
  if (!out.empty()) {
    outputs["out"] = out;
    if (outputs.count("pgm")) outputs.erase("pgm");
  }
  if (!pgm.empty()) outputs["pgm"] = pgm;
  for (const auto& [name, value] : outputs) {
    argv.push_back("--" + name);
    argv.push_back(value);
  }
  return run(argv);
}

int run(std::vector<std::string> argv) {
  CLI::App app{"Random iterated function systems of logistic and tent maps: finite invariant "
               "sets, stationary measures, Lyapunov exponents and attractor-size scans.",
               "tosscatch"};
  app.set_help_flag("--help", "print this help and exit");  // -h is taken by --h
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  app.footer(
      "Exit codes: 0 success, 2 usage error, 1 numeric failure. "
      "TOSSCATCH_THREADS sets the heatmap thread count when --threads is absent.");

  Common c;

  // simulate
  std::string g_text, h_text;
  auto* sim = app.add_subcommand("simulate", "simulate one trajectory; CSV step,x,choice");
  sim->add_option("--g", g_text, "map g as kind:param, e.g. logistic:1.5")->required();
  sim->add_option("--h", h_text, "map h as kind:param, e.g. tent:1.4")->required();
  add_p(sim, c);
  add_sim(sim, c);
  add_out(sim, c);

  // conditions
  std::string case_text;
  std::optional<double> beta, mu;
  auto* cond = app.add_subcommand(
      "conditions", "construct a finite invariant set; prints parameters, points and labels");
  auto add_case = [&](CLI::App* sub) {
    sub->add_option("--case", case_text, "l2, l3, l5, lt1, lt2 or lt3")->required();
    sub->add_option("--beta", beta, "beta for l2 (alpha follows)");
    sub->add_option("--mu", mu, "mu for lt1, lt2, lt3 (gamma follows)");
  };
  add_case(cond);
  add_out(cond, c);

  // lyapunov
  std::string sweep_p_text;
  bool mc = false;
  std::size_t mc_steps = 1000000;
  auto* lyap = app.add_subcommand("lyapunov", "expected Lyapunov exponent; CSV p,E_lambda");
  add_case(lyap);
  add_p(lyap, c);
  lyap->add_option("--sweep-p", sweep_p_text, "sweep p as lo:hi:n instead of a single --p");
  lyap->add_flag("--mc", mc, "add a Monte-Carlo estimate with batch-means standard error");
  lyap->add_option("--mc-steps", mc_steps, "Monte-Carlo steps after the transient")
      ->check(CLI::PositiveNumber);
  add_sim(lyap, c);
  add_out(lyap, c);

  // stationary
  auto* stat = app.add_subcommand("stationary", "stationary distribution; CSV index,point,pi");
  add_case(stat);
  add_p(stat, c);
  add_out(stat, c);

  // bifurcation
  std::string bif_family = "logistic-pair";
  std::optional<double> delta;
  std::string gamma_text = "0:4:1000";
  bool strict = false;
  auto* bif = app.add_subcommand("bifurcation", "bifurcation sweep over gamma; CSV sweep_value,x");
  bif->add_option("--family", bif_family, "logistic-pair (needs --delta) or logistic-tent "
                                          "(needs --mu)")
      ->check(CLI::IsMember({"logistic-pair", "logistic-tent"}));
  bif->add_option("--delta", delta, "alpha = gamma (1 - delta), beta = gamma (1 + delta)");
  bif->add_option("--mu", mu, "tent parameter for logistic-tent");
  bif->add_option("--gamma", gamma_text, "sweep as lo:hi:n");
  bif->add_flag("--strict", strict,
                "fail on sweep values whose maps leave their range (default: skip them)");
  add_p(bif, c);
  add_sim(bif, c);
  add_out(bif, c);

  // heatmap
  std::string hm_family = "logistic";
  std::optional<std::size_t> res;
  std::optional<unsigned> threads;
  std::string pgm;
  int cap = io::kDefaultPgmCap;
  auto* hm = app.add_subcommand("heatmap", "cover-count grid; CSV and PGM");
  hm->add_option("--family", hm_family,
                 "logistic (alpha, beta in [0,4]) or logistic-tent (mu in [0,2], gamma in [0,4])")
      ->check(CLI::IsMember({"logistic", "logistic-tent"}));
  hm->add_option("--res", res, "samples per axis [default: 401 logistic, 501 logistic-tent]")
      ->check(CLI::Range(2, 100000));
  hm->add_option("--threads", threads, "worker threads [default: hardware concurrency]")
      ->envname("TOSSCATCH_THREADS");
  hm->add_option("--pgm", pgm, "PGM image path [default: CSV path with .pgm]");
  hm->add_option("--cap", cap, "cover count mapped to white in the PGM")
      ->check(CLI::PositiveNumber);
  add_p(hm, c);
  add_sim(hm, c);
  add_eps(hm, c);
  add_out(hm, c, true);

  // cover
  std::string input, column = "x";
  auto* cov = app.add_subcommand("cover", "epsilon-cover count of a CSV column; CSV epsilon,count");
  cov->add_option("--input", input, "CSV file with a header row")
      ->required()
      ->check(CLI::ExistingFile);
  cov->add_option("--column", column, "column to read");
  add_eps(cov, c);
  add_out(cov, c);

  // replay
  std::string replay_manifest, replay_out;
  auto* rep = app.add_subcommand("replay", "re-run a manifest written by another subcommand");
  rep->add_option("--manifest", replay_manifest, "manifest JSON")
      ->required()
      ->check(CLI::ExistingFile);
  rep->add_option("--out", replay_out, "write here instead of the recorded output path");
  rep->add_option("--pgm", pgm, "heatmap only: PGM path instead of the recorded one");

  try {
    std::reverse(argv.begin(), argv.end());
    argv.pop_back();  // program name
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    const auto finish = [&](CLI::App* sub, Sink& sink, std::vector<std::string> outputs,
                            std::map<std::string, std::string> output_args) {
      sink.close();
      const auto path = manifest_path(c.out, c.manifest);
      if (!path.empty()) write_manifest(path, *sub, outputs, output_args);
    };
    const auto out_args = [&]() {
      std::map<std::string, std::string> m;
      if (!c.out.empty()) m["out"] = c.out;
      return m;
    };
    const auto out_list = [&]() {
      return c.out.empty() ? std::vector<std::string>{} : std::vector<std::string>{c.out};
    };

    if (sim->parsed()) {
      const IfsConfig cfg{parse_map(g_text), parse_map(h_text), c.p, c.seed};
      const auto traj = simulate(cfg, c.x0, c.transient, c.keep);
      Sink sink(c.out);
      io::write_trajectory_csv(sink.stream(), traj);
      finish(sim, sink, out_list(), out_args());
    } else if (cond->parsed()) {
      const TacKind kind = parse_case(case_text);
      const auto set = build_tac(kind, free_param(kind, beta, mu));
      const auto cfg = set.config();
      const auto report = verify_invariance(set, cfg, kTransitionTol);
      const auto classified = classify_bridging(set, cfg);
      Sink sink(c.out);
      auto& os = sink.stream();
      os << "# case=" << to_string(kind) << '\n' << describe_params(kind, set.params);
      if (kind == TacKind::L3) {
        const auto r = c3_residuals(set.params.first, set.params.second);
        for (std::size_t i = 0; i < r.size(); ++i) {
          os << "# residual_c3" << static_cast<char>('a' + i) << '=' << io::format_real(r[i])
             << '\n';
        }
      } else if (kind == TacKind::L5) {
        const auto r = c5_residuals(set.params.first, set.params.second);
        for (std::size_t i = 0; i < r.size(); ++i) {
          os << "# residual_c5" << static_cast<char>('a' + i) << '=' << io::format_real(r[i])
             << '\n';
        }
      }
      os << "# invariance_max_distance=" << io::format_real(report.max_distance) << '\n'
         << "# bridging_points=" << set.bridging_count() << '\n'
         << "index,point,label,classified,g_target,h_target\n";
      for (std::size_t i = 0; i < set.size(); ++i) {
        os << i << ',' << io::format_real(set.points[i]) << ',' << to_string(set.labels[i]) << ','
           << to_string(classified[i]) << ',' << report.g_targets[i] << ','
           << report.h_targets[i] << '\n';
      }
      finish(cond, sink, out_list(), out_args());
      if (!report.passed) {
        std::cerr << "tosscatch: invariance check failed\n";
        return kExitNumeric;
      }
    } else if (lyap->parsed()) {
      const TacKind kind = parse_case(case_text);
      const auto set = build_tac(kind, free_param(kind, beta, mu));
      std::vector<double> ps;
      if (!sweep_p_text.empty()) {
        const Sweep s = parse_sweep("sweep-p", sweep_p_text);
        if (s.lo < 0.0 || s.hi > 1.0) throw CLI::ValidationError("sweep-p", "p outside [0,1]");
        for (std::size_t k = 0; k < s.n; ++k) ps.push_back(s.at(k));
      } else {
        ps.push_back(c.p);
      }
      Sink sink(c.out);
      auto& os = sink.stream();
      if (!mc) {
        std::vector<io::LyapunovRow> rows;
        for (double p : ps) rows.push_back({p, expected_lyapunov(set, set.config(p))});
        io::write_lyapunov_csv(os, rows);
      } else {
        os << "p,E_lambda,mc_mean,mc_std_error\n";
        for (double p : ps) {
          const auto cfg = set.config(p, c.seed);
          const double exact = expected_lyapunov(set, cfg);
          const auto traj = simulate(cfg, c.x0, c.transient, mc_steps);
          const auto est = finite_time_lyapunov_estimate(traj, cfg);
          os << io::format_real(p) << ',' << io::format_real(exact) << ','
             << io::format_real(est.mean) << ',' << io::format_real(est.std_error) << '\n';
        }
      }
      finish(lyap, sink, out_list(), out_args());
    } else if (stat->parsed()) {
      const TacKind kind = parse_case(case_text);
      const auto set = build_tac(kind, free_param(kind, beta, mu));
      const auto st = stationary_distribution(build_transition_matrix(set, set.config(c.p)));
      Sink sink(c.out);
      io::write_stationary_csv(sink.stream(), set, st.weights);
      finish(stat, sink, out_list(), out_args());
    } else if (bif->parsed()) {
      BifurcationFamily family;
      if (bif_family == "logistic-pair") {
        if (!delta) throw CLI::ValidationError("delta", "logistic-pair needs --delta");
        family = BifurcationFamily::logistic_pair(*delta);
      } else {
        if (!mu) throw CLI::ValidationError("mu", "logistic-tent needs --mu");
        family = BifurcationFamily::logistic_tent(*mu);
      }
      ScanOptions o{c.p, c.transient, c.keep, c.x0, c.seed, kDefaultEpsilon};
      const auto rows = bifurcation_scan(family, parse_sweep("gamma", gamma_text), o, !strict);
      if (rows.empty()) throw RangeError("bifurcation: every sweep value is out of range");
      Sink sink(c.out);
      io::write_bifurcation_csv(sink.stream(), rows);
      finish(bif, sink, out_list(), out_args());
    } else if (hm->parsed()) {
      const bool logistic = hm_family == "logistic";
      const std::size_t n = res.value_or(logistic ? 401 : 501);
      const GridSpec spec = logistic ? GridSpec::logistic(n) : GridSpec::logistic_tent(n);
      ScanOptions o{c.p, c.transient, c.keep, c.x0, c.seed, c.eps};
      if (threads && *threads == 0) {
        throw CLI::ValidationError("threads", "must be at least 1");
      }
      const auto grid = heatmap_scan(spec, o, threads.value_or(default_threads()));
      std::string pgm_path = pgm;
      if (pgm_path.empty()) {
        const auto dot = c.out.rfind('.');
        const auto slash = c.out.rfind('/');
        const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
        pgm_path = (has_ext ? c.out.substr(0, dot) : c.out) + ".pgm";
      }
      Sink sink(c.out);
      io::write_scan_grid_csv(sink.stream(), grid);
      Sink image(pgm_path);
      io::write_scan_grid_pgm(image.stream(), grid, cap);
      image.close();
      finish(hm, sink, {c.out, pgm_path}, {{"out", c.out}, {"pgm", pgm_path}});
    } else if (cov->parsed()) {
      std::ifstream is(input);
      if (!is) throw std::runtime_error("cannot read '" + input + "'");
      const auto xs = io::read_csv_column(is, column);
      const auto cover = greedy_cover(xs, c.eps);
      Sink sink(c.out);
      sink.stream() << "epsilon,count\n" << io::format_real(c.eps) << ',' << cover.count << '\n';
      finish(cov, sink, out_list(), out_args());
    } else if (rep->parsed()) {
      return run_replay(replay_manifest, replay_out, pgm);
    }
  } catch (const CLI::ParseError& e) {
    std::cerr << "tosscatch: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "tosscatch: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  return run(std::vector<std::string>(argv, argv + argc));
}
