#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nps/coverage.hpp"
#include "nps/csv.hpp"
#include "nps/lattice.hpp"
#include "nps/report.hpp"
#include "nps/rng.hpp"
#include "nps/weights.hpp"

namespace {

using namespace nps;

// Streams of the one master seed. Commands that must agree on the lattice
// sample (coverage, weights) derive it from the same stream.
constexpr std::uint64_t kLatticeStream = 1;
constexpr std::uint64_t kSurrogateStream = 2;

std::uint64_t pick_seed(const CLI::Option* seed_opt, std::uint64_t seed) {
  if (seed_opt->count() > 0) return seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::vector<long long> parse_n_grid(const std::string& text) {
  std::vector<long long> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    long long start = 0, stop = 0, step = 0;
    char extra = 0;
    if (std::sscanf(part.c_str(), "%lld:%lld:%lld%c", &start, &stop, &step, &extra) == 3) {
      if (step < 1 || stop < start)
        throw CLI::ValidationError("--n", "bad range '" + part + "'");
      for (long long v = start; v <= stop; v += step) out.push_back(v);
    } else if (std::sscanf(part.c_str(), "%lld%c", &start, &extra) == 1) {
      out.push_back(start);
    } else {
      throw CLI::ValidationError("--n", "expected START:STOP:STEP or an integer, got '" + part + "'");
    }
  }
  if (out.empty()) throw CLI::ValidationError("--n", "empty n grid");
  for (long long v : out)
    if (v < 1) throw CLI::ValidationError("--n", "n values must be >= 1");
  return out;
}

std::vector<MethodSpec> parse_methods(const std::vector<std::string>& texts) {
  if (texts.empty()) throw CLI::ValidationError("--method", "at least one method required");
  std::vector<MethodSpec> out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    try {
      out.push_back(MethodSpec::parse(texts[i]));
    } catch (const std::exception& e) {
      throw CLI::ValidationError("--method",
                                 "position " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  return os;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "' for reading");
  return is;
}

std::string join_canonical(const std::vector<MethodSpec>& methods) {
  std::string out;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    if (i) out += ',';
    out += methods[i].canonical();
  }
  return out;
}

struct IntervalArgs {
  long long det = 0, pas = 0, pro = 0;
  std::vector<std::string> methods{"wald"};
  double level = 0.95;
  int scale = 1;
  bool raw = false;
};

int cmd_interval(const IntervalArgs& a) {
  TrinomialCounts counts{a.det, a.pas, a.pro};
  ConfidenceLevel lvl(a.level);
  std::vector<MethodSpec> methods = parse_methods(a.methods);
  double scale = static_cast<double>(a.scale);
  std::printf("%-14s %12s %12s %12s %12s\n", "method", "center", "lower", "upper", "width");
  for (const MethodSpec& m : methods) {
    IntervalEstimate est = compute_interval(counts, lvl, m);
    auto [lo, hi] = a.raw ? std::pair<double, double>{est.lower, est.upper}
                          : est.clamped();
    std::printf("%-14s %12.6f %12.6f %12.6f %12.6f\n", est.method.canonical().c_str(),
                est.center * scale, lo * scale, hi * scale, (hi - lo) * scale);
  }
  return 0;
}

struct CoverageArgs {
  std::vector<std::string> methods;
  std::string n_grid = "5:100:5";
  double level = 0.95;
  int degree = 400;
  long long lattice_j = 500;
  std::string mode = "exact";
  long long sims = 2000;
  std::uint64_t seed = 0;
  int threads = 0;
  long long exact_cap = kDefaultExactCap;
  std::string out;
};

int cmd_coverage(const CoverageArgs& a) {
  GridConfig cfg;
  cfg.methods = parse_methods(a.methods);
  cfg.n_values = parse_n_grid(a.n_grid);
  cfg.level = ConfidenceLevel(a.level);
  cfg.mode = a.mode == "exact" ? CoverageMode::Exact : CoverageMode::MonteCarlo;
  cfg.sims = a.sims;
  cfg.seed = a.seed;
  cfg.threads = a.threads;
  cfg.exact_cap = a.exact_cap;
  cfg.tpmds = sample_simplex_lattice(
      {a.degree, a.lattice_j, mix_seed(a.seed, kLatticeStream)});
  cfg.progress = [](std::size_t done, std::size_t total) {
    std::fprintf(stderr, "\r%zu/%zu method-n blocks", done, total);
    if (done == total) std::fprintf(stderr, "\n");
  };

  std::fprintf(stderr,
               "# nps coverage --method %s --n %s --level %g --degree %d --J %lld "
               "--mode %s --sims %lld --seed %llu --out %s\n",
               join_canonical(cfg.methods).c_str(), a.n_grid.c_str(), a.level,
               a.degree, a.lattice_j, a.mode.c_str(), a.sims,
               static_cast<unsigned long long>(a.seed), a.out.c_str());

  std::vector<CoverageRecord> records = run_grid(cfg);
  std::ofstream os = open_output(a.out);
  write_coverage_csv(os, records);
  std::fprintf(stderr, "wrote %zu records to %s\n", records.size(), a.out.c_str());
  return 0;
}

struct WeightsArgs {
  std::string obs_path;
  long long surrogate_count = 0;
  int degree = 400;
  long long lattice_j = 500;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_weights(const WeightsArgs& a) {
  std::vector<NpsVarPoint> obs;
  if (!a.obs_path.empty()) {
    std::ifstream is = open_input(a.obs_path);
    obs = read_observations_csv(is);
  } else {
    std::vector<Tpmd> sur =
        synth_observed_surrogate(a.surrogate_count, mix_seed(a.seed, kSurrogateStream));
    obs.reserve(sur.size());
    for (const Tpmd& p : sur) obs.push_back({p.nps(), p.variance()});
  }
  WeightModel model = fit_weight_model(obs);
  std::vector<Tpmd> sample = sample_simplex_lattice(
      {a.degree, a.lattice_j, mix_seed(a.seed, kLatticeStream)});
  std::vector<double> w = observation_weights(model, sample);

  std::fprintf(stderr,
               "# nps weights %s --degree %d --J %lld --seed %llu --out %s "
               "(bandwidths %g, %g over %zu observations)\n",
               a.obs_path.empty()
                   ? ("--surrogate " + std::to_string(a.surrogate_count)).c_str()
                   : ("--obs " + a.obs_path).c_str(),
               a.degree, a.lattice_j, static_cast<unsigned long long>(a.seed),
               a.out.c_str(), model.h_nps, model.h_var, obs.size());

  std::ofstream os = open_output(a.out);
  write_weights_csv(os, sample, w);
  return 0;
}

struct SurrogateArgs {
  long long count = 1098;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_surrogate(const SurrogateArgs& a) {
  std::vector<Tpmd> sur =
      synth_observed_surrogate(a.count, mix_seed(a.seed, kSurrogateStream));
  std::vector<NpsVarPoint> pts;
  pts.reserve(sur.size());
  for (const Tpmd& p : sur) pts.push_back({p.nps(), p.variance()});
  std::fprintf(stderr, "# nps surrogate --count %lld --seed %llu --out %s\n", a.count,
               static_cast<unsigned long long>(a.seed), a.out.c_str());
  std::ofstream os = open_output(a.out);
  write_observations_csv(os, pts);
  return 0;
}

struct ReportArgs {
  std::string coverage_path;
  std::string weights_path;
  std::string out;
  bool rank_order = false;
  bool raw_scale = false;
};

std::vector<MaeTable> load_tables(const ReportArgs& a, bool rank_order) {
  std::ifstream is = open_input(a.coverage_path);
  std::vector<CoverageRecord> records = read_coverage_csv(is);
  std::vector<MaeTable> tables;
  tables.push_back(build_mae_table(records, nullptr, Weighting::Uniform, rank_order));
  if (!a.weights_path.empty()) {
    std::ifstream ws = open_input(a.weights_path);
    WeightsFile wf = read_weights_csv(ws);
    tables.push_back(build_mae_table(records, &wf, Weighting::Observed, rank_order));
  }
  return tables;
}

int cmd_mae(const ReportArgs& a) {
  std::vector<MaeTable> tables = load_tables(a, false);
  if (a.out.empty()) {
    write_mae_csv(std::cout, tables);
  } else {
    std::ofstream os = open_output(a.out);
    write_mae_csv(os, tables);
  }
  return 0;
}

int cmd_report(const ReportArgs& a) {
  std::vector<MaeTable> tables = load_tables(a, a.rank_order);
  std::string text = render_markdown_report(tables, a.raw_scale);
  if (a.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream os = open_output(a.out);
    os << text;
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Confidence intervals and coverage studies for trinomial net scores"};
  app.require_subcommand(1);

  IntervalArgs ia;
  CLI::App* iv = app.add_subcommand("interval", "Interval estimates for observed counts");
  iv->add_option("--det", ia.det, "Detractor count")->required();
  iv->add_option("--pas", ia.pas, "Passive count")->required();
  iv->add_option("--pro", ia.pro, "Promoter count")->required();
  iv->add_option("--method", ia.methods, "method spec(s), e.g. wald, aw:3:t, score:2/3")
      ->delimiter(',');
  iv->add_option("--level", ia.level, "confidence level")->check(CLI::Range(1e-6, 1.0 - 1e-6));
  iv->add_option("--scale", ia.scale, "display scale (1 or 100)")
      ->check(CLI::IsMember({1, 100}));
  iv->add_flag("--raw", ia.raw, "print bounds without clamping to [-1,1]");

  CoverageArgs ca;
  CLI::App* cv = app.add_subcommand("coverage", "Coverage grid over a simplex-lattice sample");
  cv->add_option("--method", ca.methods, "method spec(s)")->delimiter(',')->required();
  cv->add_option("--n", ca.n_grid, "n grid, START:STOP:STEP or comma list");
  cv->add_option("--level", ca.level)->check(CLI::Range(1e-6, 1.0 - 1e-6));
  cv->add_option("--degree", ca.degree, "simplex lattice degree")->check(CLI::PositiveNumber);
  cv->add_option("--J", ca.lattice_j, "lattice sample size")->check(CLI::PositiveNumber);
  cv->add_option("--mode", ca.mode)->check(CLI::IsMember({"exact", "mc"}));
  cv->add_option("--sims", ca.sims, "Monte-Carlo draws per cell")->check(CLI::PositiveNumber);
  CLI::Option* cv_seed = cv->add_option("--seed", ca.seed, "master seed (random if omitted)");
  cv->add_option("--threads", ca.threads, "worker threads (0 = all cores)");
  cv->add_option("--exact-cap", ca.exact_cap, "largest n allowed in exact mode");
  cv->add_option("--out", ca.out, "coverage CSV path")->required();

  WeightsArgs wa;
  CLI::App* wt = app.add_subcommand("weights", "KDE observation weights for a lattice sample");
  CLI::Option* wt_obs = wt->add_option("--obs", wa.obs_path, "observations CSV (nps,variance)");
  CLI::Option* wt_sur =
      wt->add_option("--surrogate", wa.surrogate_count, "generate N surrogate observations");
  wt_obs->excludes(wt_sur);
  wt->add_option("--degree", wa.degree)->check(CLI::PositiveNumber);
  wt->add_option("--J", wa.lattice_j)->check(CLI::PositiveNumber);
  CLI::Option* wt_seed = wt->add_option("--seed", wa.seed, "master seed (random if omitted)");
  wt->add_option("--out", wa.out, "weights CSV path")->required();

  SurrogateArgs sa;
  CLI::App* sg = app.add_subcommand("surrogate", "Synthetic observed-distribution sample");
  sg->add_option("--count", sa.count)->check(CLI::PositiveNumber);
  CLI::Option* sg_seed = sg->add_option("--seed", sa.seed, "seed (random if omitted)");
  sg->add_option("--out", sa.out, "observations CSV path")->required();

  ReportArgs ma;
  CLI::App* me = app.add_subcommand("mae", "MAE per (method, n) from a coverage CSV");
  me->add_option("--coverage", ma.coverage_path, "coverage CSV")->required();
  me->add_option("--weights", ma.weights_path, "weights CSV for observed weighting");
  me->add_option("--out", ma.out, "output path (stdout if omitted)");

  ReportArgs ra;
  CLI::App* rp = app.add_subcommand("report", "Markdown MAE/rank report");
  rp->add_option("--coverage", ra.coverage_path, "coverage CSV")->required();
  rp->add_option("--weights", ra.weights_path, "weights CSV for observed weighting");
  rp->add_option("--out", ra.out, "output path (stdout if omitted)");
  rp->add_flag("--rank-order", ra.rank_order, "sort methods by average rank");
  rp->add_flag("--raw-mae", ra.raw_scale, "report MAE unscaled instead of x100");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
    app.exit(e);
    return 2;
  }

  try {
    if (*iv) return cmd_interval(ia);
    if (*cv) {
      ca.seed = pick_seed(cv_seed, ca.seed);
      return cmd_coverage(ca);
    }
    if (*wt) {
      if (wt_obs->count() == 0 && wt_sur->count() == 0)
        throw std::runtime_error("weights: give either --obs or --surrogate");
      wa.seed = pick_seed(wt_seed, wa.seed);
      return cmd_weights(wa);
    }
    if (*sg) {
      sa.seed = pick_seed(sg_seed, sa.seed);
      return cmd_surrogate(sa);
    }
    if (*me) return cmd_mae(ma);
    if (*rp) return cmd_report(ra);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
