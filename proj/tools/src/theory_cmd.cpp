#include "plalam_cli/theory_cmd.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>

#include "plalam_cli/run_io.hpp"

#include "plalam/rng.hpp"
#include "plalam/theorylab.hpp"
#include "plalam/types.hpp"

namespace plalam::cli {

using theorylab::HeavyTailCdf;
using theorylab::PowerLawCdf;
using theorylab::RegionCdfSpec;
using theorylab::TruncatedExpCdf;

namespace {

std::string stamp(const TheoryOptions& o) {
  std::ostringstream s;
  s << "# theory seed=" << o.seed << " runs=" << o.runs << " t_max=" << o.t_max
    << " eta=" << fmt_g(o.eta) << "\n";
  return s.str();
}

// Two regions with the same local dimension but different scales and optima:
// the bandit must abandon the shifted wide region.
std::vector<RegionCdfSpec> trace_specs() {
  return {{0.0, std::make_shared<PowerLawCdf>(0.5, 2)},
          {-1.0, std::make_shared<PowerLawCdf>(2.0, 2)}};
}

// Half-decade horizons 100, 316, 1000, ... up to t_max.
std::vector<int> horizon_grid(int t_max) {
  std::vector<int> grid;
  for (int i = 4;; ++i) {
    int t = static_cast<int>(std::lround(std::pow(10.0, 0.5 * i)));
    if (t > t_max) break;
    grid.push_back(t);
  }
  return grid;
}

double coverage(const RegionCdfSpec& spec, double delta, int n, int episodes,
                SplitRng& rng) {
  double r = theorylab::confidence_radius(spec, delta, n);
  int hits = 0;
  for (int e = 0; e < episodes; ++e) {
    double min_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
      min_gap = std::min(min_gap, spec.cdf->inverse(rng.uniform()));
    if (min_gap <= r) ++hits;
  }
  return static_cast<double>(hits) / episodes;
}

}  // namespace

std::vector<std::string> run_theory(const TheoryOptions& opts) {
  if (opts.out_dir.empty()) throw ConfigError("theory needs an output directory");
  if (opts.runs < 1) throw ConfigError("runs must be >= 1");
  if (opts.t_max < 100) throw ConfigError("t_max must be >= 100");
  if (!(opts.eta > 0.0) || opts.eta >= 1.0)
    throw ConfigError("eta must be in (0, 1)");
  std::filesystem::create_directories(opts.out_dir);
  SplitRng master(opts.seed);

  // Per-step trace of the reference bandit.
  std::vector<RegionCdfSpec> specs = trace_specs();
  int t_trace = std::min(opts.t_max, 2000);
  int trace_runs = std::min(opts.runs, 5);
  std::ostringstream trace;
  trace << stamp(opts) << "T,run,region,n_k,g_t,R\n";
  for (int run = 0; run < trace_runs; ++run) {
    SplitRng rng = master.split();
    theorylab::RegretRecord rec = theorylab::run_bandit(specs, t_trace, opts.eta, rng);
    std::vector<int> counts(specs.size(), 0);
    double prev = 0.0;
    for (int t = 0; t < rec.T; ++t) {
      int k = rec.choices[t];
      ++counts[k];
      double inst = rec.regret[t] - prev;
      prev = rec.regret[t];
      trace << (t + 1) << "," << run << "," << k << "," << counts[k] << ","
            << fmt_g(rec.f_star - inst) << "," << fmt_g(rec.regret[t]) << "\n";
    }
  }
  std::string trace_path = opts.out_dir + "/bandit_trace.csv";
  write_text_file(trace_path, trace.str());

  nlohmann::json summary;
  summary["params"] = {{"seed", opts.seed},
                       {"runs", opts.runs},
                       {"t_max", opts.t_max},
                       {"eta", opts.eta}};

  // Confidence-radius coverage: P[g_t >= g* - r] should land on 1 - delta.
  nlohmann::json cov = nlohmann::json::array();
  std::vector<std::pair<std::string, RegionCdfSpec>> families{
      {"uniform", {0.0, std::make_shared<PowerLawCdf>(1.0, 1)}},
      {"power_law_d2", {0.0, std::make_shared<PowerLawCdf>(1.0, 2)}}};
  SplitRng cov_rng = master.split();
  for (const auto& [name, spec] : families)
    for (double delta : {0.05, 0.2, 0.5})
      for (int n : {1, 5, 50})
        cov.push_back({{"family", name},
                       {"delta", delta},
                       {"n", n},
                       {"target", 1.0 - delta},
                       {"empirical", coverage(spec, delta, n, 20000, cov_rng)}});
  summary["coverage"] = cov;

  // Tail-bound inequality across the spec zoo: count violations on the
  // feasible (delta, j) grid.
  std::vector<RegionCdfSpec> zoo{
      {0.0, std::make_shared<PowerLawCdf>(1.0, 1)},
      {0.0, std::make_shared<PowerLawCdf>(2.0, 3)},
      {0.0, std::make_shared<TruncatedExpCdf>(2.0, 1.5)},
      {0.0, std::make_shared<HeavyTailCdf>(1.0, 2, 0.3)},
      {0.0, std::make_shared<HeavyTailCdf>(0.7, 1, 0.05, 3.0)}};
  int checked = 0, violations = 0;
  for (const RegionCdfSpec& spec : zoo)
    for (double delta : {0.01, 0.05, 0.1, 0.2, 0.35, 0.5, 0.65, 0.8, 0.95})
      for (int j = 1; j <= 100; ++j) {
        if (delta < spec.cdf->zk()) continue;
        ++checked;
        if (!theorylab::check_fbound(spec, delta, j).holds) ++violations;
      }
  summary["fbound"] = {{"specs", zoo.size()},
                       {"grid_points", checked},
                       {"violations", violations}};

  // Regret growth exponents, theory (d-1)/d.
  std::vector<int> grid = horizon_grid(opts.t_max);
  SplitRng slope_rng = master.split();
  double s2 = theorylab::regret_slope({{0.0, std::make_shared<PowerLawCdf>(1.0, 2)}},
                                      grid, 1.0, slope_rng, opts.runs);
  double s4 = theorylab::regret_slope({{0.0, std::make_shared<PowerLawCdf>(1.0, 4)}},
                                      grid, 1.0, slope_rng, opts.runs);
  summary["slopes"] = {{"d2", s2},
                       {"d2_theory", 0.5},
                       {"d4", s4},
                       {"d4_theory", 0.75},
                       {"horizons", grid}};

  // Splitting a mixed region into its good/bad parts vs an uninformative
  // duplicate split.
  RegionCdfSpec parent{0.0, std::make_shared<PowerLawCdf>(2.0, 2)};
  RegionCdfSpec good{0.0, std::make_shared<PowerLawCdf>(0.5, 2)};
  RegionCdfSpec bad{-1.0, std::make_shared<PowerLawCdf>(2.0, 2)};
  SplitRng split_rng = master.split();
  theorylab::SplitResult sp = theorylab::split_experiment(
      parent, good, bad, 2000, 1.0, split_rng, std::max(50, opts.runs));
  summary["split"] = {{"unsplit", sp.regret_unsplit},
                      {"learned", sp.regret_learned},
                      {"random", sp.regret_random}};

  std::string summary_path = opts.out_dir + "/theory_summary.json";
  write_text_file(summary_path, summary.dump(2) + "\n");
  return {trace_path, summary_path};
}

}  // namespace plalam::cli
