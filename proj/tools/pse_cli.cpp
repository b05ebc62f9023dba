// pse: paired seed evaluation toolkit.
//
// Subcommands:
//   simulate  write a synthetic common-random-numbers dataset as a run file
//   analyze   per-metric effects, intervals, variance decomposition, tests
//   curves    Monte Carlo SE / CI / power / sign-stability curves over runs
//
// All sample-size flags take total simulator runs r (two runs per seed);
// every command is deterministic given its flags, including --rng-seed and
// independent of --threads.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pse/data_io.hpp"
#include "pse/errors.hpp"
#include "pse/kernels.hpp"
#include "pse/report.hpp"
#include "pse/resampling.hpp"
#include "pse/stats.hpp"
#include "pse/synthetic.hpp"

namespace {

using namespace pse;

struct SimulateArgs {
  synthetic::SyntheticSpec spec;
  std::int64_t runs = 0;  // alternative to --n-seeds: total runs, r = 2n
  std::string out;
  std::string format = "json";
};

struct AnalyzeArgs {
  std::string input;
  std::vector<std::string> metrics;
  double alpha = 0.05;
  std::string pairing = "drop-orphans";
  std::string out;
  bool t_interval = false;
};

struct CurvesArgs {
  std::string input;
  std::string statistic;
  std::string metric;
  std::vector<std::int64_t> grid;
  int replicates = 1000;
  std::uint64_t rng_seed = 0;
  double alpha = 0.05;
  std::optional<double> mde;
  int threads = 1;
  std::string independent_mode = "subsample";
  std::string out;
};

int run_simulate(const SimulateArgs& args) {
  const PairedDataset data = synthetic::generate(args.spec);
  io::RunFile file;
  file.provenance["simulator"] = "pse-synthetic";
  file.provenance["delta"] = io::format_double(args.spec.delta);
  file.provenance["mu0"] = io::format_double(args.spec.mu0);
  file.provenance["sigma1"] = io::format_double(args.spec.sigma1);
  file.provenance["sigma0"] = io::format_double(args.spec.sigma0);
  file.provenance["rho"] = io::format_double(args.spec.rho);
  file.provenance["n_seeds"] = std::to_string(args.spec.n_seeds);
  file.provenance["master_seed"] = std::to_string(args.spec.master_seed);
  file.records.reserve(2 * data.n());
  for (std::int64_t i = 0; i < data.n(); ++i) {
    file.records.push_back({data.seeds()[i], 1, data.metric(), data.y1()[i]});
    file.records.push_back({data.seeds()[i], 0, data.metric(), data.y0()[i]});
  }
  const std::string text =
      args.format == "csv" ? io::serialize_run_file_csv(file) : io::serialize_run_file_json(file);
  io::write_file(args.out, text);
  std::cout << "wrote " << file.records.size() << " records (" << data.n() << " seeds) to "
            << args.out << "\n";
  return 0;
}

io::PairingPolicy parse_policy(const std::string& name) {
  return name == "strict" ? io::PairingPolicy::strict : io::PairingPolicy::drop_orphans;
}

int run_analyze(const AnalyzeArgs& args) {
  const io::RunFile file = io::parse_run_file(io::read_file(args.input));
  const io::PairingPolicy policy = parse_policy(args.pairing);
  std::vector<std::string> metrics = args.metrics;
  if (metrics.empty()) {
    metrics = io::paired_metrics(file);
    if (metrics.empty())
      fail(ErrorCode::empty_after_pairing, "no metric has records under both regimes");
  }

  report::AnalysisReport rep;
  rep.alpha = args.alpha;
  rep.policy = policy;
  rep.provenance = file.provenance;
  for (const std::string& metric : metrics) {
    auto [data, pairing] = io::build_paired_dataset(file, metric, policy);
    rep.results.push_back(report::analyze_metric(
        data, std::move(pairing), args.alpha,
        args.t_interval ? CiKind::student_t : CiKind::normal_z));
  }

  std::cout << report::render_summary_table(rep);
  for (const auto& m : rep.results) {
    if (!m.pairing.orphan_seeds_regime1.empty() || !m.pairing.orphan_seeds_regime0.empty()) {
      std::cout << "note: metric '" << m.metric << "' dropped "
                << m.pairing.orphan_seeds_regime1.size() + m.pairing.orphan_seeds_regime0.size()
                << " orphan seed(s)\n";
    }
    if (m.no_advantage_advisory) {
      std::cout << "advisory: metric '" << m.metric
                << "' has rho <= 0; pairing offers no advantage and the runs can be treated as "
                   "independent\n";
    }
  }
  if (!args.out.empty()) {
    io::write_file(args.out, report::serialize_report(rep));
    std::cout << "report written to " << args.out << "\n";
  }
  return 0;
}

int run_curves(const CurvesArgs& args) {
  const io::RunFile file = io::parse_run_file(io::read_file(args.input));
  std::string metric = args.metric;
  if (metric.empty()) {
    const std::vector<std::string> metrics = io::paired_metrics(file);
    if (metrics.size() != 1)
      fail(ErrorCode::missing_parameter,
           "--metric is required when the run file holds " + std::to_string(metrics.size()) +
               " paired metrics");
    metric = metrics.front();
  }
  auto [data, pairing] = io::build_paired_dataset(file, metric, io::PairingPolicy::drop_orphans);

  resampling::SubsampleConfig cfg;
  cfg.replicates = args.replicates;
  cfg.rng_seed = args.rng_seed;
  cfg.grid = args.grid;
  cfg.alpha = args.alpha;
  cfg.threads = args.threads;
  cfg.independent_mode = args.independent_mode == "analytic"
                             ? resampling::IndependentMode::analytic
                             : resampling::IndependentMode::disjoint_subsample;

  std::vector<resampling::CurveSeries> series;
  if (args.statistic == "se") {
    auto [paired, independent] = resampling::se_curve(data, cfg);
    series = {std::move(paired), std::move(independent)};
  } else if (args.statistic == "ci") {
    auto [paired, independent] = resampling::ci_curve(data, cfg);
    series = {std::move(paired), std::move(independent)};
  } else if (args.statistic == "power") {
    if (!args.mde) fail(ErrorCode::missing_parameter, "power curves require --mde");
    cfg.mde = *args.mde;
    resampling::PowerCurveResult res = resampling::power_curve(data, cfg);
    auto describe = [](const std::optional<std::int64_t>& r) {
      return r ? "power >= 0.8 first reached at r = " + std::to_string(*r)
               : std::string("power >= 0.8 not reached on this grid");
    };
    std::cout << "paired: " << describe(res.crossing_paired) << "\n";
    std::cout << "independent: " << describe(res.crossing_independent) << "\n";
    series = {std::move(res.paired), std::move(res.independent)};
  } else {  // sign
    auto [paired, independent] = resampling::sign_stability_curve(data, cfg);
    series = {std::move(paired), std::move(independent)};
  }

  const std::string text = io::serialize_curves(series);
  if (args.out.empty()) {
    std::cout << text;
  } else {
    io::write_file(args.out, text);
    std::cout << "curves written to " << args.out << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"paired seed evaluation toolkit"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "generate a synthetic common-random-numbers run file with known moments");
  simulate->add_option("--delta", sim.spec.delta, "true treatment effect");
  simulate->add_option("--mu0", sim.spec.mu0, "baseline regime mean");
  simulate->add_option("--sigma1", sim.spec.sigma1, "regime-1 outcome sd (> 0)");
  simulate->add_option("--sigma0", sim.spec.sigma0, "regime-0 outcome sd (> 0)");
  simulate->add_option("--rho", sim.spec.rho, "seed-level correlation in [0,1)");
  simulate->add_option("--n-seeds", sim.spec.n_seeds, "number of paired seeds")->required();
  simulate->add_option("--master-seed", sim.spec.master_seed, "generator master seed");
  simulate->add_option("--metric-name", sim.spec.metric_name, "metric name for the records");
  simulate->add_option("--out", sim.out, "output run file path")->required();
  simulate->add_option("--format", sim.format, "run file format")
      ->check(CLI::IsMember({"json", "csv"}));

  AnalyzeArgs an;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "estimate effects with paired and independent uncertainty per metric");
  analyze->add_option("--input", an.input, "run file (CSV or JSON)")->required();
  analyze->add_option("--metric", an.metrics,
                      "metric(s) to analyze; default: every metric in both regimes");
  analyze->add_option("--alpha", an.alpha, "significance level (default 0.05)");
  analyze->add_option("--pairing", an.pairing, "orphan-seed policy")
      ->check(CLI::IsMember({"strict", "drop-orphans"}));
  analyze->add_option("--out", an.out, "write the JSON report here");
  analyze->add_flag("--t-interval", an.t_interval,
                    "use Student-t quantiles for the paired interval (small-n variant)");

  CurvesArgs cv;
  CLI::App* curves = app.add_subcommand(
      "curves", "Monte Carlo subsampling curves over the run budget, both designs");
  curves->add_option("--input", cv.input, "run file (CSV or JSON)")->required();
  curves->add_option("--statistic", cv.statistic, "curve statistic")
      ->required()
      ->check(CLI::IsMember({"se", "ci", "power", "sign"}));
  curves->add_option("--metric", cv.metric, "metric (required with several paired metrics)");
  curves->add_option("--grid", cv.grid,
                     "run counts r (even, increasing); default 4,8,... up to the budget")
      ->delimiter(',');
  curves->add_option("--replicates", cv.replicates, "subsample replicates (default 1000)");
  curves->add_option("--rng-seed", cv.rng_seed, "seed for the subsampling streams");
  curves->add_option("--alpha", cv.alpha, "significance level (default 0.05)");
  curves->add_option("--mde", cv.mde, "minimum detectable effect (power curves)");
  curves->add_option("--threads", cv.threads, "worker threads; never changes results");
  curves->add_option("--independent-mode", cv.independent_mode,
                     "independent-design emulation: disjoint subsamples or analytic plug-in")
      ->check(CLI::IsMember({"subsample", "analytic"}));
  curves->add_option("--out", cv.out, "output curve CSV; stdout if omitted");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return run_simulate(sim);
    if (analyze->parsed()) return run_analyze(an);
    return run_curves(cv);
  } catch (const pse::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
