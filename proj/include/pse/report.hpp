#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pse/data_io.hpp"
#include "pse/inference.hpp"
#include "pse/stats.hpp"
#include "pse/types.hpp"

// Per-metric analysis bundle and its serializations: a versioned JSON report
// with stable key order, plus a fixed-precision text summary table.

namespace pse::report {

// Test slots record an error string instead of aborting the whole analysis
// when a single test is undefined for the data at hand (e.g. Pearson on a
// constant column).
struct TestOutcome {
  std::optional<TestResult> result;
  std::string error;  // nonempty iff result is absent
};

struct MetricAnalysis {
  std::string metric;
  EffectEstimate paired;
  EffectEstimate independent;
  DesignStats stats;
  VarianceDecomposition decomposition;
  EssResult ess;
  TestOutcome paired_t;
  TestOutcome wilcoxon;
  TestOutcome pearson;
  io::PairingReport pairing;
  // set when rho is defined and <= 0: pairing offers no advantage
  bool no_advantage_advisory = false;
};

struct AnalysisReport {
  std::string version = "1";
  double alpha = 0.05;
  io::PairingPolicy policy = io::PairingPolicy::drop_orphans;
  std::map<std::string, std::string> provenance;
  std::vector<MetricAnalysis> results;
};

// Runs the full per-metric pipeline: both estimators, design stats, variance
// decomposition, ESS at r = 2n, and the three tests.
MetricAnalysis analyze_metric(const PairedDataset& data, io::PairingReport pairing, double alpha,
                              CiKind paired_ci = CiKind::normal_z);

std::string serialize_report(const AnalysisReport& report);

// Fixed-precision rendering of the headline columns (delta and both CIs).
std::string render_summary_table(const AnalysisReport& report, int decimals = 3);

}  // namespace pse::report
