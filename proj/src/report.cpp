#include "pse/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "pse/errors.hpp"

namespace pse::report {

namespace {

TestOutcome run_test(auto&& fn) {
  TestOutcome out;
  try {
    out.result = fn();
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

nlohmann::ordered_json estimate_json(const EffectEstimate& e) {
  return {{"design", design_name(e.design)},
          {"se", e.se},
          {"ci_lower", e.ci_lower},
          {"ci_upper", e.ci_upper}};
}

nlohmann::ordered_json test_json(const TestOutcome& t) {
  if (!t.result) return {{"error", t.error}};
  nlohmann::ordered_json j{{"method", test_method_name(t.result->method)},
                           {"statistic", t.result->statistic},
                           {"p_value", t.result->p_value},
                           {"df_or_n", t.result->df_or_n}};
  if (!t.result->note.empty()) j["note"] = t.result->note;
  return j;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string interval(const EffectEstimate& e, int decimals) {
  return "[" + fixed(e.ci_lower, decimals) + ", " + fixed(e.ci_upper, decimals) + "]";
}

}  // namespace

MetricAnalysis analyze_metric(const PairedDataset& data, io::PairingReport pairing, double alpha,
                              CiKind paired_ci) {
  MetricAnalysis m;
  m.metric = data.metric();
  m.paired = estimate_paired(data, alpha, paired_ci);
  m.independent = estimate_independent(data.y1(), data.y0(), alpha);
  m.stats = design_stats(data);
  m.decomposition = variance_decomposition(m.stats);
  m.ess = effective_sample_size(2 * data.n(), m.stats);
  m.paired_t = run_test([&] { return paired_t_test(data); });
  m.wilcoxon = run_test([&] { return wilcoxon_signed_rank(data); });
  m.pearson = run_test([&] { return pearson_test(m.stats); });
  m.pairing = std::move(pairing);
  m.no_advantage_advisory = m.stats.rho.has_value() && *m.stats.rho <= 0.0;
  return m;
}

std::string serialize_report(const AnalysisReport& report) {
  nlohmann::ordered_json doc;
  doc["version"] = report.version;
  doc["alpha"] = report.alpha;
  doc["pairing_policy"] = io::pairing_policy_name(report.policy);
  doc["provenance"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.provenance) doc["provenance"][k] = v;
  doc["results"] = nlohmann::ordered_json::array();
  for (const MetricAnalysis& m : report.results) {
    nlohmann::ordered_json j;
    j["metric"] = m.metric;
    j["n_seeds"] = m.paired.n;
    j["delta"] = m.paired.delta;
    j["paired"] = estimate_json(m.paired);
    j["independent"] = estimate_json(m.independent);
    j["design_stats"] = {{"sigma1", m.stats.sigma1},
                         {"sigma0", m.stats.sigma0},
                         {"cov", m.stats.cov}};
    if (m.stats.rho)
      j["design_stats"]["rho"] = *m.stats.rho;
    else
      j["design_stats"]["rho"] = nullptr;
    j["variance"] = {{"var_independent", m.decomposition.var_ind},
                     {"var_paired", m.decomposition.var_pair},
                     {"reduction", m.decomposition.reduction}};
    j["effective_sample_size"] = {{"r", m.ess.r},
                                  {"ratio", m.ess.unbounded ? nlohmann::ordered_json(nullptr)
                                                            : nlohmann::ordered_json(m.ess.ratio)},
                                  {"r_eff", m.ess.unbounded ? nlohmann::ordered_json(nullptr)
                                                            : nlohmann::ordered_json(m.ess.r_eff)},
                                  {"unbounded", m.ess.unbounded}};
    if (m.ess.simplified) j["effective_sample_size"]["simplified_r_eff"] = *m.ess.simplified;
    j["tests"] = {{"paired_t", test_json(m.paired_t)},
                  {"wilcoxon_signed_rank", test_json(m.wilcoxon)},
                  {"pearson", test_json(m.pearson)}};
    j["pairing"] = {{"paired_seeds", m.pairing.paired_seeds},
                    {"orphans_regime1", m.pairing.orphan_seeds_regime1},
                    {"orphans_regime0", m.pairing.orphan_seeds_regime0}};
    j["advisory"] = m.no_advantage_advisory
                        ? nlohmann::ordered_json(
                              "pairing offers no advantage (rho <= 0); the paired runs can be "
                              "treated as independent")
                        : nlohmann::ordered_json(nullptr);
    doc["results"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

std::string render_summary_table(const AnalysisReport& report, int decimals) {
  const int level = static_cast<int>(std::lround((1.0 - report.alpha) * 100.0));
  std::vector<std::array<std::string, 5>> rows;
  rows.push_back({"metric", "delta", "paired " + std::to_string(level) + "% CI",
                  "independent " + std::to_string(level) + "% CI", "rho"});
  for (const MetricAnalysis& m : report.results) {
    rows.push_back({m.metric, fixed(m.paired.delta, decimals), interval(m.paired, decimals),
                    interval(m.independent, decimals),
                    m.stats.rho ? fixed(*m.stats.rho, decimals) : std::string("undefined")});
  }
  std::array<std::size_t, 5> width{};
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out += row[c];
      if (c + 1 < row.size()) out.append(width[c] - row[c].size() + 2, ' ');
    }
    out += '\n';
  }
  return out;
}

}  // namespace pse::report
