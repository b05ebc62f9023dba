#include "pse/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>
#include <tuple>

#include <json.hpp>

#include "pse/errors.hpp"

namespace pse::io {

namespace {

constexpr std::string_view kRunHeader = "seed,regime,metric,value";
constexpr std::string_view kCurveHeader = "statistic,design,r,value";

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
}

double parse_value_field(std::string_view field, std::size_t line_no) {
  double v = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end)
    fail(ErrorCode::malformed_input,
         "line " + std::to_string(line_no) + ": unparsable value '" + std::string(field) + "'");
  if (!std::isfinite(v))
    fail(ErrorCode::non_finite_value,
         "line " + std::to_string(line_no) + ": non-finite value '" + std::string(field) + "'");
  return v;
}

int parse_regime_field(std::string_view field, const std::string& where) {
  if (field == "0") return 0;
  if (field == "1") return 1;
  fail(ErrorCode::malformed_input, where + ": regime must be 0 or 1, got '" +
                                       std::string(field) + "'");
}

void check_duplicates(const std::vector<RunRecord>& records) {
  std::set<std::tuple<std::string_view, int, std::string_view>> seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const RunRecord& r = records[i];
    if (!seen.insert({r.seed, r.regime, r.metric}).second)
      fail(ErrorCode::duplicate_record,
           "duplicate (seed, regime, metric) = ('" + r.seed + "', " + std::to_string(r.regime) +
               ", '" + r.metric + "') at record " + std::to_string(i + 1));
  }
}

void check_csv_safe(const std::string& field, const char* what) {
  if (field.empty()) fail(ErrorCode::invalid_config, std::string(what) + " must be nonempty");
  if (field.find_first_of(",\n\r#") != std::string::npos)
    fail(ErrorCode::invalid_config, std::string(what) + " '" + field +
                                        "' contains a CSV separator; use the JSON format");
}

}  // namespace

const char* pairing_policy_name(PairingPolicy p) noexcept {
  return p == PairingPolicy::strict ? "strict" : "drop_orphans";
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

RunFile parse_run_file(std::string_view text) {
  const std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return parse_run_file_json(text);
  return parse_run_file_csv(text);
}

RunFile parse_run_file_csv(std::string_view text) {
  RunFile file;
  bool header_seen = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = strip_cr(
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    ++line_no;
    const bool last = nl == std::string_view::npos;
    pos = last ? text.size() + 1 : nl + 1;
    if (line.empty()) {
      if (last) break;  // trailing newline
      fail(ErrorCode::malformed_input, "line " + std::to_string(line_no) + ": blank line");
    }
    if (line[0] == '#') {
      std::string_view body = line.substr(1);
      if (!body.empty() && body[0] == ' ') body.remove_prefix(1);
      const std::size_t eq = body.find('=');
      if (eq != std::string_view::npos)
        file.provenance.emplace(std::string(body.substr(0, eq)), std::string(body.substr(eq + 1)));
      continue;
    }
    if (!header_seen) {
      if (line != kRunHeader)
        fail(ErrorCode::malformed_input,
             "line " + std::to_string(line_no) + ": expected header '" + std::string(kRunHeader) +
                 "', got '" + std::string(line) + "'");
      header_seen = true;
      continue;
    }
    const std::vector<std::string_view> f = split(line, ',');
    if (f.size() != 4)
      fail(ErrorCode::malformed_input, "line " + std::to_string(line_no) + ": expected 4 fields, got " +
                                           std::to_string(f.size()));
    if (f[0].empty() || f[2].empty())
      fail(ErrorCode::malformed_input,
           "line " + std::to_string(line_no) + ": empty seed or metric field");
    RunRecord rec;
    rec.seed = std::string(f[0]);
    rec.regime = parse_regime_field(f[1], "line " + std::to_string(line_no));
    rec.metric = std::string(f[2]);
    rec.value = parse_value_field(f[3], line_no);
    file.records.push_back(std::move(rec));
  }
  if (!header_seen)
    fail(ErrorCode::malformed_input, "missing header '" + std::string(kRunHeader) + "'");
  check_duplicates(file.records);
  return file;
}

RunFile parse_run_file_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::malformed_input, std::string("JSON parse error: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("records") || !doc["records"].is_array())
    fail(ErrorCode::malformed_input, "expected top-level object with a 'records' array");

  RunFile file;
  if (doc.contains("provenance")) {
    if (!doc["provenance"].is_object())
      fail(ErrorCode::malformed_input, "'provenance' must be an object of strings");
    for (const auto& [k, v] : doc["provenance"].items()) {
      if (!v.is_string()) fail(ErrorCode::malformed_input, "provenance value for '" + k +
                                                               "' must be a string");
      file.provenance.emplace(k, v.get<std::string>());
    }
  }
  std::size_t index = 0;
  for (const auto& item : doc["records"]) {
    ++index;
    const std::string where = "record " + std::to_string(index);
    if (!item.is_object() || !item.contains("seed") || !item.contains("regime") ||
        !item.contains("metric") || !item.contains("value"))
      fail(ErrorCode::malformed_input, where + ": needs seed, regime, metric, value");
    if (!item["seed"].is_string() || !item["metric"].is_string())
      fail(ErrorCode::malformed_input, where + ": seed and metric must be strings");
    if (!item["regime"].is_number_integer())
      fail(ErrorCode::malformed_input, where + ": regime must be an integer");
    if (!item["value"].is_number())
      fail(ErrorCode::malformed_input, where + ": value must be a number");
    RunRecord rec;
    rec.seed = item["seed"].get<std::string>();
    rec.metric = item["metric"].get<std::string>();
    const auto regime = item["regime"].get<std::int64_t>();
    if (regime != 0 && regime != 1)
      fail(ErrorCode::malformed_input,
           where + ": regime must be 0 or 1, got " + std::to_string(regime));
    rec.regime = static_cast<int>(regime);
    rec.value = item["value"].get<double>();
    if (!std::isfinite(rec.value)) fail(ErrorCode::non_finite_value, where + ": non-finite value");
    if (rec.seed.empty() || rec.metric.empty())
      fail(ErrorCode::malformed_input, where + ": empty seed or metric");
    file.records.push_back(std::move(rec));
  }
  check_duplicates(file.records);
  return file;
}

std::string serialize_run_file_csv(const RunFile& file) {
  std::string out;
  for (const auto& [k, v] : file.provenance) {
    check_csv_safe(k, "provenance key");
    if (v.find_first_of("\n\r") != std::string::npos)
      fail(ErrorCode::invalid_config, "provenance value contains a newline; use the JSON format");
    out += "# ";
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  out += kRunHeader;
  out += '\n';
  for (const RunRecord& r : file.records) {
    check_csv_safe(r.seed, "seed");
    check_csv_safe(r.metric, "metric");
    out += r.seed;
    out += ',';
    out += r.regime == 1 ? '1' : '0';
    out += ',';
    out += r.metric;
    out += ',';
    out += format_double(r.value);
    out += '\n';
  }
  return out;
}

std::string serialize_run_file_json(const RunFile& file) {
  nlohmann::ordered_json doc;
  doc["provenance"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : file.provenance) doc["provenance"][k] = v;
  doc["records"] = nlohmann::ordered_json::array();
  for (const RunRecord& r : file.records) {
    doc["records"].push_back({{"seed", r.seed},
                              {"regime", r.regime},
                              {"metric", r.metric},
                              {"value", r.value}});
  }
  return doc.dump(2) + "\n";
}

std::vector<std::string> paired_metrics(const RunFile& file) {
  std::set<std::string> in1, in0;
  for (const RunRecord& r : file.records) (r.regime == 1 ? in1 : in0).insert(r.metric);
  std::vector<std::string> out;
  for (const std::string& m : in1)
    if (in0.contains(m)) out.push_back(m);
  return out;  // std::set iteration is already sorted
}

std::pair<PairedDataset, PairingReport> build_paired_dataset(const RunFile& file,
                                                             const std::string& metric,
                                                             PairingPolicy policy) {
  check_duplicates(file.records);

  std::map<std::string, std::pair<std::optional<double>, std::optional<double>>> by_seed;
  bool metric_seen = false;
  for (const RunRecord& r : file.records) {
    if (r.metric != metric) continue;
    metric_seen = true;
    auto& slot = by_seed[r.seed];
    (r.regime == 1 ? slot.first : slot.second) = r.value;
  }
  if (!metric_seen)
    fail(ErrorCode::unknown_metric, "metric '" + metric + "' not present in the run file");

  PairingReport report;
  report.metrics = paired_metrics(file);
  std::vector<std::string> seeds;
  std::vector<double> y1, y0;
  for (const auto& [seed, values] : by_seed) {
    if (values.first && values.second) {
      seeds.push_back(seed);
      y1.push_back(*values.first);
      y0.push_back(*values.second);
    } else if (values.first) {
      report.orphan_seeds_regime1.push_back(seed);
    } else {
      report.orphan_seeds_regime0.push_back(seed);
    }
  }
  report.paired_seeds = static_cast<std::int64_t>(seeds.size());

  if (policy == PairingPolicy::strict &&
      (!report.orphan_seeds_regime1.empty() || !report.orphan_seeds_regime0.empty())) {
    std::string msg = "orphan seeds for metric '" + metric + "':";
    for (const auto& s : report.orphan_seeds_regime1) msg += " " + s + "(regime 1 only)";
    for (const auto& s : report.orphan_seeds_regime0) msg += " " + s + "(regime 0 only)";
    fail(ErrorCode::orphan_seeds, msg);
  }
  if (seeds.empty())
    fail(ErrorCode::empty_after_pairing,
         "no seed has outcomes under both regimes for metric '" + metric + "'");

  return {PairedDataset::create(metric, std::move(seeds), std::move(y1), std::move(y0)),
          std::move(report)};
}

std::string serialize_curves(std::span<const resampling::CurveSeries> series) {
  std::string out(kCurveHeader);
  out += '\n';
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      out += resampling::curve_statistic_name(s.statistic);
      out += ',';
      out += design_name(s.design);
      out += ',';
      out += std::to_string(p.r);
      out += ',';
      out += format_double(p.value);
      out += '\n';
    }
  }
  return out;
}

std::vector<resampling::CurveSeries> parse_curves(std::string_view text) {
  std::vector<resampling::CurveSeries> out;
  std::size_t line_no = 0, pos = 0;
  bool header_seen = false;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = strip_cr(
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    ++line_no;
    const bool last = nl == std::string_view::npos;
    pos = last ? text.size() + 1 : nl + 1;
    if (line.empty()) {
      if (last) break;
      fail(ErrorCode::malformed_input, "line " + std::to_string(line_no) + ": blank line");
    }
    if (!header_seen) {
      if (line != kCurveHeader)
        fail(ErrorCode::malformed_input, "line " + std::to_string(line_no) + ": bad curve header");
      header_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 4)
      fail(ErrorCode::malformed_input, "line " + std::to_string(line_no) + ": expected 4 fields");
    resampling::CurveStatistic stat;
    if (f[0] == "se") stat = resampling::CurveStatistic::se;
    else if (f[0] == "ci_half_width") stat = resampling::CurveStatistic::ci_half_width;
    else if (f[0] == "power") stat = resampling::CurveStatistic::power;
    else if (f[0] == "sign_agreement") stat = resampling::CurveStatistic::sign_agreement;
    else fail(ErrorCode::malformed_input, "line " + std::to_string(line_no) + ": unknown statistic");
    Design design;
    if (f[1] == "paired") design = Design::paired;
    else if (f[1] == "independent") design = Design::independent;
    else fail(ErrorCode::malformed_input, "line " + std::to_string(line_no) + ": unknown design");
    std::int64_t r = 0;
    {
      const auto* end = f[2].data() + f[2].size();
      const auto [ptr, ec] = std::from_chars(f[2].data(), end, r);
      if (ec != std::errc() || ptr != end)
        fail(ErrorCode::malformed_input, "line " + std::to_string(line_no) + ": bad run count");
    }
    const double value = parse_value_field(f[3], line_no);
    if (out.empty() || out.back().statistic != stat || out.back().design != design)
      out.push_back(resampling::CurveSeries{stat, design, {}});
    out.back().points.push_back({r, value});
  }
  if (!header_seen) fail(ErrorCode::malformed_input, "missing curve header");
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(ErrorCode::io_error, "read failure on '" + path + "'");
  return std::move(ss).str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io_error, "cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) fail(ErrorCode::io_error, "write failure on '" + path + "'");
}

}  // namespace pse::io
