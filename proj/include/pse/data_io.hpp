#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pse/resampling.hpp"
#include "pse/types.hpp"

// Ingestion and persistence of run records and curve files.
//
// Tabular run-record format: UTF-8 CSV with header `seed,regime,metric,value`,
// regime literal 0/1, value decimal or scientific. Leading `# key=value`
// comment lines carry provenance. The structured alternative is a JSON object
// with top-level `provenance` and `records`. parse_run_file sniffs the format
// from the first non-space byte.

namespace pse::io {

struct RunFile {
  std::vector<RunRecord> records;
  std::map<std::string, std::string> provenance;

  friend bool operator==(const RunFile&, const RunFile&) = default;
};

enum class PairingPolicy { strict, drop_orphans };

const char* pairing_policy_name(PairingPolicy p) noexcept;

// Orphan seeds have an outcome under only one regime and cannot enter a
// paired design; per metric, paired seeds plus orphans partition the seed
// universe.
struct PairingReport {
  std::int64_t paired_seeds = 0;
  std::vector<std::string> orphan_seeds_regime1;  // sorted
  std::vector<std::string> orphan_seeds_regime0;  // sorted
  std::vector<std::string> metrics;               // metrics present in both regimes, sorted
};

RunFile parse_run_file(std::string_view text);
RunFile parse_run_file_csv(std::string_view text);
RunFile parse_run_file_json(std::string_view text);

// Values are written shortest-round-trip, so parse(serialize(f)) == f.
// CSV refuses seed/metric fields containing separators (comma, newline, '#').
std::string serialize_run_file_csv(const RunFile& file);
std::string serialize_run_file_json(const RunFile& file);

// Metrics with records under both regimes, sorted.
std::vector<std::string> paired_metrics(const RunFile& file);

// strict: any orphan seed is an error. drop_orphans: orphans are excluded and
// listed in the report. Dataset ordering is lexicographic by seed id.
std::pair<PairedDataset, PairingReport> build_paired_dataset(const RunFile& file,
                                                             const std::string& metric,
                                                             PairingPolicy policy);

// Curve files: CSV with header `statistic,design,r,value`.
std::string serialize_curves(std::span<const resampling::CurveSeries> series);
std::vector<resampling::CurveSeries> parse_curves(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

// Shortest-round-trip decimal rendering of a double.
std::string format_double(double v);

}  // namespace pse::io
