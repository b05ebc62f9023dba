#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pse {

enum class Design { paired, independent };

const char* design_name(Design d) noexcept;

// One simulator outcome: seed identifier, regime (0 = baseline, 1 = treated),
// metric name and its scalar value. Seeds are opaque strings; equality is all
// that pairing needs.
struct RunRecord {
  std::string seed;
  int regime = 0;
  std::string metric;
  double value = 0.0;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

// Positionally aligned outcomes under both regimes for one metric. Stored in
// canonical order (lexicographic by seed id), which makes every downstream
// statistic invariant under joint permutation of the inputs, bit for bit.
class PairedDataset {
 public:
  // Validates: equal lengths >= 1, unique seeds, finite values; sorts the
  // three columns jointly by seed id.
  static PairedDataset create(std::string metric, std::vector<std::string> seeds,
                              std::vector<double> y1, std::vector<double> y0);

  std::int64_t n() const noexcept { return static_cast<std::int64_t>(seeds_.size()); }
  const std::string& metric() const noexcept { return metric_; }
  const std::vector<std::string>& seeds() const noexcept { return seeds_; }
  std::span<const double> y1() const noexcept { return y1_; }
  std::span<const double> y0() const noexcept { return y0_; }

  // y1[i] - y0[i], the within-seed differences
  std::vector<double> differences() const;

 private:
  PairedDataset() = default;
  std::string metric_;
  std::vector<std::string> seeds_;
  std::vector<double> y1_;
  std::vector<double> y0_;
};

// Sample (or population, for the synthetic oracle) design moments for one
// metric. rho is absent when a column is constant; correlation() raises
// DegenerateVariance in that case rather than coercing to 0.
struct DesignStats {
  std::int64_t n = 0;
  double sigma1 = 0.0;
  double sigma0 = 0.0;
  double cov = 0.0;
  std::optional<double> rho;

  double correlation() const;  // throws Error(degenerate_variance) if absent
};

struct EffectEstimate {
  double delta = 0.0;
  double se = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
  Design design = Design::paired;
  std::int64_t n = 0;
  double alpha = 0.05;
};

struct VarianceDecomposition {
  double var_ind = 0.0;
  double var_pair = 0.0;
  double reduction = 0.0;  // var_ind - var_pair, computed as that subtraction
};

// Effective sample size in runs. unbounded marks the rho -> 1, sigma1 = sigma0
// limit where the paired design's variance vanishes; r_eff/ratio are +inf.
// simplified carries r/(1-rho) when the sigmas agree to within 1% relative.
struct EssResult {
  std::int64_t r = 0;
  double r_eff = 0.0;
  double ratio = 0.0;
  bool unbounded = false;
  std::optional<double> simplified;
};

}  // namespace pse
