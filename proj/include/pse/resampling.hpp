#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pse/counter_rng.hpp"
#include "pse/types.hpp"

// Monte Carlo subsampling engine: SE, CI-half-width, power and sign-stability
// curves over the run budget, for both evaluation designs.
//
// For each grid entry r (total runs, n = r/2 seeds) and each replicate, a
// subset of n seeds is drawn uniformly without replacement and the effect is
// re-estimated. The paired design reuses one subset for both regimes; the
// independent design draws two disjoint subsets so no seed-level correlation
// leaks into its estimate. Each replicate derives its own stream from
// (rng_seed, grid index, replicate), so curves are bit-identical regardless
// of thread count or scheduling.

namespace pse::resampling {

enum class CurveStatistic { se, ci_half_width, power, sign_agreement };

const char* curve_statistic_name(CurveStatistic s) noexcept;

struct CurvePoint {
  std::int64_t r = 0;
  double value = 0.0;
};

struct CurveSeries {
  CurveStatistic statistic = CurveStatistic::se;
  Design design = Design::paired;
  std::vector<CurvePoint> points;  // sorted by r
};

// How the independent-design curve is produced: disjoint-subset subsampling
// (default) or the analytic plug-in sqrt((var1 + var0)/(r/2)) from the
// full-sample moments, kept as a sensitivity alternative.
enum class IndependentMode { disjoint_subsample, analytic };

struct SubsampleConfig {
  int replicates = 1000;
  std::uint64_t rng_seed = 0;
  std::vector<std::int64_t> grid;  // even, strictly increasing run counts; empty = default
  double alpha = 0.05;
  double mde = 0.0;  // minimum detectable effect, power curves only
  int threads = 1;
  IndependentMode independent_mode = IndependentMode::disjoint_subsample;
};

struct CurvePair {
  CurveSeries paired;
  CurveSeries independent;
};

struct PowerCurveResult {
  CurveSeries paired;
  CurveSeries independent;
  // smallest grid r with power >= 0.8, per design
  std::optional<std::int64_t> crossing_paired;
  std::optional<std::int64_t> crossing_independent;
};

// r in {4, 8, 12, ...} capped at 2*floor(n_seeds/2) (cap appended when not on
// the step), i.e. the largest budget feasible for both designs.
std::vector<std::int64_t> default_grid(std::int64_t n_seeds);

// Replicate standard deviation (denominator replicates-1) of the subsample
// effect estimates. Paired points require r <= 2n (else GridInfeasible);
// independent points additionally require r <= n and are omitted beyond that.
CurvePair se_curve(const PairedDataset& data, const SubsampleConfig& cfg);

// z_{1-alpha/2} times the matching se_curve, point for point.
CurvePair ci_curve(const PairedDataset& data, const SubsampleConfig& cfg);

// power_normal_approx(mde, SE(r), alpha) over the matching se_curve; a zero
// subsample SE maps to power 1 for mde > 0 and alpha/2 for mde = 0.
PowerCurveResult power_curve(const PairedDataset& data, const SubsampleConfig& cfg);

// Fraction of replicates whose subsample estimate matches the sign of the
// full-sample paired estimate; an exactly zero estimate counts as
// disagreement. Requires a nonzero full-sample estimate.
CurvePair sign_stability_curve(const PairedDataset& data, const SubsampleConfig& cfg);

namespace detail {

// k distinct indices from [0, n_total), ascending; consumes exactly k draws.
std::vector<std::uint32_t> sample_without_replacement(rng::Stream& stream,
                                                      std::uint32_t n_total, std::uint32_t k);

}  // namespace detail

}  // namespace pse::resampling
