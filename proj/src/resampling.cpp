#include "pse/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>
#include <unordered_set>

#include "pse/errors.hpp"
#include "pse/kernels.hpp"
#include "pse/stats.hpp"

namespace pse::resampling {

const char* curve_statistic_name(CurveStatistic s) noexcept {
  switch (s) {
    case CurveStatistic::se: return "se";
    case CurveStatistic::ci_half_width: return "ci_half_width";
    case CurveStatistic::power: return "power";
    case CurveStatistic::sign_agreement: return "sign_agreement";
  }
  return "unknown";
}

namespace detail {

std::vector<std::uint32_t> sample_without_replacement(rng::Stream& stream,
                                                      std::uint32_t n_total, std::uint32_t k) {
  // Floyd's algorithm: k iterations, one draw each, uniform over k-subsets.
  std::vector<std::uint32_t> out;
  out.reserve(k);
  std::unordered_set<std::uint32_t> chosen;
  chosen.reserve(k * 2);
  for (std::uint32_t j = n_total - k; j < n_total; ++j) {
    const auto t = static_cast<std::uint32_t>(stream.next_below(j + 1));
    if (chosen.insert(t).second) {
      out.push_back(t);
    } else {
      chosen.insert(j);
      out.push_back(j);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

namespace {

struct ResolvedConfig {
  std::vector<std::int64_t> grid;
  int replicates;
  int threads;
};

ResolvedConfig resolve(const PairedDataset& data, const SubsampleConfig& cfg) {
  const std::int64_t n_avail = data.n();
  if (n_avail < 2) fail(ErrorCode::too_few_seeds, "subsampling needs at least 2 seeds");
  if (cfg.replicates < 2)
    fail(ErrorCode::invalid_config, "replicates must be >= 2 for a replicate SD");
  if (!(cfg.alpha > 0.0) || !(cfg.alpha < 1.0))
    fail(ErrorCode::invalid_alpha, "alpha must lie in (0,1)");
  if (!(cfg.mde >= 0.0)) fail(ErrorCode::invalid_config, "mde must be >= 0");

  ResolvedConfig r;
  r.grid = cfg.grid.empty() ? default_grid(n_avail) : cfg.grid;
  if (r.grid.empty()) fail(ErrorCode::grid_infeasible, "empty grid");
  std::int64_t prev = 0;
  for (std::int64_t g : r.grid) {
    if (g <= 0 || g % 2 != 0)
      fail(ErrorCode::odd_run_count, "grid entries must be positive even run counts, got " +
                                         std::to_string(g));
    if (g <= prev) fail(ErrorCode::grid_infeasible, "grid must be strictly increasing");
    prev = g;
  }
  if (r.grid.back() / 2 > n_avail)
    fail(ErrorCode::grid_infeasible,
         "grid r = " + std::to_string(r.grid.back()) + " needs " +
             std::to_string(r.grid.back() / 2) + " seeds but only " +
             std::to_string(n_avail) + " are available");
  r.replicates = cfg.replicates;
  r.threads = std::max(1, cfg.threads);
  return r;
}

// Replicate effect estimates for one grid entry, both designs.
struct PointEstimates {
  std::int64_t r = 0;
  std::vector<double> paired;       // size = replicates
  std::vector<double> independent;  // empty when infeasible or analytic mode
};

// All derivations below are keyed by (rng_seed, grid index, replicate), so
// results do not depend on how replicates are scheduled across threads.
std::vector<PointEstimates> run_replicates(const PairedDataset& data,
                                           const SubsampleConfig& cfg,
                                           const ResolvedConfig& rc) {
  const auto n_avail = static_cast<std::uint32_t>(data.n());
  const std::vector<double> diffs = data.differences();
  const std::span<const double> y1 = data.y1();
  const std::span<const double> y0 = data.y0();

  std::vector<PointEstimates> points(rc.grid.size());
  for (std::size_t gi = 0; gi < rc.grid.size(); ++gi) {
    const std::int64_t r = rc.grid[gi];
    const auto n_sub = static_cast<std::uint32_t>(r / 2);
    const bool independent_feasible =
        cfg.independent_mode == IndependentMode::disjoint_subsample &&
        r <= static_cast<std::int64_t>(n_avail);

    PointEstimates& pt = points[gi];
    pt.r = r;
    pt.paired.resize(rc.replicates);
    if (independent_feasible) pt.independent.resize(rc.replicates);

    const std::uint64_t grid_key = rng::derive(cfg.rng_seed, gi);
    auto worker = [&](int rep_begin, int rep_end) {
      std::vector<std::uint32_t> half_a, half_b;
      for (int k = rep_begin; k < rep_end; ++k) {
        rng::Stream stream(rng::derive(grid_key, static_cast<std::uint64_t>(k)));

        const std::vector<std::uint32_t> idx =
            detail::sample_without_replacement(stream, n_avail, n_sub);
        pt.paired[k] = kernels::gather_sum(diffs, idx) / static_cast<double>(n_sub);

        if (!independent_feasible) continue;
        std::vector<std::uint32_t> both =
            detail::sample_without_replacement(stream, n_avail, 2 * n_sub);
        // Random split: Fisher-Yates with the replicate's own stream, then
        // each half re-sorted so the gather order is canonical.
        for (std::uint32_t i = 2 * n_sub - 1; i > 0; --i) {
          const auto j = static_cast<std::uint32_t>(stream.next_below(i + 1));
          std::swap(both[i], both[j]);
        }
        half_a.assign(both.begin(), both.begin() + n_sub);
        half_b.assign(both.begin() + n_sub, both.end());
        std::sort(half_a.begin(), half_a.end());
        std::sort(half_b.begin(), half_b.end());
        pt.independent[k] = kernels::gather_sum(y1, half_a) / static_cast<double>(n_sub) -
                            kernels::gather_sum(y0, half_b) / static_cast<double>(n_sub);
      }
    };

    if (rc.threads == 1) {
      worker(0, rc.replicates);
    } else {
      std::vector<std::thread> pool;
      const int chunk = (rc.replicates + rc.threads - 1) / rc.threads;
      for (int t = 0; t < rc.threads; ++t) {
        const int lo = t * chunk;
        const int hi = std::min(rc.replicates, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(worker, lo, hi);
      }
      for (auto& th : pool) th.join();
    }
  }
  return points;
}

double replicate_sd(const std::vector<double>& est) {
  const auto n = static_cast<double>(est.size());
  const double m = kernels::sum(est) / n;
  const double ss = std::max(0.0, kernels::centered_dot(est, m, est, m));
  return std::sqrt(ss / (n - 1.0));
}

CurveSeries make_series(CurveStatistic stat, Design design) {
  return CurveSeries{stat, design, {}};
}

// Analytic independent-design SE at budget r from full-sample moments.
double analytic_independent_se(const DesignStats& stats, std::int64_t r) {
  return std::sqrt(variance_in_runs(Design::independent, r, stats));
}

CurvePair se_curve_impl(const PairedDataset& data, const SubsampleConfig& cfg,
                        const ResolvedConfig& rc) {
  const std::vector<PointEstimates> points = run_replicates(data, cfg, rc);
  CurvePair out{make_series(CurveStatistic::se, Design::paired),
                make_series(CurveStatistic::se, Design::independent)};
  const bool analytic = cfg.independent_mode == IndependentMode::analytic;
  DesignStats full_stats;
  if (analytic) full_stats = design_stats(data);
  for (const PointEstimates& pt : points) {
    out.paired.points.push_back({pt.r, replicate_sd(pt.paired)});
    if (analytic) {
      out.independent.points.push_back({pt.r, analytic_independent_se(full_stats, pt.r)});
    } else if (!pt.independent.empty()) {
      out.independent.points.push_back({pt.r, replicate_sd(pt.independent)});
    }
  }
  return out;
}

double full_sample_reference_delta(const PairedDataset& data) {
  const double delta = paired_delta(data);
  if (delta == 0.0)
    fail(ErrorCode::sign_reference_undefined,
         "full-sample estimate is exactly zero; sign reference undefined");
  return delta;
}

}  // namespace

std::vector<std::int64_t> default_grid(std::int64_t n_seeds) {
  const std::int64_t cap = 2 * (n_seeds / 2);
  std::vector<std::int64_t> grid;
  for (std::int64_t r = 4; r <= cap; r += 4) grid.push_back(r);
  if (cap >= 2 && (grid.empty() || grid.back() != cap)) grid.push_back(cap);
  return grid;
}

CurvePair se_curve(const PairedDataset& data, const SubsampleConfig& cfg) {
  return se_curve_impl(data, cfg, resolve(data, cfg));
}

CurvePair ci_curve(const PairedDataset& data, const SubsampleConfig& cfg) {
  const ResolvedConfig rc = resolve(data, cfg);
  CurvePair out = se_curve_impl(data, cfg, rc);
  const double z = ci_half_width(1.0, cfg.alpha);
  out.paired.statistic = CurveStatistic::ci_half_width;
  out.independent.statistic = CurveStatistic::ci_half_width;
  for (auto& p : out.paired.points) p.value = z * p.value;
  for (auto& p : out.independent.points) p.value = z * p.value;
  return out;
}

PowerCurveResult power_curve(const PairedDataset& data, const SubsampleConfig& cfg) {
  const ResolvedConfig rc = resolve(data, cfg);
  const CurvePair se = se_curve_impl(data, cfg, rc);
  PowerCurveResult out{make_series(CurveStatistic::power, Design::paired),
                       make_series(CurveStatistic::power, Design::independent),
                       std::nullopt, std::nullopt};
  auto to_power = [&](const CurveSeries& src, CurveSeries& dst,
                      std::optional<std::int64_t>& crossing) {
    for (const CurvePoint& p : src.points) {
      double value;
      if (p.value > 0.0) {
        value = power_normal_approx(cfg.mde, p.value, cfg.alpha);
      } else {
        // zero subsample SE: any nonzero effect is detected with certainty
        value = cfg.mde > 0.0 ? 1.0 : cfg.alpha / 2.0;
      }
      dst.points.push_back({p.r, value});
      if (!crossing && value >= 0.8) crossing = p.r;
    }
  };
  to_power(se.paired, out.paired, out.crossing_paired);
  to_power(se.independent, out.independent, out.crossing_independent);
  return out;
}

CurvePair sign_stability_curve(const PairedDataset& data, const SubsampleConfig& cfg) {
  const ResolvedConfig rc = resolve(data, cfg);
  const double ref = full_sample_reference_delta(data);
  const std::vector<PointEstimates> points = run_replicates(data, cfg, rc);

  CurvePair out{make_series(CurveStatistic::sign_agreement, Design::paired),
                make_series(CurveStatistic::sign_agreement, Design::independent)};
  auto agreement = [&](const std::vector<double>& est) {
    std::int64_t agree = 0;
    for (double e : est) {
      // zero estimates count against agreement
      if ((ref > 0.0 && e > 0.0) || (ref < 0.0 && e < 0.0)) ++agree;
    }
    return static_cast<double>(agree) / static_cast<double>(est.size());
  };
  for (const PointEstimates& pt : points) {
    out.paired.points.push_back({pt.r, agreement(pt.paired)});
    if (!pt.independent.empty())
      out.independent.points.push_back({pt.r, agreement(pt.independent)});
  }
  return out;
}

}  // namespace pse::resampling
