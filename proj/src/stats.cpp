#include "pse/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pse/dist.hpp"
#include "pse/errors.hpp"
#include "pse/kernels.hpp"

namespace pse {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    fail(ErrorCode::invalid_alpha, "alpha must lie in (0,1), got " + std::to_string(alpha));
}

double centered_sum_sq(std::span<const double> x, double m) {
  return std::max(0.0, kernels::centered_dot(x, m, x, m));
}

EffectEstimate with_interval(double delta, double se, double half, Design design,
                             std::int64_t n, double alpha) {
  return EffectEstimate{delta, se, delta - half, delta + half, design, n, alpha};
}

// 1 - 2*cov/(sigma1^2 + sigma0^2), clamped to [0, +). Shared by the paired
// variance and the Eq.-3 SE scaling so the two routes agree to rounding even
// when the paired variance nearly vanishes.
double pair_radicand(const DesignStats& s) {
  const double s2 = s.sigma1 * s.sigma1 + s.sigma0 * s.sigma0;
  if (s2 == 0.0) return 0.0;
  return std::max(0.0, 1.0 - 2.0 * s.cov / s2);
}

double ind_variance_at(const DesignStats& s, double n) {
  return (s.sigma1 * s.sigma1 + s.sigma0 * s.sigma0) / n;
}

// (sigma1^2 + sigma0^2 - 2 cov) / n; shared by Eq. 1 and the run-budget form
// so they agree bit-for-bit.
double pair_variance_at(const DesignStats& s, double n) {
  return ind_variance_at(s, n) * pair_radicand(s);
}

}  // namespace

double mean(std::span<const double> x) {
  if (x.empty()) fail(ErrorCode::empty_dataset, "mean of empty vector");
  return kernels::sum(x) / static_cast<double>(x.size());
}

double sample_sd(std::span<const double> x) {
  if (x.size() < 2) fail(ErrorCode::degenerate_se, "sample sd needs n >= 2");
  const double m = mean(x);
  return std::sqrt(centered_sum_sq(x, m) / static_cast<double>(x.size() - 1));
}

double paired_delta(const PairedDataset& data) {
  return independent_delta(data.y1(), data.y0());
}

double independent_delta(std::span<const double> y1, std::span<const double> y0) {
  if (y1.empty() || y0.empty()) fail(ErrorCode::empty_dataset, "empty outcome vector");
  return kernels::sum(y1) / static_cast<double>(y1.size()) -
         kernels::sum(y0) / static_cast<double>(y0.size());
}

EffectEstimate estimate_paired(const PairedDataset& data, double alpha, CiKind ci) {
  check_alpha(alpha);
  const std::int64_t n = data.n();
  const double delta = paired_delta(data);
  if (n < 2)
    fail(ErrorCode::degenerate_se,
         "paired SE undefined for n = 1 (delta = " + std::to_string(delta) + ")");
  const std::vector<double> d = data.differences();
  const double md = mean(d);
  const double sd = std::sqrt(centered_sum_sq(d, md) / static_cast<double>(n - 1));
  const double se = sd / std::sqrt(static_cast<double>(n));
  const double q = ci == CiKind::normal_z
                       ? normal_quantile(1.0 - alpha / 2.0)
                       : student_t_quantile(1.0 - alpha / 2.0, static_cast<double>(n - 1));
  return with_interval(delta, se, q * se, Design::paired, n, alpha);
}

EffectEstimate estimate_independent(std::span<const double> y1, std::span<const double> y0,
                                    double alpha) {
  check_alpha(alpha);
  const double delta = independent_delta(y1, y0);
  const auto n1 = static_cast<std::int64_t>(y1.size());
  const auto n0 = static_cast<std::int64_t>(y0.size());
  if (n1 < 2 || n0 < 2)
    fail(ErrorCode::degenerate_se,
         "independent SE undefined for a single run per arm (delta = " + std::to_string(delta) +
             ")");
  const double var1 = centered_sum_sq(y1, mean(y1)) / static_cast<double>(n1 - 1);
  const double var0 = centered_sum_sq(y0, mean(y0)) / static_cast<double>(n0 - 1);
  const double se = std::sqrt(var1 / static_cast<double>(n1) + var0 / static_cast<double>(n0));
  return with_interval(delta, se, ci_half_width(se, alpha), Design::independent,
                       std::min(n1, n0), alpha);
}

DesignStats design_stats(const PairedDataset& data) {
  const std::int64_t n = data.n();
  if (n < 2) fail(ErrorCode::too_few_seeds, "design stats need n >= 2 seeds");
  const double m1 = mean(data.y1());
  const double m0 = mean(data.y0());
  const double denom = static_cast<double>(n - 1);
  DesignStats s;
  s.n = n;
  s.sigma1 = std::sqrt(centered_sum_sq(data.y1(), m1) / denom);
  s.sigma0 = std::sqrt(centered_sum_sq(data.y0(), m0) / denom);
  s.cov = kernels::centered_dot(data.y1(), m1, data.y0(), m0) / denom;
  if (s.sigma1 > 0.0 && s.sigma0 > 0.0)
    s.rho = std::clamp(s.cov / (s.sigma1 * s.sigma0), -1.0, 1.0);
  return s;
}

VarianceDecomposition variance_decomposition(const DesignStats& stats) {
  const auto n = static_cast<double>(stats.n);
  VarianceDecomposition v;
  v.var_ind = ind_variance_at(stats, n);
  v.var_pair = pair_variance_at(stats, n);
  v.reduction = v.var_ind - v.var_pair;
  return v;
}

double variance_reduction(const DesignStats& stats) {
  return 2.0 / static_cast<double>(stats.n) * stats.cov;
}

double paired_se_from_independent(double se_ind, const DesignStats& stats) {
  if (!(se_ind >= 0.0)) fail(ErrorCode::invalid_config, "se_ind must be nonnegative");
  // radicand = ((sigma1-sigma0)^2 + 2 sigma1 sigma0 (1-rho)) / s2 >= 0;
  // only rounding can push it below zero, hence the clamp inside.
  return se_ind * std::sqrt(pair_radicand(stats));
}

double ci_half_width(double se, double alpha) {
  check_alpha(alpha);
  if (!(se >= 0.0)) fail(ErrorCode::invalid_config, "se must be nonnegative");
  return normal_quantile(1.0 - alpha / 2.0) * se;
}

double power_normal_approx(double delta_abs, double se, double alpha) {
  check_alpha(alpha);
  if (!(se > 0.0)) fail(ErrorCode::nonpositive_se, "power requires se > 0");
  if (!(delta_abs >= 0.0)) fail(ErrorCode::invalid_config, "effect magnitude must be >= 0");
  return 1.0 - normal_cdf(normal_quantile(1.0 - alpha / 2.0) - delta_abs / se);
}

EssResult effective_sample_size(std::int64_t r, const DesignStats& stats) {
  if (r <= 0 || r % 2 != 0)
    fail(ErrorCode::odd_run_count, "run count must be a positive even integer, got " +
                                       std::to_string(r));
  const double s2 = stats.sigma1 * stats.sigma1 + stats.sigma0 * stats.sigma0;
  const double denom = s2 - 2.0 * stats.cov;
  EssResult res;
  res.r = r;
  const double hi = std::max(stats.sigma1, stats.sigma0);
  const bool sigmas_close = hi > 0.0 && std::fabs(stats.sigma1 - stats.sigma0) <= 1e-2 * hi;
  if (denom <= 0.0) {
    res.unbounded = true;
    res.r_eff = std::numeric_limits<double>::infinity();
    res.ratio = std::numeric_limits<double>::infinity();
    return res;
  }
  res.ratio = s2 / denom;
  res.r_eff = static_cast<double>(r) * res.ratio;
  if (sigmas_close && stats.rho && *stats.rho < 1.0)
    res.simplified = static_cast<double>(r) / (1.0 - *stats.rho);
  return res;
}

double variance_in_runs(Design design, std::int64_t r, const DesignStats& stats) {
  if (r <= 0 || r % 2 != 0)
    fail(ErrorCode::odd_run_count, "run count must be a positive even integer, got " +
                                       std::to_string(r));
  const double n = static_cast<double>(r) / 2.0;
  return design == Design::paired ? pair_variance_at(stats, n) : ind_variance_at(stats, n);
}

}  // namespace pse
