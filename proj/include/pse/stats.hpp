#pragma once

#include <span>

#include "pse/types.hpp"

// Closed-form statistics for paired-vs-independent evaluation designs: effect
// estimators, the variance decomposition and its corollaries, confidence
// half-widths, the normal power approximation and effective sample size.
// All functions are pure; every sum runs through the canonical kernels, so
// results are reproducible bit-for-bit.

namespace pse {

enum class CiKind { normal_z, student_t };

double mean(std::span<const double> x);

// Unbiased (n-1) sample standard deviation.
double sample_sd(std::span<const double> x);

// Point estimates. Both designs reduce each column with the same kernel
// route, so the deltas agree exactly on a shared dataset.
double paired_delta(const PairedDataset& data);
double independent_delta(std::span<const double> y1, std::span<const double> y0);

// delta = mean(y1) - mean(y0); se = sd(y1_i - y0_i)/sqrt(n); symmetric
// interval at level 1-alpha. n = 1 raises DegenerateSE (message carries the
// point estimate); a zero sd of differences is legal and yields se = 0.
EffectEstimate estimate_paired(const PairedDataset& data, double alpha,
                               CiKind ci = CiKind::normal_z);

// delta = mean(y1) - mean(y0); se = sqrt(var1/n1 + var0/n0). Treating a
// paired dataset's columns as unpaired realizes the "treated as unpaired"
// comparison protocol.
EffectEstimate estimate_independent(std::span<const double> y1, std::span<const double> y0,
                                    double alpha);

// Sample moments with denominator n-1; rho = cov/(sigma1*sigma0), clamped to
// [-1, 1]. A constant column leaves rho unset (DesignStats::correlation()
// then raises DegenerateVariance).
DesignStats design_stats(const PairedDataset& data);

// var_ind = (s1^2 + s0^2)/n, var_pair = (s1^2 + s0^2 - 2 cov)/n and their
// difference; the identity var_ind - var_pair == reduction holds exactly.
VarianceDecomposition variance_decomposition(const DesignStats& stats);

// (2/n) * cov, the covariance form of the variance reduction.
double variance_reduction(const DesignStats& stats);

// se_ind * sqrt(1 - 2*cov/(s1^2 + s0^2)). The radicand is nonnegative for any
// valid correlation; tiny negative rounding is clamped to zero.
double paired_se_from_independent(double se_ind, const DesignStats& stats);

// z_{1-alpha/2} * se
double ci_half_width(double se, double alpha);

// 1 - Phi(z_{1-alpha/2} - |delta|/se): the one-tail normal approximation of
// two-sided power, implemented as printed; at delta = 0 it returns alpha/2
// (not alpha) because the lower-tail rejection term is dropped.
double power_normal_approx(double delta_abs, double se, double alpha);

// r_eff = r * (s1^2 + s0^2) / (s1^2 + s0^2 - 2*cov) for r = 2n total runs.
EssResult effective_sample_size(std::int64_t r, const DesignStats& stats);

// Estimator variance at a budget of r total runs (n = r/2 seeds or r/2 runs
// per arm). Shares the core expression with variance_decomposition, so the
// two agree exactly at n = r/2.
double variance_in_runs(Design design, std::int64_t r, const DesignStats& stats);

}  // namespace pse
