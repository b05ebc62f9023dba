#pragma once

#include <string>

#include "pse/types.hpp"

// Paired hypothesis tests (t, Wilcoxon signed-rank, Pearson correlation).

namespace pse {

enum class TestMethod {
  paired_t,
  wilcoxon_signed_rank_exact,
  wilcoxon_signed_rank_normal,
  pearson_t,
};

const char* test_method_name(TestMethod m) noexcept;

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double df_or_n = 0.0;
  TestMethod method = TestMethod::paired_t;
  std::string note;  // nonempty for flagged degenerate outcomes
};

// t = mean(d) / (sd(d)/sqrt(n)) on the within-seed differences, two-sided p
// from Student t with df = n-1. All-equal differences raise
// DegenerateDifferences.
TestResult paired_t_test(const PairedDataset& data);

// W = sum of ranks of positive differences (midranks on tied |d|, zero
// differences dropped). Exact two-sided p by enumerating all 2^m sign
// assignments for m <= 20; tie-adjusted normal approximation with continuity
// correction above that. The method field records which path ran.
TestResult wilcoxon_signed_rank(const PairedDataset& data);

// t = rho * sqrt((n-2)/(1-rho^2)), two-sided p with df = n-2. |rho| = 1 is
// reported as a flagged result with p = 0 rather than an error.
TestResult pearson_test(const DesignStats& stats);

// Exact-enumeration cutoff for the signed-rank test.
inline constexpr int kWilcoxonExactLimit = 20;

}  // namespace pse
