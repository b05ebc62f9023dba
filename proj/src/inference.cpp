#include "pse/inference.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "pse/dist.hpp"
#include "pse/errors.hpp"
#include "pse/kernels.hpp"

namespace pse {

const char* test_method_name(TestMethod m) noexcept {
  switch (m) {
    case TestMethod::paired_t: return "paired_t";
    case TestMethod::wilcoxon_signed_rank_exact: return "wilcoxon_signed_rank_exact";
    case TestMethod::wilcoxon_signed_rank_normal: return "wilcoxon_signed_rank_normal";
    case TestMethod::pearson_t: return "pearson_t";
  }
  return "unknown";
}

TestResult paired_t_test(const PairedDataset& data) {
  const std::int64_t n = data.n();
  if (n < 2) fail(ErrorCode::too_few_seeds, "paired t-test needs n >= 2");
  const std::vector<double> d = data.differences();
  const double md = kernels::sum(d) / static_cast<double>(n);
  const double ss = std::max(0.0, kernels::centered_dot(d, md, d, md));
  if (ss == 0.0)
    fail(ErrorCode::degenerate_differences, "all within-seed differences are equal");
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  const double t = md / (sd / std::sqrt(static_cast<double>(n)));
  const double df = static_cast<double>(n - 1);
  return TestResult{t, student_t_two_sided_p(t, df), df, TestMethod::paired_t, {}};
}

namespace {

struct RankedDifferences {
  std::vector<long long> rank2;   // doubled midranks, ordered by |d| ascending
  std::vector<int> sign;          // matching signs (+1/-1)
  std::vector<long long> tie_sizes;
};

RankedDifferences rank_differences(const std::vector<double>& diffs) {
  std::vector<double> nonzero;
  nonzero.reserve(diffs.size());
  for (double d : diffs)
    if (d != 0.0) nonzero.push_back(d);
  if (nonzero.empty())
    fail(ErrorCode::all_zero_differences, "every within-seed difference is zero");

  std::sort(nonzero.begin(), nonzero.end(),
            [](double a, double b) { return std::fabs(a) < std::fabs(b); });

  const std::size_t m = nonzero.size();
  RankedDifferences out;
  out.rank2.resize(m);
  out.sign.resize(m);
  std::size_t i = 0;
  while (i < m) {
    std::size_t j = i;
    while (j + 1 < m && std::fabs(nonzero[j + 1]) == std::fabs(nonzero[i])) ++j;
    // 1-based ranks i+1..j+1 averaged; doubling keeps the midrank integral
    const long long r2 = static_cast<long long>(i + j + 2);
    for (std::size_t k = i; k <= j; ++k) {
      out.rank2[k] = r2;
      out.sign[k] = nonzero[k] > 0.0 ? 1 : -1;
    }
    out.tie_sizes.push_back(static_cast<long long>(j - i + 1));
    i = j + 1;
  }
  return out;
}

// Exact two-sided p over all 2^m sign assignments, walking masks in Gray-code
// order so each step updates the running sum by one rank.
double exact_two_sided_p(const std::vector<long long>& rank2, long long w2) {
  const int m = static_cast<int>(rank2.size());
  const std::uint64_t total = std::uint64_t{1} << m;
  std::uint64_t count_le = 0, count_ge = 0;
  long long cur = 0;  // mask 0: all differences negative
  std::uint64_t gray_prev = 0;
  for (std::uint64_t k = 0;; ++k) {
    count_le += cur <= w2;
    count_ge += cur >= w2;
    if (k + 1 == total) break;
    const std::uint64_t gray = (k + 1) ^ ((k + 1) >> 1);
    const std::uint64_t changed = gray ^ gray_prev;
    const int bit = std::countr_zero(changed);
    cur += (gray & changed) ? rank2[bit] : -rank2[bit];
    gray_prev = gray;
  }
  const double p =
      2.0 * static_cast<double>(std::min(count_le, count_ge)) / static_cast<double>(total);
  return std::min(1.0, p);
}

}  // namespace

TestResult wilcoxon_signed_rank(const PairedDataset& data) {
  const RankedDifferences ranked = rank_differences(data.differences());
  const int m = static_cast<int>(ranked.rank2.size());

  long long w2 = 0;
  for (int i = 0; i < m; ++i)
    if (ranked.sign[i] > 0) w2 += ranked.rank2[i];
  const double w = static_cast<double>(w2) / 2.0;

  if (m <= kWilcoxonExactLimit) {
    const double p = exact_two_sided_p(ranked.rank2, w2);
    return TestResult{w, p, static_cast<double>(m),
                      TestMethod::wilcoxon_signed_rank_exact, {}};
  }

  const double dm = static_cast<double>(m);
  const double mean_w = dm * (dm + 1.0) / 4.0;
  double tie_correction = 0.0;
  for (long long t : ranked.tie_sizes) {
    const double td = static_cast<double>(t);
    tie_correction += (td * td * td - td) / 48.0;
  }
  const double var_w = dm * (dm + 1.0) * (2.0 * dm + 1.0) / 24.0 - tie_correction;
  const double delta = w - mean_w;
  double p = 1.0;
  if (delta != 0.0 && var_w > 0.0) {
    const double cc = delta > 0.0 ? 0.5 : -0.5;  // continuity, toward the mean
    const double z = (delta - cc) / std::sqrt(var_w);
    p = std::min(1.0, 2.0 * (1.0 - normal_cdf(std::fabs(z))));
  }
  return TestResult{w, p, dm, TestMethod::wilcoxon_signed_rank_normal, {}};
}

TestResult pearson_test(const DesignStats& stats) {
  if (stats.n < 3) fail(ErrorCode::too_few_seeds, "Pearson test needs n >= 3");
  const double rho = stats.correlation();
  const double df = static_cast<double>(stats.n - 2);
  if (std::fabs(rho) >= 1.0) {
    const double inf = std::numeric_limits<double>::infinity();
    return TestResult{rho > 0 ? inf : -inf, 0.0, df, TestMethod::pearson_t,
                      "perfect correlation"};
  }
  const double t = rho * std::sqrt(df / (1.0 - rho * rho));
  return TestResult{t, student_t_two_sided_p(t, df), df, TestMethod::pearson_t, {}};
}

}  // namespace pse
