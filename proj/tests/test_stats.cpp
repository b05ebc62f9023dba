#include "pse/stats.hpp"

#include <cmath>
#include <vector>

#include <doctest.h>

#include "helpers.hpp"
#include "oracles/normal_oracle.hpp"
#include "pse/errors.hpp"

using namespace pse;
using test::make_dataset;
using test::random_dataset;
using test::same_bits;
using test::TestRng;

namespace {

DesignStats stats_from(std::int64_t n, double s1, double s0, double rho) {
  DesignStats s;
  s.n = n;
  s.sigma1 = s1;
  s.sigma0 = s0;
  s.cov = rho * s1 * s0;
  s.rho = rho;
  return s;
}

}  // namespace

TEST_CASE("estimate_paired: constant differences are legal with se = 0") {
  const auto data = make_dataset({1, 2, 3}, {0, 1, 2});
  const EffectEstimate e = estimate_paired(data, 0.05);
  CHECK(e.delta == 1.0);
  CHECK(e.se == 0.0);
  CHECK(e.ci_lower == 1.0);
  CHECK(e.ci_upper == 1.0);
  CHECK(e.design == Design::paired);
}

TEST_CASE("estimate_paired: identical columns give delta 0") {
  TestRng rng(21);
  const auto y = test::random_vector(rng, 17, -10, 10);
  const auto data = make_dataset(y, y);
  CHECK(estimate_paired(data, 0.05).delta == 0.0);
}

TEST_CASE("estimate_paired: hand-computed example") {
  const auto data = make_dataset({2, 4, 9}, {1, 1, 4});
  const EffectEstimate e = estimate_paired(data, 0.05);
  CHECK(e.delta == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(e.se == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(std::fabs(e.se - 1.154700) <= 1e-6);
  CHECK(e.ci_lower == doctest::Approx(0.7368).epsilon(1e-4));
  CHECK(e.ci_upper == doctest::Approx(5.2632).epsilon(1e-4));
}

TEST_CASE("estimate_paired: n = 1 raises DegenerateSE") {
  const auto data = make_dataset({4.0}, {1.0});
  CHECK_THROWS_AS(estimate_paired(data, 0.05), Error);
  try {
    estimate_paired(data, 0.05);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate_se);
  }
  CHECK(paired_delta(data) == 3.0);  // the point estimate itself is defined
}

TEST_CASE("estimate_independent: single runs per arm") {
  const std::vector<double> y1{5.0}, y0{5.0};
  CHECK(independent_delta(y1, y0) == 0.0);
  CHECK_THROWS_AS(estimate_independent(y1, y0, 0.05), Error);
}

TEST_CASE("estimate_independent: hand-computed example") {
  const std::vector<double> y1{2, 4, 9}, y0{1, 1, 4};
  const EffectEstimate e = estimate_independent(y1, y0, 0.05);
  CHECK(e.delta == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(e.se == doctest::Approx(std::sqrt(16.0 / 3.0)).epsilon(1e-12));
  CHECK(std::fabs(e.se - 2.309401) <= 1e-6);
  CHECK(e.design == Design::independent);
}

TEST_CASE("estimator agreement: identical deltas, bit for bit") {
  TestRng rng(22);
  for (int it = 0; it < 300; ++it) {
    const auto data = random_dataset(rng, 2 + rng.below(60));
    const double dp = estimate_paired(data, 0.05).delta;
    const double di = estimate_independent(data.y1(), data.y0(), 0.05).delta;
    CHECK(same_bits(dp, di));
  }
}

TEST_CASE("design_stats: perfect correlation and anticorrelation") {
  CHECK(design_stats(make_dataset({1, 2, 3}, {1, 2, 3})).correlation() == 1.0);
  CHECK(design_stats(make_dataset({1, 2, 3}, {3, 2, 1})).correlation() == -1.0);
}

TEST_CASE("design_stats: constant column leaves rho undefined") {
  const DesignStats s = design_stats(make_dataset({1, 2, 3}, {1, 1, 1}));
  CHECK(s.sigma0 == 0.0);
  CHECK(s.sigma1 > 0.0);
  CHECK(!s.rho.has_value());
  CHECK_THROWS_AS(s.correlation(), Error);
  try {
    s.correlation();
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate_variance);
  }
}

TEST_CASE("design_stats: cov = rho * sigma1 * sigma0") {
  TestRng rng(23);
  for (int it = 0; it < 200; ++it) {
    const DesignStats s = design_stats(random_dataset(rng, 2 + rng.below(100)));
    if (!s.rho) continue;
    CHECK(s.cov ==
          doctest::Approx(*s.rho * s.sigma1 * s.sigma0).epsilon(1e-12));
    CHECK(*s.rho >= -1.0);
    CHECK(*s.rho <= 1.0);
  }
}

TEST_CASE("variance_decomposition: zero covariance case") {
  const DesignStats s = stats_from(7, 1.5, 2.5, 0.0);
  const VarianceDecomposition v = variance_decomposition(s);
  CHECK(v.var_pair == v.var_ind);
  CHECK(v.reduction == 0.0);
}

TEST_CASE("variance_decomposition: perfect correlation cancels all variance") {
  const VarianceDecomposition v = variance_decomposition(stats_from(10, 1, 1, 1));
  CHECK(v.var_pair == 0.0);
  CHECK(v.reduction == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("variance_decomposition: direct substitution example") {
  const VarianceDecomposition v = variance_decomposition(stats_from(5, 2, 1, 0.5));
  CHECK(v.var_ind == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(v.var_pair == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(v.reduction == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("theorem-1 identity over random datasets") {
  TestRng rng(24);
  for (int it = 0; it < 2000; ++it) {
    const auto data = random_dataset(rng, 2 + rng.below(199));
    const DesignStats s = design_stats(data);
    const VarianceDecomposition v = variance_decomposition(s);
    CHECK(v.var_ind - v.var_pair - v.reduction == 0.0);  // computed as that subtraction
    const double eq1 = 2.0 / static_cast<double>(s.n) * s.cov;
    CHECK(std::fabs(v.reduction - eq1) <= 1e-12 * std::max(v.var_ind, 1.0));
  }
}

TEST_CASE("variance_reduction: corollary values and consistency") {
  CHECK(variance_reduction(stats_from(9, 2, 3, 0.0)) == 0.0);
  CHECK(variance_reduction(stats_from(5, 2, 1, 0.5)) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(variance_reduction(stats_from(5, 2, 1, -0.5)) < 0.0);  // pairing harmful, reported
  TestRng rng(25);
  for (int it = 0; it < 300; ++it) {
    const DesignStats s = design_stats(random_dataset(rng, 2 + rng.below(80)));
    const double a = variance_reduction(s);
    const VarianceDecomposition v = variance_decomposition(s);
    // relative to the decomposition's scale: the reduction itself can sit at
    // rounding level when the sample correlation is near zero
    CHECK(std::fabs(a - v.reduction) <=
          1e-12 * std::max({std::fabs(a), std::fabs(v.reduction), v.var_ind}));
  }
}

TEST_CASE("paired_se_from_independent: limits and halving") {
  const double se = 1.7;
  CHECK(paired_se_from_independent(se, stats_from(5, 2, 3, 0.0)) == se);
  CHECK(paired_se_from_independent(se, stats_from(5, 2, 2, 1.0)) == 0.0);
  CHECK(paired_se_from_independent(se, stats_from(5, 3, 3, 0.75)) ==
        doctest::Approx(se / 2.0).epsilon(1e-12));
}

TEST_CASE("paired_se_from_independent squares back to var_pair") {
  TestRng rng(26);
  for (int it = 0; it < 500; ++it) {
    const DesignStats s = design_stats(random_dataset(rng, 2 + rng.below(150)));
    const VarianceDecomposition v = variance_decomposition(s);
    const double se_pair = paired_se_from_independent(std::sqrt(v.var_ind), s);
    CHECK(std::fabs(se_pair * se_pair - v.var_pair) <= 1e-10 * std::max(v.var_pair, 1e-300));
  }
}

TEST_CASE("ci_half_width") {
  CHECK(ci_half_width(0.0, 0.05) == 0.0);
  const double h = ci_half_width(1.0, 0.05);
  CHECK(std::fabs(h - 1.959964) <= 1e-6);
  CHECK(std::fabs(h - test_oracle::normal_quantile(0.975)) <= 1e-9);
  CHECK(ci_half_width(2.0, 0.05) == doctest::Approx(2.0 * h).epsilon(1e-15));
  CHECK(std::fabs(ci_half_width(1.0, 0.32) - 0.994458) <= 1e-6);
  CHECK_THROWS_AS(ci_half_width(1.0, 0.0), Error);
  CHECK_THROWS_AS(ci_half_width(1.0, 1.0), Error);
}

TEST_CASE("power_normal_approx: pinned points") {
  CHECK(power_normal_approx(0.0, 1.0, 0.05) == doctest::Approx(0.025).epsilon(1e-9));
  const double z975 = 1.959963984540054;
  CHECK(power_normal_approx(z975, 1.0, 0.05) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(power_normal_approx(z975 + 0.8416212335729143, 1.0, 0.05) ==
        doctest::Approx(0.8).epsilon(1e-4));
  CHECK_THROWS_AS(power_normal_approx(1.0, 0.0, 0.05), Error);
  CHECK_THROWS_AS(power_normal_approx(1.0, -1.0, 0.05), Error);
}

TEST_CASE("power monotonicity") {
  double prev = -1.0;
  for (double d = 0.0; d <= 6.0; d += 0.1) {
    const double p = power_normal_approx(d, 1.0, 0.05);
    CHECK(p >= prev);
    prev = p;
  }
  prev = 2.0;
  for (double se = 0.1; se <= 5.0; se += 0.1) {
    const double p = power_normal_approx(1.0, se, 0.05);
    CHECK(p <= prev);
    prev = p;
  }
  CHECK(std::fabs(power_normal_approx(0.0, 2.7, 0.05) - 0.025) <= 1e-9);
}

TEST_CASE("effective_sample_size: pinned examples") {
  CHECK(effective_sample_size(12, stats_from(6, 2, 3, 0.0)).r_eff == 12.0);
  const EssResult a = effective_sample_size(44, stats_from(22, 1.5, 1.5, 0.9));
  CHECK(a.r_eff == doctest::Approx(440.0).epsilon(1e-12));
  REQUIRE(a.simplified.has_value());
  CHECK(*a.simplified == doctest::Approx(440.0).epsilon(1e-12));
  const EssResult b = effective_sample_size(10, stats_from(5, 2, 1, 0.5));
  CHECK(b.r_eff == doctest::Approx(50.0 / 3.0).epsilon(1e-12));
  CHECK(!b.simplified.has_value());  // sigmas differ by far more than 1%
  CHECK_THROWS_AS(effective_sample_size(7, stats_from(5, 2, 1, 0.5)), Error);
}

TEST_CASE("effective_sample_size: unbounded at rho = 1 with equal sigmas") {
  const EssResult e = effective_sample_size(20, stats_from(10, 2, 2, 1.0));
  CHECK(e.unbounded);
  CHECK(std::isinf(e.r_eff));
}

TEST_CASE("ESS ratio sign cases and monotonicity in rho") {
  CHECK(effective_sample_size(10, stats_from(5, 1, 2, 0.4)).ratio > 1.0);
  CHECK(effective_sample_size(10, stats_from(5, 1, 2, 0.0)).ratio == 1.0);
  CHECK(effective_sample_size(10, stats_from(5, 1, 2, -0.4)).ratio < 1.0);
  double prev = 0.0;
  for (double rho = -0.95; rho < 1.0; rho += 0.05) {
    const double ratio = effective_sample_size(100, stats_from(50, 1.3, 0.8, rho)).ratio;
    CHECK(ratio > prev);
    prev = ratio;
  }
}

TEST_CASE("variance_in_runs: examples and exact consistency") {
  CHECK(variance_in_runs(Design::independent, 4, stats_from(2, 1, 1, 0.0)) == 1.0);
  CHECK(variance_in_runs(Design::paired, 100, stats_from(50, 1, 1, 1.0)) == 0.0);
  CHECK_THROWS_AS(variance_in_runs(Design::paired, 5, stats_from(2, 1, 1, 0.0)), Error);
  TestRng rng(27);
  for (int it = 0; it < 200; ++it) {
    const DesignStats s = design_stats(random_dataset(rng, 2 + rng.below(100)));
    const VarianceDecomposition v = variance_decomposition(s);
    CHECK(same_bits(variance_in_runs(Design::paired, 2 * s.n, s), v.var_pair));
    CHECK(same_bits(variance_in_runs(Design::independent, 2 * s.n, s), v.var_ind));
  }
}

TEST_CASE("CI symmetry") {
  TestRng rng(28);
  for (int it = 0; it < 300; ++it) {
    const auto data = random_dataset(rng, 2 + rng.below(50));
    const EffectEstimate e = estimate_paired(data, 0.05);
    CHECK(e.ci_lower <= e.delta);
    CHECK(e.delta <= e.ci_upper);
    const double up = e.ci_upper - e.delta;
    const double dn = e.delta - e.ci_lower;
    CHECK(std::fabs(up - dn) <= 1e-12 * std::max({std::fabs(e.delta), up, 1e-300}));
  }
}

TEST_CASE("permutation equivariance is exact via canonical ordering") {
  TestRng rng(29);
  std::vector<std::string> seeds{"zebra", "alpha", "mid", "k9", "k10"};
  std::vector<double> y1 = test::random_vector(rng, 5, -3, 3);
  std::vector<double> y0 = test::random_vector(rng, 5, -3, 3);
  const auto base = PairedDataset::create("m", seeds, y1, y0);

  // joint permutation of (seeds, y1, y0)
  const std::vector<std::size_t> perm{3, 0, 4, 1, 2};
  std::vector<std::string> ps;
  std::vector<double> p1, p0;
  for (std::size_t i : perm) {
    ps.push_back(seeds[i]);
    p1.push_back(y1[i]);
    p0.push_back(y0[i]);
  }
  const auto permuted = PairedDataset::create("m", ps, p1, p0);

  CHECK(base.seeds() == permuted.seeds());
  CHECK(same_bits(estimate_paired(base, 0.05).se, estimate_paired(permuted, 0.05).se));
  CHECK(same_bits(design_stats(base).cov, design_stats(permuted).cov));
  CHECK(same_bits(design_stats(base).sigma1, design_stats(permuted).sigma1));
}

TEST_CASE("t-interval variant widens small-n intervals") {
  const auto data = make_dataset({2, 4, 9}, {1, 1, 4});
  const EffectEstimate z = estimate_paired(data, 0.05, CiKind::normal_z);
  const EffectEstimate t = estimate_paired(data, 0.05, CiKind::student_t);
  CHECK(t.ci_upper - t.ci_lower > z.ci_upper - z.ci_lower);
  // df = 2 quantile: 4.302652729696142
  CHECK(t.ci_upper - t.delta == doctest::Approx(4.302652729696142 * t.se).epsilon(1e-9));
}
