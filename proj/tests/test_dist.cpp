#include "pse/dist.hpp"

#include <cmath>

#include <doctest.h>

#include "oracles/normal_oracle.hpp"
#include "pse/errors.hpp"

using namespace pse;

TEST_CASE("normal_cdf agrees with the series/CF oracle") {
  for (double x = -10.0; x <= 10.0; x += 0.01) {
    CHECK(std::fabs(normal_cdf(x) - test_oracle::normal_cdf(x)) <= 1e-13);
  }
  CHECK(normal_cdf(0.0) == 0.5);  // exact
  CHECK(normal_cdf(40.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(normal_cdf(-40.0) <= 1e-300);
}

TEST_CASE("normal_cdf reference values") {
  CHECK(normal_cdf(0.5) == doctest::Approx(0.6914624612740131).epsilon(1e-12));
  CHECK(normal_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-12));
  CHECK(normal_cdf(2.0) == doctest::Approx(0.9772498680518208).epsilon(1e-12));
  CHECK(normal_cdf(-5.0) == doctest::Approx(2.866515718791933e-07).epsilon(1e-10));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
}

TEST_CASE("normal_quantile round trip on a 1e4 grid") {
  // log-spaced into both tails plus a linear sweep of the bulk
  for (int i = 0; i < 2500; ++i) {
    const double p = std::pow(10.0, -8.0 + 7.0 * i / 2500.0);  // 1e-8 .. ~1e-1
    for (double q : {p, 1.0 - p}) {
      const double z = normal_quantile(q);
      CHECK(std::fabs(normal_cdf(z) - q) <= 1e-10);
    }
  }
  for (int i = 1; i < 5000; ++i) {
    const double p = static_cast<double>(i) / 5000.0;
    const double z = normal_quantile(p);
    CHECK(std::fabs(normal_cdf(z) - p) <= 1e-10);
  }
}

TEST_CASE("normal_quantile reference points and symmetry") {
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-9));
  CHECK(normal_quantile(0.8) == doctest::Approx(0.8416212335729143).epsilon(1e-9));
  CHECK(std::fabs(normal_quantile(0.975) - 1.959964) <= 1e-6);
  CHECK(std::fabs(normal_quantile(0.8) - 0.841621) <= 1e-6);
  for (double p : {0.001, 0.12, 0.3, 0.45, 0.49999}) {
    CHECK(std::fabs(normal_quantile(p) + normal_quantile(1.0 - p)) <=
          1e-12 * (1.0 + std::fabs(normal_quantile(p))));
  }
}

TEST_CASE("normal_quantile rejects invalid probabilities") {
  for (double p : {0.0, 1.0, -0.25, 1.75}) {
    CHECK_THROWS_AS(normal_quantile(p), Error);
  }
}

TEST_CASE("regularized incomplete beta reference values") {
  struct Case { double a, b, x, expected; };
  const Case cases[] = {
      {0.5, 0.5, 0.3, 0.36901011956554536},
      {2, 3, 0.4, 0.5247999999999999},
      {10, 0.5, 0.159, 1.967475984080613e-09},
      {5, 5, 0.5, 0.5},
      {0.5, 10, 0.01, 0.3420718248432154},
      {50, 50, 0.6, 0.978069557869915},
      {1, 1, 0.7, 0.7},
  };
  for (const auto& c : cases) {
    CHECK(regularized_incomplete_beta(c.a, c.b, c.x) ==
          doctest::Approx(c.expected).epsilon(1e-10));
  }
  CHECK(regularized_incomplete_beta(3.0, 4.0, 0.0) == 0.0);
  CHECK(regularized_incomplete_beta(3.0, 4.0, 1.0) == 1.0);
  // complement identity
  for (double x : {0.1, 0.37, 0.62, 0.9}) {
    CHECK(regularized_incomplete_beta(2.5, 7.0, x) +
              regularized_incomplete_beta(7.0, 2.5, 1.0 - x) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("student t two-sided p: closed forms for df 1 and 2") {
  for (double t : {0.25, 0.5, 1.0, 2.0, 5.0, 20.0}) {
    const double cauchy = 1.0 - 2.0 / M_PI * std::atan(t);
    CHECK(student_t_two_sided_p(t, 1.0) == doctest::Approx(cauchy).epsilon(1e-10));
    const double df2 = 1.0 - t / std::sqrt(t * t + 2.0);
    CHECK(student_t_two_sided_p(t, 2.0) == doctest::Approx(df2).epsilon(1e-10));
    CHECK(student_t_two_sided_p(-t, 2.0) == student_t_two_sided_p(t, 2.0));
  }
  CHECK(student_t_two_sided_p(0.0, 7.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("student t two-sided p: reference values") {
  CHECK(student_t_two_sided_p(3.4641016151377544, 2) ==
        doctest::Approx(0.07417990022744854).epsilon(1e-9));
  CHECK(student_t_two_sided_p(2.0, 5) == doctest::Approx(0.10193947882985828).epsilon(1e-9));
  CHECK(student_t_two_sided_p(2.5, 10) == doctest::Approx(0.031446844236608776).epsilon(1e-9));
  CHECK(student_t_two_sided_p(1.96, 100) == doctest::Approx(0.052778901366229654).epsilon(1e-9));
  CHECK(student_t_two_sided_p(0.5, 3) == doctest::Approx(0.651447964848151).epsilon(1e-9));
  CHECK(student_t_two_sided_p(4.0, 21) == doctest::Approx(0.0006497151862427967).epsilon(1e-9));
  CHECK(student_t_two_sided_p(10.281, 20) ==
        doctest::Approx(1.981284267219133e-09).epsilon(1e-9));
  CHECK(student_t_two_sided_p(37.5977, 20) ==
        doctest::Approx(4.9525603502182916e-20).epsilon(1e-9));
}

TEST_CASE("two-sided p decreases strictly in |t|") {
  double prev = 1.1;
  for (double t = 0.0; t <= 12.0; t += 0.25) {
    const double p = student_t_two_sided_p(t, 9.0);
    CHECK(p < prev);
    prev = p;
  }
}

TEST_CASE("student t quantile") {
  CHECK(student_t_quantile(0.975, 2) == doctest::Approx(4.302652729696142).epsilon(1e-9));
  CHECK(student_t_quantile(0.975, 21) == doctest::Approx(2.079613844727662).epsilon(1e-9));
  CHECK(student_t_quantile(0.95, 10) == doctest::Approx(1.8124611228107335).epsilon(1e-9));
  CHECK(student_t_quantile(0.5, 5) == 0.0);
  CHECK(student_t_quantile(0.025, 2) == doctest::Approx(-4.302652729696142).epsilon(1e-9));
  for (double p : {0.6, 0.9, 0.99}) {
    const double q = student_t_quantile(p, 7.0);
    CHECK(student_t_cdf(q, 7.0) == doctest::Approx(p).epsilon(1e-10));
  }
}
