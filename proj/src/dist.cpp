#include "pse/dist.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pse/errors.hpp"

namespace pse {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double normal_pdf(double x) noexcept { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

// Abramowitz-Stegun 26.2.23 rational approximation for the lower-tail
// quantile, |error| < 4.5e-4; Newton polishes it to machine precision.
double quantile_initial_guess(double p) noexcept {
  const double t = std::sqrt(-2.0 * std::log(p));
  const double num = 2.515517 + t * (0.802853 + t * 0.010328);
  const double den = 1.0 + t * (1.432788 + t * (0.189269 + t * 0.001308));
  return -(t - num / den);
}

// p <= 0.5; solves Phi(z) = p with Newton on the lower tail, where
// erfc-based evaluation of Phi is relatively accurate.
double lower_quantile(double p) noexcept {
  double z = quantile_initial_guess(p);
  for (int i = 0; i < 6; ++i) {
    const double pdf = normal_pdf(z);
    if (pdf < std::numeric_limits<double>::min()) break;  // |z| > ~38
    const double step = (normal_cdf(z) - p) / pdf;
    z -= step;
    if (std::fabs(step) <= 1e-14 * (1.0 + std::fabs(z))) break;
  }
  return z;
}

// Continued fraction for the incomplete beta (Lentz), per the classic
// even/odd coefficient scheme. Valid for x < (a+1)/(a+b+2).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double normal_cdf(double x) noexcept {
  // erfc is evaluated on the side where it is relatively accurate.
  return 0.5 * std::erfc(-x * kInvSqrt2);
}

double normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0))
    fail(ErrorCode::invalid_probability, "normal_quantile requires p in (0,1), got " +
                                             std::to_string(p));
  if (p == 0.5) return 0.0;
  // Reflect the upper tail so Newton always runs where erfc is accurate;
  // this also gives odd symmetry about p = 0.5.
  return p < 0.5 ? lower_quantile(p) : -lower_quantile(1.0 - p);
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0))
    fail(ErrorCode::invalid_config, "incomplete beta requires a, b > 0");
  if (!(x >= 0.0) || !(x <= 1.0))
    fail(ErrorCode::invalid_config, "incomplete beta requires x in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betacf(a, b, x) / a;
  }
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) fail(ErrorCode::invalid_config, "t distribution requires df > 0");
  if (std::isinf(t)) return 0.0;
  const double t2 = t * t;
  if (std::isinf(t2)) return 0.0;
  return regularized_incomplete_beta(0.5 * df, 0.5, df / (df + t2));
}

double student_t_cdf(double t, double df) {
  const double half_p = 0.5 * student_t_two_sided_p(t, df);
  return t >= 0.0 ? 1.0 - half_p : half_p;
}

double student_t_quantile(double p, double df) {
  if (!(p > 0.0) || !(p < 1.0))
    fail(ErrorCode::invalid_probability, "student_t_quantile requires p in (0,1)");
  if (!(df > 0.0)) fail(ErrorCode::invalid_config, "t distribution requires df > 0");
  if (p == 0.5) return 0.0;
  if (p < 0.5) return -student_t_quantile(1.0 - p, df);

  // Bracket the root, then bisect; the CDF is monotone and cheap.
  double lo = 0.0, hi = 2.0;
  while (student_t_cdf(hi, df) < p && hi < 1e12) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (student_t_cdf(mid, df) < p ? lo : hi) = mid;
    if (hi - lo <= 1e-13 * (1.0 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace pse
