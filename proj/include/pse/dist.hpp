#pragma once

// Distribution functions underpinning intervals and tests.

namespace pse {

// Standard normal CDF; absolute error <= 1e-12 over the real line,
// normal_cdf(0) == 0.5 exactly.
double normal_cdf(double x) noexcept;

// Inverse of normal_cdf. Round-trips to |Phi(z) - p| <= 1e-10 for
// p in (1e-8, 1-1e-8) and stays accurate far into the tails.
// Throws Error(invalid_probability) unless 0 < p < 1.
double normal_quantile(double p);

// Regularized incomplete beta I_x(a, b) by continued fraction; abs error
// target 1e-10. Requires a, b > 0 and x in [0, 1].
double regularized_incomplete_beta(double a, double b, double x);

// Two-sided p-value of a Student-t statistic: I_{df/(df+t^2)}(df/2, 1/2).
double student_t_two_sided_p(double t, double df);

double student_t_cdf(double t, double df);

// Quantile of the Student-t distribution (p in (0,1), df > 0); used by the
// opt-in t-interval. Solved by bracketed Newton on the CDF.
double student_t_quantile(double p, double df);

}  // namespace pse
