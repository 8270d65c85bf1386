#pragma once

#include <cstddef>
#include <span>

namespace clarank {

/// Regularized incomplete beta I_x(a, b), evaluated by Lentz's continued
/// fraction. a, b > 0 and 0 <= x <= 1.
double regularized_incomplete_beta(double a, double b, double x);

/// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_sided_p(double t, double df);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  std::size_t n = 0;
};

/// Two-sided paired t-test on a[i] - b[i] with n - 1 degrees of freedom.
/// Throws Error(kInsufficientData) for fewer than two pairs and
/// Error(kDegenerateVariance) when every difference is the same non-zero
/// value. All-zero differences give t = 0, p = 1.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

struct Correlation {
  double r = 0.0;
  double p = 1.0;
  std::size_t n = 0;
};

/// Pearson's r with a two-sided p-value from t = r * sqrt((n-2)/(1-r^2)).
/// Throws Error(kInsufficientData) for fewer than three points or unequal
/// lengths and Error(kUndefinedCorrelation) for a constant vector.
Correlation pearson(std::span<const double> x, std::span<const double> y);

}  // namespace clarank
