#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace clotscan {

// Paired observations, e.g. x = flow duration in minutes, y = cumulative clot
// area in pixels.
struct PairedSeries {
  std::vector<double> xs;
  std::vector<double> ys;
};

struct CorrelationResult {
  double r = 0.0;
  std::int64_t n = 0;
  double t_stat = 0.0;
  double p_value = 1.0;
};

// Pearson product-moment correlation with a two-tailed p-value from Student's
// t with n-2 degrees of freedom. Moments are computed two-pass (means first).
// |r| = 1 within 1e-12 yields p = 0 and an infinite t statistic. Throws
// TooFewSamples (n < 3) and ZeroVariance (either series constant).
CorrelationResult pearson(const PairedSeries& series);

// Least-squares line: slope = Sxy/Sxx, intercept = mean(y) - slope * mean(x).
// Throws TooFewSamples (n < 2) and ZeroVariance (xs constant).
std::pair<double, double> linear_fit(const PairedSeries& series);

// Regularized incomplete beta I_x(a, b), evaluated with the continued
// fraction by Lentz's method (1e-10 convergence tolerance, max 300
// iterations).
double regularized_incomplete_beta(double a, double b, double x);

// Two-tailed tail mass of Student's t with df degrees of freedom:
// p = I_{df/(df+t^2)}(df/2, 1/2).
double student_t_two_tailed_p(double t, std::int64_t df);

// p-value the pearson path assigns to a correlation of r over n samples.
double pearson_p_value(double r, std::int64_t n);

}  // namespace clotscan
