#include "clotscan/stats.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "clotscan/error.hpp"

namespace clotscan {

namespace {

// Continued fraction for the incomplete beta, modified Lentz.
double betacf(double a, double b, double x) {
  constexpr double tol = 1e-10;
  constexpr int max_iter = 300;
  constexpr double tiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;

  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;

  for (int m = 1; m <= max_iter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;

    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < tol) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) raise(Errc::invalid_input, "beta parameters must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;

  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);

  // Use the symmetry relation to keep the continued fraction convergent.
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betacf(a, b, x) / a;
  }
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_tailed_p(double t, std::int64_t df) {
  if (df < 1) raise(Errc::invalid_input, "degrees of freedom must be >= 1");
  if (std::isinf(t)) return 0.0;
  if (std::isnan(t)) raise(Errc::invalid_input, "t statistic is NaN");
  const double nu = static_cast<double>(df);
  const double x = nu / (nu + t * t);
  double p = regularized_incomplete_beta(nu / 2.0, 0.5, x);
  if (p < 0.0) p = 0.0;
  if (p > 1.0) p = 1.0;
  return p;
}

double pearson_p_value(double r, std::int64_t n) {
  if (n < 3) raise(Errc::too_few_samples, "need at least 3 paired samples");
  const double abs_r = std::fabs(r);
  if (abs_r >= 1.0 - 1e-12) return 0.0;
  const double df = static_cast<double>(n - 2);
  const double t = r * std::sqrt(df / (1.0 - r * r));
  return student_t_two_tailed_p(t, n - 2);
}

CorrelationResult pearson(const PairedSeries& series) {
  if (series.xs.size() != series.ys.size())
    raise(Errc::invalid_input, "paired series lengths differ");
  const std::int64_t n = static_cast<std::int64_t>(series.xs.size());
  if (n < 3) raise(Errc::too_few_samples, "need at least 3 paired samples");

  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    mean_x += series.xs[i];
    mean_y += series.ys[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const double dx = series.xs[i] - mean_x;
    const double dy = series.ys[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) raise(Errc::zero_variance, "a series is constant");

  CorrelationResult result;
  result.n = n;
  double r = sxy / std::sqrt(sxx * syy);
  if (r > 1.0) r = 1.0;
  if (r < -1.0) r = -1.0;
  result.r = r;

  const double df = static_cast<double>(n - 2);
  if (std::fabs(r) >= 1.0 - 1e-12) {
    result.t_stat = std::copysign(std::numeric_limits<double>::infinity(), r);
    result.p_value = 0.0;
  } else {
    result.t_stat = r * std::sqrt(df / (1.0 - r * r));
    result.p_value = student_t_two_tailed_p(result.t_stat, n - 2);
  }
  return result;
}

std::pair<double, double> linear_fit(const PairedSeries& series) {
  if (series.xs.size() != series.ys.size())
    raise(Errc::invalid_input, "paired series lengths differ");
  const std::int64_t n = static_cast<std::int64_t>(series.xs.size());
  if (n < 2) raise(Errc::too_few_samples, "need at least 2 paired samples");

  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    mean_x += series.xs[i];
    mean_y += series.ys[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  double sxx = 0.0;
  double sxy = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const double dx = series.xs[i] - mean_x;
    sxx += dx * dx;
    sxy += dx * (series.ys[i] - mean_y);
  }
  if (sxx == 0.0) raise(Errc::zero_variance, "x series is constant");

  const double slope = sxy / sxx;
  return {slope, mean_y - slope * mean_x};
}

}  // namespace clotscan
