#include "clotscan/binarize.hpp"

#include <cstdlib>

namespace clotscan {

namespace {

// Ranks between-class variance candidates exactly. With class counts n0, n1
// and intensity sums s0, s1, sigma^2_B is proportional to
// (s0*n1 - s1*n0)^2 / (n0*n1); the common total^2 factor cancels. Quotient
// then remainder cross-product keeps every intermediate inside 128 bits for
// totals up to 2^26 pixels.
struct VarianceKey {
  unsigned __int128 sq = 0;  // (s0*n1 - s1*n0)^2
  std::int64_t denom = 1;    // n0*n1 > 0
};

VarianceKey make_key(std::int64_t n0, std::int64_t s0, std::int64_t n1, std::int64_t s1) {
  const __int128 a = static_cast<__int128>(s0) * n1 - static_cast<__int128>(s1) * n0;
  const unsigned __int128 mag = a < 0 ? static_cast<unsigned __int128>(-a)
                                      : static_cast<unsigned __int128>(a);
  return VarianceKey{mag * mag, n0 * n1};
}

// <0, 0, >0 as sq1/d1 compares to sq2/d2.
int cmp_key(const VarianceKey& k1, const VarianceKey& k2) {
  const unsigned __int128 q1 = k1.sq / static_cast<unsigned __int128>(k1.denom);
  const unsigned __int128 q2 = k2.sq / static_cast<unsigned __int128>(k2.denom);
  if (q1 != q2) return q1 < q2 ? -1 : 1;
  const unsigned __int128 r1 = k1.sq % static_cast<unsigned __int128>(k1.denom);
  const unsigned __int128 r2 = k2.sq % static_cast<unsigned __int128>(k2.denom);
  const unsigned __int128 lhs = r1 * static_cast<unsigned __int128>(k2.denom);
  const unsigned __int128 rhs = r2 * static_cast<unsigned __int128>(k1.denom);
  if (lhs != rhs) return lhs < rhs ? -1 : 1;
  return 0;
}

}  // namespace

Histogram histogram(const GrayImage& img) {
  Histogram h;
  for (auto v : img.data) ++h.bins[v];
  h.total = static_cast<std::int64_t>(img.pixel_count());
  return h;
}

double between_class_variance(const Histogram& hist, int t) {
  std::int64_t n0 = 0, s0 = 0, n = 0, s = 0;
  for (int i = 0; i < 256; ++i) {
    n += hist.bins[i];
    s += static_cast<std::int64_t>(i) * hist.bins[i];
    if (i <= t) {
      n0 += hist.bins[i];
      s0 += static_cast<std::int64_t>(i) * hist.bins[i];
    }
  }
  const std::int64_t n1 = n - n0;
  if (n0 == 0 || n1 == 0) return 0.0;
  const double w0 = static_cast<double>(n0) / n;
  const double w1 = static_cast<double>(n1) / n;
  const double mu0 = static_cast<double>(s0) / n0;
  const double mu1 = static_cast<double>(s - s0) / n1;
  return w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
}

int otsu_threshold(const Histogram& hist) {
  int populated = 0;
  std::int64_t total = 0, total_sum = 0;
  for (int i = 0; i < 256; ++i) {
    if (hist.bins[i] > 0) ++populated;
    total += hist.bins[i];
    total_sum += static_cast<std::int64_t>(i) * hist.bins[i];
  }
  if (total < 1 || populated < 2) {
    raise(Errc::degenerate_histogram, "threshold needs at least two populated bins");
  }

  const bool exact = total <= (std::int64_t(1) << 26);
  int best_t = -1;
  VarianceKey best_key;
  long double best_ld = -1.0L;

  std::int64_t n0 = 0, s0 = 0;
  for (int t = 0; t <= 254; ++t) {
    n0 += hist.bins[t];
    s0 += static_cast<std::int64_t>(t) * hist.bins[t];
    const std::int64_t n1 = total - n0;
    if (n0 == 0 || n1 == 0) continue;
    const std::int64_t s1 = total_sum - s0;
    if (exact) {
      const VarianceKey key = make_key(n0, s0, n1, s1);
      if (best_t < 0 || cmp_key(key, best_key) > 0) {
        best_t = t;
        best_key = key;
      }
    } else {
      const long double a = static_cast<long double>(s0) * n1 - static_cast<long double>(s1) * n0;
      const long double v = a * a / (static_cast<long double>(n0) * n1);
      if (best_t < 0 || v > best_ld) {
        best_t = t;
        best_ld = v;
      }
    }
  }
  // populated >= 2 guarantees a split with both classes nonempty.
  return best_t;
}

BinaryImage binarize(const GrayImage& img, const ThresholdPolicy& policy) {
  int t = policy.fixed_t;
  if (policy.mode == ThresholdPolicy::Mode::otsu) {
    t = otsu_threshold(histogram(img));
  } else if (t < 0 || t > 255) {
    raise(Errc::invalid_input, "fixed threshold must be in [0,255]");
  }

  BinaryImage out(img.width, img.height);
  const bool dark = policy.polarity == Polarity::dark_foreground;
  const std::size_t n = img.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    const bool fg = dark ? img.data[i] <= t : img.data[i] > t;
    out.bits[i] = fg ? 1 : 0;
  }
  return out;
}

}  // namespace clotscan
