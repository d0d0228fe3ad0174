#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "clotscan/image.hpp"

namespace clotscan {

struct Histogram {
  std::array<std::int64_t, 256> bins{};
  std::int64_t total = 0;
};

enum class Polarity { dark_foreground, light_foreground };

// Records how the binarization threshold is chosen. The comparison is
// inclusive: dark-foreground keeps pixels <= t, light-foreground pixels > t.
struct ThresholdPolicy {
  enum class Mode { fixed, otsu };

  Mode mode = Mode::otsu;
  int fixed_t = 128;  // only read in fixed mode
  Polarity polarity = Polarity::dark_foreground;

  static ThresholdPolicy fixed(int t, Polarity p = Polarity::dark_foreground) {
    return ThresholdPolicy{Mode::fixed, t, p};
  }
  static ThresholdPolicy otsu(Polarity p = Polarity::dark_foreground) {
    return ThresholdPolicy{Mode::otsu, 0, p};
  }
};

// Boolean grid; true (1) = foreground = clot pixel.
struct BinaryImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;  // 0 or 1, row-major

  BinaryImage() = default;
  BinaryImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), bits(static_cast<std::size_t>(w) * h, fill) {}

  bool at(int col, int row) const {
    return bits[static_cast<std::size_t>(row) * width + col] != 0;
  }
  void set(int col, int row, bool v) {
    bits[static_cast<std::size_t>(row) * width + col] = v ? 1 : 0;
  }
  std::int64_t foreground_count() const {
    std::int64_t n = 0;
    for (auto b : bits) n += b;
    return n;
  }
};

Histogram histogram(const GrayImage& img);

// Threshold maximizing the between-class variance of the split {<= t} vs
// {> t}, t in [0,254], ties broken toward the smallest t. Candidates are
// compared exactly: with class counts n0,n1 and intensity sums s0,s1 the
// variance is proportional to (s0*n1 - s1*n0)^2 / (n0*n1), which is ranked as
// a rational number in 128-bit integer arithmetic (long double above 2^26
// total pixels). Throws DegenerateHistogram when fewer than two bins are
// populated.
int otsu_threshold(const Histogram& hist);

// Between-class variance of the split at t, as a double. Exposed for
// reporting and diagnostics; the argmax above does not rank with this value.
double between_class_variance(const Histogram& hist, int t);

BinaryImage binarize(const GrayImage& img, const ThresholdPolicy& policy);

}  // namespace clotscan
