#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "clotscan/error.hpp"

namespace clotscan {

// 8-bit single-channel image, row-major, origin top-left. Pixel centers sit
// at integer coordinates (col, row); x = col grows rightward, y = row downward.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // data.size() == width * height

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  std::uint8_t at(int col, int row) const {
    return data[static_cast<std::size_t>(row) * width + col];
  }
  std::uint8_t& at(int col, int row) {
    return data[static_cast<std::size_t>(row) * width + col];
  }
  std::size_t pixel_count() const { return data.size(); }
  bool in_bounds(int col, int row) const {
    return col >= 0 && col < width && row >= 0 && row < height;
  }
};

// Interleaved r,g,b triples, one per pixel.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // data.size() == 3 * width * height
};

// Restricts analysis to the filter face. A pixel (col, row) is inside a disk
// iff (col - cx)^2 + (row - cy)^2 <= r^2; full-frame masks contain everything.
struct RoiMask {
  enum class Kind { full_frame, disk };

  Kind kind = Kind::full_frame;
  double center_x = 0.0;
  double center_y = 0.0;
  double radius = 0.0;

  static RoiMask full_frame() { return RoiMask{}; }
  static RoiMask disk(double cx, double cy, double r) {
    RoiMask m;
    m.kind = Kind::disk;
    m.center_x = cx;
    m.center_y = cy;
    m.radius = r;
    return m;
  }

  bool contains(int col, int row) const {
    if (kind == Kind::full_frame) return true;
    const double dx = col - center_x;
    const double dy = row - center_y;
    return dx * dx + dy * dy <= radius * radius;
  }
};

// ROI spelling shared by the CLI and scene files: "full" or "disk:cx,cy,r"
// with r > 0. parse_roi throws InvalidInput on anything else.
RoiMask parse_roi(const std::string& text);
std::string roi_to_string(const RoiMask& mask);

// PGM ingestion/emission. Reads binary "P5" and ASCII "P2", maxval <= 255,
// '#' comments permitted in the header. Writes P5 with maxval 255.
GrayImage decode_pgm(const std::uint8_t* bytes, std::size_t size);
GrayImage decode_pgm(const std::vector<std::uint8_t>& bytes);
GrayImage decode_pgm(const std::string& text);
std::vector<std::uint8_t> encode_pgm(const GrayImage& img);

// Reads a PGM or PNG (8-bit gray/RGB, non-interlaced) file; RGB content is
// routed through to_gray.
GrayImage decode_image(const std::string& path);

// Rec.601 luminance: gray = round(0.299 R + 0.587 G + 0.114 B), rounding half
// away from zero, clamped to [0,255].
GrayImage to_gray(const RgbImage& img);

// Pixels outside the mask become 255 (the white filter background) so that
// dark-foreground binarization excludes them.
GrayImage apply_roi(const GrayImage& img, const RoiMask& mask);

// Number of pixel centers inside both the mask and the image bounds.
std::int64_t roi_area(const RoiMask& mask, int width, int height);

// Median over the (2r+1)^2 window clipped to the image bounds; even-sized
// clipped windows take the lower median.
GrayImage median_filter(const GrayImage& img, int radius);

namespace detail {
bool looks_like_png(const std::uint8_t* bytes, std::size_t size);
GrayImage decode_png(const std::uint8_t* bytes, std::size_t size);
}  // namespace detail

}  // namespace clotscan
