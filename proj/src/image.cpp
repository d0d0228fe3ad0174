#include "clotscan/image.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "clotscan/io.hpp"
#include "clotscan/numfmt.hpp"

namespace clotscan {

namespace {

// Header tokenizer shared by P5 and P2: skips whitespace and '#' comments.
struct PnmCursor {
  const std::uint8_t* p;
  const std::uint8_t* end;

  bool eof() const { return p >= end; }

  void skip_space_and_comments() {
    while (p < end) {
      if (std::isspace(*p)) {
        ++p;
      } else if (*p == '#') {
        while (p < end && *p != '\n') ++p;
      } else {
        break;
      }
    }
  }

  // Nonnegative decimal integer; -1 on parse failure.
  long next_int() {
    skip_space_and_comments();
    if (eof() || !std::isdigit(*p)) return -1;
    long v = 0;
    while (p < end && std::isdigit(*p)) {
      v = v * 10 + (*p - '0');
      if (v > 1'000'000'000L) return v;  // already out of any sane range
      ++p;
    }
    return v;
  }
};

}  // namespace

GrayImage decode_pgm(const std::uint8_t* bytes, std::size_t size) {
  if (size < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '2')) {
    raise(Errc::malformed_header, "not a P5/P2 PGM stream");
  }
  const bool binary = bytes[1] == '5';

  PnmCursor cur{bytes + 2, bytes + size};
  const long width = cur.next_int();
  const long height = cur.next_int();
  const long maxval = cur.next_int();
  if (width < 1 || height < 1 || width > 1'000'000L || height > 1'000'000L ||
      width * height > 268'435'456L) {
    raise(Errc::malformed_header, "bad dimensions");
  }
  if (maxval > 255) raise(Errc::unsupported_maxval, "maxval exceeds 255");
  if (maxval < 1) raise(Errc::malformed_header, "bad maxval");

  GrayImage img(static_cast<int>(width), static_cast<int>(height));
  const std::size_t n = img.pixel_count();

  if (binary) {
    // Exactly one whitespace byte separates the header from the raster.
    if (cur.eof() || !std::isspace(*cur.p)) {
      raise(Errc::malformed_header, "missing raster separator");
    }
    ++cur.p;
    if (static_cast<std::size_t>(cur.end - cur.p) < n) {
      raise(Errc::truncated_data, "raster shorter than width*height");
    }
    std::copy(cur.p, cur.p + n, img.data.begin());
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const long v = cur.next_int();
      if (v < 0) {
        if (cur.eof()) raise(Errc::truncated_data, "raster shorter than width*height");
        raise(Errc::malformed_header, "bad sample value");
      }
      if (v > 255) raise(Errc::malformed_header, "sample exceeds 255");
      img.data[i] = static_cast<std::uint8_t>(v);
    }
  }
  return img;
}

GrayImage decode_pgm(const std::vector<std::uint8_t>& bytes) {
  return decode_pgm(bytes.data(), bytes.size());
}

GrayImage decode_pgm(const std::string& text) {
  return decode_pgm(reinterpret_cast<const std::uint8_t*>(text.data()), text.size());
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& img) {
  const std::string header = "P5\n" + std::to_string(img.width) + " " +
                             std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.data.begin(), img.data.end());
  return out;
}

GrayImage decode_image(const std::string& path) {
  const auto bytes = read_binary_file(path);
  if (detail::looks_like_png(bytes.data(), bytes.size())) {
    return detail::decode_png(bytes.data(), bytes.size());
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '2')) {
    return decode_pgm(bytes);
  }
  raise(Errc::unsupported_format, "unrecognized image format: " + path);
}

GrayImage to_gray(const RgbImage& img) {
  GrayImage out(img.width, img.height);
  const std::size_t n = out.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    const double r = img.data[3 * i];
    const double g = img.data[3 * i + 1];
    const double b = img.data[3 * i + 2];
    const long v = std::lround(0.299 * r + 0.587 * g + 0.114 * b);
    out.data[i] = static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
  }
  return out;
}

GrayImage apply_roi(const GrayImage& img, const RoiMask& mask) {
  if (mask.kind == RoiMask::Kind::full_frame) return img;
  GrayImage out = img;
  for (int row = 0; row < img.height; ++row) {
    for (int col = 0; col < img.width; ++col) {
      if (!mask.contains(col, row)) out.at(col, row) = 255;
    }
  }
  return out;
}

std::int64_t roi_area(const RoiMask& mask, int width, int height) {
  if (mask.kind == RoiMask::Kind::full_frame) {
    return static_cast<std::int64_t>(width) * height;
  }
  // Clip the scan to the disk's bounding box.
  const int c0 = std::max(0, static_cast<int>(std::ceil(mask.center_x - mask.radius)));
  const int c1 = std::min(width - 1, static_cast<int>(std::floor(mask.center_x + mask.radius)));
  const int r0 = std::max(0, static_cast<int>(std::ceil(mask.center_y - mask.radius)));
  const int r1 = std::min(height - 1, static_cast<int>(std::floor(mask.center_y + mask.radius)));
  std::int64_t n = 0;
  for (int row = r0; row <= r1; ++row) {
    for (int col = c0; col <= c1; ++col) {
      if (mask.contains(col, row)) ++n;
    }
  }
  return n;
}

RoiMask parse_roi(const std::string& text) {
  if (text == "full") return RoiMask::full_frame();
  const std::string prefix = "disk:";
  if (text.rfind(prefix, 0) != 0) {
    raise(Errc::invalid_input, "roi must be 'full' or 'disk:cx,cy,r': " + text);
  }
  const char* p = text.data() + prefix.size();
  const char* end = text.data() + text.size();
  double vals[3];
  for (int i = 0; i < 3; ++i) {
    if (i > 0) {
      if (p >= end || *p != ',') raise(Errc::invalid_input, "roi expects disk:cx,cy,r: " + text);
      ++p;
    }
    auto [next, ec] = std::from_chars(p, end, vals[i]);
    if (ec != std::errc() || next == p || !std::isfinite(vals[i])) {
      raise(Errc::invalid_input, "bad roi number: " + text);
    }
    p = next;
  }
  if (p != end) raise(Errc::invalid_input, "trailing characters in roi: " + text);
  if (vals[2] <= 0.0) raise(Errc::invalid_input, "roi radius must be > 0: " + text);
  return RoiMask::disk(vals[0], vals[1], vals[2]);
}

std::string roi_to_string(const RoiMask& mask) {
  if (mask.kind == RoiMask::Kind::full_frame) return "full";
  return "disk:" + format_double(mask.center_x) + "," + format_double(mask.center_y) + "," +
         format_double(mask.radius);
}

GrayImage median_filter(const GrayImage& img, int radius) {
  if (radius < 1) {
    raise(Errc::invalid_input, "median radius must be >= 1");
  }
  GrayImage out(img.width, img.height);
  std::vector<std::uint8_t> window;
  window.reserve(static_cast<std::size_t>(2 * radius + 1) * (2 * radius + 1));
  for (int row = 0; row < img.height; ++row) {
    const int r0 = std::max(0, row - radius);
    const int r1 = std::min(img.height - 1, row + radius);
    for (int col = 0; col < img.width; ++col) {
      const int c0 = std::max(0, col - radius);
      const int c1 = std::min(img.width - 1, col + radius);
      window.clear();
      for (int r = r0; r <= r1; ++r) {
        for (int c = c0; c <= c1; ++c) window.push_back(img.at(c, r));
      }
      // Lower median for even-sized clipped windows.
      const std::size_t k = (window.size() - 1) / 2;
      std::nth_element(window.begin(), window.begin() + k, window.end());
      out.at(col, row) = window[k];
    }
  }
  return out;
}

}  // namespace clotscan
