#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include <zlib.h>

#include "doctest.h"

#include "clotscan/image.hpp"
#include "clotscan/io.hpp"

using namespace clotscan;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& header,
                                   const std::vector<std::uint8_t>& raster) {
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), raster.begin(), raster.end());
  return out;
}

void push_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void push_chunk(std::vector<std::uint8_t>& out, const char type[5],
                const std::vector<std::uint8_t>& data) {
  push_be32(out, static_cast<std::uint32_t>(data.size()));
  std::vector<std::uint8_t> body(type, type + 4);
  body.insert(body.end(), data.begin(), data.end());
  out.insert(out.end(), body.begin(), body.end());
  push_be32(out, static_cast<std::uint32_t>(crc32(0, body.data(),
                                                  static_cast<uInt>(body.size()))));
}

// Builds a PNG from already-filtered scanlines (each row: filter byte + data).
std::vector<std::uint8_t> make_png(int width, int height, int color_type,
                                   const std::vector<std::uint8_t>& filtered) {
  std::vector<std::uint8_t> png = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  std::vector<std::uint8_t> ihdr;
  push_be32(ihdr, static_cast<std::uint32_t>(width));
  push_be32(ihdr, static_cast<std::uint32_t>(height));
  ihdr.push_back(8);                                    // bit depth
  ihdr.push_back(static_cast<std::uint8_t>(color_type));  // 0 gray, 2 rgb
  ihdr.push_back(0);
  ihdr.push_back(0);
  ihdr.push_back(0);
  push_chunk(png, "IHDR", ihdr);

  uLongf bound = compressBound(static_cast<uLong>(filtered.size()));
  std::vector<std::uint8_t> zbuf(bound);
  REQUIRE(compress2(zbuf.data(), &bound, filtered.data(),
                    static_cast<uLong>(filtered.size()), 9) == Z_OK);
  zbuf.resize(bound);
  push_chunk(png, "IDAT", zbuf);
  push_chunk(png, "IEND", {});
  return png;
}

// Forward PNG filtering of raw rows (independent check of the unfilter path).
std::vector<std::uint8_t> filter_rows(const std::vector<std::uint8_t>& raw, int width,
                                      int height, int channels,
                                      const std::vector<int>& filter_per_row) {
  const int stride = width * channels;
  std::vector<std::uint8_t> out;
  auto paeth = [](int a, int b, int c) {
    const int p = a + b - c;
    const int pa = std::abs(p - a);
    const int pb = std::abs(p - b);
    const int pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
  };
  for (int row = 0; row < height; ++row) {
    const int f = filter_per_row[row];
    out.push_back(static_cast<std::uint8_t>(f));
    for (int i = 0; i < stride; ++i) {
      const int x = raw[row * stride + i];
      const int a = i >= channels ? raw[row * stride + i - channels] : 0;
      const int b = row > 0 ? raw[(row - 1) * stride + i] : 0;
      const int c = (row > 0 && i >= channels) ? raw[(row - 1) * stride + i - channels] : 0;
      int v = x;
      switch (f) {
        case 0: v = x; break;
        case 1: v = x - a; break;
        case 2: v = x - b; break;
        case 3: v = x - (a + b) / 2; break;
        case 4: v = x - paeth(a, b, c); break;
      }
      out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    }
  }
  return out;
}

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("decode_pgm reads P5") {
  const auto img = decode_pgm(bytes_of("P5\n2 2\n255\n", {0, 255, 128, 64}));
  CHECK(img.width == 2);
  CHECK(img.height == 2);
  CHECK(img.data == std::vector<std::uint8_t>{0, 255, 128, 64});
}

TEST_CASE("decode_pgm reads P2") {
  const auto img = decode_pgm(std::string("P2\n1 1\n255\n17\n"));
  CHECK(img.width == 1);
  CHECK(img.height == 1);
  CHECK(img.data == std::vector<std::uint8_t>{17});
}

TEST_CASE("decode_pgm allows header comments") {
  const auto img = decode_pgm(bytes_of("P5\n# shot 3\n2 1 # dims\n255\n", {9, 10}));
  CHECK(img.width == 2);
  CHECK(img.data == std::vector<std::uint8_t>{9, 10});
}

TEST_CASE("decode_pgm truncation") {
  CHECK_THROWS_AS(decode_pgm(bytes_of("P5\n2 2\n255\n", {0, 1, 2})), Error);
  try {
    decode_pgm(bytes_of("P5\n2 2\n255\n", {0, 1, 2}));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::truncated_data);
  }
  try {
    decode_pgm(std::string("P2\n2 2\n255\n1 2 3"));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::truncated_data);
  }
}

TEST_CASE("decode_pgm header validation") {
  try {
    decode_pgm(bytes_of("P5\n1 1\n65535\n", {0, 0}));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unsupported_maxval);
  }
  try {
    decode_pgm(bytes_of("P5\n1 1\n0\n", {0}));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::malformed_header);
  }
  try {
    decode_pgm(bytes_of("P6\n1 1\n255\n", {0, 0, 0}));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::malformed_header);
  }
  try {
    decode_pgm(bytes_of("P5\n0 4\n255\n", {}));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::malformed_header);
  }
  try {
    decode_pgm(std::string("P2\n1 1\n255\n300"));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::malformed_header);
  }
}

TEST_CASE("encode_pgm round-trips") {
  GrayImage img(7, 5);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    img.data[i] = static_cast<std::uint8_t>((i * 37 + 11) % 256);
  }
  const auto bytes = encode_pgm(img);
  const std::string header(bytes.begin(), bytes.begin() + 9);
  CHECK(header == "P5\n7 5\n25");  // "P5\n7 5\n255\n" prefix
  const auto back = decode_pgm(bytes);
  CHECK(back.width == img.width);
  CHECK(back.height == img.height);
  CHECK(back.data == img.data);
}

TEST_CASE("decode_image dispatches and reports IoError") {
  const auto path = temp_file("clot_img_p5.pgm");
  write_binary_file(path.string(), bytes_of("P5\n2 2\n255\n", {0, 255, 128, 64}));
  const auto img = decode_image(path.string());
  CHECK(img.data == std::vector<std::uint8_t>{0, 255, 128, 64});
  std::filesystem::remove(path);

  try {
    decode_image("/nonexistent/clot.pgm");
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::io_error);
  }

  const auto bad = temp_file("clot_img_bad.bin");
  write_binary_file(bad.string(), std::vector<std::uint8_t>{'G', 'I', 'F', '8'});
  try {
    decode_image(bad.string());
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unsupported_format);
  }
  std::filesystem::remove(bad);
}

TEST_CASE("to_gray fixed points and rounding") {
  RgbImage rgb;
  rgb.width = 3;
  rgb.height = 1;
  rgb.data = {255, 255, 255, 0, 0, 0, 100, 150, 200};
  const auto gray = to_gray(rgb);
  CHECK(gray.data[0] == 255);
  CHECK(gray.data[1] == 0);
  // 0.299*100 + 0.587*150 + 0.114*200 = 140.75, rounds half away from zero.
  CHECK(gray.data[2] == 141);
}

TEST_CASE("to_gray fixes v,v,v = v") {
  RgbImage rgb;
  rgb.width = 256;
  rgb.height = 1;
  for (int v = 0; v < 256; ++v) {
    rgb.data.push_back(static_cast<std::uint8_t>(v));
    rgb.data.push_back(static_cast<std::uint8_t>(v));
    rgb.data.push_back(static_cast<std::uint8_t>(v));
  }
  const auto gray = to_gray(rgb);
  for (int v = 0; v < 256; ++v) CHECK(gray.data[v] == v);
}

TEST_CASE("png gray decode, every filter type") {
  // 4x5 gradient-ish image; rows filtered none/sub/up/average/paeth.
  const int w = 4, h = 5;
  std::vector<std::uint8_t> raw(w * h);
  for (int i = 0; i < w * h; ++i) raw[i] = static_cast<std::uint8_t>((i * 29 + 3) % 256);
  const auto filtered = filter_rows(raw, w, h, 1, {0, 1, 2, 3, 4});
  const auto png = make_png(w, h, 0, filtered);
  const auto path = temp_file("clot_img_gray.png");
  write_binary_file(path.string(), png);
  const auto img = decode_image(path.string());
  CHECK(img.width == w);
  CHECK(img.height == h);
  CHECK(img.data == raw);
  std::filesystem::remove(path);
}

TEST_CASE("png rgb decode routes through luminance") {
  const auto filtered = filter_rows({100, 150, 200}, 1, 1, 3, {0});
  const auto png = make_png(1, 1, 2, filtered);
  const auto path = temp_file("clot_img_rgb.png");
  write_binary_file(path.string(), png);
  const auto img = decode_image(path.string());
  CHECK(img.width == 1);
  CHECK(img.height == 1);
  CHECK(img.data[0] == 141);  // direct evaluation of the Rec.601 formula
  std::filesystem::remove(path);
}

TEST_CASE("png rgb multi-row with sub and paeth filters") {
  const int w = 3, h = 2;
  std::vector<std::uint8_t> raw = {10, 20, 30, 40, 50, 60, 70, 80, 90,
                                   15, 25, 35, 45, 55, 65, 75, 85, 95};
  const auto filtered = filter_rows(raw, w, h, 3, {1, 4});
  const auto png = make_png(w, h, 2, filtered);
  const auto path = temp_file("clot_img_rgb2.png");
  write_binary_file(path.string(), png);
  const auto img = decode_image(path.string());
  RgbImage rgb;
  rgb.width = w;
  rgb.height = h;
  rgb.data = raw;
  CHECK(img.data == to_gray(rgb).data);
  std::filesystem::remove(path);
}

TEST_CASE("png truncation and unsupported layouts") {
  const auto filtered = filter_rows({7}, 1, 1, 1, {0});
  auto png = make_png(1, 1, 0, filtered);
  auto cut = png;
  cut.resize(cut.size() - 16);
  const auto path = temp_file("clot_img_cut.png");
  write_binary_file(path.string(), cut);
  CHECK_THROWS_AS(decode_image(path.string()), Error);
  std::filesystem::remove(path);
}

TEST_CASE("apply_roi") {
  GrayImage img(5, 5, 10);
  SUBCASE("full frame is identity") {
    const auto out = apply_roi(img, RoiMask::full_frame());
    CHECK(out.data == img.data);
  }
  SUBCASE("r=0.5 keeps only the center pixel") {
    const auto out = apply_roi(img, RoiMask::disk(2, 2, 0.5));
    int kept = 0;
    for (int row = 0; row < 5; ++row) {
      for (int col = 0; col < 5; ++col) {
        if (out.at(col, row) == 10) {
          ++kept;
          CHECK(col == 2);
          CHECK(row == 2);
        } else {
          CHECK(out.at(col, row) == 255);
        }
      }
    }
    CHECK(kept == 1);
  }
  SUBCASE("r=1.5 keeps the 9 offsets with dx^2+dy^2 <= 2.25") {
    const auto out = apply_roi(img, RoiMask::disk(2, 2, 1.5));
    int kept = 0;
    for (int row = 0; row < 5; ++row) {
      for (int col = 0; col < 5; ++col) {
        const int dx = col - 2, dy = row - 2;
        const bool inside = dx * dx + dy * dy <= 2.25;
        CHECK(out.at(col, row) == (inside ? 10 : 255));
        kept += inside;
      }
    }
    CHECK(kept == 9);
  }
  SUBCASE("idempotent") {
    const auto mask = RoiMask::disk(1.2, 3.4, 2.0);
    const auto once = apply_roi(img, mask);
    CHECK(apply_roi(once, mask).data == once.data);
  }
}

TEST_CASE("roi_area") {
  CHECK(roi_area(RoiMask::full_frame(), 4, 3) == 12);
  CHECK(roi_area(RoiMask::disk(2, 2, 0.5), 5, 5) == 1);
  CHECK(roi_area(RoiMask::disk(2, 2, 1.5), 5, 5) == 9);
  // lattice count for r=5 sits within 10% of the analytic disk area
  const auto n = roi_area(RoiMask::disk(10, 10, 5), 21, 21);
  CHECK(n == 81);
  CHECK(std::fabs(static_cast<double>(n) - 25 * M_PI) / (25 * M_PI) < 0.10);
  // clipping at the image border
  CHECK(roi_area(RoiMask::disk(0, 0, 1.5), 5, 5) == 4);
  // monotone in radius
  std::int64_t prev = 0;
  for (double r = 0.5; r < 8.0; r += 0.5) {
    const auto area = roi_area(RoiMask::disk(8, 8, r), 17, 17);
    CHECK(area >= prev);
    prev = area;
  }
}

TEST_CASE("median_filter") {
  SUBCASE("constant image unchanged") {
    GrayImage img(4, 4, 42);
    CHECK(median_filter(img, 1).data == img.data);
    CHECK(median_filter(img, 3).data == img.data);
  }
  SUBCASE("isolated bright pixel removed") {
    GrayImage img(3, 3, 0);
    img.at(1, 1) = 255;
    const auto out = median_filter(img, 1);
    for (auto v : out.data) CHECK(v == 0);
  }
  SUBCASE("1x3 spike with clipped windows") {
    GrayImage img(3, 1, 0);
    img.at(1, 0) = 255;
    const auto out = median_filter(img, 1);
    CHECK(out.data == std::vector<std::uint8_t>{0, 0, 0});
  }
  SUBCASE("radius below 1 rejected") {
    GrayImage img(3, 3, 0);
    try {
      median_filter(img, 0);
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::invalid_input);
    }
  }
  SUBCASE("output values come from the input multiset") {
    GrayImage img(9, 7);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
      img.data[i] = static_cast<std::uint8_t>((i * 53 + 19) % 251);
    }
    std::set<std::uint8_t> values(img.data.begin(), img.data.end());
    for (auto v : median_filter(img, 2).data) CHECK(values.count(v) == 1);
  }
}

TEST_CASE("roi parsing round-trip") {
  const auto full = parse_roi("full");
  CHECK(full.kind == RoiMask::Kind::full_frame);
  const auto disk = parse_roi("disk:60,60.5,55.25");
  CHECK(disk.kind == RoiMask::Kind::disk);
  CHECK(disk.center_x == 60.0);
  CHECK(disk.center_y == 60.5);
  CHECK(disk.radius == 55.25);
  CHECK(roi_to_string(disk) == "disk:60,60.5,55.25");
  CHECK(roi_to_string(full) == "full");
  for (const char* bad : {"disc:1,2,3", "disk:1,2", "disk:1,2,0", "disk:1,2,-3", "disk:1,2,3x",
                          "", "disk:a,b,c"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_roi(bad), Error);
  }
}
