// Minimal PNG reader covering the ingestion contract: 8-bit grayscale or RGB,
// non-interlaced. DEFLATE decompression is zlib's; chunk walking and scanline
// unfiltering are local.

#include <cstring>
#include <vector>

#include <zlib.h>

#include "clotscan/image.hpp"

namespace clotscan::detail {

namespace {

constexpr std::uint8_t kSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

std::uint32_t read_u32(const std::uint8_t* p) {
  return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
         (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

int paeth(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a);
  const int pb = std::abs(p - b);
  const int pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

}  // namespace

bool looks_like_png(const std::uint8_t* bytes, std::size_t size) {
  return size >= 8 && std::memcmp(bytes, kSignature, 8) == 0;
}

GrayImage decode_png(const std::uint8_t* bytes, std::size_t size) {
  if (!looks_like_png(bytes, size)) raise(Errc::unsupported_format, "not a PNG stream");

  std::size_t pos = 8;
  bool seen_ihdr = false;
  std::uint32_t width = 0, height = 0;
  int channels = 0;
  std::vector<std::uint8_t> idat;

  while (pos + 8 <= size) {
    const std::uint32_t len = read_u32(bytes + pos);
    const char* type = reinterpret_cast<const char*>(bytes + pos + 4);
    if (pos + 12 + static_cast<std::size_t>(len) > size) {
      raise(Errc::truncated_data, "PNG chunk extends past end of file");
    }
    const std::uint8_t* data = bytes + pos + 8;

    if (std::memcmp(type, "IHDR", 4) == 0) {
      if (len != 13) raise(Errc::malformed_header, "bad IHDR length");
      width = read_u32(data);
      height = read_u32(data + 4);
      const int bit_depth = data[8];
      const int color_type = data[9];
      const int compression = data[10];
      const int filter = data[11];
      const int interlace = data[12];
      if (width == 0 || height == 0 || width > 1'000'000 || height > 1'000'000) {
        raise(Errc::malformed_header, "bad PNG dimensions");
      }
      if (compression != 0 || filter != 0) raise(Errc::malformed_header, "bad IHDR methods");
      if (bit_depth != 8 || (color_type != 0 && color_type != 2) || interlace != 0) {
        raise(Errc::unsupported_format, "only 8-bit gray/RGB non-interlaced PNG supported");
      }
      channels = color_type == 2 ? 3 : 1;
      seen_ihdr = true;
    } else if (std::memcmp(type, "IDAT", 4) == 0) {
      idat.insert(idat.end(), data, data + len);
    } else if (std::memcmp(type, "IEND", 4) == 0) {
      break;
    }
    pos += 12 + len;  // length + type + data + crc (crc not verified)
  }

  if (!seen_ihdr) raise(Errc::malformed_header, "missing IHDR");
  if (idat.empty()) raise(Errc::truncated_data, "missing IDAT");

  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  const std::size_t raw_size = (stride + 1) * height;
  std::vector<std::uint8_t> raw(raw_size);
  uLongf dest_len = raw_size;
  const int zrc = uncompress(raw.data(), &dest_len, idat.data(), idat.size());
  if (zrc != Z_OK || dest_len != raw_size) {
    raise(Errc::truncated_data, "PNG image data did not decompress to expected size");
  }

  // Undo per-scanline filters in place into the pixel buffer.
  std::vector<std::uint8_t> pixels(stride * height);
  const int bpp = channels;
  for (std::uint32_t row = 0; row < height; ++row) {
    const std::uint8_t filter = raw[row * (stride + 1)];
    const std::uint8_t* src = raw.data() + row * (stride + 1) + 1;
    std::uint8_t* dst = pixels.data() + row * stride;
    const std::uint8_t* up = row > 0 ? dst - stride : nullptr;
    for (std::size_t i = 0; i < stride; ++i) {
      const int left = i >= static_cast<std::size_t>(bpp) ? dst[i - bpp] : 0;
      const int above = up ? up[i] : 0;
      const int upleft = (up && i >= static_cast<std::size_t>(bpp)) ? up[i - bpp] : 0;
      int v = src[i];
      switch (filter) {
        case 0: break;
        case 1: v += left; break;
        case 2: v += above; break;
        case 3: v += (left + above) / 2; break;
        case 4: v += paeth(left, above, upleft); break;
        default: raise(Errc::malformed_header, "bad PNG filter type");
      }
      dst[i] = static_cast<std::uint8_t>(v & 0xFF);
    }
  }

  if (channels == 1) {
    GrayImage img(static_cast<int>(width), static_cast<int>(height));
    img.data = std::move(pixels);
    return img;
  }
  RgbImage rgb;
  rgb.width = static_cast<int>(width);
  rgb.height = static_cast<int>(height);
  rgb.data = std::move(pixels);
  return to_gray(rgb);
}

}  // namespace clotscan::detail
