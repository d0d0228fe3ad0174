#include "clotscan/io.hpp"

#include <fstream>

#include "clotscan/error.hpp"

namespace clotscan {

std::vector<std::uint8_t> read_binary_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io_error, "cannot open for reading: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) raise(Errc::io_error, "read failed: " + path);
  return bytes;
}

void write_binary_file(const std::string& path, const std::uint8_t* bytes, std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(Errc::io_error, "cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes), static_cast<std::streamsize>(size));
  if (!out) raise(Errc::io_error, "write failed: " + path);
}

void write_binary_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  write_binary_file(path, bytes.data(), bytes.size());
}

std::string read_text_file(const std::string& path) {
  auto bytes = read_binary_file(path);
  return std::string(bytes.begin(), bytes.end());
}

void write_text_file(const std::string& path, const std::string& text) {
  write_binary_file(path, reinterpret_cast<const std::uint8_t*>(text.data()), text.size());
}

}  // namespace clotscan
