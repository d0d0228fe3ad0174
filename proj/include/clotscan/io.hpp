#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace clotscan {

// Whole-file helpers; throw Error(Errc::io_error) on failure.
std::vector<std::uint8_t> read_binary_file(const std::string& path);
void write_binary_file(const std::string& path, const std::uint8_t* bytes, std::size_t size);
void write_binary_file(const std::string& path, const std::vector<std::uint8_t>& bytes);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace clotscan
