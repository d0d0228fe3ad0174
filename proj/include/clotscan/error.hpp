#pragma once

#include <stdexcept>
#include <string>

namespace clotscan {

// Failure categories surfaced by the library. The CLI maps these onto its
// exit-code contract; monitoring sessions record the names verbatim.
enum class Errc {
  malformed_header,
  truncated_data,
  unsupported_maxval,
  unsupported_format,
  io_error,
  degenerate_histogram,
  too_few_samples,
  zero_variance,
  roi_too_small,
  all_frames_failed,
  invalid_input,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::malformed_header: return "MalformedHeader";
    case Errc::truncated_data: return "TruncatedData";
    case Errc::unsupported_maxval: return "UnsupportedMaxval";
    case Errc::unsupported_format: return "UnsupportedFormat";
    case Errc::io_error: return "IoError";
    case Errc::degenerate_histogram: return "DegenerateHistogram";
    case Errc::too_few_samples: return "TooFewSamples";
    case Errc::zero_variance: return "ZeroVariance";
    case Errc::roi_too_small: return "RoiTooSmall";
    case Errc::all_frames_failed: return "AllFramesFailed";
    case Errc::invalid_input: return "InvalidInput";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace clotscan
