#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "clotscan/labeling.hpp"

namespace clotscan {

// Per-image clot quantification. clot_densities holds the retained
// components' pixel counts sorted descending (ties by ascending label).
struct ClotReport {
  std::int64_t n_clots = 0;
  std::vector<std::int64_t> clot_densities;
  std::int64_t cumulative_area = 0;
  double occlusion_fraction = 0.0;
  std::int64_t largest_clot = 0;
  std::int64_t roi_area = 0;
  std::int64_t min_size_used = 0;
  std::optional<double> timestamp;  // minutes since session start
};

// Thresholds come from calibration; none ship by default, so at least one of
// the two must be set before alarming is meaningful.
struct AlarmConfig {
  std::optional<double> max_occlusion_fraction;  // in (0,1]
  std::optional<std::int64_t> max_cumulative_area;
  std::int64_t min_clot_size = 0;  // calibrated noise floor, kept for the record

  bool any_threshold() const {
    return max_occlusion_fraction.has_value() || max_cumulative_area.has_value();
  }
};

struct AlarmState {
  enum class Reason { none, occlusion, area };

  bool alarm = false;
  Reason reason = Reason::none;
  double value = 0.0;  // the measurement that tripped (fraction or pixel count)
  double limit = 0.0;
};

inline const char* alarm_reason_name(AlarmState::Reason r) {
  switch (r) {
    case AlarmState::Reason::occlusion: return "occlusion";
    case AlarmState::Reason::area: return "area";
    default: return "none";
  }
}

// Drops components with area < min_size, sorts densities descending and fills
// in the derived totals. Throws RoiTooSmall when roi_area < 1.
ClotReport quantify(const std::vector<Component>& components, std::int64_t roi_area,
                    std::int64_t min_size);

// Strict exceedance; when both thresholds trip, occlusion is reported first.
AlarmState check_alarm(const ClotReport& report, const AlarmConfig& cfg);

nlohmann::json report_to_json(const ClotReport& report);
nlohmann::json alarm_to_json(const AlarmState& state);

// CSV column order: timestamp, n_clots, cumulative_area, occlusion_fraction,
// largest_clot. Timestamp field is empty when absent.
std::string report_csv_header();
std::string report_csv_row(const ClotReport& report);

}  // namespace clotscan
