#include "clotscan/metrics.hpp"

#include <algorithm>

#include "clotscan/numfmt.hpp"

namespace clotscan {

ClotReport quantify(const std::vector<Component>& components, std::int64_t roi_area,
                    std::int64_t min_size) {
  if (roi_area < 1) raise(Errc::roi_too_small, "roi_area must be >= 1");

  std::vector<const Component*> kept;
  kept.reserve(components.size());
  for (const auto& c : components) {
    if (c.area >= min_size) kept.push_back(&c);
  }
  // Descending by area; equal areas keep ascending label order.
  std::stable_sort(kept.begin(), kept.end(),
                   [](const Component* a, const Component* b) { return a->area > b->area; });

  ClotReport report;
  report.roi_area = roi_area;
  report.min_size_used = min_size;
  for (const auto* c : kept) {
    report.clot_densities.push_back(c->area);
    report.cumulative_area += c->area;
  }
  report.n_clots = static_cast<std::int64_t>(report.clot_densities.size());
  report.largest_clot = report.clot_densities.empty() ? 0 : report.clot_densities.front();
  report.occlusion_fraction =
      static_cast<double>(report.cumulative_area) / static_cast<double>(roi_area);
  return report;
}

AlarmState check_alarm(const ClotReport& report, const AlarmConfig& cfg) {
  AlarmState state;
  if (cfg.max_occlusion_fraction && report.occlusion_fraction > *cfg.max_occlusion_fraction) {
    state.alarm = true;
    state.reason = AlarmState::Reason::occlusion;
    state.value = report.occlusion_fraction;
    state.limit = *cfg.max_occlusion_fraction;
    return state;
  }
  if (cfg.max_cumulative_area && report.cumulative_area > *cfg.max_cumulative_area) {
    state.alarm = true;
    state.reason = AlarmState::Reason::area;
    state.value = static_cast<double>(report.cumulative_area);
    state.limit = static_cast<double>(*cfg.max_cumulative_area);
    return state;
  }
  return state;
}

nlohmann::json report_to_json(const ClotReport& report) {
  nlohmann::json j;
  j["n_clots"] = report.n_clots;
  j["clot_densities"] = report.clot_densities;
  j["cumulative_area"] = report.cumulative_area;
  j["occlusion_fraction"] = report.occlusion_fraction;
  j["largest_clot"] = report.largest_clot;
  j["roi_area"] = report.roi_area;
  j["min_size_used"] = report.min_size_used;
  if (report.timestamp) {
    j["timestamp"] = *report.timestamp;
  } else {
    j["timestamp"] = nullptr;
  }
  return j;
}

nlohmann::json alarm_to_json(const AlarmState& state) {
  nlohmann::json j;
  j["state"] = state.alarm ? "alarm" : "clear";
  if (state.alarm) {
    j["reason"] = alarm_reason_name(state.reason);
    j["value"] = state.value;
    j["limit"] = state.limit;
  }
  return j;
}

std::string report_csv_header() {
  return "timestamp,n_clots,cumulative_area,occlusion_fraction,largest_clot";
}

std::string report_csv_row(const ClotReport& report) {
  std::string row;
  if (report.timestamp) row += format_double(*report.timestamp);
  row += ',';
  row += format_int(report.n_clots);
  row += ',';
  row += format_int(report.cumulative_area);
  row += ',';
  row += format_double(report.occlusion_fraction);
  row += ',';
  row += format_int(report.largest_clot);
  return row;
}

}  // namespace clotscan
