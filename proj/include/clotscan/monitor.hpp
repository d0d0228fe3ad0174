#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "clotscan/metrics.hpp"
#include "clotscan/stats.hpp"
#include "clotscan/synth.hpp"

namespace clotscan {

// One frame of a monitoring session. Either a file path or an in-memory
// encoded PGM frame (the simulator uses the latter so frames still pass
// through the decode path).
struct FrameEvent {
  double timestamp_min = 0.0;
  std::optional<int> branch_id;
  std::string image_path;
  std::vector<std::uint8_t> image_bytes;  // encoded PGM when non-empty

  bool in_memory() const { return !image_bytes.empty(); }
};

// Onset = first run of k consecutive reports whose cumulative area exceeds
// the calibrated noise floor.
struct OnsetConfig {
  std::int64_t noise_floor = 0;
  int k_consecutive = 2;
};

struct SessionConfig {
  ThresholdPolicy policy;  // otsu + dark foreground by default
  Connectivity connectivity = Connectivity::eight;
  std::int64_t min_size = 5;
  RoiMask roi;  // full frame by default
  std::optional<AlarmConfig> alarm;
  OnsetConfig onset;
  int median_radius = 0;  // 0 = preprocessing off (the default)
};

struct SkippedFrame {
  double timestamp_min = 0.0;
  std::string source;
  std::string error;
};

struct SessionSeries {
  std::vector<ClotReport> reports;  // timestamp order, skipped frames excluded
  std::optional<double> onset_time;
  std::optional<double> alarm_time;
  std::optional<CorrelationResult> correlation;  // cumulative_area vs timestamp
  std::string correlation_reason;  // error name when correlation is absent
  std::vector<SkippedFrame> skipped;
  std::optional<int> branch_id;
};

// Runs the full pipeline per frame (decode -> optional median -> ROI ->
// binarize -> label -> quantify -> alarm check), assembles the series in
// timestamp order, then
// derives onset, first alarm and the burden-vs-time correlation. Frames that
// fail to decode or analyze are recorded and skipped; AllFramesFailed is
// raised only when nothing was analyzable.
SessionSeries run_session(const std::vector<FrameEvent>& events, const SessionConfig& cfg);

std::optional<double> detect_onset(const std::vector<ClotReport>& reports,
                                   std::int64_t noise_floor, int k);

std::optional<double> first_alarm(const std::vector<ClotReport>& reports,
                                  const AlarmConfig& cfg);

// Renders frames at t = 0, interval, 2*interval, ... via evolve/render (plus
// model noise when configured, frame i seeded with seed + i), round-trips
// them through PGM encoding and delegates to run_session.
SessionSeries simulate_manifold(const ClotScene& scene0, const GrowthModel& model,
                                double interval_min, int n_frames,
                                const SessionConfig& cfg);

// Manifest CSV: header "timestamp_min,branch_id,image_path", UTF-8, LF.
// Relative image paths resolve against the manifest's directory.
std::vector<FrameEvent> read_manifest(const std::string& path);
std::string manifest_csv(const std::vector<FrameEvent>& events);

nlohmann::json session_to_json(const SessionSeries& series);
std::string session_to_csv(const SessionSeries& series);

// Advisory starting point for the onset noise floor from clot-free frames:
// median cumulative area + 3 * MAD. Not a contract, just a calibration hint.
std::int64_t recommend_noise_floor(const std::vector<ClotReport>& clot_free_reports);

}  // namespace clotscan
