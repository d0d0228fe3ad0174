#include "clotscan/monitor.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>

#include "clotscan/binarize.hpp"
#include "clotscan/io.hpp"
#include "clotscan/numfmt.hpp"

namespace clotscan {

namespace {

ClotReport analyze_frame(const GrayImage& raw, const SessionConfig& cfg) {
  GrayImage img = raw;
  if (cfg.median_radius > 0) img = median_filter(img, cfg.median_radius);
  img = apply_roi(img, cfg.roi);
  const BinaryImage binary = binarize(img, cfg.policy);
  const LabelResult labels = label_components(binary, cfg.connectivity);
  return quantify(labels.components, roi_area(cfg.roi, img.width, img.height), cfg.min_size);
}

}  // namespace

SessionSeries run_session(const std::vector<FrameEvent>& events, const SessionConfig& cfg) {
  if (events.empty()) raise(Errc::invalid_input, "session needs at least one frame");
  if (cfg.onset.k_consecutive < 1) raise(Errc::invalid_input, "k_consecutive must be >= 1");
  if (cfg.onset.noise_floor < 0) raise(Errc::invalid_input, "noise_floor must be >= 0");

  const int branch = events.front().branch_id.value_or(0);
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i].branch_id.value_or(0) != branch) {
      raise(Errc::invalid_input, "mixed branch ids in one session; split by branch first");
    }
    if (i > 0 && !(events[i].timestamp_min > events[i - 1].timestamp_min)) {
      raise(Errc::invalid_input, "timestamps must be strictly increasing");
    }
  }

  SessionSeries series;
  series.branch_id = events.front().branch_id;
  for (const auto& ev : events) {
    try {
      const GrayImage raw = ev.in_memory()
                                ? decode_pgm(ev.image_bytes)
                                : decode_image(ev.image_path);
      ClotReport report = analyze_frame(raw, cfg);
      report.timestamp = ev.timestamp_min;
      series.reports.push_back(std::move(report));
    } catch (const Error& e) {
      SkippedFrame skip;
      skip.timestamp_min = ev.timestamp_min;
      skip.source = ev.in_memory() ? "<memory>" : ev.image_path;
      skip.error = errc_name(e.code());
      series.skipped.push_back(std::move(skip));
    }
  }
  if (series.reports.empty()) {
    raise(Errc::all_frames_failed, "no frame in the session could be analyzed");
  }

  series.onset_time = detect_onset(series.reports, cfg.onset.noise_floor, cfg.onset.k_consecutive);
  if (cfg.alarm && cfg.alarm->any_threshold()) {
    series.alarm_time = first_alarm(series.reports, *cfg.alarm);
  }

  if (series.reports.size() < 3) {
    series.correlation_reason = errc_name(Errc::too_few_samples);
  } else {
    PairedSeries pairs;
    for (const auto& r : series.reports) {
      pairs.xs.push_back(*r.timestamp);
      pairs.ys.push_back(static_cast<double>(r.cumulative_area));
    }
    try {
      series.correlation = pearson(pairs);
    } catch (const Error& e) {
      series.correlation_reason = errc_name(e.code());
    }
  }
  return series;
}

std::optional<double> detect_onset(const std::vector<ClotReport>& reports,
                                   std::int64_t noise_floor, int k) {
  if (k < 1) raise(Errc::invalid_input, "k_consecutive must be >= 1");
  const std::size_t n = reports.size();
  std::size_t run = 0;
  for (std::size_t i = 0; i < n; ++i) {
    run = reports[i].cumulative_area > noise_floor ? run + 1 : 0;
    if (run >= static_cast<std::size_t>(k)) {
      const auto& first = reports[i + 1 - static_cast<std::size_t>(k)];
      if (!first.timestamp) raise(Errc::invalid_input, "reports must carry timestamps");
      return *first.timestamp;
    }
  }
  return std::nullopt;
}

std::optional<double> first_alarm(const std::vector<ClotReport>& reports,
                                  const AlarmConfig& cfg) {
  for (const auto& r : reports) {
    if (check_alarm(r, cfg).alarm) {
      if (!r.timestamp) raise(Errc::invalid_input, "reports must carry timestamps");
      return *r.timestamp;
    }
  }
  return std::nullopt;
}

SessionSeries simulate_manifold(const ClotScene& scene0, const GrowthModel& model,
                                double interval_min, int n_frames,
                                const SessionConfig& cfg) {
  if (!(interval_min > 0.0)) raise(Errc::invalid_input, "sampling interval must be > 0");
  if (n_frames < 1) raise(Errc::invalid_input, "need at least one frame");

  std::vector<FrameEvent> events;
  events.reserve(static_cast<std::size_t>(n_frames));
  for (int i = 0; i < n_frames; ++i) {
    const double t = i * interval_min;
    GrayImage img = render(evolve(scene0, model, t));
    if (model.noise_stddev > 0.0) {
      img = add_noise(img, model.noise_stddev, model.seed + static_cast<std::uint64_t>(i));
    }
    FrameEvent ev;
    ev.timestamp_min = t;
    ev.image_bytes = encode_pgm(img);
    events.push_back(std::move(ev));
  }
  return run_session(events, cfg);
}

std::vector<FrameEvent> read_manifest(const std::string& path) {
  const std::string text = read_text_file(path);
  const std::filesystem::path base = std::filesystem::path(path).parent_path();

  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = nl + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();

  if (lines.empty() || lines.front() != "timestamp_min,branch_id,image_path") {
    raise(Errc::malformed_header,
          "manifest must start with 'timestamp_min,branch_id,image_path'");
  }

  std::vector<FrameEvent> events;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) continue;
    const std::size_t c1 = line.find(',');
    const std::size_t c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      raise(Errc::invalid_input, "manifest row needs 3 fields: " + line);
    }
    const std::string ts_field = line.substr(0, c1);
    const std::string branch_field = line.substr(c1 + 1, c2 - c1 - 1);
    const std::string path_field = line.substr(c2 + 1);

    FrameEvent ev;
    {
      const char* b = ts_field.data();
      const char* e = b + ts_field.size();
      auto [next, ec] = std::from_chars(b, e, ev.timestamp_min);
      if (ec != std::errc() || next != e || !std::isfinite(ev.timestamp_min)) {
        raise(Errc::invalid_input, "bad manifest timestamp: " + ts_field);
      }
    }
    if (!branch_field.empty()) {
      int branch = 0;
      const char* b = branch_field.data();
      const char* e = b + branch_field.size();
      auto [next, ec] = std::from_chars(b, e, branch);
      if (ec != std::errc() || next != e) {
        raise(Errc::invalid_input, "bad manifest branch id: " + branch_field);
      }
      ev.branch_id = branch;
    }
    if (path_field.empty()) raise(Errc::invalid_input, "manifest row missing image path");
    std::filesystem::path img(path_field);
    ev.image_path = img.is_absolute() ? img.string() : (base / img).string();
    events.push_back(std::move(ev));
  }
  return events;
}

std::string manifest_csv(const std::vector<FrameEvent>& events) {
  std::string out = "timestamp_min,branch_id,image_path\n";
  for (const auto& ev : events) {
    out += format_double(ev.timestamp_min);
    out += ',';
    if (ev.branch_id) out += format_int(*ev.branch_id);
    out += ',';
    out += ev.image_path;
    out += '\n';
  }
  return out;
}

nlohmann::json session_to_json(const SessionSeries& series) {
  nlohmann::json j;
  j["reports"] = nlohmann::json::array();
  for (const auto& r : series.reports) j["reports"].push_back(report_to_json(r));

  j["onset_time"] = series.onset_time ? nlohmann::json(*series.onset_time) : nullptr;
  j["alarm_time"] = series.alarm_time ? nlohmann::json(*series.alarm_time) : nullptr;
  if (series.correlation) {
    j["correlation"] = {{"r", series.correlation->r},
                        {"n", series.correlation->n},
                        {"t_stat", series.correlation->t_stat},
                        {"p_value", series.correlation->p_value}};
  } else {
    j["correlation"] = nullptr;
  }
  j["correlation_reason"] = series.correlation_reason;

  j["skipped"] = nlohmann::json::array();
  for (const auto& s : series.skipped) {
    j["skipped"].push_back(
        {{"timestamp_min", s.timestamp_min}, {"source", s.source}, {"error", s.error}});
  }
  j["branch_id"] = series.branch_id ? nlohmann::json(*series.branch_id) : nullptr;
  return j;
}

std::string session_to_csv(const SessionSeries& series) {
  std::string out = report_csv_header();
  out += '\n';
  for (const auto& r : series.reports) {
    out += report_csv_row(r);
    out += '\n';
  }
  return out;
}

std::int64_t recommend_noise_floor(const std::vector<ClotReport>& clot_free_reports) {
  if (clot_free_reports.empty()) {
    raise(Errc::too_few_samples, "need at least one clot-free report");
  }
  std::vector<double> areas;
  areas.reserve(clot_free_reports.size());
  for (const auto& r : clot_free_reports) {
    areas.push_back(static_cast<double>(r.cumulative_area));
  }
  auto median_of = [](std::vector<double>& v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double hi = v[mid];
    if (v.size() % 2 == 0) {
      const double lo = *std::max_element(v.begin(), v.begin() + mid);
      return (lo + hi) / 2.0;
    }
    return hi;
  };
  const double med = median_of(areas);
  std::vector<double> dev;
  dev.reserve(areas.size());
  for (double a : areas) dev.push_back(std::fabs(a - med));
  const double mad = median_of(dev);
  return std::llround(med + 3.0 * mad);
}

}  // namespace clotscan
