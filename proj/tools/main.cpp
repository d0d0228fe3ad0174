// clotscan: quantify clot burden in extracorporeal-circuit filter images.
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "clotscan/binarize.hpp"
#include "clotscan/io.hpp"
#include "clotscan/labeling.hpp"
#include "clotscan/metrics.hpp"
#include "clotscan/monitor.hpp"
#include "clotscan/numfmt.hpp"
#include "clotscan/plot.hpp"
#include "clotscan/synth.hpp"

namespace {

namespace fs = std::filesystem;
using clotscan::Errc;
using clotscan::Error;

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::degenerate_histogram:
    case Errc::roi_too_small:
    case Errc::too_few_samples:
    case Errc::zero_variance:
      return 3;
    case Errc::all_frames_failed:
      return 4;
    default:
      return 2;  // I/O, decode, malformed input
  }
}

struct PipelineFlags {
  std::string threshold = "otsu";
  std::string polarity = "dark";
  int connectivity = 8;
  std::int64_t min_size = 5;
  std::string roi = "full";
  int median = 0;
  double alarm_occlusion = 0.0;
  std::int64_t alarm_area = 0;
  bool has_alarm_occlusion = false;
  bool has_alarm_area = false;
  std::int64_t onset_floor = 0;
  int onset_k = 2;
};

int parse_fixed_threshold(const std::string& text) {
  int t = -1;
  const char* b = text.data();
  const char* e = b + text.size();
  auto [next, ec] = std::from_chars(b, e, t);
  if (ec != std::errc() || next != e || t < 0 || t > 255) return -1;
  return t;
}

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& flags, bool with_onset) {
  cmd->add_option("--threshold", flags.threshold,
                  "binarization threshold: 'otsu' or a fixed value 0-255")
      ->default_val("otsu")
      ->check([](const std::string& v) -> std::string {
        if (v == "otsu" || parse_fixed_threshold(v) >= 0) return {};
        return "must be 'otsu' or an integer in 0-255";
      });
  cmd->add_option("--polarity", flags.polarity, "foreground polarity")
      ->default_val("dark")
      ->check(CLI::IsMember({"dark", "light"}));
  cmd->add_option("--connectivity", flags.connectivity, "pixel adjacency rule")
      ->default_val(8)
      ->check(CLI::IsMember({4, 8}));
  cmd->add_option("--min-size", flags.min_size, "drop components smaller than this many pixels")
      ->default_val(5)
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--roi", flags.roi, "region of interest: 'full' or 'disk:cx,cy,r'")
      ->default_val("full")
      ->check([](const std::string& v) -> std::string {
        try {
          clotscan::parse_roi(v);
          return {};
        } catch (const Error& e) {
          return e.what();
        }
      });
  cmd->add_option("--median", flags.median, "median prefilter radius (0 = off)")
      ->default_val(0)
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--alarm-occlusion", flags.alarm_occlusion,
                  "alarm when occlusion fraction exceeds this (0,1]")
      ->check(CLI::Range(std::numeric_limits<double>::min(), 1.0));
  cmd->add_option("--alarm-area", flags.alarm_area,
                  "alarm when cumulative clot area exceeds this pixel count")
      ->check(CLI::NonNegativeNumber);
  if (with_onset) {
    cmd->add_option("--onset-floor", flags.onset_floor,
                    "calibrated noise floor for onset detection (pixels)")
        ->default_val(0)
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--onset-k", flags.onset_k,
                    "consecutive frames above the floor that define onset")
        ->default_val(2)
        ->check(CLI::PositiveNumber);
  }
}

void finalize_alarm_flags(CLI::App* cmd, PipelineFlags& flags) {
  flags.has_alarm_occlusion = cmd->count("--alarm-occlusion") > 0;
  flags.has_alarm_area = cmd->count("--alarm-area") > 0;
}

clotscan::SessionConfig to_session_config(const PipelineFlags& flags) {
  clotscan::SessionConfig cfg;
  const auto polarity = flags.polarity == "light" ? clotscan::Polarity::light_foreground
                                                  : clotscan::Polarity::dark_foreground;
  cfg.policy = flags.threshold == "otsu"
                   ? clotscan::ThresholdPolicy::otsu(polarity)
                   : clotscan::ThresholdPolicy::fixed(parse_fixed_threshold(flags.threshold),
                                                      polarity);
  cfg.connectivity =
      flags.connectivity == 4 ? clotscan::Connectivity::four : clotscan::Connectivity::eight;
  cfg.min_size = flags.min_size;
  cfg.roi = clotscan::parse_roi(flags.roi);
  cfg.median_radius = flags.median;
  if (flags.has_alarm_occlusion || flags.has_alarm_area) {
    clotscan::AlarmConfig alarm;
    if (flags.has_alarm_occlusion) alarm.max_occlusion_fraction = flags.alarm_occlusion;
    if (flags.has_alarm_area) alarm.max_cumulative_area = flags.alarm_area;
    cfg.alarm = alarm;
  }
  cfg.onset.noise_floor = flags.onset_floor;
  cfg.onset.k_consecutive = flags.onset_k;
  return cfg;
}

nlohmann::json settings_json(const PipelineFlags& flags, const clotscan::SessionConfig& cfg,
                             std::optional<int> applied_threshold) {
  nlohmann::json j;
  j["threshold_mode"] = flags.threshold == "otsu" ? "otsu" : "fixed";
  if (applied_threshold) {
    j["threshold"] = *applied_threshold;
  } else if (flags.threshold != "otsu") {
    j["threshold"] = cfg.policy.fixed_t;
  } else {
    j["threshold"] = nullptr;  // chosen per frame
  }
  j["polarity"] = flags.polarity;
  j["connectivity"] = flags.connectivity;
  j["min_size"] = cfg.min_size;
  j["roi"] = clotscan::roi_to_string(cfg.roi);
  j["median_radius"] = cfg.median_radius;
  if (cfg.alarm) {
    nlohmann::json a;
    a["max_occlusion_fraction"] = cfg.alarm->max_occlusion_fraction
                                      ? nlohmann::json(*cfg.alarm->max_occlusion_fraction)
                                      : nullptr;
    a["max_cumulative_area"] = cfg.alarm->max_cumulative_area
                                   ? nlohmann::json(*cfg.alarm->max_cumulative_area)
                                   : nullptr;
    j["alarm"] = a;
  } else {
    j["alarm"] = nullptr;
  }
  j["onset"] = {{"noise_floor", cfg.onset.noise_floor},
                {"k_consecutive", cfg.onset.k_consecutive}};
  return j;
}

int cmd_analyze(const std::string& image_path, const PipelineFlags& flags,
                const std::string& format) {
  const clotscan::SessionConfig cfg = to_session_config(flags);

  clotscan::GrayImage img = clotscan::decode_image(image_path);
  if (cfg.median_radius > 0) img = clotscan::median_filter(img, cfg.median_radius);
  img = clotscan::apply_roi(img, cfg.roi);

  int t = cfg.policy.fixed_t;
  if (cfg.policy.mode == clotscan::ThresholdPolicy::Mode::otsu) {
    t = clotscan::otsu_threshold(clotscan::histogram(img));
  }
  const auto binary =
      clotscan::binarize(img, clotscan::ThresholdPolicy::fixed(t, cfg.policy.polarity));
  const auto labels = clotscan::label_components(binary, cfg.connectivity);
  const auto report = clotscan::quantify(
      labels.components, clotscan::roi_area(cfg.roi, img.width, img.height), cfg.min_size);

  if (format == "csv") {
    std::cout << clotscan::report_csv_header() << "\n"
              << clotscan::report_csv_row(report) << "\n";
    return 0;
  }
  nlohmann::json j = clotscan::report_to_json(report);
  j["settings"] = settings_json(flags, cfg, t);
  if (cfg.alarm) j["alarm"] = clotscan::alarm_to_json(clotscan::check_alarm(report, *cfg.alarm));
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_batch(const std::string& manifest_path, const PipelineFlags& flags,
              const std::string& out_dir) {
  const clotscan::SessionConfig cfg = to_session_config(flags);
  const auto events = clotscan::read_manifest(manifest_path);
  if (events.empty()) {
    std::cerr << "error: manifest lists no frames\n";
    return 4;
  }
  fs::create_directories(out_dir);

  std::map<int, std::vector<clotscan::FrameEvent>> branches;
  for (const auto& ev : events) branches[ev.branch_id.value_or(0)].push_back(ev);

  bool any_branch_failed = false;
  for (const auto& [branch, branch_events] : branches) {
    clotscan::SessionSeries series;
    try {
      series = clotscan::run_session(branch_events, cfg);
    } catch (const Error& e) {
      if (e.code() != Errc::all_frames_failed) throw;
      std::cerr << "warning: branch " << branch << ": " << e.what() << "\n";
      any_branch_failed = true;
      continue;
    }
    for (const auto& skip : series.skipped) {
      std::cerr << "warning: branch " << branch << ": skipped frame t="
                << clotscan::format_double(skip.timestamp_min) << " (" << skip.source
                << "): " << skip.error << "\n";
    }
    nlohmann::json j = clotscan::session_to_json(series);
    j["settings"] = settings_json(flags, cfg, std::nullopt);

    const fs::path json_path =
        fs::path(out_dir) / ("session_branch" + std::to_string(branch) + ".json");
    const fs::path csv_path =
        fs::path(out_dir) / ("session_branch" + std::to_string(branch) + ".csv");
    clotscan::write_text_file(json_path.string(), j.dump(2) + "\n");
    clotscan::write_text_file(csv_path.string(), clotscan::session_to_csv(series));
    std::cout << json_path.string() << "\n" << csv_path.string() << "\n";
  }
  return any_branch_failed ? 4 : 0;
}

int cmd_synth(const std::string& scene_path, int frames, double interval,
              const std::string& out_dir, std::optional<std::uint64_t> seed_override) {
  auto file = clotscan::load_scene_file(scene_path);
  if (seed_override) file.model.seed = *seed_override;
  fs::create_directories(out_dir);

  std::vector<clotscan::FrameEvent> events;
  for (int i = 0; i < frames; ++i) {
    const double t = i * interval;
    clotscan::GrayImage img = clotscan::render(clotscan::evolve(file.scene, file.model, t));
    if (file.model.noise_stddev > 0.0) {
      img = clotscan::add_noise(img, file.model.noise_stddev,
                                file.model.seed + static_cast<std::uint64_t>(i));
    }
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%04d.pgm", i);
    const fs::path frame_path = fs::path(out_dir) / name;
    clotscan::write_binary_file(frame_path.string(), clotscan::encode_pgm(img));
    std::cout << frame_path.string() << "\n";

    clotscan::FrameEvent ev;
    ev.timestamp_min = t;
    ev.image_path = name;  // manifest-relative
    events.push_back(std::move(ev));
  }
  const fs::path manifest_path = fs::path(out_dir) / "manifest.csv";
  clotscan::write_text_file(manifest_path.string(), clotscan::manifest_csv(events));
  std::cout << manifest_path.string() << "\n";
  return 0;
}

int cmd_plot(const std::string& session_path, const std::string& out_path) {
  const std::string text = clotscan::read_text_file(session_path);
  const nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("reports") || !j["reports"].is_array()) {
    clotscan::raise(Errc::invalid_input, "not a session JSON file: " + session_path);
  }
  std::vector<clotscan::ClotReport> reports;
  for (const auto& rj : j["reports"]) {
    if (!rj.is_object() || !rj.contains("timestamp") || !rj.contains("cumulative_area") ||
        !rj["cumulative_area"].is_number()) {
      clotscan::raise(Errc::invalid_input, "malformed report entry in " + session_path);
    }
    clotscan::ClotReport r;
    if (rj["timestamp"].is_number()) r.timestamp = rj["timestamp"].get<double>();
    r.cumulative_area = rj["cumulative_area"].get<std::int64_t>();
    reports.push_back(r);
  }
  if (reports.empty()) {
    std::cerr << "error: session has no reports to plot\n";
    return 4;
  }
  clotscan::write_text_file(out_path, clotscan::scatter_svg(reports));
  std::cout << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clotscan: clot burden quantification for extracorporeal-circuit filters"};
  app.require_subcommand(1);

  PipelineFlags analyze_flags;
  PipelineFlags batch_flags;
  std::string image_path;
  std::string manifest_path;
  std::string scene_path;
  std::string session_path;
  std::string svg_path;
  std::string format = "json";
  std::string out_dir = ".";
  std::string synth_dir = ".";
  int frames = 1;
  double interval = 10.0;
  std::uint64_t seed = 0;

  auto* analyze = app.add_subcommand("analyze", "quantify clots in a single image");
  analyze->add_option("image", image_path, "PGM or PNG image")->required();
  add_pipeline_flags(analyze, analyze_flags, false);
  analyze->add_option("--format", format, "output format")
      ->default_val("json")
      ->check(CLI::IsMember({"json", "csv"}));

  auto* batch = app.add_subcommand("batch", "run a monitoring session from a manifest CSV");
  batch->add_option("manifest", manifest_path, "CSV: timestamp_min,branch_id,image_path")
      ->required();
  add_pipeline_flags(batch, batch_flags, true);
  batch->add_option("--out-dir", out_dir, "directory for session outputs")->default_val(".");

  auto* synth = app.add_subcommand("synth", "render synthetic frames from a scene JSON");
  synth->add_option("scene", scene_path, "scene description JSON")->required();
  synth->add_option("--frames", frames, "number of frames")
      ->default_val(1)
      ->check(CLI::PositiveNumber);
  synth->add_option("--interval", interval, "minutes between frames")
      ->default_val(10.0)
      ->check(CLI::PositiveNumber);
  synth->add_option("--out-dir", synth_dir, "directory for frames and manifest")
      ->default_val(".");
  auto* seed_opt = synth->add_option("--seed", seed, "override the scene's noise seed");

  auto* plot = app.add_subcommand("plot", "render a session JSON as an SVG scatter");
  plot->add_option("session", session_path, "session JSON from 'batch'")->required();
  plot->add_option("output", svg_path, "SVG file to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (analyze->parsed()) {
      finalize_alarm_flags(analyze, analyze_flags);
      return cmd_analyze(image_path, analyze_flags, format);
    }
    if (batch->parsed()) {
      finalize_alarm_flags(batch, batch_flags);
      return cmd_batch(manifest_path, batch_flags, out_dir);
    }
    if (synth->parsed()) {
      std::optional<std::uint64_t> seed_override;
      if (seed_opt->count() > 0) seed_override = seed;
      return cmd_synth(scene_path, frames, interval, synth_dir, seed_override);
    }
    if (plot->parsed()) return cmd_plot(session_path, svg_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
