#include "clotscan/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "clotscan/io.hpp"

namespace clotscan {

namespace {

void validate_scene(const ClotScene& scene) {
  if (scene.width < 1 || scene.height < 1 || scene.width > 1'000'000 ||
      scene.height > 1'000'000 ||
      static_cast<std::int64_t>(scene.width) * scene.height > 268'435'456LL) {
    raise(Errc::invalid_input, "scene dimensions out of range");
  }
  if (scene.background < 0 || scene.background > 255) {
    raise(Errc::invalid_input, "scene background out of range");
  }
  for (const auto& d : scene.clots) {
    if (!(d.radius >= 0.0) || !std::isfinite(d.cx) || !std::isfinite(d.cy) ||
        !std::isfinite(d.radius)) {
      raise(Errc::invalid_input, "clot geometry must be finite with radius >= 0");
    }
    if (d.intensity < 0 || d.intensity > 255) {
      raise(Errc::invalid_input, "clot intensity out of range");
    }
  }
}

bool disk_contains(const Disk& d, int col, int row) {
  const double dx = col - d.cx;
  const double dy = row - d.cy;
  return dx * dx + dy * dy <= d.radius * d.radius;
}

// Clipped integer bounding box of a disk; false when empty.
bool disk_bbox(const Disk& d, int width, int height, int& c0, int& c1, int& r0, int& r1) {
  c0 = std::max(0, static_cast<int>(std::ceil(d.cx - d.radius)));
  c1 = std::min(width - 1, static_cast<int>(std::floor(d.cx + d.radius)));
  r0 = std::max(0, static_cast<int>(std::ceil(d.cy - d.radius)));
  r1 = std::min(height - 1, static_cast<int>(std::floor(d.cy + d.radius)));
  return c0 <= c1 && r0 <= r1;
}

}  // namespace

GrayImage render(const ClotScene& scene) {
  validate_scene(scene);
  GrayImage out(scene.width, scene.height, static_cast<std::uint8_t>(scene.background));
  // Covered pixels take the darkest covering disk, independent of background.
  std::vector<std::uint8_t> covered(out.pixel_count(), 0);
  for (const auto& d : scene.clots) {
    int c0, c1, r0, r1;
    if (!disk_bbox(d, scene.width, scene.height, c0, c1, r0, r1)) continue;
    for (int row = r0; row <= r1; ++row) {
      for (int col = c0; col <= c1; ++col) {
        if (!disk_contains(d, col, row)) continue;
        const std::size_t i = static_cast<std::size_t>(row) * scene.width + col;
        const auto v = static_cast<std::uint8_t>(d.intensity);
        if (!covered[i] || v < out.data[i]) out.data[i] = v;
        covered[i] = 1;
      }
    }
  }
  return apply_roi(out, scene.roi);
}

std::pair<std::int64_t, std::int64_t> expected_components(const ClotScene& scene,
                                                          Connectivity conn) {
  validate_scene(scene);
  const int w = scene.width;
  const int h = scene.height;
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(w) * h, 0);
  for (const auto& d : scene.clots) {
    int c0, c1, r0, r1;
    if (!disk_bbox(d, w, h, c0, c1, r0, r1)) continue;
    for (int row = r0; row <= r1; ++row) {
      for (int col = c0; col <= c1; ++col) {
        if (disk_contains(d, col, row) && scene.roi.contains(col, row)) {
          mask[static_cast<std::size_t>(row) * w + col] = 1;
        }
      }
    }
  }

  std::int64_t count = 0;
  std::int64_t total = 0;
  std::vector<std::pair<int, int>> stack;
  for (int row = 0; row < h; ++row) {
    for (int col = 0; col < w; ++col) {
      if (!mask[static_cast<std::size_t>(row) * w + col]) continue;
      ++count;
      mask[static_cast<std::size_t>(row) * w + col] = 0;
      stack.push_back({col, row});
      while (!stack.empty()) {
        auto [c, r] = stack.back();
        stack.pop_back();
        ++total;
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            if (dr == 0 && dc == 0) continue;
            if (conn == Connectivity::four && dr != 0 && dc != 0) continue;
            const int nc = c + dc;
            const int nr = r + dr;
            if (nc < 0 || nc >= w || nr < 0 || nr >= h) continue;
            auto& cell = mask[static_cast<std::size_t>(nr) * w + nc];
            if (cell) {
              cell = 0;
              stack.push_back({nc, nr});
            }
          }
        }
      }
    }
  }
  return {count, total};
}

std::uint64_t SplitMixGaussian::next_u64() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMixGaussian::next_unit() {
  // Top 53 bits, shifted into (0,1] so log() below is always defined.
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double SplitMixGaussian::next_gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = next_unit();
  const double u2 = next_unit();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  have_spare_ = true;
  return radius * std::cos(angle);
}

GrayImage add_noise(const GrayImage& img, double stddev, std::uint64_t seed) {
  if (!(stddev >= 0.0)) raise(Errc::invalid_input, "noise stddev must be >= 0");
  if (stddev == 0.0) return img;
  GrayImage out = img;
  SplitMixGaussian rng(seed);
  for (auto& px : out.data) {
    const long v = std::lround(px + stddev * rng.next_gaussian());
    px = static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
  }
  return out;
}

namespace {

double grown_radius(double r0, double area_rate, double dt) {
  const double contribution = area_rate * dt / std::numbers::pi;
  if (contribution == 0.0) return r0;  // keep t=0 / zero-rate bit-exact
  return std::sqrt(r0 * r0 + contribution);
}

}  // namespace

ClotScene evolve(const ClotScene& scene, const GrowthModel& model, double t_min) {
  if (!(t_min >= 0.0)) raise(Errc::invalid_input, "evolve time must be >= 0");
  if (!(model.area_rate >= 0.0)) raise(Errc::invalid_input, "area_rate must be >= 0");
  ClotScene out = scene;
  for (auto& d : out.clots) {
    d.radius = grown_radius(d.radius, model.area_rate, t_min);
  }
  for (const auto& ev : model.nucleation_times) {
    if (ev.time_min > t_min) continue;
    Disk d;
    d.cx = ev.cx;
    d.cy = ev.cy;
    d.intensity = ev.intensity;
    d.radius = grown_radius(0.0, model.area_rate, t_min - ev.time_min);
    out.clots.push_back(d);
  }
  return out;
}

namespace {

void require_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                  const char* what) {
  for (const auto& item : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* k) { return item.key() == k; })) {
      raise(Errc::invalid_input, std::string("unknown ") + what + " field: " + item.key());
    }
  }
}

double get_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    raise(Errc::invalid_input, std::string("missing or non-numeric field: ") + key);
  }
  return j[key].get<double>();
}

double get_number_or(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) raise(Errc::invalid_input, std::string("non-numeric field: ") + key);
  return j[key].get<double>();
}

int get_int_or(const nlohmann::json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) {
    raise(Errc::invalid_input, std::string("non-integer field: ") + key);
  }
  return j[key].get<int>();
}

}  // namespace

ClotScene scene_from_json(const nlohmann::json& j) {
  if (!j.is_object()) raise(Errc::invalid_input, "scene must be a JSON object");
  require_keys(j, {"width", "height", "background", "clots", "roi", "flow_rate_ml_min", "model"},
               "scene");
  ClotScene scene;
  scene.width = get_int_or(j, "width", 0);
  scene.height = get_int_or(j, "height", 0);
  if (!j.contains("width") || !j.contains("height")) {
    raise(Errc::invalid_input, "scene requires width and height");
  }
  scene.background = get_int_or(j, "background", 250);
  if (j.contains("clots")) {
    if (!j["clots"].is_array()) raise(Errc::invalid_input, "clots must be an array");
    for (const auto& cj : j["clots"]) {
      if (!cj.is_object()) raise(Errc::invalid_input, "each clot must be an object");
      require_keys(cj, {"cx", "cy", "radius", "intensity"}, "clot");
      Disk d;
      d.cx = get_number(cj, "cx");
      d.cy = get_number(cj, "cy");
      d.radius = get_number(cj, "radius");
      d.intensity = get_int_or(cj, "intensity", 40);
      scene.clots.push_back(d);
    }
  }
  if (j.contains("roi")) {
    if (!j["roi"].is_string()) raise(Errc::invalid_input, "roi must be a string");
    scene.roi = parse_roi(j["roi"].get<std::string>());
  }
  if (j.contains("flow_rate_ml_min")) {
    scene.flow_rate_ml_min = get_number(j, "flow_rate_ml_min");
  }
  validate_scene(scene);
  return scene;
}

GrowthModel model_from_json(const nlohmann::json& j) {
  if (!j.is_object()) raise(Errc::invalid_input, "model must be a JSON object");
  require_keys(j, {"area_rate", "nucleation_times", "noise_stddev", "seed"}, "model");
  GrowthModel model;
  model.area_rate = get_number_or(j, "area_rate", 0.0);
  model.noise_stddev = get_number_or(j, "noise_stddev", 0.0);
  if (!(model.area_rate >= 0.0)) raise(Errc::invalid_input, "area_rate must be >= 0");
  if (!(model.noise_stddev >= 0.0)) raise(Errc::invalid_input, "noise_stddev must be >= 0");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer()) raise(Errc::invalid_input, "seed must be an integer");
    model.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("nucleation_times")) {
    if (!j["nucleation_times"].is_array()) {
      raise(Errc::invalid_input, "nucleation_times must be an array");
    }
    for (const auto& ej : j["nucleation_times"]) {
      if (!ej.is_object()) raise(Errc::invalid_input, "each nucleation must be an object");
      require_keys(ej, {"time_min", "cx", "cy", "intensity"}, "nucleation");
      NucleationEvent ev;
      ev.time_min = get_number(ej, "time_min");
      ev.cx = get_number(ej, "cx");
      ev.cy = get_number(ej, "cy");
      ev.intensity = get_int_or(ej, "intensity", 40);
      if (!(ev.time_min >= 0.0)) raise(Errc::invalid_input, "nucleation time must be >= 0");
      model.nucleation_times.push_back(ev);
    }
  }
  return model;
}

nlohmann::json scene_to_json(const ClotScene& scene) {
  nlohmann::json j;
  j["width"] = scene.width;
  j["height"] = scene.height;
  j["background"] = scene.background;
  j["clots"] = nlohmann::json::array();
  for (const auto& d : scene.clots) {
    j["clots"].push_back({{"cx", d.cx}, {"cy", d.cy}, {"radius", d.radius},
                          {"intensity", d.intensity}});
  }
  j["roi"] = roi_to_string(scene.roi);
  if (scene.flow_rate_ml_min) j["flow_rate_ml_min"] = *scene.flow_rate_ml_min;
  return j;
}

nlohmann::json model_to_json(const GrowthModel& model) {
  nlohmann::json j;
  j["area_rate"] = model.area_rate;
  j["noise_stddev"] = model.noise_stddev;
  j["seed"] = model.seed;
  j["nucleation_times"] = nlohmann::json::array();
  for (const auto& ev : model.nucleation_times) {
    j["nucleation_times"].push_back(
        {{"time_min", ev.time_min}, {"cx", ev.cx}, {"cy", ev.cy}, {"intensity", ev.intensity}});
  }
  return j;
}

SceneFile load_scene_file(const std::string& path) {
  const std::string text = read_text_file(path);
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) raise(Errc::invalid_input, "scene file is not valid JSON: " + path);
  SceneFile file;
  file.scene = scene_from_json(j);
  if (j.contains("model")) file.model = model_from_json(j["model"]);
  return file;
}

}  // namespace clotscan
