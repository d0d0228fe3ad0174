#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "clotscan/image.hpp"
#include "clotscan/labeling.hpp"

namespace clotscan {

struct Disk {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 0.0;
  int intensity = 40;
};

// Schematic filter scene: dark disks on a light background. The disk
// membership test is (col-cx)^2 + (row-cy)^2 <= r^2 on integer pixel centers,
// shared verbatim with RoiMask so rasterization oracles agree. r = 0 at an
// integer center therefore covers exactly that one pixel.
struct ClotScene {
  int width = 0;
  int height = 0;
  int background = 250;
  std::vector<Disk> clots;
  RoiMask roi;  // full-frame by default
  std::optional<double> flow_rate_ml_min;  // annotation only, never used
};

struct NucleationEvent {
  double time_min = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int intensity = 40;
};

// Linear-in-area growth: radius(t) = sqrt(r0^2 + area_rate * t / pi), so the
// cumulative clot area is linear in time. Fully deterministic given seed.
struct GrowthModel {
  double area_rate = 0.0;  // px^2 per minute per clot
  std::vector<NucleationEvent> nucleation_times;
  double noise_stddev = 0.0;
  std::uint64_t seed = 0;
};

// Rasterizes the scene: covered pixels take the darkest covering disk's
// intensity, the rest the background; the ROI is applied afterward
// (outside -> 255). Never adds noise.
GrayImage render(const ClotScene& scene);

// Ground-truth oracle: rasterizes the disks (intersected with the ROI),
// merges touching pixel sets under conn with a flood fill independent of
// label_components, and returns (component count, total clot pixel count).
std::pair<std::int64_t, std::int64_t> expected_components(const ClotScene& scene,
                                                          Connectivity conn);

// Additive Gaussian noise, clamped to [0,255]. PRNG: SplitMix64 state advance
// (golden-gamma increment, xor-shift-multiply finalizer) producing uniform
// doubles that feed the Box-Muller transform; both outputs of each pair are
// consumed. stddev 0 returns the input unchanged; equal seeds give equal
// outputs.
GrayImage add_noise(const GrayImage& img, double stddev, std::uint64_t seed);

// Scene at minute t: existing clots grow per the model's area rate and
// nucleations with time_min <= t are present, grown from their nucleation
// instant. Pure function of (scene at t=0, model, t).
ClotScene evolve(const ClotScene& scene, const GrowthModel& model, double t_min);

// JSON scene files: top-level ClotScene fields plus an optional "model"
// object with the GrowthModel fields.
struct SceneFile {
  ClotScene scene;
  GrowthModel model;
};

ClotScene scene_from_json(const nlohmann::json& j);
GrowthModel model_from_json(const nlohmann::json& j);
nlohmann::json scene_to_json(const ClotScene& scene);
nlohmann::json model_to_json(const GrowthModel& model);
SceneFile load_scene_file(const std::string& path);

// The documented noise source, exposed for reproducibility tests.
class SplitMixGaussian {
 public:
  explicit SplitMixGaussian(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  double next_unit();      // uniform in (0,1]
  double next_gaussian();  // standard normal via Box-Muller

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace clotscan
