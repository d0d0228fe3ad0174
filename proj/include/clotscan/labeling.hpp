#pragma once

#include <cstdint>
#include <vector>

#include "clotscan/binarize.hpp"

namespace clotscan {

// four = edge neighbors {(+-1,0),(0,+-1)}; eight adds the diagonals.
enum class Connectivity { four, eight };

// Per-pixel labels; 0 = background, foreground labels are dense 1..N in
// first-pixel raster order (topmost, then leftmost).
struct LabelMap {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> labels;

  LabelMap() = default;
  LabelMap(int w, int h) : width(w), height(h), labels(static_cast<std::size_t>(w) * h, 0) {}

  std::int32_t at(int col, int row) const {
    return labels[static_cast<std::size_t>(row) * width + col];
  }
  std::int32_t& at(int col, int row) {
    return labels[static_cast<std::size_t>(row) * width + col];
  }
};

// Per-clot statistics; area (the member pixel count) is the clot density
// measure reported downstream.
struct Component {
  std::int32_t label = 0;
  std::int64_t area = 0;
  int min_col = 0;
  int min_row = 0;
  int max_col = 0;
  int max_row = 0;
  double centroid_col = 0.0;
  double centroid_row = 0.0;
};

struct LabelResult {
  LabelMap map;
  std::vector<Component> components;  // sorted by label
};

// Two-pass connected component labeling: the first raster pass assigns
// provisional labels and records merges in a union-find structure (path
// compression + union by size); the second pass resolves provisional labels
// to dense final labels ordered by first pixel occurrence and accumulates the
// per-component statistics.
LabelResult label_components(const BinaryImage& bin, Connectivity conn);

// Recomputes the component list from a label map alone.
std::vector<Component> component_stats(const LabelMap& map);

// Debug export: labels clamped to 255. Non-contractual output.
GrayImage label_map_to_pgm(const LabelMap& map);

}  // namespace clotscan
