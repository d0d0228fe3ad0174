#include "clotscan/labeling.hpp"

#include <algorithm>
#include <numeric>

namespace clotscan {

namespace {

// Disjoint-set over provisional labels; path compression + union by size.
class UnionFind {
 public:
  std::int32_t make_set() {
    parent_.push_back(static_cast<std::int32_t>(parent_.size()));
    size_.push_back(1);
    return parent_.back();
  }

  std::int32_t find(std::int32_t x) {
    std::int32_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const std::int32_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  void unite(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

  std::size_t count() const { return parent_.size(); }

 private:
  std::vector<std::int32_t> parent_;
  std::vector<std::int32_t> size_;
};

}  // namespace

LabelResult label_components(const BinaryImage& bin, Connectivity conn) {
  const int w = bin.width;
  const int h = bin.height;
  LabelResult result;
  result.map = LabelMap(w, h);
  if (w == 0 || h == 0) return result;

  // First pass: provisional labels from already-scanned neighbors
  // (W, N for four-connectivity; plus NW, NE for eight).
  std::vector<std::int32_t> prov(static_cast<std::size_t>(w) * h, 0);
  UnionFind uf;
  uf.make_set();  // slot 0 = background sentinel, never united

  const bool eight = conn == Connectivity::eight;
  for (int row = 0; row < h; ++row) {
    for (int col = 0; col < w; ++col) {
      const std::size_t idx = static_cast<std::size_t>(row) * w + col;
      if (!bin.bits[idx]) continue;

      std::int32_t neighbor = 0;
      std::int32_t others[3];
      int n_others = 0;
      auto consider = [&](int c, int r) {
        if (c < 0 || c >= w || r < 0) return;
        const std::int32_t lbl = prov[static_cast<std::size_t>(r) * w + c];
        if (lbl == 0) return;
        if (neighbor == 0) {
          neighbor = lbl;
        } else if (lbl != neighbor) {
          others[n_others++] = lbl;
        }
      };
      consider(col - 1, row);
      consider(col, row - 1);
      if (eight) {
        consider(col - 1, row - 1);
        consider(col + 1, row - 1);
      }

      if (neighbor == 0) {
        prov[idx] = uf.make_set();
      } else {
        prov[idx] = neighbor;
        for (int i = 0; i < n_others; ++i) uf.unite(neighbor, others[i]);
      }
    }
  }

  // Second pass: resolve roots to dense labels in first-pixel raster order
  // and gather the statistics.
  std::vector<std::int32_t> dense(uf.count(), 0);
  std::vector<std::int64_t> sum_col, sum_row;
  std::int32_t next_label = 0;

  for (int row = 0; row < h; ++row) {
    for (int col = 0; col < w; ++col) {
      const std::size_t idx = static_cast<std::size_t>(row) * w + col;
      if (!prov[idx]) continue;
      const std::int32_t root = uf.find(prov[idx]);
      std::int32_t lbl = dense[root];
      if (lbl == 0) {
        lbl = dense[root] = ++next_label;
        Component c;
        c.label = lbl;
        c.min_col = c.max_col = col;
        c.min_row = c.max_row = row;
        result.components.push_back(c);
        sum_col.push_back(0);
        sum_row.push_back(0);
      }
      result.map.labels[idx] = lbl;
      Component& c = result.components[lbl - 1];
      ++c.area;
      c.min_col = std::min(c.min_col, col);
      c.max_col = std::max(c.max_col, col);
      c.min_row = std::min(c.min_row, row);
      c.max_row = std::max(c.max_row, row);
      sum_col[lbl - 1] += col;
      sum_row[lbl - 1] += row;
    }
  }

  for (std::size_t i = 0; i < result.components.size(); ++i) {
    Component& c = result.components[i];
    c.centroid_col = static_cast<double>(sum_col[i]) / c.area;
    c.centroid_row = static_cast<double>(sum_row[i]) / c.area;
  }
  return result;
}

std::vector<Component> component_stats(const LabelMap& map) {
  std::int32_t max_label = 0;
  for (auto lbl : map.labels) max_label = std::max(max_label, lbl);

  std::vector<Component> comps(max_label);
  std::vector<std::int64_t> sum_col(max_label, 0), sum_row(max_label, 0);
  for (std::int32_t i = 0; i < max_label; ++i) comps[i].label = i + 1;

  for (int row = 0; row < map.height; ++row) {
    for (int col = 0; col < map.width; ++col) {
      const std::int32_t lbl = map.at(col, row);
      if (lbl <= 0) continue;
      Component& c = comps[lbl - 1];
      if (c.area == 0) {
        c.min_col = c.max_col = col;
        c.min_row = c.max_row = row;
      } else {
        c.min_col = std::min(c.min_col, col);
        c.max_col = std::max(c.max_col, col);
        c.min_row = std::min(c.min_row, row);
        c.max_row = std::max(c.max_row, row);
      }
      ++c.area;
      sum_col[lbl - 1] += col;
      sum_row[lbl - 1] += row;
    }
  }

  for (std::int32_t i = 0; i < max_label; ++i) {
    if (comps[i].area > 0) {
      comps[i].centroid_col = static_cast<double>(sum_col[i]) / comps[i].area;
      comps[i].centroid_row = static_cast<double>(sum_row[i]) / comps[i].area;
    }
  }
  // Labels are dense 1..N on valid maps; keep only populated entries so an
  // empty map yields an empty list.
  std::erase_if(comps, [](const Component& c) { return c.area == 0; });
  return comps;
}

GrayImage label_map_to_pgm(const LabelMap& map) {
  GrayImage out(map.width, map.height);
  for (std::size_t i = 0; i < map.labels.size(); ++i) {
    const std::int32_t lbl = map.labels[i];
    out.data[i] = static_cast<std::uint8_t>(std::min<std::int32_t>(lbl, 255));
  }
  return out;
}

}  // namespace clotscan
