#pragma once

#include <string>

#include "clotscan/monitor.hpp"

namespace clotscan {

// Scatter of (timestamp, cumulative_area) with a least-squares trend line
// when both coordinates vary; the fit coefficients ride along as JSON inside
// <metadata>. Output is self-contained, well-formed SVG.
std::string scatter_svg(const std::vector<ClotReport>& reports);

}  // namespace clotscan
