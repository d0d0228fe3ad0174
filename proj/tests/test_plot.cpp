#include <string>
#include <vector>

#include "doctest.h"

#include "clotscan/numfmt.hpp"
#include "clotscan/plot.hpp"
#include "clotscan/stats.hpp"
#include "oracle.hpp"

using namespace clotscan;

namespace {

std::vector<ClotReport> series(const std::vector<std::pair<double, std::int64_t>>& pts) {
  std::vector<ClotReport> reports;
  for (const auto& [ts, area] : pts) {
    ClotReport r;
    r.timestamp = ts;
    r.cumulative_area = area;
    reports.push_back(r);
  }
  return reports;
}

std::size_t count_of(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = hay.find(needle); pos != std::string::npos;
       pos = hay.find(needle, pos + needle.size()))
    ++n;
  return n;
}

}  // namespace

TEST_CASE("a growing series plots points and a trend") {
  const auto reports =
      series({{0, 10}, {10, 32}, {20, 55}, {30, 74}, {40, 98}, {50, 121}});
  const auto svg = scatter_svg(reports);
  CHECK(oracle::xml_well_formed(svg));
  CHECK(count_of(svg, "<circle") == 6);
  CHECK(count_of(svg, "<line") == 1);
  REQUIRE(count_of(svg, "<metadata>") == 1);

  // the embedded coefficients are exactly the least-squares fit
  PairedSeries s;
  for (const auto& r : reports) {
    s.xs.push_back(*r.timestamp);
    s.ys.push_back(static_cast<double>(r.cumulative_area));
  }
  const auto [slope, intercept] = linear_fit(s);
  const std::string want = "<metadata>{\"slope\":" + format_double(slope) +
                           ",\"intercept\":" + format_double(intercept) + "}</metadata>";
  CHECK(svg.find(want) != std::string::npos);
}

TEST_CASE("a flat series gets points but no trend") {
  const auto svg = scatter_svg(series({{0, 40}, {10, 40}, {20, 40}, {30, 40}}));
  CHECK(oracle::xml_well_formed(svg));
  CHECK(count_of(svg, "<circle") == 4);
  CHECK(count_of(svg, "<line") == 0);
  CHECK(count_of(svg, "<metadata>") == 0);
}

TEST_CASE("a single report is a lone point") {
  const auto svg = scatter_svg(series({{15, 7}}));
  CHECK(oracle::xml_well_formed(svg));
  CHECK(count_of(svg, "<circle") == 1);
  CHECK(count_of(svg, "<line") == 0);
}

TEST_CASE("axes are labeled") {
  const auto svg = scatter_svg(series({{0, 1}, {10, 5}}));
  CHECK(svg.find("flow duration (min)") != std::string::npos);
  CHECK(svg.find("cumulative clot area (px)") != std::string::npos);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("plotting nothing is an error") {
  try {
    scatter_svg({});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_input);
  }
  std::vector<ClotReport> untimed(3);
  untimed[0].timestamp = 1.0;  // others lack timestamps
  CHECK_THROWS_AS(scatter_svg(untimed), Error);
}

TEST_CASE("byte-identical for identical input") {
  const auto reports = series({{0, 3}, {5, 9}, {10, 14}});
  CHECK(scatter_svg(reports) == scatter_svg(reports));
}
