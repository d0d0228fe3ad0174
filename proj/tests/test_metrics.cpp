#include <vector>

#include "doctest.h"

#include "clotscan/binarize.hpp"
#include "clotscan/metrics.hpp"
#include "clotscan/synth.hpp"

using namespace clotscan;

namespace {

Component comp(std::int32_t label, std::int64_t area) {
  Component c;
  c.label = label;
  c.area = area;
  return c;
}

}  // namespace

TEST_CASE("quantify of nothing") {
  const auto r = quantify({}, 100, 0);
  CHECK(r.n_clots == 0);
  CHECK(r.clot_densities.empty());
  CHECK(r.cumulative_area == 0);
  CHECK(r.occlusion_fraction == 0.0);
  CHECK(r.largest_clot == 0);
  CHECK(r.roi_area == 100);
  CHECK_FALSE(r.timestamp.has_value());
}

TEST_CASE("quantify filters, sorts and totals") {
  const std::vector<Component> comps = {comp(1, 10), comp(2, 5), comp(3, 2)};
  const auto r = quantify(comps, 100, 3);
  CHECK(r.n_clots == 2);
  CHECK(r.clot_densities == std::vector<std::int64_t>{10, 5});
  CHECK(r.cumulative_area == 15);
  CHECK(r.occlusion_fraction == doctest::Approx(0.15));
  CHECK(r.largest_clot == 10);
  CHECK(r.min_size_used == 3);
}

TEST_CASE("quantify sorts descending regardless of label order") {
  const std::vector<Component> comps = {comp(1, 4), comp(2, 9), comp(3, 6)};
  const auto r = quantify(comps, 50, 0);
  CHECK(r.clot_densities == std::vector<std::int64_t>{9, 6, 4});
}

TEST_CASE("quantify rejects empty roi") {
  try {
    quantify({}, 0, 0);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::roi_too_small);
  }
}

TEST_CASE("quantify matches the rasterization oracle on a 3-disk scene") {
  ClotScene scene;
  scene.width = 80;
  scene.height = 60;
  scene.clots = {{15, 15, 4, 40}, {40, 30, 6, 40}, {65, 45, 3, 40}};
  const auto img = render(scene);
  const auto bin = binarize(img, ThresholdPolicy::otsu());
  const auto labels = label_components(bin, Connectivity::eight);
  const auto r = quantify(labels.components, roi_area(scene.roi, 80, 60), 0);
  const auto [count, total] = expected_components(scene, Connectivity::eight);
  CHECK(r.n_clots == count);
  CHECK(r.cumulative_area == total);
}

TEST_CASE("quantify monotone under added components") {
  std::vector<Component> comps = {comp(1, 10)};
  const auto before = quantify(comps, 100, 5);
  comps.push_back(comp(2, 7));
  const auto after = quantify(comps, 100, 5);
  CHECK(after.n_clots >= before.n_clots);
  CHECK(after.cumulative_area >= before.cumulative_area);
}

TEST_CASE("check_alarm thresholds") {
  ClotReport r;
  r.cumulative_area = 15;
  r.roi_area = 100;
  r.occlusion_fraction = 0.15;
  AlarmConfig cfg;
  cfg.max_occlusion_fraction = 0.20;

  SUBCASE("below the limit stays clear") {
    const auto s = check_alarm(r, cfg);
    CHECK_FALSE(s.alarm);
    CHECK(s.reason == AlarmState::Reason::none);
  }
  SUBCASE("above the limit alarms with reason occlusion") {
    r.occlusion_fraction = 0.25;
    const auto s = check_alarm(r, cfg);
    CHECK(s.alarm);
    CHECK(s.reason == AlarmState::Reason::occlusion);
    CHECK(s.value == doctest::Approx(0.25));
    CHECK(s.limit == doctest::Approx(0.20));
  }
  SUBCASE("equal to the limit stays clear (strict)") {
    r.occlusion_fraction = 0.20;
    CHECK_FALSE(check_alarm(r, cfg).alarm);
  }
  SUBCASE("area threshold") {
    AlarmConfig area_cfg;
    area_cfg.max_cumulative_area = 14;
    const auto s = check_alarm(r, area_cfg);
    CHECK(s.alarm);
    CHECK(s.reason == AlarmState::Reason::area);
    CHECK(s.value == doctest::Approx(15.0));
    area_cfg.max_cumulative_area = 15;
    CHECK_FALSE(check_alarm(r, area_cfg).alarm);  // strict again
  }
  SUBCASE("occlusion reported first when both trip") {
    AlarmConfig both;
    both.max_occlusion_fraction = 0.10;
    both.max_cumulative_area = 10;
    CHECK(check_alarm(r, both).reason == AlarmState::Reason::occlusion);
  }
  SUBCASE("no thresholds never alarms") {
    CHECK_FALSE(check_alarm(r, AlarmConfig{}).alarm);
    CHECK_FALSE(AlarmConfig{}.any_threshold());
  }
}

TEST_CASE("report JSON carries exactly the documented fields") {
  ClotReport r;
  r.n_clots = 2;
  r.clot_densities = {10, 5};
  r.cumulative_area = 15;
  r.occlusion_fraction = 0.15;
  r.largest_clot = 10;
  r.roi_area = 100;
  r.min_size_used = 3;

  auto j = report_to_json(r);
  const std::vector<std::string> keys = {"clot_densities", "cumulative_area", "largest_clot",
                                         "min_size_used",  "n_clots",         "occlusion_fraction",
                                         "roi_area",       "timestamp"};
  CHECK(j.size() == keys.size());
  for (const auto& k : keys) {
    CAPTURE(k);
    CHECK(j.contains(k));
  }
  CHECK(j["timestamp"].is_null());
  CHECK(j["n_clots"] == 2);
  CHECK(j["clot_densities"] == nlohmann::json({10, 5}));

  r.timestamp = 12.5;
  CHECK(report_to_json(r)["timestamp"] == 12.5);
}

TEST_CASE("alarm JSON") {
  ClotReport r;
  r.occlusion_fraction = 0.25;
  AlarmConfig cfg;
  cfg.max_occlusion_fraction = 0.2;
  const auto j = alarm_to_json(check_alarm(r, cfg));
  CHECK(j["state"] == "alarm");
  CHECK(j["reason"] == "occlusion");
  CHECK(j["value"] == 0.25);
  CHECK(j["limit"] == 0.2);
  const auto clear = alarm_to_json(check_alarm(ClotReport{}, cfg));
  CHECK(clear["state"] == "clear");
  CHECK_FALSE(clear.contains("reason"));
}

TEST_CASE("CSV column order") {
  CHECK(report_csv_header() == "timestamp,n_clots,cumulative_area,occlusion_fraction,largest_clot");
  ClotReport r;
  r.n_clots = 2;
  r.cumulative_area = 15;
  r.occlusion_fraction = 0.15;
  r.largest_clot = 10;
  CHECK(report_csv_row(r) == ",2,15,0.15,10");
  r.timestamp = 30.0;
  CHECK(report_csv_row(r) == "30,2,15,0.15,10");
}
