#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "bllab/config.hpp"
#include "bllab/errors.hpp"
#include "bllab/report.hpp"

using namespace bllab;

TEST_SUITE("cli") {

TEST_CASE("ini parsing") {
  Config cfg = Config::parse_string(
      "# comment\n"
      "[measure]\n"
      "kind = power   ; trailing comment\n"
      "p = 1.5\n"
      "r = 0.1\n"
      "half_line = false\n"
      "[battery]\n"
      "seed = 99\n"
      "size = 8\n"
      "[beta]\n"
      "s_grid = 1, 2, 10\n");
  CHECK(cfg.get("measure.kind", "") == "power");
  CHECK(cfg.get_double("measure.p", 0) == doctest::Approx(1.5));
  CHECK(cfg.get_bool("measure.half_line", true) == false);
  CHECK(cfg.get_int("battery.seed", 0) == 99);
  CHECK(cfg.get_list("beta.s_grid", {}).size() == 3);
  CHECK(cfg.get("missing.key", "fallback") == "fallback");

  CHECK_THROWS_AS(Config::parse_string("[oops\nk=v\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse_string("novalue\n"), ConfigError);
  CHECK_THROWS_AS(cfg.get_double("measure.kind", 0), ConfigError);
  CHECK_THROWS_AS(cfg.get_bool("measure.p", false), ConfigError);
}

TEST_CASE("canonical dump is sorted and hashable") {
  Config a = Config::parse_string("[b]\nk=1\n[a]\nk=2\n");
  Config b = Config::parse_string("[a]\nk=2\n[b]\nk=1\n");
  CHECK(a.canonical() == b.canonical());
  CHECK(config_hash(a.canonical()) == config_hash(b.canonical()));
  CHECK(config_hash("x") != config_hash("y"));
}

TEST_CASE("measure specs") {
  Measure m1 = measure_from_string("gaussian:a=1");
  CHECK(m1.potential().kind() == PotentialKind::gaussian);
  Measure m2 = measure_from_string("power:p=1.5,r=0.1");
  CHECK(m2.potential().param_p() == doctest::Approx(1.5));
  CHECK(m2.potential().param_r() == doctest::Approx(0.1));
  Measure m3 = measure_from_string("power:p=2,half_line");
  CHECK(m3.half_line());
  CHECK(m3.lo() == 0.0);
  Measure m4 = measure_from_string("gaussian:a=1,level=5");
  CHECK(m4.level() == 5);

  CHECK_THROWS_AS(measure_from_string("cauchy:a=1"), ConfigError);
  CHECK_THROWS_AS(measure_from_string("power:p=abc"), ConfigError);
  CHECK_THROWS_AS(measure_from_string("power:q=2"), ConfigError);
}

TEST_CASE("battery config validation") {
  Config cfg = Config::parse_string("[battery]\nsize = 0\n");
  CHECK_THROWS_AS(battery_from_config(cfg), ConfigError);
  Config ok = Config::parse_string("[battery]\nsize = 4\nseed = 7\n");
  BatterySpec spec = battery_from_config(ok);
  CHECK(spec.size == 4);
  CHECK(spec.seed == 7);
}

TEST_CASE("explicitly empty lists are allowed") {
  Config cfg = Config::parse_string("[beta]\ns_grid =\n");
  CHECK(cfg.get_list("beta.s_grid", {1.0}).empty());
  // Missing keys fall back.
  CHECK(cfg.get_list("beta.other", {3.0}).size() == 1);
}

TEST_CASE("format_double round-trips") {
  std::mt19937_64 rng(55);
  std::vector<double> vals = {0.0, 1.0, -1.0, 1.0 / 3.0, 1e-300, 1e300,
                              M_PI, std::sqrt(2.0)};
  for (int i = 0; i < 200; ++i) {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    vals.push_back((u - 0.5) * std::pow(10.0, static_cast<int>(rng() % 40) - 20));
  }
  for (double v : vals) {
    double back = std::strtod(format_double(v).c_str(), nullptr);
    CHECK(back == v);
  }
}

TEST_CASE("json round trip is bit exact") {
  Json j;
  j["values"] = {1.0 / 3.0, std::sqrt(2.0), 2.0, 1e-17, 6.02e23};
  std::string dumped = j.dump();
  Json back = Json::parse(dumped);
  for (std::size_t i = 0; i < j["values"].size(); ++i) {
    double a = j["values"][i].get<double>();
    double b = back["values"][i].get<double>();
    CHECK(a == b);
  }
  CHECK(back.dump() == dumped);
}

TEST_CASE("svg edge cases") {
  SvgOptions opt;
  opt.title = "empty";
  std::string empty = svg_line_plot({}, {}, opt);
  CHECK(empty.find("<svg") != std::string::npos);
  CHECK(empty.find("polyline") == std::string::npos);

  std::string single = svg_line_plot({2.0}, {3.0}, opt);
  CHECK(single.find("circle") != std::string::npos);
  CHECK(single.find("polyline") == std::string::npos);

  std::string line = svg_line_plot({1.0, 2.0, 3.0}, {1.0, 4.0, 9.0}, opt);
  CHECK(line.find("polyline") != std::string::npos);
  CHECK(line.find("generated") == std::string::npos);  // no timestamp

  opt.timestamp = true;
  CHECK(svg_line_plot({1.0, 2.0}, {1.0, 2.0}, opt).find("generated") !=
        std::string::npos);
}

}  // TEST_SUITE
