#include <doctest.h>

#include <atomic>
#include <string>

#include "hybcav/commands.hpp"
#include "hybcav/config.hpp"
#include "hybcav/errors.hpp"
#include "hybcav/output.hpp"

using namespace hybcav;
using doctest::Approx;

namespace {

const char* kSample = R"(# cavity
cavity.t_d_um = 4.0308
cavity.t_a_um = resonant
cavity.min_air_gap_um = 2   # comment after a value
mirrors.air.transmission_ppm = 50
mirrors.air.scatter_ppm = 24
mirrors.diamond.dbr_pairs = 12
dimple.roc_um = 20
vibration.sigma_nm = 0.1
sweep.variable = sigma_vib_nm
sweep.start = 0
sweep.stop = 0.3
sweep.steps = 7
sweep.sigma_da_nm = 0, 0.25, 0.5
)";

int error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return static_cast<int>(e.line());
  }
  return -1;
}

std::string error_key(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return {};
}

}  // namespace

TEST_CASE("parses values with units in the key names") {
  const auto c = parse_config(kSample);
  CHECK(c.t_d_um == 4.0308);
  CHECK_FALSE(c.t_a_um.has_value());
  CHECK(*c.min_air_gap_um == 2.0);
  CHECK(*c.air_mirror.transmission_ppm == 50.0);
  CHECK_FALSE(c.air_mirror.dbr_pairs.has_value());
  CHECK(*c.diamond_mirror.dbr_pairs == 12);
  CHECK(c.roc_um == 20.0);
  CHECK(c.sweep_sigma_da_nm == std::vector<double>{0.0, 0.25, 0.5});
  const auto values = sweep_values(c);
  REQUIRE(values.size() == 7);
  CHECK(values.front() == 0.0);
  CHECK(values.back() == Approx(0.3));
  CHECK(values[3] == Approx(0.15));
}

TEST_CASE("canonical text round-trips") {
  const auto c = parse_config(kSample);
  const auto text = canonical_text(c);
  const auto again = parse_config(text);
  CHECK(again == c);
  CHECK(canonical_text(again) == text);
  CHECK(config_hash(again) == config_hash(c));
  CHECK(config_hash(c).size() == 16);
  CHECK(parse_config("") == parse_config(canonical_text(parse_config(""))));
}

TEST_CASE("different configurations hash differently") {
  CHECK(config_hash(parse_config("cavity.t_d_um = 4")) !=
        config_hash(parse_config("cavity.t_d_um = 4.0000001")));
}

TEST_CASE("shortest round-trip number formatting") {
  for (double v : {0.1, 1.0 / 3.0, 637.0, 2.41, 1e-300, 6.02214076e23, -0.25}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(637.0) == "637");
}

TEST_CASE("errors name the line and key") {
  CHECK(error_line("cavity.t_d_um = 4\nbogus.key = 1\n") == 2);
  CHECK(error_key("cavity.t_d_um = 4\nbogus.key = 1\n") == "bogus.key");
  CHECK(error_line("cavity.t_d_um = 4\n\ncavity.t_d_um = 5\n") == 3);
  CHECK(error_line("cavity.n_d = abc\n") == 1);
  CHECK(error_line("cavity.n_d\n") == 1);
  CHECK(error_line("cavity.n_d =\n") == 1);
  CHECK(error_key("vibration.model = wobbly") == "vibration.model");
  CHECK(error_key("vibration.sensitivity = fuzzy") == "vibration.sensitivity");
  CHECK_THROWS_AS(parse_config("cavity.n_d = 0.5"), ConfigError);
  CHECK_THROWS_AS(parse_config("cavity.t_d_um = -1"), ConfigError);
  CHECK_THROWS_AS(parse_config("mirrors.air.dbr_pairs = 11\nmirrors.air.transmission_ppm = 50"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("dimple.depth_um = 0.3\ndimple.diameter_um = 7"), ConfigError);
  CHECK_THROWS_AS(parse_config("vibration.quadrature_points = 22"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/path.conf"), ConfigError);
}

TEST_CASE("configured cavity") {
  const auto c = parse_config("cavity.t_d_um = 4\ncavity.min_air_gap_um = 2\n");
  const auto cav = make_cavity(c);
  CHECK(cav.air_gap >= 2e-6);
  CHECK(cav.air_gap == Approx(hybrid::resonant_air_gap(4e-6, 637e-9, 2.41, cav.mode_order)));
  const auto snapped = make_cavity(c, std::nullopt, SnapMode::DiamondLike);
  CHECK(hybrid::classify(snapped) == hybrid::ModeClass::DiamondLike);
  const auto fixed = make_cavity(parse_config("cavity.t_a_um = 2.5"));
  CHECK(fixed.air_gap == Approx(2.5e-6));
}

TEST_CASE("rendered output echoes the configuration") {
  const auto c = parse_config(kSample);
  Table t;
  t.columns = {"x", "label", "n"};
  t.rows = {{0.1, std::string("a"), 3LL}, {std::numeric_limits<double>::quiet_NaN(), std::string("b"), 4LL}};
  t.summary = {{"best", 0.25}};
  const RunInfo info{"optimize", c};
  for (auto f : {Format::Csv, Format::Json}) {
    const auto doc = render(t, info, f);
    CHECK(config_from_output(doc) == c);
    CHECK(render(t, info, f) == doc);
  }
  const auto csv = render(t, info, Format::Csv);
  CHECK(csv.rfind("# {", 0) == 0);
  CHECK(csv.find("\nx,label,n\n0.1,a,3\n") != std::string::npos);
  CHECK(csv.find("nan,b,4") != std::string::npos);
  CHECK(render(t, info, Format::Json).find("null") != std::string::npos);
  CHECK(t.number(0, "x") == 0.1);
  CHECK_THROWS_AS(t.column("missing"), InvalidArgument);
}

TEST_CASE("worker pool keeps row order and reports the first failure") {
  const auto rows = parallel_rows(100, 4, [](std::size_t i) {
    return std::vector<Cell>{static_cast<long long>(i)};
  });
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(std::get<long long>(rows[i][0]) == static_cast<long long>(i));

  try {
    parallel_rows(50, 3, [](std::size_t i) -> std::vector<Cell> {
      if (i == 17 || i == 40) throw InvalidArgument("row " + std::to_string(i));
      return {};
    });
    FAIL("expected an exception");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()) == "row 17");
  }
}
