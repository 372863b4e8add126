#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "json.hpp"

using namespace savpark;

namespace {

const char* kMini = R"(# one zone, two windows
[zone.a]
area = 10
trip_length = 5
v_min = 18
v_max = 36
land_cost = 1.5

[window.day]
start = 6
length = 12
speed = min

[window.night]
start = 18
length = 12

[demand]
offpeak a a 20
day     a a 100   # peak

[params]
p = 0.9
q = 0.9
T0_min = 1
H = 12

[costs]
C_x = 1/2
C_m = 30
)";

ScenarioConfig parse(const std::string& s) {
  std::istringstream is(s);
  return io::parse_scenario(is);
}

}  // namespace

TEST(ScenarioFile, ParsesAndDefaults) {
  const auto cfg = parse(kMini);
  ASSERT_EQ(cfg.zones.size(), 1u);
  EXPECT_EQ(cfg.zones[0].id, "a");
  EXPECT_EQ(cfg.windows[0].speed, SpeedLevel::min);
  EXPECT_EQ(cfg.windows[1].speed, SpeedLevel::max);
  EXPECT_EQ(cfg.lambda(0, 0, 0), 100);
  EXPECT_EQ(cfg.lambda(1, 0, 0), 20);  // inherited from offpeak
  EXPECT_NEAR(cfg.params.t0_h, 1.0 / 60, 1e-15);
  EXPECT_EQ(cfg.costs.c_x, 0.5);
  EXPECT_EQ(cfg.params.alpha, 2.0);
  EXPECT_TRUE(validate_scenario(cfg).empty());
}

TEST(ScenarioFile, Errors) {
  std::string s = kMini;
  EXPECT_THROW(parse(s + "[bogus]\n"), IoError);
  EXPECT_THROW(parse(s + "[params]\ngamma = 3\n"), IoError);
  EXPECT_THROW(parse(s + "[demand]\nevening a a 5\n"), IoError);
  EXPECT_THROW(parse(s + "[demand]\nday a b 5\n"), IoError);
  EXPECT_THROW(parse(s + "[demand]\nday a 5\n"), IoError);
  EXPECT_THROW(parse(s + "[costs]\nC_m = abc\n"), IoError);
  EXPECT_THROW(parse(s + "[costs]\nC_m = 3/0\n"), IoError);
  EXPECT_THROW(parse("area = 3\n"), IoError);
  EXPECT_THROW(parse("[zone.a\n"), IoError);
  EXPECT_THROW(io::load_scenario("/nonexistent/x.scn"), IoError);
}

TEST(ScenarioFile, TwoZoneSpeeds) {
  const auto cfg = io::load_scenario(fx::scenario("seoul_gyeonggi_personal.scn"));
  EXPECT_EQ(cfg.zones[0].trip_length_source, TripLengthSource::approximated);
  EXPECT_EQ(cfg.params.inter_zone_speed[0][1], 25);
  EXPECT_EQ(cfg.params.inter_zone_speed[1][0], 25);
  std::string s = kMini;
  const auto pos = s.find("[window.day]");
  s.insert(pos, "[zone.b]\narea = 20\ntrip_length = approx\nv_min = 20\nv_max = 40\nland_cost = 1\n\n");
  s += "[params]\ninter_zone_speed = 30\ninter_zone_speed.b.a = 22\ncentroid_distance = 4\n";
  const auto two = parse(s);
  EXPECT_EQ(two.params.inter_zone_speed[0][1], 30);
  EXPECT_EQ(two.params.inter_zone_speed[1][0], 22);
  EXPECT_EQ(two.lambda(0, 1, 1), 0.0);
}

TEST(ScenarioFile, ShippedScenariosValidate) {
  for (const char* f : {"seoul_personal.scn", "seoul_allmode.scn", "seoul_gyeonggi_personal.scn",
                        "seoul_gyeonggi_allmode.scn"})
    EXPECT_TRUE(validate_scenario(io::load_scenario(fx::scenario(f))).empty()) << f;
}

TEST(SimFile, Parses) {
  std::istringstream is("[sim]\nregion_side = 5\nx = 4\nz = 3\nm = 20\nlambda = 7\nv = 15\nseed = 18446744073709551615\n"
                        "metric = euclidean\nallow_c_to_a = true\n");
  const auto sc = io::parse_sim_config(is);
  EXPECT_EQ(sc.region_side_km, 5);
  EXPECT_EQ(sc.seed, 18446744073709551615ull);
  EXPECT_EQ(sc.metric, des::Metric::euclidean);
  EXPECT_TRUE(sc.allow_c_to_a);
  std::istringstream bad("[sim]\nseed = -1\n");
  EXPECT_THROW(io::parse_sim_config(bad), IoError);
  std::istringstream bad2("[sim]\nmetric = chebyshev\n");
  EXPECT_THROW(io::parse_sim_config(bad2), IoError);
}

TEST(SweepFile, RangesAndValuesMerge) {
  const auto spec = io::load_sweep_spec(fx::scenario("cm_cy.sweep"));
  ASSERT_EQ(spec.axes.size(), 2u);
  EXPECT_EQ(spec.axes[0].param, "c_m");
  EXPECT_EQ(spec.axes[0].values.size(), 171u + 2u);
  EXPECT_EQ(spec.axes[1].values.size(), 200u + 1u);
  EXPECT_EQ(spec.axes[1].values.back(), 20.0);
  EXPECT_EQ(spec.axes[1].values.front(), 0.1);
  EXPECT_TRUE(std::is_sorted(spec.axes[0].values.begin(), spec.axes[0].values.end()));
  EXPECT_TRUE(io::validate_sweep_spec(spec).empty());
  ASSERT_EQ(spec.fixed.size(), 1u);
  EXPECT_EQ(spec.fixed[0].first, "c_x");
}

TEST(SweepFile, DuplicatesCollapse) {
  std::istringstream is("[sweep]\naxis1 = c_x\naxis1.values = 1, 2, 2, 1.5\n");
  const auto spec = io::parse_sweep_spec(is);
  EXPECT_EQ(spec.axes[0].values, (std::vector<double>{1, 1.5, 2}));
}

TEST(SweepFile, Errors) {
  std::istringstream a("[sweep]\naxis3 = c_x\n");
  EXPECT_THROW(io::parse_sweep_spec(a), IoError);
  std::istringstream b("[sweep]\naxis1.range = 5:1:1\n");
  EXPECT_THROW(io::parse_sweep_spec(b), IoError);
  std::istringstream c("[sweep]\naxis1.range = 1:5\n");
  EXPECT_THROW(io::parse_sweep_spec(c), IoError);
}

TEST(SweepFile, SemanticViolations) {
  io::SweepSpec spec;
  auto codes = [&] {
    std::vector<std::string> out;
    for (const auto& v : io::validate_sweep_spec(spec)) out.push_back(v.code);
    return out;
  };
  EXPECT_EQ(codes(), std::vector<std::string>{"sweep_axes"});
  spec.axes = {{"kappa", {1, 2}}};
  EXPECT_EQ(codes(), std::vector<std::string>{"sweep_param"});
  spec.axes = {{"c_m", {}}};
  EXPECT_EQ(codes(), std::vector<std::string>{"sweep_values"});
  spec.axes = {{"c_m", {2, 1}}};
  EXPECT_EQ(codes(), std::vector<std::string>{"sweep_values"});
  spec.axes = {{"c_m", {1}}, {"c_m", {2}}};
  EXPECT_EQ(codes(), std::vector<std::string>{"sweep_axes"});
}

TEST(Numbers, RatiosAndRanges) {
  EXPECT_NEAR(io::parse_number("1/60"), 1.0 / 60, 1e-15);
  EXPECT_EQ(io::parse_number(" 2.5 "), 2.5);
  EXPECT_THROW(io::parse_number("2.5x"), IoError);
  EXPECT_THROW(io::parse_number(""), IoError);
  const auto r = io::expand_range("0.1:0.5:0.1");
  EXPECT_EQ(r, (std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5}));
}

TEST(Baseline, Parses) {
  const auto b = io::load_baseline(fx::scenario("seoul_current.baseline"));
  EXPECT_EQ(b.at("x"), 524.09);
  EXPECT_EQ(b.at("yR/m"), 1.601);
  std::istringstream bad("[current]\nx = 1\n");
  EXPECT_THROW(io::parse_baseline(bad), IoError);
}

TEST(Report, DeltaFormatting) {
  EXPECT_EQ(report::format_delta(report::percent_delta(11.66, 524.09)), "-97.78%");
  EXPECT_EQ(report::format_delta(report::percent_delta(5, 0.0)), "n/a");
  EXPECT_EQ(report::format_delta(report::percent_delta(5, std::nullopt)), "n/a");
  EXPECT_EQ(report::format_delta(report::percent_delta(3, 2)), "+50.00%");
  EXPECT_EQ(report::sig6(477945.6123), "477946");
  EXPECT_EQ(report::sig6(0.0001234567), "0.000123457");
}

TEST(Report, ZeroBaselineFieldIsNa) {
  const auto plan = solve_single_zone(fx::seoul_like());
  io::Baseline b{{"x", 0.0}, {"y", 7150.72}};
  const auto t = report::render_plan(plan, report::Format::table, &b);
  EXPECT_NE(t.find("(n/a)"), std::string::npos);
  EXPECT_NE(t.find("%)"), std::string::npos);
}

TEST(Report, SeoulTableAgainstBaseline) {
  const auto plan = solve_single_zone(io::load_scenario(fx::scenario("seoul_personal.scn")));
  const auto b = io::load_baseline(fx::scenario("seoul_current.baseline"));
  const auto t = report::render_plan(plan, report::Format::table, &b);
  for (const char* row : {"x ", "y ", "z ", "m ", "yR/m"}) EXPECT_NE(t.find(row), std::string::npos) << row;
  EXPECT_NE(t.find("cost_usd_per_day"), std::string::npos);
  const auto dx = report::percent_delta(plan.x_star, b.at("x"));
  EXPECT_NEAR(*dx, -97.75, 0.1);
}

TEST(Report, PlanCsvAndJson) {
  const auto plan = solve_single_zone(fx::seoul_like());
  const auto csv = report::render_plan(plan, report::Format::csv);
  std::istringstream is(csv);
  std::string header, row, extra;
  std::getline(is, header);
  std::getline(is, row);
  EXPECT_EQ(header, report::csv_header());
  EXPECT_FALSE(std::getline(is, extra));
  EXPECT_EQ(row.substr(0, 2), ",,");
  const auto j = nlohmann::json::parse(report::render_plan(plan, report::Format::json));
  EXPECT_DOUBLE_EQ(j["x_star"].get<double>(), plan.x_star);
  EXPECT_EQ(j["factor_mode"], "eq26");
  EXPECT_EQ(j["breakdown_at_tmax"]["n_R"], 0.0);
}

TEST(Report, TwoZoneJson) {
  const auto cfg = io::load_scenario(fx::scenario("seoul_gyeonggi_personal.scn"));
  const auto plan = solve_two_zone(cfg);
  const auto j = nlohmann::json::parse(report::render_plan(cfg, plan, report::Format::json));
  EXPECT_EQ(j["zones"].size(), 2u);
  EXPECT_EQ(j["zones"][0]["by_window"].size(), 12u);
  EXPECT_EQ(j["relocation"]["am"]["from"], "seoul");
  EXPECT_DOUBLE_EQ(j["M"].get<double>(), plan.m_total);
  const auto csv = report::render_plan(cfg, plan, report::Format::csv);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(Report, FormatNames) {
  EXPECT_EQ(report::parse_format("json"), report::Format::json);
  EXPECT_THROW(report::parse_format("xml"), DomainError);
}

TEST(Report, SweepCsvRoundTrip) {
  SweepResult res;
  res.axis_names = {"c_m", "c_y"};
  res.shape = {2, 3};
  for (double a : {30.0, 183.36})
    for (double b : {0.1, 4.73, 20.0}) {
      SweepRecord r;
      r.axis1 = a;
      r.axis2 = b;
      r.ok = !(a == 30.0 && b == 0.1);
      if (r.ok) {
        r.cost = a * 1e5 + b;
        r.ta_min = 0.98765432;
        r.m = 477944.71;
        r.x = 11.6612;
        r.y = 718.2234;
        r.z = r.y / r.x;
        r.binding = b > 1;
      } else {
        r.error = "regime:P1";
      }
      res.records.push_back(r);
    }
  const auto text = report::render_sweep(res, report::Format::csv);
  EXPECT_EQ(text.substr(0, text.find('\n')), report::csv_header());
  const auto back = report::parse_sweep_csv(text);
  EXPECT_EQ(back.shape, res.shape);
  ASSERT_EQ(back.records.size(), res.records.size());
  EXPECT_FALSE(back.records[0].ok);
  EXPECT_EQ(back.records[0].error, "regime:P1");
  EXPECT_EQ(report::render_sweep(back, report::Format::csv), text);
  for (std::size_t k = 1; k < res.records.size(); ++k) {
    EXPECT_NEAR(back.records[k].x, res.records[k].x, 1e-5 * res.records[k].x);
    EXPECT_EQ(back.records[k].binding, res.records[k].binding);
  }
}

TEST(Report, SingleCellSweepCsv) {
  SweepResult res;
  res.axis_names = {"c_m"};
  res.shape = {1};
  SweepRecord r;
  r.axis1 = 35.616;
  r.ok = true;
  res.records.push_back(r);
  const auto text = report::render_sweep(res, report::Format::csv);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  const auto back = report::parse_sweep_csv(text);
  EXPECT_EQ(back.shape, std::vector<std::size_t>{1});
  EXPECT_TRUE(std::isnan(back.records[0].axis2));
}

TEST(Report, SimStatsJson) {
  des::SimStats s;
  s.mean_wait_h = 0.01;
  s.occ_p = 5;
  const auto j = nlohmann::json::parse(report::render_sim_stats(s));
  EXPECT_EQ(j["mean_wait_h"], 0.01);
  EXPECT_EQ(j["occupancy"]["n_P"], 5.0);
}
