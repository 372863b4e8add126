#pragma once

#include <random>
#include <string>

#include "savpark/savpark.hpp"

namespace fx {

inline std::string scenario(const std::string& name) { return std::string(SAVPARK_SCENARIO_DIR) + "/" + name; }

// Twelve 2-hour windows; index 3 (07:00) and 8 (17:00) are congested.
inline std::vector<savpark::TimeWindow> day_windows() {
  std::vector<savpark::TimeWindow> ws;
  for (int k = 0; k < 12; ++k) {
    savpark::TimeWindow w;
    w.id = "w" + std::to_string(2 * k + 1);
    w.start_hour = 2.0 * k + 1.0;
    w.length_h = 2.0;
    w.speed = (k == 3 || k == 8) ? savpark::SpeedLevel::min : savpark::SpeedLevel::max;
    ws.push_back(w);
  }
  return ws;
}

inline savpark::ZoneSpec zone(const std::string& id, double area, double l, double vmin, double vmax, double cy) {
  savpark::ZoneSpec z;
  z.id = id;
  z.area_km2 = area;
  z.trip_length_source = savpark::TripLengthSource::given;
  z.trip_length_km = l;
  z.v_min = vmin;
  z.v_max = vmax;
  z.land_cost_cy = cy;
  return z;
}

/// Single-zone day with off-peak demand `off`, AM peak `am` (07:00) and PM peak `pm` (17:00).
inline savpark::ScenarioConfig single(double off, double am, double pm, savpark::ZoneSpec z) {
  savpark::ScenarioConfig cfg;
  cfg.zones = {z};
  cfg.windows = day_windows();
  for (std::size_t w = 0; w < cfg.windows.size(); ++w) {
    savpark::DemandMatrix m(1);
    m(0, 0) = w == 3 ? am : w == 8 ? pm : off;
    cfg.demand.by_window.push_back(m);
  }
  cfg.costs = {2.0, 35.616};
  return cfg;
}

inline savpark::ScenarioConfig seoul_like() { return single(181.93, 765.04, 836.94, zone("s", 605.24, 16.4, 18, 40, 4.73)); }

/// Two zones with a fixed per-window demand matrix pattern; cross demands scaled by `cross`.
inline savpark::ScenarioConfig two_zone(const savpark::ZoneSpec& a, const savpark::ZoneSpec& b,
                                        std::array<double, 3> aa, std::array<double, 3> bb, double cross) {
  savpark::ScenarioConfig cfg;
  cfg.zones = {a, b};
  cfg.windows = day_windows();
  for (std::size_t w = 0; w < cfg.windows.size(); ++w) {
    const int k = w == 3 ? 1 : w == 8 ? 2 : 0;
    savpark::DemandMatrix m(2);
    m(0, 0) = aa[k];
    m(1, 1) = bb[k];
    m(0, 1) = cross * aa[k] * 0.3;
    m(1, 0) = cross * bb[k] * 0.1;
    cfg.demand.by_window.push_back(m);
  }
  cfg.params.inter_zone_speed = {{{0.0, 25.0}, {25.0, 0.0}}};
  cfg.params.centroid_distance_km = 6.033;
  cfg.costs = {1.0, 35.616};
  return cfg;
}

/// Random single-zone problem inside the model's validity region: positive coefficients and a
/// cubic with three real roots. Draws outside that regime are rejected.
inline savpark::SingleZoneInputs random_inputs(std::mt19937_64& g);

inline savpark::SingleZoneInputs random_draw(std::mt19937_64& g) {
  auto U = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); };
  auto LU = [&](double lo, double hi) { return std::exp(U(std::log(lo), std::log(hi))); };
  savpark::SingleZoneInputs in;
  in.area = LU(10, 3000);
  in.trip_len = U(3, 30);
  in.v_min = U(10, 30);
  in.v_max = in.v_min * U(1.1, 3.0);
  in.lambda_max = LU(50, 3000);
  in.lambda_min = in.lambda_max * U(0.05, 0.5);
  in.p = U(0.8, 0.99);
  in.q = U(0.8, 0.99);
  in.alpha = U(1.0, 3.0);
  in.kappa = U(0.3, 0.7);
  in.h = U(1, 4);
  in.c_x = LU(0.1, 10);
  in.c_y = LU(0.1, 20);
  in.c_m = LU(10, 200);
  in.t0 = 10.0;  // loose enough that the stationary point is what gets tested
  return in;
}

inline savpark::SingleZoneInputs random_inputs(std::mt19937_64& g) {
  for (;;) {
    const auto in = random_draw(g);
    try {
      const auto c = savpark::assemble_coefficients(in);
      if (savpark::numerics::cubic_discriminant({-c.pm1 / c.p1, -2 * c.pm2 / c.p1}) > 0) return in;
    } catch (const savpark::RegimeError&) {
    }
  }
}

}  // namespace fx
