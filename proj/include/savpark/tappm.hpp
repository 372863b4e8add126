#pragma once

// Two-zone planning model. Each zone has its own access time T_i (defined at the zone's slowest
// intra-zonal speed). Cost is separable in (T_1, T_2) once relocation is fixed by the demand
// matrix, and is minimized numerically over the LOS-feasible box.

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "savpark/error.hpp"
#include "savpark/fleet_states.hpp"
#include "savpark/numerics.hpp"
#include "savpark/sappm.hpp"
#include "savpark/scenario.hpp"

namespace savpark {

struct RelocationFlow {
  int from = -1;  // zone index vehicles relocate from, -1 when balanced
  int to = -1;
  double rate = 0.0;                      // veh/hr
  std::array<double, 2> n_r{0.0, 0.0};    // relocating vehicles counted per zone
};

/// Directed imbalance of inter-zonal trips in one window. Vehicles pile up in the zone that
/// receives the larger flow and are sent back; the transit is counted in the origin zone of the
/// relocation trip.
inline RelocationFlow relocation_requirements(const ScenarioConfig& cfg, std::size_t window) {
  if (cfg.zone_count() != 2) throw DomainError("relocation_requirements: two-zone scenario required");
  const double f12 = cfg.lambda(window, 0, 1) * cfg.zones[0].area_km2;
  const double f21 = cfg.lambda(window, 1, 0) * cfg.zones[1].area_km2;
  RelocationFlow r;
  if (f12 > f21) {
    r.from = 1;
    r.to = 0;
    r.rate = f12 - f21;
    r.n_r[1] = r.rate * trip_length(cfg, 1, 0) / speed(cfg, 1, 0, window);
  } else if (f21 > f12) {
    r.from = 0;
    r.to = 1;
    r.rate = f21 - f12;
    r.n_r[0] = r.rate * trip_length(cfg, 0, 1) / speed(cfg, 0, 1, window);
  }
  return r;
}

/// Access time in a window for zone i, given the design access time at the zone's v_min.
inline double window_access_time(const ScenarioConfig& cfg, std::size_t zone, std::size_t window, double t1a) {
  return t1a * cfg.zones[zone].v_min / intra_speed(cfg.zones[zone], cfg.windows[window]);
}

inline double zone_station_density(const ScenarioConfig& cfg, std::size_t zone, double t1a) {
  return station_density_from_access_time(t1a, cfg.zones[zone].v_min, cfg.params.kappa);
}

inline FleetStateBreakdown zone_state_requirements(const ScenarioConfig& cfg, std::size_t zone, std::size_t window,
                                                   double t1a, ConfidenceRegime regime = ConfidenceRegime::general) {
  if (cfg.zone_count() != 2) throw DomainError("zone_state_requirements: two-zone scenario required");
  if (zone > 1) throw DomainError("zone_state_requirements: zone index out of range");
  if (!(t1a > 0.0)) throw DomainError("zone_state_requirements: access time must be positive");
  const std::size_t i = zone, j = 1 - zone;
  const ModelParams& mp = cfg.params;
  const double ri = cfg.zones[i].area_km2, rj = cfg.zones[j].area_km2;
  const double lii = cfg.lambda(window, i, i), lij = cfg.lambda(window, i, j), lji = cfg.lambda(window, j, i);
  const double t_w = window_access_time(cfg, i, window, t1a);
  const double x = zone_station_density(cfg, i, t1a);
  const double pa = regime == ConfidenceRegime::trough ? 1.0 : mp.p;
  const double qc = regime == ConfidenceRegime::peak ? 1.0 : mp.q;

  FleetStateBreakdown b;
  b.n_a = required_A(lii + lij, ri, t_w, pa, mp.alpha);
  b.n_s = required_S(lii, ri, trip_length(cfg, i, i), speed(cfg, i, i, window)) +
          required_S(lij, ri, trip_length(cfg, i, j), speed(cfg, i, j, window));
  // inflow: intra trips plus trips arriving from the other zone
  b.n_c = (lii * ri + lji * rj) * t_w * confidence_factor(qc, mp.alpha);
  const double out = lii + lij;
  b.n_p = out > 0.0 ? required_P(out, ri, mp.rebalance_interval_h, mp.mean_to_variance, x, mp.p) : 0.0;
  b.n_r = relocation_requirements(cfg, window).n_r[i];
  return b;
}

struct TwoZonePlan {
  std::array<double, 2> t1a{};
  std::array<double, 2> ta{};
  std::array<double, 2> x{};
  std::array<double, 2> y{};
  std::array<double, 2> z{};
  std::array<double, 2> m{};
  double m_total = 0.0;
  double cost_total = 0.0;
  double cost_stations = 0.0;
  std::array<double, 2> cost_spaces{};
  double cost_fleet = 0.0;
  std::array<std::size_t, 2> t_max{};
  std::array<std::size_t, 2> t_min{};
  std::array<bool, 2> at_upper_bound{};
  std::array<std::vector<FleetStateBreakdown>, 2> by_window;  // regime: trough at t_min, peak elsewhere
  std::vector<RelocationFlow> relocation;
  bool feasible = true;
  FactorMode factor_mode = FactorMode::eq26;
};

/// Largest design access time meeting the LOS bound in every window of the zone.
inline double zone_access_upper_bound(const ScenarioConfig& cfg, std::size_t zone, FactorMode mode) {
  double ratio = std::numeric_limits<double>::infinity();
  for (const auto& w : cfg.windows) ratio = std::min(ratio, intra_speed(cfg.zones[zone], w) / cfg.zones[zone].v_min);
  return cfg.params.t0_h / los_factor(mode, cfg.params.p, cfg.params.alpha) * ratio;
}

struct ZoneDesign {
  double x = 0.0, y = 0.0, m = 0.0;
  std::size_t t_max = 0, t_min = 0;
  std::vector<FleetStateBreakdown> by_window;
};

/// Zone i's fleet and parking requirement at design access time t1a.
inline ZoneDesign zone_design(const ScenarioConfig& cfg, std::size_t zone, double t1a) {
  const std::size_t i = zone, j = 1 - zone;
  const std::size_t nw = cfg.windows.size();
  ZoneDesign d;
  d.x = zone_station_density(cfg, i, t1a);

  double best_max = -std::numeric_limits<double>::infinity();
  double best_min = std::numeric_limits<double>::infinity();
  std::vector<FleetStateBreakdown> peak(nw), trough(nw);
  auto earlier = [&](std::size_t a, std::size_t b) { return cfg.windows[a].start_hour < cfg.windows[b].start_hour; };
  for (std::size_t w = 0; w < nw; ++w) {
    peak[w] = zone_state_requirements(cfg, i, w, t1a, ConfidenceRegime::peak);
    trough[w] = zone_state_requirements(cfg, i, w, t1a, ConfidenceRegime::trough);
    const double hi = peak[w].m_req(), lo = trough[w].m_req();
    if (hi > best_max || (hi == best_max && earlier(w, d.t_max))) {
      best_max = hi;
      d.t_max = w;
    }
    if (lo < best_min || (lo == best_min && earlier(w, d.t_min))) {
      best_min = lo;
      d.t_min = w;
    }
  }
  d.m = best_max;

  const ModelParams& mp = cfg.params;
  const std::size_t tm = d.t_min;
  const double ri = cfg.zones[i].area_km2, rj = cfg.zones[j].area_km2;
  const double inflow = cfg.lambda(tm, i, i) * ri + cfg.lambda(tm, j, i) * rj;
  // buffer at the trough scales with the trough speed, as in the single-zone space density
  const double speed_ratio = cfg.zones[i].v_min / intra_speed(cfg.zones[i], cfg.windows[tm]);
  const double buffer = normal_quantile(mp.q) * std::sqrt(2.0 * inflow * mp.rebalance_interval_h *
                                                          mp.mean_to_variance * d.x) * speed_ratio;
  const double parked_at_min = d.m - trough[tm].running();
  d.y = (parked_at_min + buffer) / ri;

  d.by_window.resize(nw);
  for (std::size_t w = 0; w < nw; ++w) {
    d.by_window[w] = w == tm ? trough[w] : peak[w];
    d.by_window[w].n_p = d.m - d.by_window[w].running();
  }
  return d;
}

struct TwoZoneEvaluation {
  double cost = 0.0;
  bool feasible = true;
  TwoZonePlan plan;
};

inline TwoZoneEvaluation evaluate_two_zone_cost(const ScenarioConfig& cfg, double t1a_1, double t1a_2,
                                                FactorMode mode = FactorMode::eq26) {
  if (cfg.zone_count() != 2) throw DomainError("evaluate_two_zone_cost: two-zone scenario required");
  if (!(t1a_1 > 0.0) || !(t1a_2 > 0.0)) throw DomainError("evaluate_two_zone_cost: access times must be positive");
  TwoZoneEvaluation ev;
  TwoZonePlan& plan = ev.plan;
  plan.factor_mode = mode;
  plan.t1a = {t1a_1, t1a_2};
  const double f = los_factor(mode, cfg.params.p, cfg.params.alpha);
  for (std::size_t i = 0; i < 2; ++i) {
    const double ub = zone_access_upper_bound(cfg, i, mode);
    if (plan.t1a[i] > ub * (1.0 + 1e-12)) {
      ev.feasible = false;
      plan.feasible = false;
    }
    const ZoneDesign d = zone_design(cfg, i, plan.t1a[i]);
    if (!(d.y >= 0.0))
      throw RegimeError("y_star", "space density in zone '" + cfg.zones[i].id + "' is negative");
    plan.ta[i] = plan.t1a[i] * f;
    plan.x[i] = d.x;
    plan.y[i] = d.y;
    plan.z[i] = d.y / d.x;
    plan.m[i] = d.m;
    plan.t_max[i] = d.t_max;
    plan.t_min[i] = d.t_min;
    plan.by_window[i] = d.by_window;
  }
  const double r1 = cfg.zones[0].area_km2, r2 = cfg.zones[1].area_km2;
  plan.m_total = plan.m[0] + plan.m[1];
  plan.cost_stations = cfg.costs.c_x * (plan.x[0] * r1 + plan.x[1] * r2);
  plan.cost_spaces = {cfg.zones[0].land_cost_cy * plan.y[0] * r1, cfg.zones[1].land_cost_cy * plan.y[1] * r2};
  plan.cost_fleet = cfg.costs.c_m * plan.m_total;
  plan.cost_total = plan.cost_stations + plan.cost_spaces[0] + plan.cost_spaces[1] + plan.cost_fleet;
  for (std::size_t w = 0; w < cfg.windows.size(); ++w) plan.relocation.push_back(relocation_requirements(cfg, w));
  ev.cost = plan.cost_total;
  return ev;
}

inline TwoZonePlan solve_two_zone(const ScenarioConfig& cfg, FactorMode mode = FactorMode::eq26) {
  require_valid(cfg);
  if (cfg.zone_count() != 2) throw DomainError("solve_two_zone: two-zone scenario required");
  if (!(cfg.costs.c_m > 0.0)) throw RegimeError("C_m", "fleet cost C_m must be positive");
  constexpr double lower = 1e-5;
  numerics::Box2D box;
  const double ub1 = zone_access_upper_bound(cfg, 0, mode), ub2 = zone_access_upper_bound(cfg, 1, mode);
  if (!(ub1 > lower) || !(ub2 > lower))
    throw InfeasibleError("LOS constraint T_A <= T0 leaves no feasible access time above 1e-5 h in zone '" +
                          cfg.zones[ub1 > lower ? 1 : 0].id + "'");
  box.u = {lower, ub1};
  box.v = {lower, ub2};
  const auto best = numerics::minimize_box_2d(
      [&](double a, double b) { return evaluate_two_zone_cost(cfg, a, b, mode).cost; }, box, 1e-7);
  TwoZonePlan plan = evaluate_two_zone_cost(cfg, best.argmin[0], best.argmin[1], mode).plan;
  plan.at_upper_bound = {plan.t1a[0] >= ub1 * (1.0 - 1e-9), plan.t1a[1] >= ub2 * (1.0 - 1e-9)};
  return plan;
}

}  // namespace savpark
