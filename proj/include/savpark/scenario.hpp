#pragma once

// Problem-instance types for the parking planning models, their validation, and a couple of
// derived scenario quantities (amortized land cost, approximate zone-to-zone trip lengths).
//
// Units are positional and fixed everywhere: km, km^2, hours, km/hr, $/day, vehicles.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "savpark/error.hpp"

namespace savpark {

/// Which intra-zonal ground speed applies during a window.
enum class SpeedLevel { min, max };

struct TimeWindow {
  std::string id;
  double start_hour = 0.0;  // [0, 24)
  double length_h = 0.0;    // equals the rebalancing interval H
  SpeedLevel speed = SpeedLevel::max;
};

/// How the intra-zonal mean trip length is obtained. Both are used in practice: survey values,
/// or the uniform-point approximation with zero centroid distance.
enum class TripLengthSource { given, approximated };

struct ZoneSpec {
  std::string id;
  double area_km2 = 0.0;
  TripLengthSource trip_length_source = TripLengthSource::given;
  double trip_length_km = 0.0;  // only read when trip_length_source == given
  double v_min = 0.0;           // km/hr, congested
  double v_max = 0.0;           // km/hr, free flow
  double land_cost_cy = 0.0;    // $/space/day
};

/// Square matrix of unit demands lambda_ij [veh/km^2/hr], origin-based (divided by origin area).
class DemandMatrix {
public:
  DemandMatrix() = default;
  explicit DemandMatrix(std::size_t n) : n_(n), v_(n * n, 0.0) {}
  DemandMatrix(std::size_t n, std::vector<double> row_major) : n_(n), v_(std::move(row_major)) {
    if (v_.size() != n_ * n_) throw DomainError("DemandMatrix: element count does not match n*n");
  }

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t origin, std::size_t dest) const { return v_.at(origin * n_ + dest); }
  double& operator()(std::size_t origin, std::size_t dest) { return v_.at(origin * n_ + dest); }

  double total() const { return std::accumulate(v_.begin(), v_.end(), 0.0); }
  const std::vector<double>& values() const noexcept { return v_; }

  friend bool operator==(const DemandMatrix&, const DemandMatrix&) = default;

private:
  std::size_t n_ = 0;
  std::vector<double> v_;
};

/// One demand matrix per time window, aligned with ScenarioConfig::windows.
struct DemandProfile {
  std::vector<DemandMatrix> by_window;
};

struct ModelParams {
  double p = 0.95;                   // P(served from nearest station)
  double q = 0.95;                   // P(nearest station not full on return)
  double alpha = 2.0;                // T^2_A / T^1_A
  double mean_to_variance = 1.0;     // I
  double kappa = 0.5;                // E[d] ~ kappa / sqrt(x)
  double t0_h = 1.0 / 60.0;          // max average wait
  double rebalance_interval_h = 2.0; // H
  // Two-zone only. Index [origin][dest]; diagonal unused.
  std::array<std::array<double, 2>, 2> inter_zone_speed{};
  double centroid_distance_km = 0.0;
};

struct CostParams {
  double c_x = 0.0;  // $/station/day
  double c_m = 0.0;  // $/veh/day
};

struct ScenarioConfig {
  std::vector<ZoneSpec> zones;
  std::vector<TimeWindow> windows;
  DemandProfile demand;
  ModelParams params;
  CostParams costs;

  std::size_t zone_count() const noexcept { return zones.size(); }
  double lambda(std::size_t window, std::size_t origin, std::size_t dest) const {
    return demand.by_window.at(window)(origin, dest);
  }
};

struct Violation {
  std::string code;
  std::string message;
};

inline double mean_trip_length(const ZoneSpec& zone_i, const ZoneSpec& zone_j, double centroid_distance_km) {
  if (!(zone_i.area_km2 > 0.0) || !(zone_j.area_km2 > 0.0))
    throw DomainError("mean_trip_length: zone areas must be positive");
  if (!(centroid_distance_km >= 0.0) || !std::isfinite(centroid_distance_km))
    throw DomainError("mean_trip_length: centroid distance must be finite and >= 0");
  // Mean distance from a uniform point to its zone centroid is approximated as sqrt(0.09 R).
  return std::sqrt(0.18 * (zone_i.area_km2 + zone_j.area_km2) + centroid_distance_km * centroid_distance_km);
}

inline double intra_trip_length(const ZoneSpec& zone) {
  if (zone.trip_length_source == TripLengthSource::given) return zone.trip_length_km;
  return mean_trip_length(zone, zone, 0.0);
}

/// Mean O-D trip length between zones; intra-zonal pairs honour the zone's explicit choice.
inline double trip_length(const ScenarioConfig& cfg, std::size_t origin, std::size_t dest) {
  if (origin == dest) return intra_trip_length(cfg.zones.at(origin));
  return mean_trip_length(cfg.zones.at(origin), cfg.zones.at(dest), cfg.params.centroid_distance_km);
}

inline double intra_speed(const ZoneSpec& zone, const TimeWindow& window) {
  return window.speed == SpeedLevel::min ? zone.v_min : zone.v_max;
}

/// Average speed for trips origin -> dest in a window. Inter-zonal speeds are constant over the day.
inline double speed(const ScenarioConfig& cfg, std::size_t origin, std::size_t dest, std::size_t window) {
  if (origin == dest) return intra_speed(cfg.zones.at(origin), cfg.windows.at(window));
  return cfg.params.inter_zone_speed.at(origin).at(dest);
}

/// Daily annuity payment equivalent to buying land for one parking space.
inline double amortized_daily_land_cost(double land_price_per_m2, double space_area_m2, double annual_rate,
                                        double horizon_years) {
  for (double v : {land_price_per_m2, space_area_m2, annual_rate, horizon_years})
    if (!std::isfinite(v)) throw DomainError("amortized_daily_land_cost: non-finite input");
  if (land_price_per_m2 < 0.0 || !(space_area_m2 > 0.0) || annual_rate < 0.0 || !(horizon_years > 0.0))
    throw DomainError("amortized_daily_land_cost: input outside domain");

  const double principal = land_price_per_m2 * space_area_m2;
  const double periods = 365.0 * horizon_years;
  if (annual_rate == 0.0) return principal / periods;
  const double daily_rate = annual_rate / 365.0;
  // 1 - (1+r)^-n, written to stay accurate as r -> 0
  const double discount = -std::expm1(-periods * std::log1p(daily_rate));
  return principal * daily_rate / discount;
}

/// Index of the window with the highest (or lowest) total demand; ties go to the earliest start.
inline std::size_t extreme_demand_window(const ScenarioConfig& cfg, bool highest) {
  if (cfg.windows.empty()) throw ValidationError("scenario has no time windows");
  std::size_t best = 0;
  for (std::size_t w = 1; w < cfg.windows.size(); ++w) {
    const double cand = cfg.demand.by_window.at(w).total();
    const double cur = cfg.demand.by_window.at(best).total();
    const bool better = highest ? cand > cur : cand < cur;
    const bool tie_earlier = cand == cur && cfg.windows[w].start_hour < cfg.windows[best].start_hour;
    if (better || tie_earlier) best = w;
  }
  return best;
}

inline std::size_t max_demand_window(const ScenarioConfig& cfg) { return extreme_demand_window(cfg, true); }
inline std::size_t min_demand_window(const ScenarioConfig& cfg) { return extreme_demand_window(cfg, false); }

namespace detail {

inline std::string fmt_num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

inline bool finite_all(std::initializer_list<double> vs) {
  return std::all_of(vs.begin(), vs.end(), [](double v) { return std::isfinite(v); });
}

inline void check_windows(const ScenarioConfig& cfg, std::vector<Violation>& out) {
  const auto& ws = cfg.windows;
  if (ws.empty()) {
    out.push_back({"windows_empty", "scenario defines no time windows"});
    return;
  }
  constexpr double eps = 1e-9;
  std::set<std::string> ids;
  double total = 0.0;
  bool lengths_ok = true;
  for (const auto& w : ws) {
    if (!ids.insert(w.id).second) out.push_back({"window_id", "duplicate window id '" + w.id + "'"});
    if (!std::isfinite(w.start_hour) || w.start_hour < 0.0 || w.start_hour >= 24.0)
      out.push_back({"window_start", "window '" + w.id + "' start_hour must lie in [0,24)"});
    if (!(w.length_h > 0.0) || !std::isfinite(w.length_h)) {
      out.push_back({"window_length", "window '" + w.id + "' length must be positive"});
      lengths_ok = false;
    } else if (std::abs(w.length_h - cfg.params.rebalance_interval_h) > eps) {
      out.push_back({"window_length", "window '" + w.id + "' length " + fmt_num(w.length_h) +
                                          " differs from rebalancing interval H=" +
                                          fmt_num(cfg.params.rebalance_interval_h)});
    }
    total += w.length_h;
  }
  if (!lengths_ok) return;
  if (std::abs(total - 24.0) > 1e-6)
    out.push_back({"window_partition", "window lengths sum to " + fmt_num(total) + " h, not 24 h"});

  std::vector<const TimeWindow*> sorted;
  for (const auto& w : ws) sorted.push_back(&w);
  std::sort(sorted.begin(), sorted.end(),
            [](const TimeWindow* a, const TimeWindow* b) { return a->start_hour < b->start_hour; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const TimeWindow& a = *sorted[i];
    const TimeWindow& b = *sorted[(i + 1) % sorted.size()];
    const double next_start = (i + 1 == sorted.size()) ? b.start_hour + 24.0 : b.start_hour;
    if (sorted.size() > 1 && a.start_hour + a.length_h > next_start + eps) {
      out.push_back({"window_overlap", "windows '" + a.id + "' and '" + b.id + "' overlap"});
    }
  }
}

}  // namespace detail

/// Every invariant violation in the config. Empty means all solver preconditions hold.
inline std::vector<Violation> validate_scenario(const ScenarioConfig& cfg) {
  std::vector<Violation> out;
  const std::size_t nz = cfg.zones.size();
  if (nz < 1 || nz > 2) out.push_back({"zone_count", "scenario must have 1 or 2 zones, got " + std::to_string(nz)});

  for (const auto& z : cfg.zones) {
    const std::string tag = "zone '" + z.id + "'";
    if (!detail::finite_all({z.area_km2, z.v_min, z.v_max, z.land_cost_cy, z.trip_length_km}))
      out.push_back({"non_finite", tag + " has non-finite fields"});
    if (!(z.area_km2 > 0.0)) out.push_back({"area", tag + " area must be positive"});
    if (!(z.v_min > 0.0)) out.push_back({"speed_positive", tag + " v_min must be positive"});
    else if (z.v_min > z.v_max)
      out.push_back({"speed_order", tag + " v_min " + detail::fmt_num(z.v_min) + " exceeds v_max " +
                                        detail::fmt_num(z.v_max)});
    if (z.trip_length_source == TripLengthSource::given && !(z.trip_length_km > 0.0))
      out.push_back({"trip_length", tag + " mean intra-zonal trip length must be positive"});
    if (z.land_cost_cy < 0.0) out.push_back({"land_cost", tag + " land cost C_y must be >= 0"});
  }

  detail::check_windows(cfg, out);

  const auto& dw = cfg.demand.by_window;
  if (dw.size() != cfg.windows.size()) {
    out.push_back({"demand_windows", "demand profile has " + std::to_string(dw.size()) + " windows, scenario has " +
                                         std::to_string(cfg.windows.size())});
  } else {
    std::vector<std::string> bad_shape;
    for (std::size_t w = 0; w < dw.size(); ++w)
      if (dw[w].size() != nz) bad_shape.push_back(cfg.windows[w].id);
    if (!bad_shape.empty()) {
      std::string list;
      for (const auto& id : bad_shape) list += (list.empty() ? "" : ",") + id;
      out.push_back({"demand_shape", "demand matrix dimension does not match zone count " + std::to_string(nz) +
                                         " in windows: " + list});
    } else {
      bool negative = false;
      double total = 0.0;
      for (const auto& m : dw)
        for (double v : m.values()) {
          if (!(v >= 0.0) || !std::isfinite(v)) negative = true;
          else total += v;
        }
      if (negative) out.push_back({"demand_negative", "demand entries must be finite and >= 0"});
      if (!(total > 0.0)) out.push_back({"demand_zero", "no window has positive demand"});
    }
  }

  const auto& p = cfg.params;
  if (!(p.p > 0.0 && p.p < 1.0)) out.push_back({"probability", "p must lie in (0,1)"});
  if (!(p.q > 0.0 && p.q < 1.0)) out.push_back({"probability", "q must lie in (0,1)"});
  if (!(p.alpha >= 1.0) || !std::isfinite(p.alpha)) out.push_back({"alpha", "alpha must be >= 1"});
  if (!(p.mean_to_variance > 0.0)) out.push_back({"mean_to_variance", "I must be positive"});
  if (!(p.kappa > 0.0)) out.push_back({"kappa", "kappa must be positive"});
  if (!(p.t0_h > 0.0)) out.push_back({"t0", "T0 must be positive"});
  if (!(p.rebalance_interval_h > 0.0)) out.push_back({"rebalance_interval", "H must be positive"});
  if (nz == 2) {
    if (!(p.inter_zone_speed[0][1] > 0.0) || !(p.inter_zone_speed[1][0] > 0.0))
      out.push_back({"inter_zone_speed", "inter-zonal speeds must be positive"});
    if (!(p.centroid_distance_km >= 0.0) || !std::isfinite(p.centroid_distance_km))
      out.push_back({"centroid_distance", "centroid distance must be finite and >= 0"});
  }

  const auto& c = cfg.costs;
  if (!(c.c_x >= 0.0) || !std::isfinite(c.c_x)) out.push_back({"cost", "C_x must be finite and >= 0"});
  if (!(c.c_m > 0.0) || !std::isfinite(c.c_m)) out.push_back({"cost_fleet", "C_m must be positive"});
  return out;
}

inline void require_valid(const ScenarioConfig& cfg) {
  const auto v = validate_scenario(cfg);
  if (v.empty()) return;
  std::string msg = "invalid scenario:";
  for (const auto& e : v) msg += " [" + e.code + "] " + e.message + ";";
  throw ValidationError(msg);
}

}  // namespace savpark
