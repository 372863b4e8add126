#pragma once

// Single-zone planning model. The whole plan is a function of one variable, the access time T
// from a station to a passenger at the daily peak, so the cost curve is
//   P0 + Pm2/T^2 + Pm1/T + P1*T
// and its stationary point is the positive root of a depressed cubic.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "savpark/error.hpp"
#include "savpark/fleet_states.hpp"
#include "savpark/numerics.hpp"
#include "savpark/scenario.hpp"

namespace savpark {

/// eq26: LOS bound applies to T*(1+p+ap-ap^2); eq2: to T*(p+ap-ap^2).
enum class FactorMode { eq26, eq2 };

inline const char* to_string(FactorMode m) { return m == FactorMode::eq26 ? "eq26" : "eq2"; }

inline double los_factor(FactorMode mode, double p, double alpha) {
  const double f = confidence_factor(p, alpha);
  return mode == FactorMode::eq26 ? 1.0 + f : f;
}

/// Flat single-zone problem, extracted from a ScenarioConfig or built directly (sweeps, tests).
struct SingleZoneInputs {
  double area = 0.0;
  double trip_len = 0.0;
  double v_min = 0.0;
  double v_max = 0.0;
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  double p = 0.95, q = 0.95, alpha = 2.0, mean_to_variance = 1.0, kappa = 0.5;
  double h = 2.0;
  double t0 = 1.0 / 60.0;
  double c_x = 0.0, c_y = 0.0, c_m = 0.0;
  std::size_t window_max = 0, window_min = 0;  // indices into the source scenario, if any
};

inline SingleZoneInputs single_zone_inputs(const ScenarioConfig& cfg) {
  if (cfg.zone_count() != 1) throw DomainError("single-zone solver needs exactly one zone");
  const ZoneSpec& z = cfg.zones[0];
  SingleZoneInputs in;
  in.area = z.area_km2;
  in.trip_len = intra_trip_length(z);
  in.v_min = z.v_min;
  in.v_max = z.v_max;
  in.window_max = max_demand_window(cfg);
  in.window_min = min_demand_window(cfg);
  in.lambda_max = cfg.lambda(in.window_max, 0, 0);
  in.lambda_min = cfg.lambda(in.window_min, 0, 0);
  const ModelParams& mp = cfg.params;
  in.p = mp.p;
  in.q = mp.q;
  in.alpha = mp.alpha;
  in.mean_to_variance = mp.mean_to_variance;
  in.kappa = mp.kappa;
  in.h = mp.rebalance_interval_h;
  in.t0 = mp.t0_h;
  in.c_x = cfg.costs.c_x;
  in.c_y = z.land_cost_cy;
  in.c_m = cfg.costs.c_m;
  return in;
}

struct ObjectiveCoefficients {
  double p0 = 0.0;
  double pm2 = 0.0;
  double pm1 = 0.0;
  double p1 = 0.0;

  double cost(double t) const { return p0 + pm2 / (t * t) + pm1 / t + p1 * t; }
  double derivative(double t) const { return -2.0 * pm2 / (t * t * t) - pm1 / (t * t) + p1; }
};

inline ObjectiveCoefficients assemble_coefficients(const SingleZoneInputs& in) {
  if (!(in.c_m > 0.0)) throw RegimeError("C_m", "fleet cost C_m must be positive for a convex cost curve");
  const double fp1 = 1.0 + confidence_factor(in.p, in.alpha);
  const double fq1 = 1.0 + confidence_factor(in.q, in.alpha);
  const double zp = normal_quantile(in.p);
  const double zq = normal_quantile(in.q);
  const double hi = in.h * in.mean_to_variance;
  const double cyc = in.c_y + in.c_m;

  ObjectiveCoefficients c;
  c.p0 = cyc * (in.lambda_max * in.trip_len / in.v_min) * in.area -
         in.c_y * (in.lambda_min * in.trip_len / in.v_max) * in.area;
  c.pm2 = in.c_x * in.kappa * in.kappa * in.area / (in.v_min * in.v_min);
  c.pm1 = in.kappa * cyc / in.v_min * zp * std::sqrt(2.0 * in.lambda_max * hi * in.area) +
          in.kappa * in.c_y / in.v_max * zq * std::sqrt(2.0 * in.lambda_min * hi * in.area);
  c.p1 = cyc * in.lambda_max * in.area * fp1 - in.c_y * in.lambda_min * in.area * fq1 * (in.v_min / in.v_max);

  if (!std::isfinite(c.p0 + c.pm2 + c.pm1 + c.p1)) throw RegimeError("coefficients", "non-finite cost coefficient");
  if (!(c.p0 > 0.0)) throw RegimeError("P0", "constant cost term P0 is not positive");
  if (!(c.pm1 > 0.0)) throw RegimeError("Pm1", "1/T cost term P-1 is not positive");
  if (!(c.p1 > 0.0)) throw RegimeError("P1", "linear cost term P1 is not positive (peak demand too close to trough)");
  if (c.pm2 < 0.0) throw RegimeError("Pm2", "station cost term P-2 is negative");
  return c;
}

inline ObjectiveCoefficients assemble_coefficients(const ScenarioConfig& cfg) {
  return assemble_coefficients(single_zone_inputs(cfg));
}

/// Positive stationary point of the cost curve.
inline double solve_unconstrained(const ObjectiveCoefficients& c) {
  if (!(c.pm1 > 0.0) || !(c.p1 > 0.0) || c.pm2 < 0.0)
    throw RegimeError("coefficients", "solve_unconstrained needs Pm1, P1 > 0 and Pm2 >= 0");
  if (c.pm2 == 0.0) return std::sqrt(c.pm1 / c.p1);  // P1 T^2 = Pm1
  const double a = -c.pm1 / c.p1;
  const double b = -2.0 * c.pm2 / c.p1;
  // t = s*u maps the cubic to u^3 - u + b/s^3 with s = sqrt(-a)
  const double s = std::sqrt(-a);
  return s * numerics::viete_positive_root({-1.0, b / (s * s * s)});
}

struct LosResult {
  double t1a = 0.0;
  bool binding = false;
};

inline LosResult apply_los_constraint(double t1a_u, double t0, double p, double alpha,
                                      FactorMode mode = FactorMode::eq26) {
  if (!(t1a_u > 0.0) || !(t0 > 0.0)) throw DomainError("apply_los_constraint: inputs must be positive");
  const double f = los_factor(mode, p, alpha);
  if (t0 > f * t1a_u) return {t1a_u, false};
  return {t0 / f, true};
}

struct CostBreakdown {
  double stations = 0.0;
  double spaces = 0.0;
  double fleet = 0.0;
  double total() const { return stations + spaces + fleet; }
};

struct SingleZonePlan {
  double t1a_unconstrained = 0.0;
  double t1a_star = 0.0;
  double ta_star = 0.0;  // t1a_star times the LOS factor of the chosen mode
  double x_star = 0.0;
  double y_star = 0.0;
  double z_star = 0.0;
  double m_star = 0.0;
  double cost_total = 0.0;
  CostBreakdown cost;
  bool constraint_binding = false;
  FactorMode factor_mode = FactorMode::eq26;
  ObjectiveCoefficients coefficients;
  FleetStateBreakdown breakdown_at_tmax;
  FleetStateBreakdown breakdown_at_tmin;
  double area = 0.0;
  std::vector<std::string> warnings;
};

/// Fleet size at access time t: peak trips in service, plus A and C (q taken as 1 at the
/// peak), plus the parked buffer.
inline double fleet_size_at(const SingleZoneInputs& in, double t) {
  const double fp1 = 1.0 + confidence_factor(in.p, in.alpha);
  const double buffer = in.kappa * normal_quantile(in.p) *
                        std::sqrt(2.0 * in.lambda_max * in.area * in.h * in.mean_to_variance) / (in.v_min * t);
  return in.lambda_max * in.area * in.trip_len / in.v_min + in.lambda_max * in.area * t * fp1 + buffer;
}

/// Space density at access time t. The trough buffer term scales with 1/v_max.
inline double space_density_at(const SingleZoneInputs& in, double t) {
  const double fp1 = 1.0 + confidence_factor(in.p, in.alpha);
  const double fq1 = 1.0 + confidence_factor(in.q, in.alpha);
  const double hi = in.h * in.mean_to_variance;
  const double r = in.v_min / in.v_max;
  return (in.lambda_max * in.trip_len / in.v_min - in.lambda_min * in.trip_len / in.v_max) +
         (fp1 * in.lambda_max - fq1 * in.lambda_min * r) * t +
         in.kappa / in.v_min *
             (normal_quantile(in.p) * std::sqrt(2.0 * in.lambda_max * hi / in.area) +
              r * normal_quantile(in.q) * std::sqrt(2.0 * in.lambda_min * hi / in.area)) /
             t;
}

namespace detail {

/// Running-state counts at a window with demand lam and intra speed v, given the peak access time t.
inline FleetStateBreakdown single_zone_running(const SingleZoneInputs& in, double lam, double v, double t,
                                               ConfidenceRegime regime) {
  const double t_w = t * in.v_min / v;
  const double fa = regime == ConfidenceRegime::trough ? 1.0 : confidence_factor(in.p, in.alpha);
  const double fc = regime == ConfidenceRegime::peak ? 1.0 : confidence_factor(in.q, in.alpha);
  FleetStateBreakdown b;
  b.n_a = lam * in.area * t_w * fa;
  b.n_s = required_S(lam, in.area, in.trip_len, v);
  b.n_c = lam * in.area * t_w * fc;
  return b;
}

}  // namespace detail

inline SingleZonePlan solve_single_zone(const SingleZoneInputs& in, FactorMode mode = FactorMode::eq26) {
  SingleZonePlan plan;
  plan.factor_mode = mode;
  plan.area = in.area;
  plan.coefficients = assemble_coefficients(in);
  plan.t1a_unconstrained = solve_unconstrained(plan.coefficients);
  const LosResult los = apply_los_constraint(plan.t1a_unconstrained, in.t0, in.p, in.alpha, mode);
  const double t = los.t1a;
  plan.t1a_star = t;
  plan.constraint_binding = los.binding;
  plan.ta_star = t * los_factor(mode, in.p, in.alpha);

  plan.x_star = station_density_from_access_time(t, in.v_min, in.kappa);
  plan.m_star = fleet_size_at(in, t);
  plan.y_star = space_density_at(in, t);
  if (!(plan.y_star >= 0.0))
    throw RegimeError("y_star", "space density is negative; demand profile outside model validity");
  plan.z_star = plan.y_star / plan.x_star;

  plan.cost.stations = in.c_x * plan.x_star * in.area;
  plan.cost.spaces = in.c_y * plan.y_star * in.area;
  plan.cost.fleet = in.c_m * plan.m_star;
  plan.cost_total = plan.cost.total();

  auto& bmax = plan.breakdown_at_tmax;
  bmax = detail::single_zone_running(in, in.lambda_max, in.v_min, t, ConfidenceRegime::peak);
  bmax.n_p = required_P(in.lambda_max, in.area, in.h, in.mean_to_variance, plan.x_star, in.p);

  auto& bmin = plan.breakdown_at_tmin;
  bmin = detail::single_zone_running(in, in.lambda_min, in.v_max, t, ConfidenceRegime::trough);
  bmin.n_p = plan.m_star - bmin.running();
  return plan;
}

inline SingleZonePlan solve_single_zone(const ScenarioConfig& cfg, FactorMode mode = FactorMode::eq26) {
  require_valid(cfg);
  const SingleZoneInputs in = single_zone_inputs(cfg);
  SingleZonePlan plan = solve_single_zone(in, mode);
  const auto& wmax = cfg.windows[in.window_max];
  const auto& wmin = cfg.windows[in.window_min];
  if (wmax.speed != SpeedLevel::min)
    plan.warnings.push_back("peak-demand window '" + wmax.id + "' is not tagged with the minimum speed");
  if (wmin.speed != SpeedLevel::max)
    plan.warnings.push_back("lowest-demand window '" + wmin.id + "' is not tagged with the maximum speed");
  if (!(in.lambda_max > in.lambda_min))
    plan.warnings.push_back("peak and trough demand are equal; peak dominance is degenerate");
  return plan;
}

struct WindowParking {
  std::string window_id;
  double parked = 0.0;      // m* minus running vehicles
  double parked_req = 0.0;  // normal buffer needed in that window
  FleetStateBreakdown breakdown;
};

/// Parked vehicles per window implied by a plan. The trough window uses p = 1, every other window
/// q = 1, matching how the plan was sized.
inline std::vector<WindowParking> parked_by_window(const ScenarioConfig& cfg, const SingleZonePlan& plan) {
  const SingleZoneInputs in = single_zone_inputs(cfg);
  std::vector<WindowParking> out;
  for (std::size_t w = 0; w < cfg.windows.size(); ++w) {
    const double lam = cfg.lambda(w, 0, 0);
    const double v = intra_speed(cfg.zones[0], cfg.windows[w]);
    const auto regime = w == in.window_min ? ConfidenceRegime::trough : ConfidenceRegime::peak;
    WindowParking row;
    row.window_id = cfg.windows[w].id;
    row.breakdown = detail::single_zone_running(in, lam, v, plan.t1a_star, regime);
    row.parked = plan.m_star - row.breakdown.running();
    row.breakdown.n_p = row.parked;
    row.parked_req = lam > 0.0 ? required_P(lam, in.area, in.h, in.mean_to_variance, plan.x_star, in.p) : 0.0;
    out.push_back(row);
  }
  return out;
}

}  // namespace savpark
