#pragma once

// Per-state fleet requirements shared by the single- and two-zone solvers. Each required_* is a
// Little's-law count: demand rate times expected time in the state, except parked vehicles, which
// are a normal-quantile buffer against station inflow/outflow variance.

#include <cmath>
#include <numbers>

#include "savpark/error.hpp"

namespace savpark {

/// Vehicle counts by operational state for one zone and window.
struct FleetStateBreakdown {
  double n_a = 0.0;  // assigned, driving to pickup
  double n_s = 0.0;  // serving
  double n_c = 0.0;  // cruising back to a station
  double n_p = 0.0;  // parked
  double n_r = 0.0;  // relocating to the other zone

  double m_req() const noexcept { return n_a + n_s + n_c + n_p + n_r; }
  /// Vehicles on the road (everything except parked).
  double running() const noexcept { return n_a + n_s + n_c + n_r; }
};

/// Which confidence levels apply within a window. At the daily peak the nearest station is
/// assumed never full (q -> 1); at the trough it is assumed never empty (p -> 1).
enum class ConfidenceRegime { general, peak, trough };

/// Expected-time multiplier from serving via the nearest or second-nearest station (two terms).
inline double confidence_factor(double prob, double alpha) { return prob + alpha * prob - alpha * prob * prob; }

inline double required_A(double demand_rate, double area, double t1a, double p, double alpha) {
  return demand_rate * area * t1a * confidence_factor(p, alpha);
}

inline double required_S(double demand_rate, double area, double trip_len, double speed) {
  if (!(speed > 0.0)) throw DomainError("required_S: speed must be positive");
  return demand_rate * area * trip_len / speed;
}

/// Return cruise time equals the access time for uniformly spread destinations and stations.
inline double required_C(double demand_rate, double area, double t1c, double q, double alpha) {
  return demand_rate * area * t1c * confidence_factor(q, alpha);
}

/// Inverse standard normal CDF. Acklam's rational approximation refined with one Halley step
/// against erfc; absolute error well below 1e-8 on (0,1).
inline double normal_quantile(double prob) {
  if (!(prob > 0.0 && prob < 1.0)) throw DomainError("normal_quantile: probability must lie in (0,1)");
  if (prob == 0.5) return 0.0;

  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (prob < p_low) {
    const double s = std::sqrt(-2.0 * std::log(prob));
    x = (((((c[0] * s + c[1]) * s + c[2]) * s + c[3]) * s + c[4]) * s + c[5]) /
        ((((d[0] * s + d[1]) * s + d[2]) * s + d[3]) * s + 1.0);
  } else if (prob <= 1.0 - p_low) {
    const double s = prob - 0.5;
    const double r = s * s;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * s /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double s = std::sqrt(-2.0 * std::log1p(-prob));
    x = -(((((c[0] * s + c[1]) * s + c[2]) * s + c[3]) * s + c[4]) * s + c[5]) /
        ((((d[0] * s + d[1]) * s + d[2]) * s + d[3]) * s + 1.0);
  }

  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - prob;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

/// Buffer of parked vehicles covering the variance 2*lambda*R*H*I of station inflow and outflow.
inline double required_P(double demand_rate, double area, double h, double mean_to_variance, double x,
                         double prob) {
  if (prob <= 0.0 || prob >= 1.0) throw DomainError("required_P: probability must lie in (0,1)");
  return normal_quantile(prob) * std::sqrt(2.0 * demand_rate * area * h * mean_to_variance * x);
}

/// Station density whose nearest-station access time is t1a: x = kappa^2 / (v^2 t1a^2).
inline double station_density_from_access_time(double t1a, double v, double kappa) {
  if (!(t1a > 0.0) || !(v > 0.0) || !(kappa > 0.0))
    throw DomainError("station_density_from_access_time: inputs must be positive");
  return (kappa * kappa) / (v * v * t1a * t1a);
}

/// Inverse of station_density_from_access_time: t1a = kappa / (v sqrt(x)).
inline double access_time_from_station_density(double x, double v, double kappa) {
  if (!(x > 0.0) || !(v > 0.0) || !(kappa > 0.0))
    throw DomainError("access_time_from_station_density: inputs must be positive");
  return kappa / (v * std::sqrt(x));
}

}  // namespace savpark
