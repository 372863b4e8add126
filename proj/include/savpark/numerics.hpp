#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <sstream>
#include <utility>

#include "savpark/error.hpp"

namespace savpark::numerics {

/// t^3 + a t + b = 0
struct DepressedCubic {
  double a = 0.0;
  double b = 0.0;
};

/// Positive discriminant means three distinct real roots.
inline double cubic_discriminant(const DepressedCubic& c) { return -(4.0 * c.a * c.a * c.a + 27.0 * c.b * c.b); }

/// Trigonometric (Viete) root of a depressed cubic in the three-real-root regime with a < 0, b < 0.
/// There the k = 0 branch is the only positive root.
inline double viete_positive_root(const DepressedCubic& c) {
  if (!std::isfinite(c.a) || !std::isfinite(c.b)) throw DomainError("viete_positive_root: non-finite coefficient");
  if (!(c.a < 0.0) || !(c.b < 0.0))
    throw RegimeError("cubic_sign", "depressed cubic needs a < 0 and b < 0 for a unique positive Viete root");
  if (!(cubic_discriminant(c) > 0.0))
    throw RegimeError("discriminant", "cubic discriminant is not positive; no three-real-root regime");

  double arg = (3.0 * c.b / (2.0 * c.a)) * std::sqrt(-3.0 / c.a);
  if (std::abs(arg) > 1.0) {
    if (std::abs(arg) - 1.0 > 1e-12)
      throw RegimeError("discriminant", "arccos argument outside [-1,1] beyond rounding");
    arg = std::copysign(1.0, arg);
  }
  double t = 2.0 * std::sqrt(-c.a / 3.0) * std::cos(std::acos(arg) / 3.0);

  // One Newton step on the (simple) positive root tidies the last few ulps.
  const double f = (t * t + c.a) * t + c.b;
  const double df = 3.0 * t * t + c.a;
  if (df > 0.0) {
    const double polished = t - f / df;
    const double f2 = (polished * polished + c.a) * polished + c.b;
    if (polished > 0.0 && std::abs(f2) < std::abs(f)) t = polished;
  }
  return t;
}

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

struct Box2D {
  Interval u;
  Interval v;
};

struct ScalarMinimum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search on [a, b]; endpoints are compared at the end so a clamped optimum
/// sitting on the boundary is returned exactly.
template <class F>
ScalarMinimum golden_section_minimize(F&& f, double a, double b, double tol) {
  const double a0 = a, b0 = b;
  constexpr double inv_phi = 0.6180339887498949;  // (sqrt(5)-1)/2
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  const double fa = f(a);
  const double fb = f(b);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  ScalarMinimum best{fc <= fd ? c : d, fc <= fd ? fc : fd};
  const double mid = 0.5 * (a + b);
  const double fm = f(mid);
  if (fm < best.value) best = {mid, fm};
  if (fa < best.value) best = {a0, fa};
  if (fb < best.value) best = {b0, fb};
  return best;
}

struct BoxMinimum {
  std::array<double, 2> argmin{};
  double value = 0.0;
};

namespace detail {

inline std::string point_str(double u, double v) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << u << ", " << v << ")";
  return os.str();
}

}  // namespace detail

/// Deterministic bounded 2-D minimizer: a 32x32 logarithmic grid scan (box must be strictly
/// positive) followed by coordinate-wise golden-section refinement. Sweeps repeat until the point
/// moves by less than tol, with at least three and at most 64 sweeps.
template <class F>
BoxMinimum minimize_box_2d(F&& f, const Box2D& box, double tol) {
  if (!(tol > 0.0)) throw DomainError("minimize_box_2d: tol must be positive");
  if (!(box.u.lower < box.u.upper) || !(box.v.lower < box.v.upper))
    throw DomainError("minimize_box_2d: lower bound must be below upper bound");
  if (!(box.u.lower > 0.0) || !(box.v.lower > 0.0))
    throw DomainError("minimize_box_2d: logarithmic grid needs a strictly positive box");

  auto eval = [&](double u, double v) {
    const double val = f(u, v);
    if (!std::isfinite(val))
      throw EvaluationError(u, v, "objective is non-finite at " + detail::point_str(u, v));
    return val;
  };

  constexpr int n = 32;
  const double lu = std::log(box.u.lower), hu = std::log(box.u.upper);
  const double lv = std::log(box.v.lower), hv = std::log(box.v.upper);
  auto grid = [n](double lo, double hi, int i) {
    if (i == 0) return std::exp(lo);
    if (i == n - 1) return std::exp(hi);
    return std::exp(lo + (hi - lo) * i / (n - 1));
  };

  int bi = 0, bj = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double val = eval(grid(lu, hu, i), grid(lv, hv, j));
      if (val < best) {
        best = val;
        bi = i;
        bj = j;
      }
    }

  double u = grid(lu, hu, bi), v = grid(lv, hv, bj);
  // Bracket half-widths in log space: one grid step each side of the current point.
  const double step_u = (hu - lu) / (n - 1), step_v = (hv - lv) / (n - 1);
  auto bracket = [](double x, double step, const Interval& iv) {
    return Interval{std::max(iv.lower, x * std::exp(-step)), std::min(iv.upper, x * std::exp(step))};
  };

  for (int sweep = 0; sweep < 64; ++sweep) {
    const double u_prev = u, v_prev = v;

    const Interval bu = bracket(u, step_u, box.u);
    const auto line_u = golden_section_minimize([&](double s) { return eval(s, v); }, bu.lower, bu.upper, tol);
    if (line_u.value <= best) {
      u = line_u.x;
      best = line_u.value;
    }

    const Interval bv = bracket(v, step_v, box.v);
    const auto line_v = golden_section_minimize([&](double s) { return eval(u, s); }, bv.lower, bv.upper, tol);
    if (line_v.value <= best) {
      v = line_v.x;
      best = line_v.value;
    }

    if (sweep >= 2 && std::abs(u - u_prev) < tol && std::abs(v - v_prev) < tol) break;
  }
  return {{u, v}, best};
}

}  // namespace savpark::numerics
