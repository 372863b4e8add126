#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"

using namespace savpark;
using namespace savpark::numerics;

namespace {

// Sign-change bisection on t^3 + a t + b over the positive axis. For a, b < 0 the cubic is
// negative at 0 and has exactly one positive root.
double bisect_root(double a, double b) {
  double lo = 0.0, hi = 1.0;
  auto f = [&](double t) { return t * t * t + a * t + b; };
  while (f(hi) < 0) hi *= 2;
  for (int k = 0; k < 400 && hi - lo > 1e-16 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Halton points in [0,1)^2
double halton(int i, int base) {
  double f = 1, r = 0;
  for (; i > 0; i /= base) {
    f /= base;
    r += f * (i % base);
  }
  return r;
}

}  // namespace

TEST(Discriminant, HandValues) {
  EXPECT_DOUBLE_EQ(cubic_discriminant({-6, -4}), 432.0);
  EXPECT_DOUBLE_EQ(cubic_discriminant({0, 0}), 0.0);
  EXPECT_DOUBLE_EQ(cubic_discriminant({1, 1}), -31.0);
}

TEST(Viete, AnalyticRoot) {
  // t^3 - 6t - 4 = (t + 2)(t^2 - 2t - 2)
  EXPECT_NEAR(viete_positive_root({-6, -4}), 1 + std::sqrt(3.0), 1e-10);
}

TEST(Viete, MatchesBisection) {
  EXPECT_NEAR(viete_positive_root({-3, -1.99}), bisect_root(-3, -1.99), 1e-9);
}

TEST(Viete, RandomInRegime) {
  std::mt19937_64 g(7);
  std::uniform_real_distribution<double> la(std::log(1e-3), std::log(1e3));
  int tested = 0;
  while (tested < 10000) {
    const double a = -std::exp(la(g)), b = -std::exp(la(g));
    if (!(cubic_discriminant({a, b}) > 0)) continue;
    ++tested;
    const double t = viete_positive_root({a, b});
    const double scale = std::max({1.0, std::pow(-a, 1.5), -b});
    ASSERT_LE(std::abs(t * t * t + a * t + b), 1e-10 * scale) << a << " " << b;
    const double ref = bisect_root(a, b);
    ASSERT_LE(std::abs(t - ref), 1e-8 * ref) << a << " " << b;
  }
}

TEST(Viete, Homogeneity) {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> u(0.1, 10);
  for (int k = 0; k < 200; ++k) {
    const double a = -3.0 * u(g), s = u(g);
    const double b = -0.5 * std::sqrt(-4 * a * a * a / 27);  // well inside the regime
    const double r = viete_positive_root({a, b});
    EXPECT_NEAR(viete_positive_root({a * s * s, b * s * s * s}), s * r, 1e-9 * s * r);
  }
}

TEST(Viete, ClampNearDegenerate) {
  // double root boundary: 4a^3 + 27b^2 = 0 with a = -3 gives b = -2
  const double b = -2.0 * (1 - 1e-14);
  const double t = viete_positive_root({-3, b});
  EXPECT_TRUE(std::isfinite(t));
  EXPECT_NEAR(t, 2.0, 1e-6);
}

TEST(Viete, RegimeErrors) {
  EXPECT_THROW(viete_positive_root({1, 1}), RegimeError);
  EXPECT_THROW(viete_positive_root({-3, -5}), RegimeError);  // discriminant < 0
  try {
    viete_positive_root({2, -1});
    FAIL();
  } catch (const RegimeError& e) {
    EXPECT_FALSE(e.what_failed().empty());
  }
}

TEST(Golden, Quadratic) {
  const auto r = golden_section_minimize([](double x) { return (x - 0.3) * (x - 0.3); }, 0.0, 1.0, 1e-9);
  EXPECT_NEAR(r.x, 0.3, 1e-8);
}

TEST(Golden, MinimumAtBoundary) {
  const auto r = golden_section_minimize([](double x) { return x; }, 0.2, 1.0, 1e-9);
  EXPECT_NEAR(r.x, 0.2, 1e-8);
}

TEST(Box2D, SeparableQuadratic) {
  const auto r = minimize_box_2d([](double u, double v) { return (u - 0.01) * (u - 0.01) + (v - 0.02) * (v - 0.02); },
                                 {{1e-4, 1}, {1e-4, 1}}, 1e-6);
  EXPECT_NEAR(r.argmin[0], 0.01, 1e-6);
  EXPECT_NEAR(r.argmin[1], 0.02, 1e-6);
}

TEST(Box2D, ClampedOptimum) {
  const auto r = minimize_box_2d([](double u, double v) { return (u - 2) * (u - 2) + (v + 1) * (v + 1); },
                                 {{1e-4, 1}, {1e-4, 1}}, 1e-8);
  EXPECT_NEAR(r.argmin[0], 1.0, 1e-7);
  EXPECT_NEAR(r.argmin[1], 1e-4, 1e-7);
}

TEST(Box2D, EmbeddedSingleZoneCost) {
  std::mt19937_64 g(3);
  const auto c1 = assemble_coefficients(fx::random_inputs(g));
  const auto c2 = assemble_coefficients(fx::random_inputs(g));
  const double t1 = solve_unconstrained(c1), t2 = solve_unconstrained(c2);
  const auto r = minimize_box_2d([&](double u, double v) { return c1.cost(u) + c2.cost(v); },
                                 {{1e-5, 1}, {1e-5, 1}}, 1e-9);
  EXPECT_NEAR(r.argmin[0], t1, 1e-6);
  EXPECT_NEAR(r.argmin[1], t2, 1e-6);
}

TEST(Box2D, BeatsQuasiRandomProbes) {
  auto f = [](double u, double v) { return std::pow(std::log(u / 0.03), 2) + std::pow(std::log(v / 0.2), 2) + u * v; };
  const Box2D box{{1e-3, 1}, {1e-3, 1}};
  const auto r = minimize_box_2d(f, box, 1e-8);
  for (int i = 1; i <= 100; ++i) {
    const double u = box.u.lower + halton(i, 2) * (box.u.upper - box.u.lower);
    const double v = box.v.lower + halton(i, 3) * (box.v.upper - box.v.lower);
    EXPECT_LE(r.value, f(u, v) + 1e-12);
  }
}

TEST(Box2D, NonFiniteObjective) {
  try {
    minimize_box_2d([](double u, double) { return u > 0.5 ? NAN : u; }, {{1e-3, 1}, {1e-3, 1}}, 1e-6);
    FAIL();
  } catch (const EvaluationError& e) {
    EXPECT_GT(e.u(), 0.5);
  }
}

TEST(Box2D, Deterministic) {
  auto f = [](double u, double v) { return std::sin(3 * u) + std::cos(5 * v) + u * v; };
  const auto a = minimize_box_2d(f, {{0.1, 2}, {0.1, 2}}, 1e-7);
  const auto b = minimize_box_2d(f, {{0.1, 2}, {0.1, 2}}, 1e-7);
  EXPECT_EQ(a.argmin, b.argmin);
  EXPECT_EQ(a.value, b.value);
}
