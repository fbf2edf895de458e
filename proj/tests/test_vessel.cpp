#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pathfollow/error.hpp"
#include "pathfollow/vessel.hpp"

using namespace pathfollow;

namespace {

// Fraction forms written out independently of the library.
struct Fractions {
  long double det, X, Y, Fr;
};

Fractions fractions(const ShipParams& p, long double u, long double v, long double r) {
  const long double m11 = p.m11, m22 = p.m22, m23 = p.m23, m33 = p.m33;
  const long double d22 = p.d22, d23 = p.d23, d32 = p.d32, d33 = p.d33;
  Fractions f;
  f.det = m22 * m33 - m23 * m23;
  f.X = ((m23 * m23 - m11 * m33) * u + (d33 * m23 - d23 * m33)) / f.det;
  f.Y = ((m22 - m11) * m23 * u - (d22 * m33 - d32 * m23)) / f.det;
  f.Fr = (m23 * d22 - m22 * (d32 + (m22 - m11) * u)) / f.det * v +
         (m23 * (d23 + m11 * u) - m22 * (d33 + m23 * u)) / f.det * r;
  return f;
}

void expect_rel(double got, long double want, double tol) {
  EXPECT_NEAR(got, static_cast<double>(want), tol * std::max(1.0L, std::fabs(want)));
}

}  // namespace

TEST(Hydro, InterceptAndAffinity) {
  const auto p = ShipParams::defaults();
  const auto c = hydro_coefficients(p);
  EXPECT_DOUBLE_EQ(hydro_X(p, 0.0), c.bx);
  EXPECT_DOUBLE_EQ(hydro_Y(p, 0.0), c.by);
  EXPECT_NEAR(hydro_X(p, 2.0) - hydro_X(p, 1.0), c.ax, 1e-15);
  EXPECT_NEAR(hydro_Y(p, 2.0) - hydro_Y(p, 1.0), c.ay, 1e-15);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng), b = u(rng);
    EXPECT_NEAR(hydro_X(p, a) - hydro_X(p, b), c.ax * (a - b), 1e-13);
    EXPECT_NEAR(hydro_Y(p, a) - hydro_Y(p, b), c.ay * (a - b), 1e-13);
  }
}

TEST(Hydro, DefaultSetMatchesFractionsAtFive) {
  const auto p = ShipParams::defaults();
  const auto f = fractions(p, 5.0L, 0.0L, 0.0L);
  expect_rel(hydro_X(p, 5.0), f.X, 1e-13);
  expect_rel(hydro_Y(p, 5.0), f.Y, 1e-13);
  // hand values for the default set
  EXPECT_NEAR(hydro_coefficients(p).ax, -0.4736842105263158, 1e-15);
  EXPECT_NEAR(hydro_coefficients(p).bx, 0.13157894736842105, 1e-15);
  EXPECT_NEAR(hydro_coefficients(p).ay, 0.013157894736842105, 1e-15);
}

TEST(Hydro, ForceTerms) {
  const auto p = ShipParams::defaults();
  EXPECT_EQ(hydro_Fu(p, 0.0, 0.0), 0.0);
  EXPECT_EQ(hydro_Fr(p, 5.0, 0.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(hydro_Fu(p, 0.0, -0.2), hydro_Fu(p, 0.0, 0.2));

  const double fu = (p.m22 * 0.3 + p.m23 * 0.1) * 0.1 / p.m11;
  EXPECT_NEAR(hydro_Fu(p, 0.3, 0.1), fu, 1e-14);
  expect_rel(hydro_Fr(p, 5.0, 0.3, 0.1), fractions(p, 5.0L, 0.3L, 0.1L).Fr, 1e-12);
}

TEST(Hydro, DefaultSetKeepsYNegativeOnWideBand) {
  const auto p = ShipParams::defaults();
  for (double u = -1.5; u <= 7.0; u += 0.01) EXPECT_LT(hydro_Y(p, u), 0.0) << u;
  EXPECT_GT(p.m22 * p.m33 - p.m23 * p.m23, 0.0);
  EXPECT_EQ(p.m32, p.m23);
}

TEST(ValidateParams, DefaultsAccepted) {
  const auto v = validate_params(ShipParams::defaults(), 5.0, 1.08);
  // endpoints of the affine functions on [-1.08, 5]
  const auto p = ShipParams::defaults();
  const double y_min = std::min(-hydro_Y(p, -1.08), -hydro_Y(p, 5.0));
  const double x_max = std::max(std::abs(hydro_X(p, -1.08)), std::abs(hydro_X(p, 5.0)));
  EXPECT_DOUBLE_EQ(v.y_min, y_min);
  EXPECT_DOUBLE_EQ(v.x_max, x_max);
  EXPECT_NEAR(v.curvature_ratio(), 0.0667, 1e-4);
}

TEST(ValidateParams, Rejections) {
  auto p = ShipParams::defaults();
  // a_y = 0, b_y = +1: m22 = m11 removes the slope, d22 chosen so -(d22 m33)/det = 1
  p.m22 = p.m11;
  const double det = p.m22 * p.m33 - p.m23 * p.m23;
  p.d32 = 0.0;
  p.d22 = -det / p.m33;
  EXPECT_NEAR(hydro_coefficients(p).ay, 0.0, 1e-15);
  EXPECT_NEAR(hydro_coefficients(p).by, 1.0, 1e-12);
  try {
    validate_params(p, 5.0, 1.08);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AssumptionYViolated);
  }

  try {
    validate_params(ShipParams::defaults(), 2.0, 1.08);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SpeedMarginViolated);
  }

  auto bad = ShipParams::defaults();
  bad.m23 = bad.m32 = 1e9;  // m23^2 > m22 m33
  try {
    validate_params(bad, 5.0, 1.08);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPositiveDeterminant);
  }

  auto nan = ShipParams::defaults();
  nan.d11 = std::nan("");
  EXPECT_THROW(validate_params(nan, 5.0, 1.08), Error);
}

TEST(VesselDerivative, DriftOnly) {
  const auto p = ShipParams::defaults();
  const auto d = vessel_derivative(p, VesselState{}, 0.0, 0.0, {-0.4, 1.0});
  EXPECT_EQ(d.x_dot, -0.4);
  EXPECT_EQ(d.y_dot, 1.0);
  EXPECT_EQ(d.psi_dot, 0.0);
  EXPECT_EQ(d.u_r_dot, 0.0);
  EXPECT_EQ(d.v_r_dot, 0.0);
  EXPECT_EQ(d.r_dot, 0.0);

  const auto z = vessel_derivative(p, VesselState{}, 0.0, 0.0, {});
  EXPECT_EQ(z.x_dot, 0.0);
  EXPECT_EQ(z.y_dot, 0.0);
}

TEST(VesselDerivative, BodyAxisRotation) {
  const auto p = ShipParams::defaults();
  VesselState s;
  s.u_r = 1.0;
  s.psi = std::numbers::pi / 2;
  const auto d = vessel_derivative(p, s, 0.0, 0.0, {});
  EXPECT_NEAR(d.x_dot, 0.0, 1e-15);
  EXPECT_NEAR(d.y_dot, 1.0, 1e-15);
}

TEST(VesselDerivative, SwayIsUnactuated) {
  const auto p = ShipParams::defaults();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    VesselState s{u(rng), u(rng), u(rng), u(rng), u(rng), 0.1 * u(rng)};
    const auto a = vessel_derivative(p, s, 0.0, 0.0, {0.1, 0.2});
    const auto b = vessel_derivative(p, s, 10.0 * u(rng), 10.0 * u(rng), {0.1, 0.2});
    EXPECT_EQ(a.v_r_dot, b.v_r_dot);
    EXPECT_NEAR(a.v_r_dot, hydro_X(p, s.u_r) * s.r + hydro_Y(p, s.u_r) * s.v_r, 1e-14);
  }
}

TEST(VesselDerivative, MatchesModelEquations) {
  const auto p = ShipParams::defaults();
  const VesselState s{1.0, 2.0, 0.3, 4.0, 0.2, 0.05};
  const auto d = vessel_derivative(p, s, 0.7, -0.01, {-0.4, 1.0});
  EXPECT_NEAR(d.x_dot, 4.0 * std::cos(0.3) - 0.2 * std::sin(0.3) - 0.4, 1e-14);
  EXPECT_NEAR(d.y_dot, 4.0 * std::sin(0.3) + 0.2 * std::cos(0.3) + 1.0, 1e-14);
  EXPECT_EQ(d.psi_dot, 0.05);
  EXPECT_NEAR(d.u_r_dot, hydro_Fu(p, 0.2, 0.05) - p.d11 / p.m11 * 4.0 + 0.7, 1e-14);
  const auto f = fractions(p, 4.0L, 0.2L, 0.05L);
  EXPECT_NEAR(d.r_dot, static_cast<double>(f.Fr) - 0.01, 1e-12);
}

TEST(Allocation, RoundTripAndZero) {
  const auto p = ShipParams::defaults();
  const auto z = allocate_actuators(0.0, 0.0, p);
  EXPECT_EQ(z.thrust, 0.0);
  EXPECT_EQ(z.rudder, 0.0);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 500; ++i) {
    const double tu = u(rng), tr = 0.01 * u(rng);
    const auto back = apply_allocation(allocate_actuators(tu, tr, p), p);
    EXPECT_NEAR(back[0], tu, 1e-12 * std::abs(tu));
    EXPECT_NEAR(back[1], tr, 1e-12 * std::abs(tr));
  }
}

TEST(Allocation, SingularWhenNoThrust) {
  auto p = ShipParams::defaults();
  p.b11 = 0.0;
  try {
    allocate_actuators(1.0, 0.0, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularAllocation);
  }
}

TEST(CurrentSchedule, Validation) {
  EXPECT_NO_THROW(CurrentSchedule::constant(-0.4, 1.0, 1.08).validate());
  EXPECT_THROW(CurrentSchedule::constant(-0.4, 1.0, 1.0).validate(), Error);

  CurrentSchedule s;
  s.v_max = 1.3;
  s.segments = {{0.0, -0.4, 1.0}, {100.0, -1.0, 0.7}};
  EXPECT_NO_THROW(s.validate());
  s.segments = {{0.0, -0.4, 1.0}, {0.0, -1.0, 0.7}};
  EXPECT_THROW(s.validate(), Error);
  s.segments.clear();
  EXPECT_THROW(s.validate(), Error);
}
