#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pathfollow/error.hpp"
#include "pathfollow/guidance.hpp"

using namespace pathfollow;

namespace {

constexpr double kPi = std::numbers::pi;

// Bisection on the defining equality u_td g / sqrt(delta^2 + (y+g)^2) = vn.
double g_by_bisection(double u_td, double vn, double y, double delta) {
  auto h = [&](double g) { return u_td * g / std::sqrt(delta * delta + (y + g) * (y + g)) - vn; };
  double lo = vn >= 0 ? 0.0 : -1e7, hi = vn >= 0 ? 1e7 : 0.0;
  for (int i = 0; i < 300; ++i) {
    const double m = 0.5 * (lo + hi);
    (h(m) > 0.0 ? hi : lo) = m;
  }
  return 0.5 * (lo + hi);
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

GuidanceContext default_context() { return {ShipParams::defaults(), GuidanceParams{}, ObserverGains{}}; }

}  // namespace

TEST(Lookahead, Examples) {
  const auto a = lookahead(0.0, 0.0, 1000.0);
  EXPECT_NEAR(a.delta, 31.6228, 5e-5);
  EXPECT_EQ(a.d_dx, 0.0);
  EXPECT_EQ(a.d_dy, 0.0);

  const auto b = lookahead(3.0, 4.0, 1e-12);
  EXPECT_NEAR(b.delta, 5.0, 1e-12);
  EXPECT_NEAR(b.d_dx, 0.6, 1e-12);
  EXPECT_NEAR(b.d_dy, 0.8, 1e-12);
}

TEST(Lookahead, PartialsMatchFiniteDifferences) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-200.0, 200.0), m(10.0, 2000.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng), y = u(rng), mu = m(rng);
    const auto l = lookahead(x, y, mu);
    EXPECT_GE(l.delta, std::sqrt(mu));
    const double h = 1e-5;
    const double dx = (lookahead(x + h, y, mu).delta - lookahead(x - h, y, mu).delta) / (2 * h);
    const double dy = (lookahead(x, y + h, mu).delta - lookahead(x, y - h, mu).delta) / (2 * h);
    EXPECT_NEAR(l.d_dx, dx, 1e-8);
    EXPECT_NEAR(l.d_dy, dy, 1e-8);
  }
}

TEST(ComputeG, ZeroNormalCurrent) {
  const auto g = compute_g(5.0, 0.0, 12.0, 40.0);
  EXPECT_EQ(g.g, 0.0);
  EXPECT_EQ(g.dg_da, 0.0);
  EXPECT_EQ(g.dg_db, 0.0);
  EXPECT_EQ(g.dg_dc, 0.0);
}

TEST(ComputeG, ReferenceValueAgainstRootFinder) {
  const double delta = std::sqrt(1000.0);
  const auto g = compute_g(5.0, 1.0, 0.0, delta);
  EXPECT_NEAR(g.g, g_by_bisection(5.0, 1.0, 0.0, delta), 1e-9);
  EXPECT_NEAR(g.g, 6.4550, 5e-5);
  const double resid = 5.0 * g.g / std::sqrt(delta * delta + g.g * g.g) - 1.0;
  EXPECT_LT(std::abs(resid), 1e-9);
}

TEST(ComputeG, OddInNormalCurrentOnPath) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> vn(0.0, 4.5), d(5.0, 80.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = vn(rng), delta = d(rng);
    EXPECT_NEAR(compute_g(5.0, -v, 0.0, delta).g, -compute_g(5.0, v, 0.0, delta).g, 1e-12);
  }
}

TEST(ComputeG, DefiningIdentityAndSign) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> ud(2.2, 8.0), frac(-0.98, 0.98), y(-500.0, 500.0),
      mu(10.0, 3000.0);
  for (int i = 0; i < 10000; ++i) {
    const double u_td = ud(rng), vn = frac(rng) * u_td, yb = y(rng);
    const double delta = lookahead(0.0, yb, mu(rng)).delta;
    const auto g = compute_g(u_td, vn, yb, delta);
    const double lhs = u_td * g.g / std::sqrt(delta * delta + (yb + g.g) * (yb + g.g));
    ASSERT_LT(std::abs(lhs - vn), 1e-9 * std::max(1.0, std::abs(vn)));
    if (vn != 0.0) ASSERT_EQ(std::signbit(g.g), std::signbit(vn));
  }
}

TEST(ComputeG, PartialsMatchFiniteDifferences) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> frac(-0.9, 0.9), y(-300.0, 300.0), mu(100.0, 2000.0);
  for (int i = 0; i < 1000; ++i) {
    const double u_td = 5.0, vn = frac(rng) * u_td, yb = y(rng);
    const double delta = lookahead(0.0, yb, mu(rng)).delta;
    const auto g = compute_g(u_td, vn, yb, delta);
    const double a = vn * vn - u_td * u_td, b = yb * vn, c = delta * delta + yb * yb;
    auto fd = [&](double da, double db, double dc, double h) {
      return (g_from_abc(vn, a + da * h, b + db * h, c + dc * h) -
              g_from_abc(vn, a - da * h, b - db * h, c - dc * h)) /
             (2.0 * h);
    };
    EXPECT_LT(rel_err(g.dg_da, fd(1, 0, 0, 1e-6 * std::abs(a))), 1e-6);
    EXPECT_LT(rel_err(g.dg_db, fd(0, 1, 0, std::max(1e-6 * std::abs(b), 1e-6))), 1e-6);
    EXPECT_LT(rel_err(g.dg_dc, fd(0, 0, 1, 1e-6 * c)), 1e-6);
  }
}

TEST(ComputeG, RejectsSidewaysCurrentAtSpeed) {
  try {
    compute_g(5.0, 5.0, 0.0, 30.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SidewaysCurrentTooStrong);
  }
  EXPECT_THROW(compute_g(5.0, -6.0, 0.0, 30.0), Error);
}

TEST(DesiredHeading, Examples) {
  EXPECT_EQ(desired_heading(0.7, 0.0, 5.0, 0.0, 0.0, 30.0), 0.7);
  EXPECT_NEAR(desired_heading(0.7, 0.0, 5.0, 10.0, 20.0, 30.0), 0.7 - kPi / 4, 1e-15);
  // atan(0.1) = 0.0996687, atan(3 / 31.62) = 0.0945935
  EXPECT_NEAR(desired_heading(0.5, 0.5, 5.0, 2.0, 1.0, 31.62), 0.305738, 1e-6);
}

TEST(DesiredHeading, UnwrappedInTangentAngle) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double gam = u(rng), v = 0.3 * u(rng), y = 20 * u(rng), g = u(rng);
    const double a = desired_heading(gam, v, 5.0, y, g, 30.0);
    const double b = desired_heading(gam + 2 * kPi, v, 5.0, y, g, 30.0);
    EXPECT_NEAR(b - a, 2 * kPi, 1e-14);
  }
}

TEST(ThetaDot, Examples) {
  EXPECT_DOUBLE_EQ(theta_dot(5.0, 0.3, 0.3, 0.0, 1.0, 0.4), 5.4);
  EXPECT_NEAR(theta_dot(5.0, kPi / 3, 0.0, 1.0, 1.0, 0.4), 3.60711, 5e-6);
  for (double x : {-1e6, -3.0, 0.0, 2.0}) {
    EXPECT_LT(std::abs(theta_dot(0.0, 0.0, 0.0, x, 2.0, 0.0)), 2.0);
  }
  // x / sqrt(1 + x^2) rounds to 1 here; the bound is still never exceeded
  EXPECT_LE(theta_dot(0.0, 0.0, 0.0, 1e9, 2.0, 0.0), 2.0);
}

TEST(VnHatDot, StraightPathConvergedObserver) {
  EXPECT_EQ(vn_hat_dot(0.0, 0.0, 0.4, 0.0, 0.3, 5.0, 0.4, 0.0, 1.0), 0.0);
  // gamma = 0 reduces the rotation to the y component
  EXPECT_NEAR(vn_hat_dot(0.2, 0.05, 0.0, 0.0, 0.3, 5.0, 0.1, 1.0, 1.0), 0.05, 1e-15);
}

TEST(ComputeCr, Examples) {
  auto flat = ShipParams::defaults();
  // X == 0 needs m23^2 = m11 m33 and d33 m23 = d23 m33
  flat.m11 = flat.m23 * flat.m23 / flat.m33;
  flat.d23 = flat.d33 * flat.m23 / flat.m33;
  EXPECT_NEAR(hydro_coefficients(flat).ax, 0.0, 1e-15);
  EXPECT_NEAR(hydro_coefficients(flat).bx, 0.0, 1e-15);
  EXPECT_NEAR(compute_Cr(flat, 4.0, 5.0, 0.3, 30.0, 2.0, 1.0, 0.01), 1.0, 1e-15);

  const auto p = ShipParams::defaults();
  EXPECT_NEAR(compute_Cr(p, 5.0, 5.0, 0.0, 30.0, 2.0, 0.0, 0.0), 1.0 + hydro_X(p, 5.0) / 5.0,
              1e-15);
}

TEST(ComputeG1, Examples) {
  EXPECT_EQ(compute_G1(0.0, 0.0, 3.0, 1.0, 30.0, 0.4, 0.1, 5.0), 0.0);
  EXPECT_NEAR(compute_G1(kPi, 0.0, 3.0, -3.0, 30.0, 0.4, 0.1, 5.0), 0.0, 1e-14);
  EXPECT_NEAR(compute_G1(kPi, 0.0, 10.0, 20.0, 30.0, 0.4, 0.1, 5.0), 5.0 * std::sqrt(2.0), 1e-14);
}

TEST(ComputeG1, LinearGrowthBound) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double pt = 3.0 * u(rng), ut = 3.0 * u(rng), u_td = 5.0 + 2.0 * u(rng);
    const double g1 =
        compute_G1(pt, ut, 100 * u(rng), 10 * u(rng), 30.0 + 20 * u(rng), 3 * u(rng), 3 * u(rng), u_td);
    const double zeta = u_td * 2.0 + 1.0;
    ASSERT_LE(std::abs(g1), zeta * std::hypot(pt, ut) + 1e-12);
  }
}

TEST(DesiredYawRate, VanishesAtStraightPathEquilibrium) {
  const auto ctx = default_context();
  const Path line(Line{{0.0, 0.0}, 0.3});
  GuidanceInputs in;
  in.theta = 12.0;
  in.u_r = in.u_rd = 5.0;
  const double r_d = desired_yaw_rate(in, line, ctx);
  EXPECT_LE(std::abs(r_d), 1e-14);
}

TEST(DesiredYawRate, IllConditionedWhenCrCollapses) {
  auto ctx = default_context();
  ctx.ship.m11 = 5e6;  // X(5) ~ -6.2 so 1 + X/u_rd < 0
  const Path line(Line{{0.0, 0.0}, 0.0});
  GuidanceInputs in;
  in.u_r = in.u_rd = 5.0;
  try {
    desired_yaw_rate(in, line, ctx);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IllConditioned);
  }
}

namespace {

// Independent route to r_d: propagate every signal psi_d depends on along its
// true rate (current equal to the estimate, observer position errors active)
// and difference psi_d. With psi_tilde' = Cr (r - r_d) this gives
// d(psi_d)/dt = r - Cr (r - r_d).
struct FlowState {
  double t, x, y, psi, u_r, v_r, theta, vx_hat, vy_hat, x_err, y_err;
};

struct Setting {
  const Path& path;
  GuidanceContext ctx;
  double speed_amp{0.3}, speed_w{0.05};
  double u_rd(double t) const { return 5.0 + speed_amp * std::sin(speed_w * t); }
  double u_rd_dot(double t) const { return speed_amp * speed_w * std::cos(speed_w * t); }
};

GuidanceInputs inputs_at(const Setting& st, const FlowState& s, double* psi_d_out) {
  const auto smp = st.path.sample(s.theta);
  const auto [xb, yb] = frame_errors(s.x, s.y, smp);
  const auto [vt, vn] = current_in_path_frame(s.vx_hat, s.vy_hat, smp.gamma);
  const double u_rd = st.u_rd(s.t);
  const double psi_d = heading_reference(smp, s.v_r, u_rd, xb, yb, vn, st.ctx.guidance.mu);
  if (psi_d_out) *psi_d_out = psi_d;
  GuidanceInputs in;
  in.theta = s.theta;
  in.v_r = s.v_r;
  in.u_r = s.u_r;
  in.u_rd = u_rd;
  in.u_rd_dot = st.u_rd_dot(s.t);
  in.vt_hat = vt;
  in.vn_hat = vn;
  in.x_bp = xb;
  in.y_bp = yb;
  in.psi_tilde = s.psi - psi_d;
  in.x_obs_err = s.x_err;
  in.y_obs_err = s.y_err;
  return in;
}

FlowState advance(const Setting& st, const FlowState& s, double r, double u_dot, double h) {
  GuidanceInputs in = inputs_at(st, s, nullptr);
  const auto out = evaluate_guidance(in, st.path.sample(s.theta), st.ctx);
  const auto& p = st.ctx.ship;
  const double vdot = hydro_X(p, s.u_r) * r + hydro_Y(p, s.u_r) * s.v_r;
  const auto& k = st.ctx.observer;
  FlowState n = s;
  n.t += h;
  n.x += h * (s.u_r * std::cos(s.psi) - s.v_r * std::sin(s.psi) + s.vx_hat);
  n.y += h * (s.u_r * std::sin(s.psi) + s.v_r * std::cos(s.psi) + s.vy_hat);
  n.psi += h * r;
  n.u_r += h * u_dot;
  n.v_r += h * vdot;
  n.theta += h * out.theta_dot;
  n.vx_hat += h * k.kx2 * s.x_err;
  n.vy_hat += h * k.ky2 * s.y_err;
  // x_err, y_err only enter through the current-estimate rates here
  return n;
}

}  // namespace

TEST(DesiredYawRate, MatchesFlowDerivativeOfHeadingReference) {
  const Path sine(SineGraph{300.0, kPi / 800.0});
  const Path zz(Polyline{{{0, 0}, {1500, 1500}, {2600, 400}}, 150.0});
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const Path* path : {&sine, &zz}) {
    Setting st{*path, default_context()};
    for (int i = 0; i < 300; ++i) {
      const double th = 300.0 + 1000.0 * (1.0 + u(rng));
      const auto smp = path->sample(th);
      const double off_x = 30.0 * u(rng), off_y = 80.0 * u(rng);
      FlowState s;
      s.t = 50.0 * (1.0 + u(rng));
      s.theta = th + off_x * 0.2;
      s.x = smp.x + off_x * std::cos(smp.gamma) - off_y * std::sin(smp.gamma);
      s.y = smp.y + off_x * std::sin(smp.gamma) + off_y * std::cos(smp.gamma);
      s.psi = smp.gamma + 0.8 * u(rng);
      s.u_r = 5.0 + 2.0 * u(rng);
      s.v_r = 0.5 * u(rng);
      s.vx_hat = 0.7 * u(rng);
      s.vy_hat = 0.7 * u(rng);
      s.x_err = 2.0 * u(rng);
      s.y_err = 2.0 * u(rng);
      const double r = 0.05 * u(rng), u_dot = 0.2 * u(rng);

      double psi_d0 = 0.0;
      const auto in = inputs_at(st, s, &psi_d0);
      const auto out = evaluate_guidance(in, path->sample(s.theta), st.ctx);

      const double h = 1e-4;
      double psi_p = 0.0, psi_m = 0.0;
      inputs_at(st, advance(st, s, r, u_dot, h), &psi_p);
      inputs_at(st, advance(st, s, r, u_dot, -h), &psi_m);
      const double flow = (psi_p - psi_m) / (2.0 * h);
      const double predicted = r - out.Cr * (r - out.r_d);
      ASSERT_NEAR(flow, predicted, 2e-7) << "sample " << i;
    }
  }
}

TEST(VnHatDot, MatchesFlowDerivative) {
  const Path sine(SineGraph{300.0, kPi / 800.0});
  Setting st{sine, default_context()};
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const auto smp = sine.sample(800.0 + 500.0 * u(rng));
    FlowState s{10.0, smp.x + 20 * u(rng), smp.y + 20 * u(rng), smp.gamma + 0.5 * u(rng),
                5.0 + u(rng), 0.3 * u(rng), smp.theta, 0.6 * u(rng), 0.6 * u(rng),
                u(rng), u(rng)};
    const auto in = inputs_at(st, s, nullptr);
    const auto out = evaluate_guidance(in, smp, st.ctx);
    const double h = 1e-4;
    const auto in_p = inputs_at(st, advance(st, s, 0.01, 0.0, h), nullptr);
    const auto in_m = inputs_at(st, advance(st, s, 0.01, 0.0, -h), nullptr);
    EXPECT_NEAR((in_p.vn_hat - in_m.vn_hat) / (2 * h), out.vn_hat_dot, 1e-8);

    // free-function form agrees with the chain
    const double u_t = std::hypot(s.u_r, s.v_r);
    const double chi = s.psi + std::atan2(s.v_r, s.u_r);
    EXPECT_NEAR(vn_hat_dot(0.1 * s.x_err, 0.1 * s.y_err, smp.gamma, smp.kappa, in.vt_hat, u_t, chi,
                           in.x_bp, 1.0),
                out.vn_hat_dot, 1e-12);
  }
}

TEST(DesiredYawRate, BoundedAffineInSway) {
  const auto ctx = default_context();
  const Path sine(SineGraph{300.0, kPi / 800.0});
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst_small = 0.0, worst_large = 0.0;
  for (int i = 0; i < 10000; ++i) {
    GuidanceInputs in;
    in.theta = 1600.0 * (1.0 + u(rng));
    in.v_r = 2.0 * u(rng);
    in.u_r = 5.0 + u(rng);
    in.u_rd = 5.0;
    in.vt_hat = 0.7 * u(rng);
    in.vn_hat = 0.7 * u(rng);
    in.x_bp = 100.0 * u(rng);
    in.y_bp = 100.0 * u(rng);
    in.psi_tilde = u(rng);
    in.x_obs_err = u(rng);
    in.y_obs_err = u(rng);
    double r_d = 0.0;
    try {
      r_d = desired_yaw_rate(in, sine, ctx);
    } catch (const Error& e) {
      ASSERT_EQ(e.code(), ErrorCode::IllConditioned);
      continue;
    }
    ASSERT_TRUE(std::isfinite(r_d));
    auto& w = std::abs(in.v_r) < 1.0 ? worst_small : worst_large;
    w = std::max(w, std::abs(r_d) / (1.0 + std::abs(in.v_r)));
  }
  // a single affine envelope |r_d| <= A |v_r| + B covers both bands
  EXPECT_LT(worst_small, 10.0);
  EXPECT_LT(worst_large, 10.0);
}

TEST(EvaluateGuidance, OutputInvariants) {
  const auto ctx = default_context();
  const Path sine(SineGraph{300.0, kPi / 800.0});
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    GuidanceInputs in;
    in.theta = 1000.0 + 500 * u(rng);
    in.u_r = in.u_rd = 5.0;
    in.v_r = 0.2 * u(rng);
    in.vn_hat = 2.0 * u(rng);
    in.x_bp = 50 * u(rng);
    in.y_bp = 50 * u(rng);
    const auto out = evaluate_guidance(in, sine.sample(in.theta), ctx);
    EXPECT_GE(out.delta, std::sqrt(ctx.guidance.mu));
    if (in.vn_hat != 0.0) EXPECT_EQ(std::signbit(out.g), std::signbit(in.vn_hat));
    EXPECT_GT(out.Cr, 0.0);
  }
}
