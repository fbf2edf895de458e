#pragma once

// Line-of-sight-like guidance with current compensation: look-ahead distance,
// compensation term g, desired heading, path-variable rate and the
// implementable yaw-rate reference r_d.

#include <array>
#include <cmath>
#include <cstddef>

#include "pathfollow/dual.hpp"
#include "pathfollow/observer.hpp"
#include "pathfollow/path.hpp"
#include "pathfollow/vessel.hpp"

namespace pathfollow {

struct GuidanceParams {
  double k_delta{1.0};
  double mu{1000.0};

  void validate() const;
};

/// Everything r_d depends on: h = (theta, v_r, u_r, u_rd, u_rd_dot, Vt_hat,
/// Vn_hat), the path-frame errors, the heading error and the observer
/// position errors.
struct GuidanceInputs {
  double theta{}, v_r{}, u_r{}, u_rd{}, u_rd_dot{}, vt_hat{}, vn_hat{};
  double x_bp{}, y_bp{}, psi_tilde{}, x_obs_err{}, y_obs_err{};

  static constexpr std::size_t kSize = 12;
  static constexpr std::size_t kHSize = 7;
  enum Index : std::size_t {
    kTheta, kVr, kUr, kUrd, kUrdDot, kVtHat, kVnHat, kXbp, kYbp, kPsiTilde, kXObs, kYObs
  };

  std::array<double, kSize> as_array() const;
  static GuidanceInputs from_array(const std::array<double, kSize>& a);
};

struct GuidanceContext {
  ShipParams ship;
  GuidanceParams guidance;
  ObserverGains observer;
};

struct Lookahead {
  double delta{}, d_dx{}, d_dy{};
};

Lookahead lookahead(double x_bp, double y_bp, double mu);

struct GTerm {
  double g{};
  double dg_da{}, dg_db{}, dg_dc{};
};

/// Root of u_td*g/sqrt(delta^2 + (y_bp+g)^2) = Vn_hat with the sign of
/// Vn_hat. Throws SidewaysCurrentTooStrong when |Vn_hat| >= (1-1e-9) u_td.
GTerm compute_g(double u_td, double vn_hat, double y_bp, double delta);

/// g = Vn_hat (b + sqrt(b^2 - a c)) / (-a) in terms of the raw coefficients.
double g_from_abc(double vn_hat, double a, double b, double c);

double desired_heading(double gamma, double v_r, double u_rd, double y_bp, double g, double delta);

double theta_dot(double u_t, double chi, double gamma, double x_bp, double k_delta, double vt_hat);

/// Time derivative of the estimated normal current along the path.
double vn_hat_dot(double vx_hat_dot, double vy_hat_dot, double gamma, double kappa, double vt_hat,
                  double u_t, double chi, double x_bp, double k_delta);

double compute_Cr(const ShipParams& p, double u_r, double u_rd, double v_r, double delta,
                  double y_bp, double g, double dg_da);

double compute_G1(double psi_tilde, double u_tilde, double y_bp, double g, double delta,
                  double psi, double gamma, double u_td);

/// Desired heading for the current frame errors (needed to form psi_tilde).
double heading_reference(const PathSample& s, double v_r, double u_rd, double x_bp, double y_bp,
                         double vn_hat, double mu);

/// All intermediate guidance quantities, generic over the scalar type so the
/// same code path serves plain evaluation and forward-mode differentiation.
template <class T>
struct GuidanceTerms {
  T theta_dot, delta, ddelta_dx, ddelta_dy;
  T g, dg_da, dg_db, dg_dc, g_ratio;
  T u_td, psi_d, psi;
  T Cr, r_d, vn_hat_dot, G1;
  T x_bp_dot_known, y_bp_dot_known;
};

/// Evaluates the guidance chain. gamma and kappa are the path tangent angle
/// and curvature at inputs[kTheta] (as T, so their theta-dependence can be
/// carried by dual numbers).
template <class T>
GuidanceTerms<T> guidance_terms(const std::array<T, GuidanceInputs::kSize>& in, const T& gamma,
                                const T& kappa, const GuidanceContext& ctx) {
  using std::atan;
  using std::cos;
  using std::sin;
  using std::sqrt;
  using I = GuidanceInputs;

  const T& v_r = in[I::kVr];
  const T& u_r = in[I::kUr];
  const T& u_rd = in[I::kUrd];
  const T& u_rd_dot = in[I::kUrdDot];
  const T& vt = in[I::kVtHat];
  const T& vn = in[I::kVnHat];
  const T& x = in[I::kXbp];
  const T& y = in[I::kYbp];
  const T& psi_tilde = in[I::kPsiTilde];
  const auto hc = hydro_coefficients(ctx.ship);
  const double k_delta = ctx.guidance.k_delta;

  GuidanceTerms<T> t;
  t.delta = sqrt(ctx.guidance.mu + x * x + y * y);
  t.ddelta_dx = x / t.delta;
  t.ddelta_dy = y / t.delta;

  const T u_td2 = u_rd * u_rd + v_r * v_r;
  t.u_td = sqrt(u_td2);
  const T a = vn * vn - u_td2;
  const T b = y * vn;
  const T c = t.delta * t.delta + y * y;
  const T s = sqrt(b * b - a * c);
  t.g_ratio = (b + s) / (-a);
  t.g = vn * t.g_ratio;
  t.dg_da = vn * (c / (2.0 * s * a) + (b + s) / (a * a));
  t.dg_db = vn * (-(1.0 + b / s) / a);
  t.dg_dc = vn * (1.0 / (2.0 * s));

  const T yg = y + t.g;
  const T den = t.delta * t.delta + yg * yg;
  const T root = sqrt(den);
  t.psi_d = gamma - atan(v_r / u_rd) - atan(yg / t.delta);
  t.psi = t.psi_d + psi_tilde;

  const T X = hc.ax * u_r + hc.bx;
  const T Y = hc.ay * u_r + hc.by;
  const T rel = t.psi - gamma;
  const T c_rel = cos(rel);
  const T s_rel = sin(rel);
  // u_t cos(chi - gamma) with chi = psi + atan2(v_r, u_r), written without beta.
  const T along = u_r * c_rel - v_r * s_rel;
  const T fx = x / sqrt(1.0 + x * x);
  t.theta_dot = along + k_delta * fx + vt;

  const T vx_dot = ctx.observer.kx2 * in[I::kXObs];
  const T vy_dot = ctx.observer.ky2 * in[I::kYObs];
  t.vn_hat_dot = vy_dot * cos(gamma) - vx_dot * sin(gamma) - kappa * t.theta_dot * vt;

  const T sin_los = yg / root;
  const T cos_los = t.delta / root;
  t.G1 = t.u_td * (1.0 - cos(psi_tilde)) * sin_los + (u_r - u_rd) * s_rel +
         t.u_td * cos_los * sin(psi_tilde);

  t.x_bp_dot_known = -k_delta * fx + y * kappa * t.theta_dot;
  t.y_bp_dot_known = -t.u_td * y / root + t.G1 - x * kappa * t.theta_dot;
  const T delta_dot = t.ddelta_dx * t.x_bp_dot_known + t.ddelta_dy * t.y_bp_dot_known;

  t.Cr = 1.0 + X * u_rd / u_td2 - 2.0 * X * v_r * t.delta / den * t.dg_da;

  // Known part of the heading-error rate: d/dt(psi - psi_d) = Cr r + f.
  const T bracket =
      t.vn_hat_dot * t.g_ratio + t.dg_db * t.vn_hat_dot * y +
      2.0 * t.dg_da * (vn * t.vn_hat_dot - u_rd * u_rd_dot - Y * v_r * v_r) +
      (1.0 + 2.0 * t.dg_dc * y + t.dg_db * vn) * t.y_bp_dot_known +
      2.0 * t.dg_dc * t.delta * delta_dot;
  const T f = -kappa * t.theta_dot + (Y * v_r * u_rd - u_rd_dot * v_r) / u_td2 +
              t.delta / den * bracket - yg / den * delta_dot;
  t.r_d = -f / t.Cr;
  return t;
}

/// Per-tick guidance bundle.
struct GuidanceOutput {
  double theta{}, theta_dot{};
  double delta{}, ddelta_dx{}, ddelta_dy{};
  double g{}, dg_da{}, dg_db{}, dg_dc{};
  double psi_d{}, Cr{}, r_d{};
  double vt_hat{}, vn_hat{}, vn_hat_dot{};
  double G1{};
  double x_bp_dot_known{}, y_bp_dot_known{};
};

/// Plain evaluation at a path sample. Throws SidewaysCurrentTooStrong and
/// IllConditioned (Cr <= 1e-6).
GuidanceOutput evaluate_guidance(const GuidanceInputs& in, const PathSample& s,
                                 const GuidanceContext& ctx);

double desired_yaw_rate(const GuidanceInputs& in, const PathSample& s, const GuidanceContext& ctx);
double desired_yaw_rate(const GuidanceInputs& in, const Path& path, const GuidanceContext& ctx);

}  // namespace pathfollow
