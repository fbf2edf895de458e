#include "pathfollow/guidance.hpp"

#include <cmath>

#include "pathfollow/error.hpp"

namespace pathfollow {

namespace {

constexpr double kMinCr = 1e-6;
constexpr double kSidewaysMargin = 1e-9;

void check_sideways(double u_td, double vn_hat) {
  if (!(std::abs(vn_hat) < (1.0 - kSidewaysMargin) * u_td)) {
    throw Error(ErrorCode::SidewaysCurrentTooStrong,
                "|Vn_hat| must stay below the desired total speed");
  }
}

}  // namespace

void GuidanceParams::validate() const {
  if (!(k_delta > 0.0)) throw Error(ErrorCode::InvalidParameter, "k_delta must be positive");
  if (!(mu > 0.0)) throw Error(ErrorCode::InvalidParameter, "mu must be positive");
}

std::array<double, GuidanceInputs::kSize> GuidanceInputs::as_array() const {
  return {theta, v_r, u_r, u_rd, u_rd_dot, vt_hat, vn_hat, x_bp, y_bp, psi_tilde, x_obs_err,
          y_obs_err};
}

GuidanceInputs GuidanceInputs::from_array(const std::array<double, kSize>& a) {
  return {a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7], a[8], a[9], a[10], a[11]};
}

Lookahead lookahead(double x_bp, double y_bp, double mu) {
  const double d = std::sqrt(mu + x_bp * x_bp + y_bp * y_bp);
  return {d, x_bp / d, y_bp / d};
}

double g_from_abc(double vn_hat, double a, double b, double c) {
  return vn_hat * (b + std::sqrt(b * b - a * c)) / (-a);
}

GTerm compute_g(double u_td, double vn_hat, double y_bp, double delta) {
  check_sideways(u_td, vn_hat);
  const double a = vn_hat * vn_hat - u_td * u_td;
  const double b = y_bp * vn_hat;
  const double c = delta * delta + y_bp * y_bp;
  const double s = std::sqrt(b * b - a * c);
  GTerm out;
  out.g = vn_hat * (b + s) / (-a);
  out.dg_da = vn_hat * (c / (2.0 * s * a) + (b + s) / (a * a));
  out.dg_db = -vn_hat * (1.0 + b / s) / a;
  out.dg_dc = vn_hat / (2.0 * s);
  return out;
}

double desired_heading(double gamma, double v_r, double u_rd, double y_bp, double g,
                       double delta) {
  return gamma - std::atan(v_r / u_rd) - std::atan((y_bp + g) / delta);
}

double theta_dot(double u_t, double chi, double gamma, double x_bp, double k_delta,
                 double vt_hat) {
  return u_t * std::cos(chi - gamma) + k_delta * x_bp / std::sqrt(1.0 + x_bp * x_bp) + vt_hat;
}

double vn_hat_dot(double vx_hat_dot, double vy_hat_dot, double gamma, double kappa, double vt_hat,
                  double u_t, double chi, double x_bp, double k_delta) {
  const double path_rate = theta_dot(u_t, chi, gamma, x_bp, k_delta, vt_hat);
  return vy_hat_dot * std::cos(gamma) - vx_hat_dot * std::sin(gamma) - kappa * vt_hat * path_rate;
}

double compute_Cr(const ShipParams& p, double u_r, double u_rd, double v_r, double delta,
                  double y_bp, double g, double dg_da) {
  const double X = hydro_X(p, u_r);
  const double yg = y_bp + g;
  return 1.0 + X * u_rd / (u_rd * u_rd + v_r * v_r) -
         2.0 * X * v_r * delta / (delta * delta + yg * yg) * dg_da;
}

double compute_G1(double psi_tilde, double u_tilde, double y_bp, double g, double delta,
                  double psi, double gamma, double u_td) {
  const double los = std::atan((y_bp + g) / delta);
  return u_td * (1.0 - std::cos(psi_tilde)) * std::sin(los) + u_tilde * std::sin(psi - gamma) +
         u_td * std::cos(los) * std::sin(psi_tilde);
}

double heading_reference(const PathSample& s, double v_r, double u_rd, double x_bp, double y_bp,
                         double vn_hat, double mu) {
  const auto la = lookahead(x_bp, y_bp, mu);
  const double u_td = std::sqrt(u_rd * u_rd + v_r * v_r);
  const auto g = compute_g(u_td, vn_hat, y_bp, la.delta);
  return desired_heading(s.gamma, v_r, u_rd, y_bp, g.g, la.delta);
}

GuidanceOutput evaluate_guidance(const GuidanceInputs& in, const PathSample& s,
                                 const GuidanceContext& ctx) {
  check_sideways(std::sqrt(in.u_rd * in.u_rd + in.v_r * in.v_r), in.vn_hat);
  const auto t = guidance_terms<double>(in.as_array(), s.gamma, s.kappa, ctx);
  if (!(t.Cr > kMinCr)) {
    throw Error(ErrorCode::IllConditioned, "Cr = " + std::to_string(t.Cr));
  }
  GuidanceOutput out;
  out.theta = in.theta;
  out.theta_dot = t.theta_dot;
  out.delta = t.delta;
  out.ddelta_dx = t.ddelta_dx;
  out.ddelta_dy = t.ddelta_dy;
  out.g = t.g;
  out.dg_da = t.dg_da;
  out.dg_db = t.dg_db;
  out.dg_dc = t.dg_dc;
  out.psi_d = t.psi_d;
  out.Cr = t.Cr;
  out.r_d = t.r_d;
  out.vt_hat = in.vt_hat;
  out.vn_hat = in.vn_hat;
  out.vn_hat_dot = t.vn_hat_dot;
  out.G1 = t.G1;
  out.x_bp_dot_known = t.x_bp_dot_known;
  out.y_bp_dot_known = t.y_bp_dot_known;
  return out;
}

double desired_yaw_rate(const GuidanceInputs& in, const PathSample& s,
                        const GuidanceContext& ctx) {
  return evaluate_guidance(in, s, ctx).r_d;
}

double desired_yaw_rate(const GuidanceInputs& in, const Path& path, const GuidanceContext& ctx) {
  return desired_yaw_rate(in, path.sample(in.theta), ctx);
}

}  // namespace pathfollow
