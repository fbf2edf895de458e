#include "pathfollow/control.hpp"

#include <algorithm>
#include <cmath>

#include "pathfollow/error.hpp"

namespace pathfollow {

void ControllerGains::validate() const {
  if (!(k_u > 0.0 && k1 > 0.0 && k2 > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "controller gains must be positive");
  }
}

double surge_control(const ShipParams& p, double u_r, double u_rd, double u_rd_dot, double v_r,
                     double r, double k_u) {
  // Damping cancelled at the measured u_r so the error obeys u~' = -k_u u~ exactly;
  // with u_rd here the residual -(d11/m11) u~ would add to the decay rate.
  return -hydro_Fu(p, v_r, r) + u_rd_dot + p.d11 / p.m11 * u_r - k_u * (u_r - u_rd);
}

std::array<double, GuidanceInputs::kSize> RdJacobian::as_array() const {
  return {dh[0], dh[1], dh[2], dh[3], dh[4], dh[5], dh[6],
          dx_bp, dy_bp, dpsi_tilde, dx_obs, dy_obs};
}

namespace {

constexpr double kMinCr = 1e-6;

RdJacobian from_array(const std::array<double, GuidanceInputs::kSize>& g) {
  RdJacobian j;
  std::copy_n(g.begin(), GuidanceInputs::kHSize, j.dh.begin());
  j.dx_bp = g[GuidanceInputs::kXbp];
  j.dy_bp = g[GuidanceInputs::kYbp];
  j.dpsi_tilde = g[GuidanceInputs::kPsiTilde];
  j.dx_obs = g[GuidanceInputs::kXObs];
  j.dy_obs = g[GuidanceInputs::kYObs];
  return j;
}

}  // namespace

RdJacobian rd_jacobian(const GuidanceInputs& in, const PathSample& s, const GuidanceContext& ctx) {
  using D = Dual<GuidanceInputs::kSize>;
  const auto values = in.as_array();
  std::array<D, GuidanceInputs::kSize> seeded;
  for (std::size_t i = 0; i < seeded.size(); ++i) seeded[i] = D::variable(values[i], i);

  // gamma(theta) and kappa(theta) to first order around the sample.
  D gamma(s.gamma);
  D kappa(s.kappa);
  gamma.d[GuidanceInputs::kTheta] = s.kappa;
  kappa.d[GuidanceInputs::kTheta] = s.dkappa;

  const auto t = guidance_terms<D>(seeded, gamma, kappa, ctx);
  if (!(t.Cr.v > kMinCr)) throw Error(ErrorCode::IllConditioned, "Cr too small");
  return from_array(t.r_d.d);
}

RdJacobian rd_jacobian(const GuidanceInputs& in, const Path& path, const GuidanceContext& ctx,
                       DiffBackend backend) {
  if (backend == DiffBackend::Forward) return rd_jacobian(in, path.sample(in.theta), ctx);

  const auto base = in.as_array();
  std::array<double, GuidanceInputs::kSize> grad{};
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double h = std::max(1e-6 * std::abs(base[i]), 1e-9);
    auto plus = base;
    auto minus = base;
    plus[i] += h;
    minus[i] -= h;
    const double fp = desired_yaw_rate(GuidanceInputs::from_array(plus), path, ctx);
    const double fm = desired_yaw_rate(GuidanceInputs::from_array(minus), path, ctx);
    grad[i] = (fp - fm) / (plus[i] - minus[i]);
  }
  return from_array(grad);
}

std::array<double, GuidanceInputs::kHSize> h_dot(const GuidanceInputs& in, const PathSample& s,
                                                  const HRates& rates) {
  const double c = std::cos(s.gamma);
  const double sn = std::sin(s.gamma);
  const double turn = s.kappa * rates.theta_dot;
  return {rates.theta_dot,
          rates.v_r_dot,
          rates.u_r_dot,
          in.u_rd_dot,
          rates.u_rd_ddot,
          rates.vx_hat_dot * c + rates.vy_hat_dot * sn + turn * in.vn_hat,
          -rates.vx_hat_dot * sn + rates.vy_hat_dot * c - turn * in.vt_hat};
}

double yaw_control(const GuidanceInputs& in, const GuidanceOutput& go, const RdJacobian& jac,
                   const std::array<double, GuidanceInputs::kHSize>& hdot, double u_r, double v_r,
                   double r, const ControllerGains& gains, const GuidanceContext& ctx) {
  if (!(go.Cr > kMinCr)) throw Error(ErrorCode::IllConditioned, "Cr too small");
  const double r_tilde = r - go.r_d;
  double feedforward = 0.0;
  for (std::size_t i = 0; i < hdot.size(); ++i) feedforward += jac.dh[i] * hdot[i];
  return -hydro_Fr(ctx.ship, u_r, v_r, r) + feedforward - gains.k1 * r_tilde -
         gains.k2 * go.Cr * in.psi_tilde + jac.dx_bp * go.x_bp_dot_known +
         jac.dpsi_tilde * go.Cr * r_tilde - jac.dx_obs * ctx.observer.kx1 * in.x_obs_err -
         jac.dy_obs * ctx.observer.ky1 * in.y_obs_err + jac.dy_bp * go.y_bp_dot_known;
}

}  // namespace pathfollow
