#pragma once

// Surge feedback-linearizing controller and yaw controller whose acceleration
// feedforward uses only known signals. No function here takes the true current.

#include <array>

#include "pathfollow/guidance.hpp"

namespace pathfollow {

struct ControllerGains {
  double k_u{0.1};
  double k1{40.0};
  double k2{100.0};

  void validate() const;
};

double surge_control(const ShipParams& p, double u_r, double u_rd, double u_rd_dot, double v_r,
                     double r, double k_u);

enum class DiffBackend { Forward, CentralDifference };

/// Sensitivities of r_d to each of its arguments.
struct RdJacobian {
  std::array<double, GuidanceInputs::kHSize> dh{};
  double dx_bp{}, dy_bp{}, dpsi_tilde{}, dx_obs{}, dy_obs{};

  std::array<double, GuidanceInputs::kSize> as_array() const;
};

/// Throws IllConditioned when Cr <= 1e-6 at the evaluation point.
RdJacobian rd_jacobian(const GuidanceInputs& in, const Path& path, const GuidanceContext& ctx,
                       DiffBackend backend = DiffBackend::Forward);

/// Forward-mode variant that only needs the sample (which carries dkappa).
RdJacobian rd_jacobian(const GuidanceInputs& in, const PathSample& s, const GuidanceContext& ctx);

/// Signals entering the time derivative of h.
struct HRates {
  double theta_dot{};
  double v_r_dot{};
  double u_r_dot{};
  double u_rd_ddot{};
  double vx_hat_dot{}, vy_hat_dot{};
};

/// d/dt of h = (theta, v_r, u_r, u_rd, u_rd_dot, Vt_hat, Vn_hat).
std::array<double, GuidanceInputs::kHSize> h_dot(const GuidanceInputs& in, const PathSample& s,
                                                  const HRates& rates);

double yaw_control(const GuidanceInputs& in, const GuidanceOutput& go, const RdJacobian& jac,
                   const std::array<double, GuidanceInputs::kHSize>& hdot, double u_r, double v_r,
                   double r, const ControllerGains& gains, const GuidanceContext& ctx);

}  // namespace pathfollow
