#include "pathfollow/vessel.hpp"

#include <algorithm>
#include <cmath>

#include "pathfollow/error.hpp"

namespace pathfollow {

ShipParams ShipParams::defaults() {
  // Offshore-supply-like vessel. m33*b22 = m23*b32 keeps the rudder from
  // producing sway at the pivot point. Y_min/(2 X_max) = 0.0667 on [-1.08, 5].
  ShipParams p;
  p.m11 = 2.0e6;
  p.m22 = 4.0e6;
  p.m23 = 8.0e6;
  p.m32 = 8.0e6;
  p.m33 = 3.2e8;
  p.d11 = 2.0e5;
  p.d22 = 1.384e6;
  p.d23 = 2.0e6;
  p.d32 = 0.0;
  p.d33 = 1.0e8;
  p.b11 = 1.0;
  p.b22 = 0.025;
  p.b32 = 1.0;
  return p;
}

namespace {

double inertia_det(const ShipParams& p) { return p.m22 * p.m33 - p.m23 * p.m23; }

}  // namespace

HydroCoefficients hydro_coefficients(const ShipParams& p) {
  const double det = inertia_det(p);
  HydroCoefficients c;
  c.ax = (p.m23 * p.m23 - p.m11 * p.m33) / det;
  c.bx = (p.d33 * p.m23 - p.d23 * p.m33) / det;
  c.ay = (p.m22 - p.m11) * p.m23 / det;
  c.by = -(p.d22 * p.m33 - p.d32 * p.m23) / det;
  return c;
}

double hydro_X(const ShipParams& p, double u_r) {
  const auto c = hydro_coefficients(p);
  return c.ax * u_r + c.bx;
}

double hydro_Y(const ShipParams& p, double u_r) {
  const auto c = hydro_coefficients(p);
  return c.ay * u_r + c.by;
}

double hydro_Fu(const ShipParams& p, double v_r, double r) {
  return (p.m22 * v_r + p.m23 * r) * r / p.m11;
}

double hydro_Fr(const ShipParams& p, double u_r, double v_r, double r) {
  const double det = inertia_det(p);
  const double cv = (p.m23 * p.d22 - p.m22 * (p.d32 + (p.m22 - p.m11) * u_r)) / det;
  const double cr = (p.m23 * (p.d23 + p.m11 * u_r) - p.m22 * (p.d33 + p.m23 * u_r)) / det;
  return cv * v_r + cr * r;
}

ValidatedShipParams validate_params(const ShipParams& p, double u_rd_max, double v_max) {
  const double fields[] = {p.m11, p.m22, p.m23, p.m32, p.m33, p.d11, p.d22,
                           p.d23, p.d32, p.d33, p.b11, p.b22, p.b32, u_rd_max, v_max};
  for (double f : fields) {
    if (!std::isfinite(f)) throw Error(ErrorCode::InvalidParameter, "non-finite parameter");
  }
  if (!(p.m11 > 0.0)) throw Error(ErrorCode::InvalidParameter, "m11 must be positive");
  if (!(inertia_det(p) > 0.0)) {
    throw Error(ErrorCode::NonPositiveDeterminant, "m22*m33 - m23^2 must be positive");
  }
  if (p.b11 == 0.0 || (p.b22 == 0.0 && p.b32 == 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "surge and yaw actuation must both exist");
  }

  // X and Y are affine, so their extrema on an interval sit at the endpoints.
  const double lo = -v_max;
  const double hi = u_rd_max;
  const double y_lo = hydro_Y(p, lo);
  const double y_hi = hydro_Y(p, hi);
  if (!(std::max(y_lo, y_hi) < 0.0)) {
    throw Error(ErrorCode::AssumptionYViolated,
                "Y(u_r) must be strictly negative on [-V_max, u_rd_max]");
  }
  if (!(u_rd_max > 2.0 * v_max)) {
    throw Error(ErrorCode::SpeedMarginViolated, "u_rd must exceed twice V_max");
  }

  ValidatedShipParams v;
  v.params = p;
  v.u_rd_max = u_rd_max;
  v.v_max = v_max;
  v.y_min = std::min(-y_lo, -y_hi);
  v.x_max = std::max(std::abs(hydro_X(p, lo)), std::abs(hydro_X(p, hi)));
  return v;
}

VesselDerivative vessel_derivative(const ShipParams& p, const VesselState& s, double tau_u,
                                   double tau_r, Current v) {
  const double c = std::cos(s.psi);
  const double sn = std::sin(s.psi);
  VesselDerivative d;
  d.x_dot = s.u_r * c - s.v_r * sn + v.vx;
  d.y_dot = s.u_r * sn + s.v_r * c + v.vy;
  d.psi_dot = s.r;
  d.u_r_dot = hydro_Fu(p, s.v_r, s.r) - p.d11 / p.m11 * s.u_r + tau_u;
  d.v_r_dot = hydro_X(p, s.u_r) * s.r + hydro_Y(p, s.u_r) * s.v_r;
  d.r_dot = hydro_Fr(p, s.u_r, s.v_r, s.r) + tau_r;
  return d;
}

namespace {

// Yaw row of the sway/yaw block of M^-1 B acting on T_r.
double yaw_gain(const ShipParams& p) {
  const double det = p.m22 * p.m33 - p.m23 * p.m32;
  if (det == 0.0) return 0.0;
  return (p.m22 * p.b32 - p.m32 * p.b22) / det;
}

}  // namespace

ActuatorCommand allocate_actuators(double tau_u, double tau_r, const ShipParams& p) {
  const double yaw = yaw_gain(p);
  if (p.b11 == 0.0 || yaw == 0.0 || !std::isfinite(yaw)) {
    throw Error(ErrorCode::SingularAllocation, "effective surge/yaw map is not invertible");
  }
  return {p.m11 * tau_u / p.b11, tau_r / yaw};
}

std::array<double, 2> apply_allocation(const ActuatorCommand& f, const ShipParams& p) {
  return {p.b11 * f.thrust / p.m11, yaw_gain(p) * f.rudder};
}

CurrentSchedule CurrentSchedule::constant(double vx, double vy, double v_max) {
  CurrentSchedule s;
  s.segments.push_back({0.0, vx, vy});
  s.v_max = v_max;
  return s;
}

void CurrentSchedule::validate() const {
  if (segments.empty()) throw Error(ErrorCode::AssumptionViolated, "empty current schedule");
  if (!(v_max > 0.0)) throw Error(ErrorCode::AssumptionViolated, "V_max must be positive");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    if (i > 0 && !(s.start > segments[i - 1].start)) {
      throw Error(ErrorCode::AssumptionViolated, "current segments must be strictly ordered");
    }
    if (std::hypot(s.vx, s.vy) > v_max) {
      throw Error(ErrorCode::AssumptionViolated, "current segment exceeds V_max");
    }
  }
}

}  // namespace pathfollow
