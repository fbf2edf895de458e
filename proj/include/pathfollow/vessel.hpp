#pragma once

// 3-DOF surface vessel expressed at the pivot point, with relative velocities
// and a constant irrotational ocean current.

#include <array>
#include <string>
#include <vector>

namespace pathfollow {

/// Mass, damping and allocation entries of the port-starboard symmetric model.
struct ShipParams {
  double m11{}, m22{}, m23{}, m32{}, m33{};
  double d11{}, d22{}, d23{}, d32{}, d33{};
  double b11{}, b22{}, b32{};

  /// Documented default set. Linear damping is valid for |u_r| < 7 m/s.
  static ShipParams defaults();
};

/// Affine coefficients X(u_r) = ax*u_r + bx and Y(u_r) = ay*u_r + by.
/// Always derived from ShipParams on demand; never cached.
struct HydroCoefficients {
  double ax{}, bx{}, ay{}, by{};
};

HydroCoefficients hydro_coefficients(const ShipParams& p);

double hydro_X(const ShipParams& p, double u_r);
double hydro_Y(const ShipParams& p, double u_r);
double hydro_Fu(const ShipParams& p, double v_r, double r);
double hydro_Fr(const ShipParams& p, double u_r, double v_r, double r);

/// Parameters that passed the model assumptions on a speed range, together
/// with the bounds of X and Y on [-V_max, u_rd_max].
struct ValidatedShipParams {
  ShipParams params;
  double u_rd_max{};
  double v_max{};
  double y_min{};  // min of -Y(u_r) on the range
  double x_max{};  // max of |X(u_r)| on the range

  double curvature_ratio() const { return y_min / (2.0 * x_max); }
};

/// Throws NonPositiveDeterminant, AssumptionYViolated or SpeedMarginViolated.
ValidatedShipParams validate_params(const ShipParams& p, double u_rd_max, double v_max);

/// Inertial pose and relative body velocities. Heading is never wrapped.
struct VesselState {
  double x{}, y{}, psi{};
  double u_r{}, v_r{}, r{};
};

struct VesselDerivative {
  double x_dot{}, y_dot{}, psi_dot{};
  double u_r_dot{}, v_r_dot{}, r_dot{};
};

struct Current {
  double vx{}, vy{};
};

VesselDerivative vessel_derivative(const ShipParams& p, const VesselState& s, double tau_u,
                                   double tau_r, Current v);

struct ActuatorCommand {
  double thrust{};  // T_u
  double rudder{};  // T_r
};

/// Inverts the surge/yaw rows of M^-1 B. Throws SingularAllocation.
ActuatorCommand allocate_actuators(double tau_u, double tau_r, const ShipParams& p);

/// Surge and yaw generalized inputs produced by an actuator pair on the
/// pivot-point model (the forward map inverted by allocate_actuators).
std::array<double, 2> apply_allocation(const ActuatorCommand& f, const ShipParams& p);

/// Piecewise-constant current. Segments switch either at a time or when the
/// path abscissa first reaches the segment key.
struct CurrentSchedule {
  enum class Trigger { Time, Abscissa };

  struct Segment {
    double start{};  // s or m, depending on trigger
    double vx{}, vy{};
  };

  Trigger trigger{Trigger::Time};
  std::vector<Segment> segments;
  double v_max{};

  static CurrentSchedule constant(double vx, double vy, double v_max);

  /// Throws AssumptionViolated when segments are unordered or exceed V_max.
  void validate() const;
};

}  // namespace pathfollow
