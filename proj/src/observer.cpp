#include "pathfollow/observer.hpp"

#include <algorithm>
#include <cmath>

#include "pathfollow/error.hpp"

namespace pathfollow {

void ObserverGains::validate() const {
  if (!(kx1 > 0.0 && ky1 > 0.0 && kx2 > 0.0 && ky2 > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "observer gains must be positive");
  }
}

ObserverState init_observer(double x, double y) { return {x, y, 0.0, 0.0}; }

ObserverState observer_derivative(const ObserverState& o, double x_meas, double y_meas,
                                  double u_r, double v_r, double psi, const ObserverGains& k) {
  const double ex = x_meas - o.x_hat;
  const double ey = y_meas - o.y_hat;
  const double c = std::cos(psi);
  const double s = std::sin(psi);
  return {u_r * c - v_r * s + o.vx_hat + k.kx1 * ex, u_r * s + v_r * c + o.vy_hat + k.ky1 * ey,
          k.kx2 * ex, k.ky2 * ey};
}

std::array<double, 2> observer_error_eigenvalues(double k1, double k2) {
  const double disc = k1 * k1 - 4.0 * k2;
  if (disc < 0.0) return {-k1 / 2.0, -k1 / 2.0};
  const double sq = std::sqrt(disc);
  // Stable form for the small root.
  const double fast = -(k1 + sq) / 2.0;
  return {k2 / fast, fast};
}

ObserverBoundReport check_observer_bound(const ObserverGains& k, double v_max, double u_rd_min) {
  ObserverBoundReport r;
  r.symmetric_gains = k.symmetric();
  r.inflation = std::sqrt(std::max(k.kx2, k.ky2) / std::min(k.kx2, k.ky2));
  r.error_bound = r.inflation * v_max;
  r.speed_margin_ok = 2.0 * v_max < u_rd_min;
  r.estimate_bound_ok = v_max + r.error_bound < u_rd_min;
  return r;
}

}  // namespace pathfollow
