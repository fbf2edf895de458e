#pragma once

// Kinematic ocean-current observer driven by position measurements.

#include <array>

#include "pathfollow/vessel.hpp"

namespace pathfollow {

struct ObserverState {
  double x_hat{}, y_hat{};
  double vx_hat{}, vy_hat{};
};

struct ObserverGains {
  double kx1{1.0}, ky1{1.0};
  double kx2{0.1}, ky2{0.1};

  bool symmetric() const { return kx2 == ky2; }
  void validate() const;
};

/// Starts at the measured position with zero current estimate, so the initial
/// estimation error is (0, 0, V_x, V_y).
ObserverState init_observer(double x, double y);

ObserverState observer_derivative(const ObserverState& o, double x_meas, double y_meas,
                                  double u_r, double v_r, double psi, const ObserverGains& k);

/// Eigenvalues of the per-axis error dynamics s^2 + k1 s + k2 = 0, as
/// {slow, fast} real parts (complex pairs report the shared real part).
std::array<double, 2> observer_error_eigenvalues(double k1, double k2);

struct ObserverBoundReport {
  bool symmetric_gains{};
  double inflation{};        // sqrt(max(kx2, ky2) / min(kx2, ky2))
  double error_bound{};      // guaranteed bound on the current estimation error norm
  bool speed_margin_ok{};    // 2 V_max < u_rd_min
  bool estimate_bound_ok{};  // V_max + error_bound < u_rd_min
};

ObserverBoundReport check_observer_bound(const ObserverGains& k, double v_max, double u_rd_min);

}  // namespace pathfollow
