#pragma once

// Fixed-step closed-loop simulation: plant, observer, path variable,
// guidance and controllers, with feasibility checks and run metrics.

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pathfollow/control.hpp"
#include "pathfollow/error.hpp"
#include "pathfollow/guidance.hpp"
#include "pathfollow/observer.hpp"
#include "pathfollow/path.hpp"
#include "pathfollow/vessel.hpp"

namespace pathfollow {

/// u_rd(t) = base + amplitude * sin(omega * t).
struct SpeedProfile {
  double base{5.0};
  double amplitude{0.0};
  double omega{0.0};

  double value(double t) const { return base + amplitude * std::sin(omega * t); }
  double rate(double t) const { return amplitude * omega * std::cos(omega * t); }
  double accel(double t) const { return -amplitude * omega * omega * std::sin(omega * t); }
  double min() const { return base - std::abs(amplitude); }
  double max() const { return base + std::abs(amplitude); }
};

/// Which current the guidance sees. Truth feeding replaces the observer by
/// the true current and is only meant for closed-loop oracles.
enum class CurrentFeed { Observer, Truth };

/// Controller drives r through tau_r, or r is slaved to r_d (oracle mode).
enum class YawMode { Controller, ForcedReference };

struct ScenarioConfig {
  std::string name{"scenario"};
  ShipParams ship{ShipParams::defaults()};
  PathDefinition path{Line{}};
  CurrentSchedule current{CurrentSchedule::constant(0.0, 0.0, 1.0)};
  ObserverGains observer;
  GuidanceParams guidance;
  ControllerGains control;
  SpeedProfile speed;
  VesselState initial;
  std::optional<double> theta0;
  double dt{0.01};
  double t_end{1000.0};
  double cr_threshold{1e-3};
  std::size_t log_every{1};
  DiffBackend differentiation{DiffBackend::Forward};
  bool saturate_vn{false};
  double saturation_eps{0.05};
  CurrentFeed feed{CurrentFeed::Observer};
  YawMode yaw_mode{YawMode::Controller};
  /// Shift psi(0) by a multiple of 2 pi so that psi_tilde(0) lies in (-pi, pi].
  bool normalize_initial_heading{true};

  void validate() const;
};

struct FeasibilityReport {
  double y_min{}, x_max{};
  double kappa_max{};
  double curvature_ratio{};   // Y_min / (2 X_max)
  double curvature_margin{};  // ratio - kappa_max
  double mu_min{};            // lower bound on mu; +inf when the curvature gate fails
  double mu{};
  double v_max{}, u_rd_min{}, u_rd_max{};
  ObserverBoundReport observer;
  bool determinant_ok{}, assumption1_ok{}, assumption2_ok{}, assumption3_ok{};
  bool observer_ok{}, curvature_ok{}, mu_ok{};
  std::optional<ErrorCode> failure;
  std::string diagnosis;

  bool ok() const { return !failure.has_value(); }
};

/// Evaluates every condition without throwing.
FeasibilityReport assess_conditions(const ShipParams& p, const Path& path,
                                    const GuidanceParams& gp, const CurrentSchedule& schedule,
                                    const SpeedProfile& speed, const ObserverGains& obs);

/// As assess_conditions, but throws the first failed condition.
FeasibilityReport check_conditions(const ShipParams& p, const Path& path,
                                   const GuidanceParams& gp, const CurrentSchedule& schedule,
                                   const SpeedProfile& speed, const ObserverGains& obs);

/// Classical fourth-order Runge-Kutta step of x' = f(t, x).
/// Throws NonFiniteDerivative if any stage derivative is not finite.
template <std::size_t N, class F>
std::array<double, N> rk4_step(const std::array<double, N>& x, double t, double dt, F&& f) {
  auto check = [](const std::array<double, N>& d) {
    for (double v : d) {
      if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteDerivative, "RK4 stage");
    }
    return d;
  };
  auto axpy = [](const std::array<double, N>& base, double h, const std::array<double, N>& d) {
    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = base[i] + h * d[i];
    return out;
  };
  const auto k1 = check(f(t, x));
  const auto k2 = check(f(t + dt / 2.0, axpy(x, dt / 2.0, k1)));
  const auto k3 = check(f(t + dt / 2.0, axpy(x, dt / 2.0, k2)));
  const auto k4 = check(f(t + dt, axpy(x, dt, k3)));
  std::array<double, N> out;
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

struct SimRecord {
  double t{};
  VesselState vessel;
  ObserverState observer;
  GuidanceOutput guidance;
  double x_bp{}, y_bp{}, psi_tilde{}, r_tilde{}, u_tilde{};
  double tau_u{}, tau_r{};
  double u_rd{};
  double vx{}, vy{};  // true current
  double vt{}, vn{};  // true current in the path frame
};

struct Summary {
  std::size_t records{};
  double t_final{};
  double final_abs_x_bp{}, final_abs_y_bp{};
  double max_abs_v_r{}, max_abs_v_r_last_half{};
  double min_Cr{};
  std::optional<double> observer_convergence_time;
  double max_current_error{};
  std::optional<double> surge_decay_rate;
  std::optional<double> current_error_decay_rate;
  /// Earliest logged t after which |r_tilde| stays below 1e-4 rad/s.
  std::optional<double> r_tilde_settling_time;
};

struct SimResult {
  FeasibilityReport feasibility;
  std::vector<SimRecord> records;
  Summary summary;
};

/// Runs the closed loop. Throws the feasibility failure, ConditionOneViolated
/// when Cr drops to the monitor threshold, or NonFiniteState.
SimResult run_scenario(const ScenarioConfig& cfg);

/// Least-squares rate lambda of |v| ~ exp(-lambda t) over samples with
/// floor < |v| <= ceiling. Empty when fewer than two samples qualify.
std::optional<double> fit_decay_rate(std::span<const double> t, std::span<const double> v,
                                     double floor, double ceiling);

/// Throws EmptyLog.
Summary summarize(std::span<const SimRecord> records);

}  // namespace pathfollow
