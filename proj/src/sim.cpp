#include "pathfollow/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace pathfollow {

namespace {

enum StateIndex : std::size_t { kX, kY, kPsi, kUr, kVr, kR, kXh, kYh, kVxh, kVyh, kTheta, kN };
using State = std::array<double, kN>;

struct StageEval {
  State deriv{};
  SimRecord rec;
};

class ClosedLoop {
 public:
  ClosedLoop(const ScenarioConfig& cfg, const Path& path)
      : cfg_(cfg), path_(path), ctx_{cfg.ship, cfg.guidance, cfg.observer} {}

  double heading_error(double t, const State& s, Current current) const {
    const auto est = estimate(s, current);
    const auto sample = path_.sample(s[kTheta]);
    const auto [x_bp, y_bp] = frame_errors(s[kX], s[kY], sample);
    const double u_rd = cfg_.speed.value(t);
    const auto [vt_hat, vn_hat] = path_current(est, sample, u_rd);
    (void)vt_hat;
    const double psi_d =
        heading_reference(sample, s[kVr], u_rd, x_bp, y_bp, vn_hat, cfg_.guidance.mu);
    return s[kPsi] - psi_d;
  }

  StageEval evaluate(double t, const State& s, Current current) const {
    const auto sample = path_.sample(s[kTheta]);
    const auto [x_bp, y_bp] = frame_errors(s[kX], s[kY], sample);
    const double u_rd = cfg_.speed.value(t);
    const double u_rd_dot = cfg_.speed.rate(t);
    const auto est = estimate(s, current);
    const auto [vt_hat, vn_hat] = path_current(est, sample, u_rd);
    const double psi_d =
        heading_reference(sample, s[kVr], u_rd, x_bp, y_bp, vn_hat, cfg_.guidance.mu);

    GuidanceInputs in;
    in.theta = s[kTheta];
    in.v_r = s[kVr];
    in.u_r = s[kUr];
    in.u_rd = u_rd;
    in.u_rd_dot = u_rd_dot;
    in.vt_hat = vt_hat;
    in.vn_hat = vn_hat;
    in.x_bp = x_bp;
    in.y_bp = y_bp;
    in.psi_tilde = s[kPsi] - psi_d;
    in.x_obs_err = est.x_err;
    in.y_obs_err = est.y_err;

    const GuidanceOutput go = evaluate_guidance(in, sample, ctx_);
    const bool forced = cfg_.yaw_mode == YawMode::ForcedReference;
    const double r = forced ? go.r_d : s[kR];

    VesselState vs{s[kX], s[kY], s[kPsi], s[kUr], s[kVr], r};
    const double tau_u =
        surge_control(cfg_.ship, vs.u_r, u_rd, u_rd_dot, vs.v_r, r, cfg_.control.k_u);
    const ObserverState obs{s[kXh], s[kYh], s[kVxh], s[kVyh]};
    const ObserverState od =
        observer_derivative(obs, vs.x, vs.y, vs.u_r, vs.v_r, vs.psi, cfg_.observer);

    double tau_r = 0.0;
    auto plant = vessel_derivative(cfg_.ship, vs, tau_u, 0.0, current);
    if (!forced) {
      HRates rates;
      rates.theta_dot = go.theta_dot;
      rates.v_r_dot = plant.v_r_dot;
      rates.u_r_dot = plant.u_r_dot;
      rates.u_rd_ddot = cfg_.speed.accel(t);
      if (cfg_.feed == CurrentFeed::Observer) {
        rates.vx_hat_dot = od.vx_hat;
        rates.vy_hat_dot = od.vy_hat;
      }
      const auto hd = h_dot(in, sample, rates);
      const auto jac = rd_jacobian(in, path_, ctx_, cfg_.differentiation);
      tau_r = yaw_control(in, go, jac, hd, vs.u_r, vs.v_r, r, cfg_.control, ctx_);
      plant.r_dot += tau_r;
    } else {
      plant.r_dot = 0.0;
    }

    StageEval ev;
    ev.deriv = {plant.x_dot, plant.y_dot, plant.psi_dot, plant.u_r_dot, plant.v_r_dot,
                plant.r_dot, od.x_hat, od.y_hat, od.vx_hat, od.vy_hat, go.theta_dot};

    SimRecord& rec = ev.rec;
    rec.t = t;
    rec.vessel = vs;
    rec.observer = obs;
    rec.guidance = go;
    rec.x_bp = x_bp;
    rec.y_bp = y_bp;
    rec.psi_tilde = in.psi_tilde;
    rec.r_tilde = r - go.r_d;
    rec.u_tilde = vs.u_r - u_rd;
    rec.tau_u = tau_u;
    rec.tau_r = tau_r;
    rec.u_rd = u_rd;
    rec.vx = current.vx;
    rec.vy = current.vy;
    const auto [vt, vn] = current_in_path_frame(current.vx, current.vy, sample.gamma);
    rec.vt = vt;
    rec.vn = vn;
    return ev;
  }

 private:
  struct Estimate {
    double vx{}, vy{}, x_err{}, y_err{};
  };

  Estimate estimate(const State& s, Current current) const {
    if (cfg_.feed == CurrentFeed::Truth) return {current.vx, current.vy, 0.0, 0.0};
    return {s[kVxh], s[kVyh], s[kX] - s[kXh], s[kY] - s[kYh]};
  }

  std::pair<double, double> path_current(const Estimate& est, const PathSample& sample,
                                         double u_rd) const {
    auto [vt, vn] = current_in_path_frame(est.vx, est.vy, sample.gamma);
    if (cfg_.saturate_vn) {
      const double limit = (1.0 - cfg_.saturation_eps) * u_rd;
      vn = std::clamp(vn, -limit, limit);
    }
    return {vt, vn};
  }

  const ScenarioConfig& cfg_;
  const Path& path_;
  GuidanceContext ctx_;
};

class ScheduleCursor {
 public:
  explicit ScheduleCursor(const CurrentSchedule& s) : schedule_(s) {}

  /// Active current at a tick; abscissa triggers latch once reached.
  Current at(double t, double theta) {
    const double key = schedule_.trigger == CurrentSchedule::Trigger::Time ? t : theta;
    while (index_ + 1 < schedule_.segments.size() && key >= schedule_.segments[index_ + 1].start) {
      ++index_;
    }
    const auto& seg = schedule_.segments[index_];
    return {seg.vx, seg.vy};
  }

 private:
  const CurrentSchedule& schedule_;
  std::size_t index_{0};
};

}  // namespace

void ScenarioConfig::validate() const {
  if (!(dt > 0.0 && dt <= 0.1)) throw Error(ErrorCode::InvalidParameter, "dt must be in (0, 0.1]");
  if (!(t_end > 0.0)) throw Error(ErrorCode::InvalidParameter, "t_end must be positive");
  if (log_every == 0) throw Error(ErrorCode::InvalidParameter, "log_every must be >= 1");
  if (!(speed.min() > 0.0)) throw Error(ErrorCode::InvalidParameter, "u_rd must stay positive");
  if (saturate_vn && !(saturation_eps > 0.0 && saturation_eps < 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "saturation_eps must be in (0, 1)");
  }
  const double fields[] = {initial.x, initial.y, initial.psi, initial.u_r, initial.v_r, initial.r};
  for (double f : fields) {
    if (!std::isfinite(f)) throw Error(ErrorCode::InvalidParameter, "non-finite initial state");
  }
  observer.validate();
  guidance.validate();
  control.validate();
}

FeasibilityReport assess_conditions(const ShipParams& p, const Path& path,
                                    const GuidanceParams& gp, const CurrentSchedule& schedule,
                                    const SpeedProfile& speed, const ObserverGains& obs) {
  FeasibilityReport r;
  r.mu = gp.mu;
  r.v_max = schedule.v_max;
  r.u_rd_min = speed.min();
  r.u_rd_max = speed.max();
  r.kappa_max = path.curvature_max();
  r.observer = check_observer_bound(obs, schedule.v_max, r.u_rd_min);
  r.mu_min = std::numeric_limits<double>::infinity();

  auto fail = [&r](ErrorCode code, std::string why) {
    if (!r.failure) {
      r.failure = code;
      r.diagnosis = std::move(why);
    }
  };

  const double det = p.m22 * p.m33 - p.m23 * p.m23;
  r.determinant_ok = det > 0.0 && p.m11 > 0.0;
  if (!r.determinant_ok) fail(ErrorCode::NonPositiveDeterminant, "inertia submatrix not invertible");

  try {
    schedule.validate();
    r.assumption1_ok = true;
  } catch (const Error& e) {
    fail(ErrorCode::AssumptionViolated, e.detail());
  }

  if (r.determinant_ok) {
    const double lo = -schedule.v_max;
    const double hi = r.u_rd_max;
    const double y_lo = hydro_Y(p, lo);
    const double y_hi = hydro_Y(p, hi);
    r.y_min = std::min(-y_lo, -y_hi);
    r.x_max = std::max(std::abs(hydro_X(p, lo)), std::abs(hydro_X(p, hi)));
    r.assumption2_ok = r.y_min > 0.0;
    if (!r.assumption2_ok) {
      fail(ErrorCode::AssumptionYViolated, "Y(u_r) is not negative on [-V_max, u_rd_max]");
    }
  }

  r.assumption3_ok = r.u_rd_min > 2.0 * schedule.v_max;
  if (!r.assumption3_ok) fail(ErrorCode::SpeedMarginViolated, "u_rd must exceed 2 V_max");

  r.observer_ok = r.observer.estimate_bound_ok;
  if (!r.observer_ok) {
    fail(ErrorCode::AssumptionViolated,
         "observer error bound does not keep |Vn_hat| below u_rd (check kx2/ky2 ratio)");
  }

  if (r.assumption2_ok) {
    r.curvature_ratio = r.x_max > 0.0 ? r.y_min / (2.0 * r.x_max)
                                      : std::numeric_limits<double>::infinity();
    r.curvature_margin = r.curvature_ratio - r.kappa_max;
    r.curvature_ok = r.kappa_max < r.curvature_ratio;
    if (!r.curvature_ok) {
      fail(ErrorCode::CurvatureTooHigh, "kappa_max = " + std::to_string(r.kappa_max) +
                                            " >= Y_min/(2 X_max) = " +
                                            std::to_string(r.curvature_ratio));
    } else {
      r.mu_min = 8.0 * r.x_max / (r.y_min - 2.0 * r.x_max * r.kappa_max);
      r.mu_ok = gp.mu > r.mu_min;
      if (!r.mu_ok) {
        fail(ErrorCode::MuTooSmall,
             "mu = " + std::to_string(gp.mu) + " <= mu_min = " + std::to_string(r.mu_min));
      }
    }
  }
  return r;
}

FeasibilityReport check_conditions(const ShipParams& p, const Path& path,
                                   const GuidanceParams& gp, const CurrentSchedule& schedule,
                                   const SpeedProfile& speed, const ObserverGains& obs) {
  auto r = assess_conditions(p, path, gp, schedule, speed, obs);
  if (r.failure) throw Error(*r.failure, r.diagnosis);
  return r;
}

SimResult run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const Path path(cfg.path);
  SimResult result;
  result.feasibility =
      check_conditions(cfg.ship, path, cfg.guidance, cfg.current, cfg.speed, cfg.observer);

  const ClosedLoop loop(cfg, path);
  ScheduleCursor schedule(cfg.current);

  State s{};
  s[kX] = cfg.initial.x;
  s[kY] = cfg.initial.y;
  s[kPsi] = cfg.initial.psi;
  s[kUr] = cfg.initial.u_r;
  s[kVr] = cfg.initial.v_r;
  s[kR] = cfg.initial.r;
  const auto obs0 = init_observer(cfg.initial.x, cfg.initial.y);
  s[kXh] = obs0.x_hat;
  s[kYh] = obs0.y_hat;
  s[kVxh] = obs0.vx_hat;
  s[kVyh] = obs0.vy_hat;
  s[kTheta] = cfg.theta0 ? *cfg.theta0 : path.nearest_abscissa(cfg.initial.x, cfg.initial.y);

  if (cfg.normalize_initial_heading) {
    const double err = loop.heading_error(0.0, s, schedule.at(0.0, s[kTheta]));
    s[kPsi] -= 2.0 * std::numbers::pi * std::round(err / (2.0 * std::numbers::pi));
  }

  const auto steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
  result.records.reserve(steps / cfg.log_every + 2);

  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    const Current current = schedule.at(t, s[kTheta]);
    StageEval ev;
    try {
      ev = loop.evaluate(t, s, current);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::IllConditioned) {
        throw Error(ErrorCode::ConditionOneViolated, "t = " + std::to_string(t) + ": " + e.detail());
      }
      throw;
    }
    if (cfg.yaw_mode == YawMode::ForcedReference) s[kR] = ev.rec.guidance.r_d;
    if (!(ev.rec.guidance.Cr > cfg.cr_threshold)) {
      throw Error(ErrorCode::ConditionOneViolated,
                  "Cr = " + std::to_string(ev.rec.guidance.Cr) + " at t = " + std::to_string(t));
    }
    if (k % cfg.log_every == 0 || k == steps) result.records.push_back(ev.rec);
    if (k == steps) break;

    try {
      s = rk4_step(s, t, cfg.dt, [&](double tt, const State& ss) {
        return loop.evaluate(tt, ss, current).deriv;
      });
    } catch (const Error& e) {
      if (e.code() == ErrorCode::IllConditioned) {
        throw Error(ErrorCode::ConditionOneViolated, "t = " + std::to_string(t) + ": " + e.detail());
      }
      throw;
    }
    for (double v : s) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::NonFiniteState, "t = " + std::to_string(t + cfg.dt));
      }
    }
  }

  result.summary = summarize(result.records);
  return result;
}

std::optional<double> fit_decay_rate(std::span<const double> t, std::span<const double> v,
                                     double floor, double ceiling) {
  double n = 0.0, st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < std::min(t.size(), v.size()); ++i) {
    const double a = std::abs(v[i]);
    if (!(a > floor && a <= ceiling)) continue;
    const double y = std::log(a);
    n += 1.0;
    st += t[i];
    sy += y;
    stt += t[i] * t[i];
    sty += t[i] * y;
  }
  const double denom = n * stt - st * st;
  if (n < 2.0 || !(denom > 0.0)) return std::nullopt;
  return -(n * sty - st * sy) / denom;
}

Summary summarize(std::span<const SimRecord> records) {
  if (records.empty()) throw Error(ErrorCode::EmptyLog, "no records to summarize");
  Summary s;
  s.records = records.size();
  s.t_final = records.back().t;
  s.final_abs_x_bp = std::abs(records.back().x_bp);
  s.final_abs_y_bp = std::abs(records.back().y_bp);
  s.min_Cr = std::numeric_limits<double>::infinity();

  const double half = records.front().t + 0.5 * (s.t_final - records.front().t);
  std::vector<double> t(records.size());
  std::vector<double> surge(records.size());
  std::vector<double> cur(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const double av = std::abs(r.vessel.v_r);
    s.max_abs_v_r = std::max(s.max_abs_v_r, av);
    if (r.t >= half) s.max_abs_v_r_last_half = std::max(s.max_abs_v_r_last_half, av);
    s.min_Cr = std::min(s.min_Cr, r.guidance.Cr);
    const double err = std::hypot(r.vx - r.observer.vx_hat, r.vy - r.observer.vy_hat);
    s.max_current_error = std::max(s.max_current_error, err);
    if (!s.observer_convergence_time && err < 1e-3) s.observer_convergence_time = r.t;
    t[i] = r.t;
    surge[i] = r.u_tilde;
    cur[i] = err;
  }
  for (std::size_t i = records.size(); i-- > 0;) {
    if (std::abs(records[i].r_tilde) >= 1e-4) break;
    s.r_tilde_settling_time = records[i].t;
  }
  constexpr double kFloor = 1e-9;
  s.surge_decay_rate =
      fit_decay_rate(t, surge, kFloor, std::numeric_limits<double>::infinity());
  s.current_error_decay_rate = fit_decay_rate(t, cur, kFloor, 0.1 * s.max_current_error);
  return s;
}

}  // namespace pathfollow
