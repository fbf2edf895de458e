#include "pathfollow/io.hpp"

#include <json.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>

#include "pathfollow/error.hpp"

namespace pathfollow {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

namespace {

struct Column {
  const char* name;
  const char* unit;
  double (*get)(const SimRecord&);
};

#define PF_COL(name, unit, expr) Column{name, unit, [](const SimRecord& r) { return expr; }}

const std::vector<Column>& columns() {
  static const std::vector<Column> cols = {
      PF_COL("t", "s", r.t),
      PF_COL("x", "m", r.vessel.x),
      PF_COL("y", "m", r.vessel.y),
      PF_COL("psi", "rad", r.vessel.psi),
      PF_COL("u_r", "m/s", r.vessel.u_r),
      PF_COL("v_r", "m/s", r.vessel.v_r),
      PF_COL("r", "rad/s", r.vessel.r),
      PF_COL("x_hat", "m", r.observer.x_hat),
      PF_COL("y_hat", "m", r.observer.y_hat),
      PF_COL("vx_hat", "m/s", r.observer.vx_hat),
      PF_COL("vy_hat", "m/s", r.observer.vy_hat),
      PF_COL("theta", "m", r.guidance.theta),
      PF_COL("theta_dot", "m/s", r.guidance.theta_dot),
      PF_COL("delta", "m", r.guidance.delta),
      PF_COL("ddelta_dx", "-", r.guidance.ddelta_dx),
      PF_COL("ddelta_dy", "-", r.guidance.ddelta_dy),
      PF_COL("g", "m", r.guidance.g),
      PF_COL("dg_da", "s2/m", r.guidance.dg_da),
      PF_COL("dg_db", "s", r.guidance.dg_db),
      PF_COL("dg_dc", "1/m", r.guidance.dg_dc),
      PF_COL("psi_d", "rad", r.guidance.psi_d),
      PF_COL("Cr", "-", r.guidance.Cr),
      PF_COL("r_d", "rad/s", r.guidance.r_d),
      PF_COL("vt_hat", "m/s", r.guidance.vt_hat),
      PF_COL("vn_hat", "m/s", r.guidance.vn_hat),
      PF_COL("vn_hat_dot", "m/s2", r.guidance.vn_hat_dot),
      PF_COL("G1", "m/s", r.guidance.G1),
      PF_COL("x_bp_dot_known", "m/s", r.guidance.x_bp_dot_known),
      PF_COL("y_bp_dot_known", "m/s", r.guidance.y_bp_dot_known),
      PF_COL("x_bp", "m", r.x_bp),
      PF_COL("y_bp", "m", r.y_bp),
      PF_COL("psi_tilde", "rad", r.psi_tilde),
      PF_COL("r_tilde", "rad/s", r.r_tilde),
      PF_COL("u_tilde", "m/s", r.u_tilde),
      PF_COL("tau_u", "m/s2", r.tau_u),
      PF_COL("tau_r", "rad/s2", r.tau_r),
      PF_COL("u_rd", "m/s", r.u_rd),
      PF_COL("vx", "m/s", r.vx),
      PF_COL("vy", "m/s", r.vy),
      PF_COL("vt", "m/s", r.vt),
      PF_COL("vn", "m/s", r.vn),
  };
  return cols;
}

#undef PF_COL

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : "none"; }
std::string flag(bool b) { return b ? "true" : "false"; }

}  // namespace

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& c : columns()) n.emplace_back(c.name);
    return n;
  }();
  return names;
}

void write_csv(std::ostream& os, std::span<const SimRecord> records) {
  const auto& cols = columns();
  os << "# units:";
  for (const auto& c : cols) os << ' ' << c.name << '[' << c.unit << ']';
  os << '\n';
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i].name;
  os << '\n';
  for (const auto& r : records) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      os << (i ? "," : "") << format_double(cols[i].get(r));
    }
    os << '\n';
  }
}

std::vector<std::pair<std::string, std::string>> summary_fields(const ScenarioConfig& cfg,
                                                                const SimResult& r) {
  const auto& s = r.summary;
  const auto& f = r.feasibility;
  return {
      {"name", cfg.name},
      {"records", std::to_string(s.records)},
      {"t_final", format_double(s.t_final)},
      {"final_abs_x_bp", format_double(s.final_abs_x_bp)},
      {"final_abs_y_bp", format_double(s.final_abs_y_bp)},
      {"max_abs_v_r", format_double(s.max_abs_v_r)},
      {"max_abs_v_r_last_half", format_double(s.max_abs_v_r_last_half)},
      {"min_Cr", format_double(s.min_Cr)},
      {"observer_convergence_time", opt(s.observer_convergence_time)},
      {"max_current_error", format_double(s.max_current_error)},
      {"surge_decay_rate", opt(s.surge_decay_rate)},
      {"current_error_decay_rate", opt(s.current_error_decay_rate)},
      {"r_tilde_settling_time", opt(s.r_tilde_settling_time)},
      {"y_min", format_double(f.y_min)},
      {"x_max", format_double(f.x_max)},
      {"kappa_max", format_double(f.kappa_max)},
      {"curvature_ratio", format_double(f.curvature_ratio)},
      {"mu_min", format_double(f.mu_min)},
      {"mu", format_double(f.mu)},
  };
}

void write_summary_text(std::ostream& os, const ScenarioConfig& cfg, const SimResult& r) {
  for (const auto& [k, v] : summary_fields(cfg, r)) os << k << '=' << v << '\n';
}

void write_summary_json(std::ostream& os, const ScenarioConfig& cfg, const SimResult& r) {
  const auto& s = r.summary;
  const auto& f = r.feasibility;
  auto o = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); };
  nlohmann::json j;
  j["name"] = cfg.name;
  j["summary"] = {
      {"records", s.records},
      {"t_final", s.t_final},
      {"final_abs_x_bp", s.final_abs_x_bp},
      {"final_abs_y_bp", s.final_abs_y_bp},
      {"max_abs_v_r", s.max_abs_v_r},
      {"max_abs_v_r_last_half", s.max_abs_v_r_last_half},
      {"min_Cr", s.min_Cr},
      {"observer_convergence_time", o(s.observer_convergence_time)},
      {"max_current_error", s.max_current_error},
      {"surge_decay_rate", o(s.surge_decay_rate)},
      {"current_error_decay_rate", o(s.current_error_decay_rate)},
      {"r_tilde_settling_time", o(s.r_tilde_settling_time)},
  };
  j["feasibility"] = {
      {"y_min", f.y_min},
      {"x_max", f.x_max},
      {"kappa_max", f.kappa_max},
      {"curvature_ratio", f.curvature_ratio},
      {"curvature_margin", f.curvature_margin},
      {"mu_min", std::isfinite(f.mu_min) ? nlohmann::json(f.mu_min) : nlohmann::json()},
      {"mu", f.mu},
      {"observer_symmetric_gains", f.observer.symmetric_gains},
      {"observer_error_bound", f.observer.error_bound},
      {"ok", f.ok()},
  };
  os << j.dump(2) << '\n';
}

void write_feasibility(std::ostream& os, const FeasibilityReport& f) {
  os << "Y_min=" << format_double(f.y_min) << '\n'
     << "X_max=" << format_double(f.x_max) << '\n'
     << "kappa_max=" << format_double(f.kappa_max) << '\n'
     << "curvature_ratio=" << format_double(f.curvature_ratio) << '\n'
     << "curvature_margin=" << format_double(f.curvature_margin) << '\n'
     << "mu_min=" << format_double(f.mu_min) << '\n'
     << "mu=" << format_double(f.mu) << '\n'
     << "V_max=" << format_double(f.v_max) << '\n'
     << "u_rd_min=" << format_double(f.u_rd_min) << '\n'
     << "observer_symmetric_gains=" << flag(f.observer.symmetric_gains) << '\n'
     << "observer_error_bound=" << format_double(f.observer.error_bound) << '\n'
     << "determinant_ok=" << flag(f.determinant_ok) << '\n'
     << "assumption1_ok=" << flag(f.assumption1_ok) << '\n'
     << "assumption2_ok=" << flag(f.assumption2_ok) << '\n'
     << "assumption3_ok=" << flag(f.assumption3_ok) << '\n'
     << "observer_ok=" << flag(f.observer_ok) << '\n'
     << "curvature_ok=" << flag(f.curvature_ok) << '\n'
     << "mu_ok=" << flag(f.mu_ok) << '\n';
}

void write_run(const std::filesystem::path& dir, const ScenarioConfig& cfg, const SimResult& r) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::ConfigError, "cannot create '" + dir.string() + "'");
  auto open = [&dir](const char* name) {
    std::ofstream f(dir / name);
    if (!f) throw Error(ErrorCode::ConfigError, "cannot write '" + (dir / name).string() + "'");
    return f;
  };
  auto csv = open("log.csv");
  write_csv(csv, r.records);
  auto txt = open("summary.txt");
  write_summary_text(txt, cfg, r);
  auto js = open("summary.json");
  write_summary_json(js, cfg, r);
}

}  // namespace pathfollow
