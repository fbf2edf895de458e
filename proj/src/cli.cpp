#include "pathfollow/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>

#include "pathfollow/batch.hpp"
#include "pathfollow/config.hpp"
#include "pathfollow/io.hpp"

namespace pathfollow::cli {

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParameter: return kInvalidParameter;
    case ErrorCode::NonPositiveDeterminant: return kNonPositiveDeterminant;
    case ErrorCode::AssumptionYViolated: return kAssumptionYViolated;
    case ErrorCode::SpeedMarginViolated: return kSpeedMarginViolated;
    case ErrorCode::AssumptionViolated: return kAssumptionViolated;
    case ErrorCode::CurvatureTooHigh: return kCurvatureTooHigh;
    case ErrorCode::MuTooSmall: return kMuTooSmall;
    case ErrorCode::ConditionOneViolated:
    case ErrorCode::IllConditioned: return kConditionOneViolated;
    case ErrorCode::NonFiniteDerivative:
    case ErrorCode::NonFiniteState: return kNonFinite;
    case ErrorCode::SidewaysCurrentTooStrong: return kSidewaysCurrent;
    case ErrorCode::SingularAllocation: return kSingularAllocation;
    case ErrorCode::ConfigError: return kUsage;
    case ErrorCode::EmptyLog: return kInternal;
  }
  return kInternal;
}

void add_step_overrides(Options& o, const double* dt, const double* t_end) {
  if (dt) o.overrides.push_back("sim.dt=" + format_double(*dt));
  if (t_end) o.overrides.push_back("sim.t_end=" + format_double(*t_end));
}

namespace {

int report(const Error& e, std::ostream& err) {
  err << "error: " << e.what() << '\n';
  return exit_code(e.code());
}

std::string dir_label(std::size_t i, const std::string& key, const std::string& value) {
  std::string s = "run" + std::to_string(i) + "_" + key + "_" + value;
  std::replace_if(
      s.begin(), s.end(),
      [](unsigned char c) { return !(std::isalnum(c) || c == '_' || c == '-' || c == '.'); }, '_');
  return s;
}

}  // namespace

int cmd_run(const Options& o, std::ostream& out, std::ostream& err) {
  try {
    const auto cfg = load_config(o.config, o.overrides);
    const auto result = run_scenario(cfg);
    write_run(o.out, cfg, result);
    write_summary_text(out, cfg, result);
    out << "wrote " << (o.out / "log.csv").string() << '\n';
    return kOk;
  } catch (const Error& e) {
    return report(e, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInternal;
  }
}

int cmd_check(const Options& o, std::ostream& out, std::ostream& err) {
  try {
    const auto cfg = load_config(o.config, o.overrides);
    cfg.validate();
    const Path path(cfg.path);
    const auto f =
        assess_conditions(cfg.ship, path, cfg.guidance, cfg.current, cfg.speed, cfg.observer);
    write_feasibility(out, f);
    if (f.failure) {
      err << "error: " << to_string(*f.failure) << ": " << f.diagnosis << '\n';
      return exit_code(*f.failure);
    }
    out << "all conditions satisfied\n";
    return kOk;
  } catch (const Error& e) {
    return report(e, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInternal;
  }
}

int cmd_sweep(const Options& o, const std::string& key, const std::vector<std::string>& values,
              std::ostream& out, std::ostream& err) {
  if (values.empty()) {
    err << "usage: pathfollow sweep --config FILE --key KEY --values V1 [V2 ...]\n";
    return kUsage;
  }
  const auto& keys = schema_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    err << "error: ConfigError: unknown sweep key '" << key << "'\n";
    return kUsage;
  }

  std::vector<ScenarioConfig> configs(values.size());
  std::vector<std::optional<Error>> load_errors(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto ov = o.overrides;
    ov.push_back(key + "=" + values[i]);
    try {
      configs[i] = load_config(o.config, ov);
    } catch (const Error& e) {
      load_errors[i] = e;
    }
  }

  // Only well-formed configs reach the parallel loop.
  std::vector<ScenarioConfig> runnable;
  std::vector<std::size_t> slot;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!load_errors[i]) {
      runnable.push_back(configs[i]);
      slot.push_back(i);
    }
  }
  const auto outcomes = run_batch_parallel(runnable, o.threads);

  std::vector<RunOutcome> all(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (load_errors[i]) {
      all[i].error = load_errors[i]->code();
      all[i].message = load_errors[i]->detail();
    }
  }
  for (std::size_t j = 0; j < slot.size(); ++j) all[slot[j]] = outcomes[j];

  std::error_code ec;
  std::filesystem::create_directories(o.out, ec);
  std::ofstream table(o.out / "sweep.csv");
  if (!table) {
    err << "error: cannot write " << (o.out / "sweep.csv").string() << '\n';
    return kUsage;
  }
  const std::string header =
      "value,status,final_abs_x_bp,final_abs_y_bp,max_abs_v_r,min_Cr,observer_convergence_time,"
      "r_tilde_settling_time,dir";
  table << header << '\n';
  out << header << '\n';

  bool failed = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& r = all[i];
    std::string row = values[i] + ",";
    if (r.ok()) {
      const auto label = dir_label(i, key, values[i]);
      write_run(o.out / label, configs[i], r.result);
      const auto& s = r.result.summary;
      auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : ""; };
      row += "ok," + format_double(s.final_abs_x_bp) + "," + format_double(s.final_abs_y_bp) + "," +
             format_double(s.max_abs_v_r) + "," + format_double(s.min_Cr) + "," +
             opt(s.observer_convergence_time) + "," + opt(s.r_tilde_settling_time) + "," + label;
    } else {
      failed = true;
      row += std::string(to_string(*r.error)) + ",,,,,,,";
      err << "run " << i << " (" << key << "=" << values[i] << ") failed: " << to_string(*r.error)
          << ": " << r.message << '\n';
    }
    table << row << '\n';
    out << row << '\n';
  }
  return failed ? kSweepFailed : kOk;
}

}  // namespace pathfollow::cli
