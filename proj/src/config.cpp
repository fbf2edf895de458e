#include "pathfollow/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "pathfollow/error.hpp"

namespace pathfollow {

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

const std::set<std::string>& leaf_set() {
  static const std::set<std::string> s(schema_keys().begin(), schema_keys().end());
  return s;
}

const std::set<std::string>& branch_set() {
  static const std::set<std::string> s = [] {
    std::set<std::string> b;
    for (const auto& k : schema_keys()) {
      for (auto pos = k.find('.'); pos != std::string::npos; pos = k.find('.', pos + 1)) {
        b.insert(k.substr(0, pos));
      }
    }
    return b;
  }();
  return s;
}

bool is_index(const std::string& part) {
  return !part.empty() && std::all_of(part.begin(), part.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

std::vector<std::string> split_key(const std::string& key) {
  std::vector<std::string> parts;
  std::stringstream ss(key);
  for (std::string p; std::getline(ss, p, '.');) parts.push_back(p);
  return parts;
}

std::string pattern_of(const std::string& key) {
  std::string out;
  for (const auto& p : split_key(key)) {
    if (!out.empty()) out += '.';
    out += is_index(p) ? "#" : p;
  }
  return out;
}

void check_keys(const YAML::Node& node, const std::string& prefix) {
  if (node.IsMap()) {
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      const std::string p = prefix.empty() ? key : prefix + "." + key;
      if (leaf_set().count(p)) continue;
      if (!branch_set().count(p)) config_error("unknown key '" + p + "'");
      check_keys(kv.second, p);
    }
  } else if (node.IsSequence()) {
    const std::string p = prefix + ".#";
    if (!branch_set().count(p)) config_error("'" + prefix + "' must not be a list");
    for (const auto& item : node) check_keys(item, p);
  } else if (!prefix.empty()) {
    config_error("'" + prefix + "' must be a section");
  }
}

void apply_override(YAML::Node& root, const std::string& assignment) {
  const auto [key, text] = split_override(assignment);
  if (!leaf_set().count(pattern_of(key))) config_error("unknown override key '" + key + "'");

  YAML::Node value;
  try {
    value = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    config_error("bad value for '" + key + "': " + e.what());
  }

  const auto parts = split_key(key);
  YAML::Node cur = root;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    const auto& p = parts[i];
    if (is_index(p)) {
      const auto idx = std::stoul(p);
      if (!cur.IsSequence() || idx > cur.size()) config_error("index out of range in '" + key + "'");
      if (idx == cur.size()) cur.push_back(YAML::Node(YAML::NodeType::Map));
      cur.reset(cur[idx]);
    } else {
      if (!cur[p]) cur[p] = YAML::Node(is_index(parts[i + 1]) ? YAML::NodeType::Sequence
                                                             : YAML::NodeType::Map);
      cur.reset(cur[p]);
    }
  }
  cur[parts.back()] = value;
}

template <class T>
T get(const YAML::Node& n, const char* key, const std::string& where, T fallback) {
  if (!n || !n.IsMap()) return fallback;
  const auto v = n[key];
  if (!v) return fallback;
  try {
    return v.as<T>();
  } catch (const YAML::Exception&) {
    config_error("bad value for '" + where + "." + key + "'");
  }
}

template <class T>
T need(const YAML::Node& n, const char* key, const std::string& where) {
  if (!n || !n.IsMap() || !n[key]) config_error("missing '" + where + "." + key + "'");
  return get<T>(n, key, where, T{});
}

Point2 point(const YAML::Node& n, const std::string& where) {
  if (!n.IsSequence() || n.size() != 2) config_error("'" + where + "' must be [x, y]");
  try {
    return {n[0].as<double>(), n[1].as<double>()};
  } catch (const YAML::Exception&) {
    config_error("'" + where + "' must be numeric");
  }
}

ShipParams parse_ship(const YAML::Node& n, const std::filesystem::path& base_dir) {
  ShipParams p = ShipParams::defaults();
  if (!n) return p;
  if (n["file"]) {
    const auto file = base_dir / n["file"].as<std::string>();
    YAML::Node f;
    try {
      f = YAML::LoadFile(file.string());
    } catch (const YAML::Exception& e) {
      config_error("cannot read ship file '" + file.string() + "': " + e.what());
    }
    YAML::Node wrapped;
    wrapped["ship"] = f;
    check_keys(wrapped, "");
    if (f["file"]) config_error("nested ship files are not supported");
    p = parse_ship(f, base_dir);
  }
  const std::string w = "ship";
  p.m11 = get(n, "m11", w, p.m11);
  p.m22 = get(n, "m22", w, p.m22);
  p.m23 = get(n, "m23", w, p.m23);
  p.m32 = get(n, "m32", w, p.m32);
  p.m33 = get(n, "m33", w, p.m33);
  p.d11 = get(n, "d11", w, p.d11);
  p.d22 = get(n, "d22", w, p.d22);
  p.d23 = get(n, "d23", w, p.d23);
  p.d32 = get(n, "d32", w, p.d32);
  p.d33 = get(n, "d33", w, p.d33);
  p.b11 = get(n, "b11", w, p.b11);
  p.b22 = get(n, "b22", w, p.b22);
  p.b32 = get(n, "b32", w, p.b32);
  return p;
}

PathDefinition parse_path(const YAML::Node& n) {
  if (!n) config_error("missing 'path' section");
  const auto type = need<std::string>(n, "type", "path");
  if (type == "sine") {
    SineGraph s;
    s.amplitude = need<double>(n, "amplitude", "path");
    if (n["wavelength"]) {
      if (n["omega"]) config_error("give either 'path.omega' or 'path.wavelength'");
      const double wl = need<double>(n, "wavelength", "path");
      if (!(wl > 0.0)) config_error("'path.wavelength' must be positive");
      s.omega = 2.0 * std::numbers::pi / wl;
    } else {
      s.omega = need<double>(n, "omega", "path");
    }
    s.x_start = get(n, "x_start", "path", s.x_start);
    s.x_end = get(n, "x_end", "path", s.x_end);
    return s;
  }
  if (type == "polyline") {
    Polyline p;
    const auto wps = n["waypoints"];
    if (!wps || !wps.IsSequence()) config_error("'path.waypoints' must be a list of [x, y]");
    for (std::size_t i = 0; i < wps.size(); ++i) {
      p.waypoints.push_back(point(wps[i], "path.waypoints." + std::to_string(i)));
    }
    p.fillet_radius = get(n, "fillet_radius", "path", 0.0);
    return p;
  }
  if (type == "line") {
    Line l;
    if (n["origin"]) l.origin = point(n["origin"], "path.origin");
    l.angle = get(n, "angle", "path", 0.0);
    return l;
  }
  if (type == "circle") {
    Circle c;
    c.radius = need<double>(n, "radius", "path");
    if (n["center"]) c.center = point(n["center"], "path.center");
    return c;
  }
  config_error("unknown path type '" + type + "' (sine, polyline, line, circle)");
}

CurrentSchedule parse_current(const YAML::Node& n) {
  CurrentSchedule s;
  if (!n) return CurrentSchedule::constant(0.0, 0.0, 1.0);
  s.v_max = need<double>(n, "v_max", "current");
  const auto trig = get<std::string>(n, "trigger", "current", "time");
  if (trig == "time") {
    s.trigger = CurrentSchedule::Trigger::Time;
  } else if (trig == "abscissa") {
    s.trigger = CurrentSchedule::Trigger::Abscissa;
  } else {
    config_error("'current.trigger' must be time or abscissa");
  }
  const auto segs = n["segments"];
  if (segs) {
    if (!segs.IsSequence() || segs.size() == 0) config_error("'current.segments' must be a list");
    for (std::size_t i = 0; i < segs.size(); ++i) {
      const std::string w = "current.segments." + std::to_string(i);
      s.segments.push_back({get(segs[i], "start", w, 0.0), need<double>(segs[i], "vx", w),
                            need<double>(segs[i], "vy", w)});
    }
  } else {
    s.segments.push_back({0.0, get(n, "vx", "current", 0.0), get(n, "vy", "current", 0.0)});
  }
  return s;
}

template <class E>
E choose(const YAML::Node& n, const char* key, const std::string& where,
         std::initializer_list<std::pair<const char*, E>> options, E fallback) {
  if (!n || !n.IsMap() || !n[key]) return fallback;
  const auto v = get<std::string>(n, key, where, "");
  std::string names;
  for (const auto& [name, e] : options) {
    if (v == name) return e;
    names += names.empty() ? name : std::string(", ") + name;
  }
  config_error("'" + where + "." + key + "' must be one of " + names);
}

ScenarioConfig from_tree(const YAML::Node& root, const std::filesystem::path& base_dir) {
  const int version = get(root, "schema_version", "", 0);
  if (version != kSchemaVersion) {
    config_error("schema_version must be " + std::to_string(kSchemaVersion));
  }
  ScenarioConfig c;
  c.name = get<std::string>(root, "name", "", c.name);
  c.ship = parse_ship(root["ship"], base_dir);
  c.path = parse_path(root["path"]);
  c.current = parse_current(root["current"]);

  const auto obs = root["observer"];
  c.observer.kx1 = get(obs, "kx1", "observer", c.observer.kx1);
  c.observer.ky1 = get(obs, "ky1", "observer", c.observer.ky1);
  c.observer.kx2 = get(obs, "kx2", "observer", c.observer.kx2);
  c.observer.ky2 = get(obs, "ky2", "observer", c.observer.ky2);

  const auto gd = root["guidance"];
  c.guidance.k_delta = get(gd, "k_delta", "guidance", c.guidance.k_delta);
  c.guidance.mu = get(gd, "mu", "guidance", c.guidance.mu);

  const auto ctl = root["control"];
  c.control.k_u = get(ctl, "k_u", "control", c.control.k_u);
  c.control.k1 = get(ctl, "k1", "control", c.control.k1);
  c.control.k2 = get(ctl, "k2", "control", c.control.k2);

  const auto sp = root["speed"];
  c.speed.base = get(sp, "base", "speed", c.speed.base);
  c.speed.amplitude = get(sp, "amplitude", "speed", c.speed.amplitude);
  c.speed.omega = get(sp, "omega", "speed", c.speed.omega);

  const auto in = root["initial"];
  c.initial.x = get(in, "x", "initial", 0.0);
  c.initial.y = get(in, "y", "initial", 0.0);
  c.initial.psi = get(in, "psi", "initial", 0.0);
  c.initial.u_r = get(in, "u_r", "initial", 0.0);
  c.initial.v_r = get(in, "v_r", "initial", 0.0);
  c.initial.r = get(in, "r", "initial", 0.0);
  if (in && in.IsMap() && in["theta"]) c.theta0 = get(in, "theta", "initial", 0.0);

  const auto sim = root["sim"];
  const std::string w = "sim";
  c.dt = get(sim, "dt", w, c.dt);
  c.t_end = get(sim, "t_end", w, c.t_end);
  c.cr_threshold = get(sim, "cr_threshold", w, c.cr_threshold);
  const long log_every = get(sim, "log_every", w, 1L);
  if (log_every < 1) config_error("'sim.log_every' must be >= 1");
  c.log_every = static_cast<std::size_t>(log_every);
  c.differentiation = choose(sim, "differentiation", w,
                             {{"forward", DiffBackend::Forward},
                              {"central", DiffBackend::CentralDifference}},
                             c.differentiation);
  c.saturate_vn = get(sim, "saturate_vn", w, c.saturate_vn);
  c.saturation_eps = get(sim, "saturation_eps", w, c.saturation_eps);
  c.feed = choose(sim, "feed", w, {{"observer", CurrentFeed::Observer}, {"truth", CurrentFeed::Truth}},
                  c.feed);
  c.yaw_mode = choose(sim, "yaw_mode", w,
                      {{"controller", YawMode::Controller}, {"forced", YawMode::ForcedReference}},
                      c.yaw_mode);
  c.normalize_initial_heading =
      get(sim, "normalize_initial_heading", w, c.normalize_initial_heading);
  return c;
}

}  // namespace

const std::vector<std::string>& schema_keys() {
  static const std::vector<std::string> keys = {
      "schema_version", "name",
      "ship.file", "ship.m11", "ship.m22", "ship.m23", "ship.m32", "ship.m33",
      "ship.d11", "ship.d22", "ship.d23", "ship.d32", "ship.d33",
      "ship.b11", "ship.b22", "ship.b32",
      "path.type", "path.amplitude", "path.omega", "path.wavelength", "path.x_start", "path.x_end",
      "path.waypoints", "path.fillet_radius", "path.origin", "path.angle",
      "path.radius", "path.center",
      "current.v_max", "current.trigger", "current.vx", "current.vy",
      "current.segments.#.start", "current.segments.#.vx", "current.segments.#.vy",
      "observer.kx1", "observer.ky1", "observer.kx2", "observer.ky2",
      "guidance.k_delta", "guidance.mu",
      "control.k_u", "control.k1", "control.k2",
      "speed.base", "speed.amplitude", "speed.omega",
      "initial.x", "initial.y", "initial.psi", "initial.u_r", "initial.v_r", "initial.r",
      "initial.theta",
      "sim.dt", "sim.t_end", "sim.cr_threshold", "sim.log_every", "sim.differentiation",
      "sim.saturate_vn", "sim.saturation_eps", "sim.feed", "sim.yaw_mode",
      "sim.normalize_initial_heading",
  };
  return keys;
}

std::pair<std::string, std::string> split_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) config_error("override must be key=value: '" + assignment + "'");
  return {assignment.substr(0, eq), assignment.substr(eq + 1)};
}

ScenarioConfig parse_config(const std::string& yaml_text, const std::vector<std::string>& overrides,
                            const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    config_error(std::string("parse error: ") + e.what());
  }
  if (!root.IsMap()) config_error("top level must be a mapping");
  check_keys(root, "");
  for (const auto& o : overrides) apply_override(root, o);
  check_keys(root, "");
  return from_tree(root, base_dir);
}

ScenarioConfig load_config(const std::filesystem::path& file,
                           const std::vector<std::string>& overrides) {
  std::ifstream in(file);
  if (!in) config_error("cannot open config '" + file.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides, file.parent_path());
}

}  // namespace pathfollow
