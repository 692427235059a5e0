#include "se3sat/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace se3sat {

SimConfig RunConfig::sim_config() const {
  SimConfig s;
  s.dt = dt;
  s.t_final = t_final;
  s.x0.p = position0;
  s.x0.v = velocity0;
  const double d2r = EIGEN_PI / 180.0;
  const Mat3d R0 = rotation_from_euler_zyx(euler_zyx0_deg.x() * d2r, euler_zyx0_deg.y() * d2r,
                                           euler_zyx0_deg.z() * d2r);
  s.x0.q = quat_pair_from_rot(R0)[0];
  s.x0.omega = omega0;
  s.xf0.u_f = u_f0;
  s.xf0.u_s = u_s0;
  s.outer = outer;
  s.inner = inner;
  s.veh = veh;
  s.traj = traj;
  s.monitors = monitors;
  return s;
}

namespace {

struct Cursor {
  std::string file;
  int line = 0;
  std::string section;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(file + ":" + std::to_string(line) + ": " + msg);
  }
};

double parse_double(const Cursor& c, const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) c.fail("trailing characters in number '" + s + "'");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    c.fail("expected a number, got '" + s + "'");
  }
}

bool parse_bool(const Cursor& c, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  c.fail("expected a boolean, got '" + s + "'");
}

Vec3d parse_vec3(const Cursor& c, const std::string& s) {
  std::istringstream is(s);
  std::string a, b, d, extra;
  if (!(is >> a >> b >> d)) c.fail("expected three numbers, got '" + s + "'");
  if (is >> extra) c.fail("expected exactly three numbers, got '" + s + "'");
  return Vec3d(parse_double(c, a), parse_double(c, b), parse_double(c, d));
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& filename) {
  RunConfig cfg;
  Cursor cur;
  cur.file = filename;

  using Setter = std::function<void(const Cursor&, const std::string&)>;
  std::map<std::string, Setter> keys;
  const auto num = [&](const char* name, double* dst) {
    keys[name] = [dst](const Cursor& c, const std::string& v) { *dst = parse_double(c, v); };
  };
  const auto vec = [&](const char* name, Vec3d* dst) {
    keys[name] = [dst](const Cursor& c, const std::string& v) { *dst = parse_vec3(c, v); };
  };
  const auto flag = [&](const char* name, bool* dst) {
    keys[name] = [dst](const Cursor& c, const std::string& v) { *dst = parse_bool(c, v); };
  };

  num("vehicle.mass", &cfg.veh.m);
  num("vehicle.gravity", &cfg.veh.g);
  vec("vehicle.inertia", &cfg.veh.J_diag);
  num("vehicle.thrust_max", &cfg.veh.T_max_hw);
  vec("vehicle.torque_max", &cfg.veh.tau_max_hw);

  num("outer.k_p", &cfg.outer.k_p);
  num("outer.k_v", &cfg.outer.k_v);
  num("outer.k_f", &cfg.outer.k_f);
  num("outer.k_s", &cfg.outer.k_s);
  num("outer.M_p", &cfg.outer.M_p);

  num("inner.k_theta", &cfg.inner.k_theta);
  num("inner.k_omega", &cfg.inner.k_omega);
  num("inner.M_theta", &cfg.inner.M_theta);
  num("inner.M_omega", &cfg.inner.M_omega);
  num("inner.delta", &cfg.inner.delta);
  num("inner.alpha", &cfg.inner.alpha);

  keys["trajectory.preset"] = [&cfg](const Cursor&, const std::string& v) {
    cfg.traj.preset = v;
  };
  num("trajectory.frequency", &cfg.traj.frequency);
  vec("trajectory.offset", &cfg.traj.offset);
  num("trajectory.yaw_amplitude", &cfg.traj.yaw_amplitude);

  num("sim.dt", &cfg.dt);
  num("sim.t_final", &cfg.t_final);
  vec("sim.position0", &cfg.position0);
  vec("sim.velocity0", &cfg.velocity0);
  vec("sim.euler_zyx0_deg", &cfg.euler_zyx0_deg);
  vec("sim.omega0", &cfg.omega0);
  vec("sim.u_f0", &cfg.u_f0);
  vec("sim.u_s0", &cfg.u_s0);
  flag("sim.monitors", &cfg.monitors);

  flag("audit.filter_init_zero", &cfg.filter_init_zero);

  std::istringstream is(text);
  std::string raw;
  while (std::getline(is, raw)) {
    ++cur.line;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') cur.fail("unterminated section header");
      cur.section = trim(line.substr(1, line.size() - 2));
      if (cur.section.empty()) cur.fail("empty section name");
      continue;
    }
    // run summaries embed the effective configuration next to a
    // [summary] section; that section is not configuration
    if (cur.section == "summary") continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) cur.fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) cur.fail("empty key");
    if (cur.section.empty()) cur.fail("key '" + key + "' outside any section");
    const std::string full = cur.section + "." + key;
    const auto it = keys.find(full);
    if (it == keys.end()) cur.fail("unknown key '" + key + "' in section [" + cur.section + "]");
    it->second(cur, value);
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

namespace {
std::string fmt(double v) {
  char b[48];
  std::snprintf(b, sizeof(b), "%.17g", v);
  return b;
}
std::string fmt(const Vec3d& v) {
  return fmt(v.x()) + " " + fmt(v.y()) + " " + fmt(v.z());
}
}  // namespace

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  os << "[vehicle]\n";
  os << "mass = " << fmt(c.veh.m) << "\n";
  os << "gravity = " << fmt(c.veh.g) << "\n";
  os << "inertia = " << fmt(c.veh.J_diag) << "\n";
  os << "thrust_max = " << fmt(c.veh.T_max_hw) << "\n";
  os << "torque_max = " << fmt(c.veh.tau_max_hw) << "\n";
  os << "\n[outer]\n";
  os << "k_p = " << fmt(c.outer.k_p) << "\n";
  os << "k_v = " << fmt(c.outer.k_v) << "\n";
  os << "k_f = " << fmt(c.outer.k_f) << "\n";
  os << "k_s = " << fmt(c.outer.k_s) << "\n";
  os << "M_p = " << fmt(c.outer.M_p) << "\n";
  os << "\n[inner]\n";
  os << "k_theta = " << fmt(c.inner.k_theta) << "\n";
  os << "k_omega = " << fmt(c.inner.k_omega) << "\n";
  os << "M_theta = " << fmt(c.inner.M_theta) << "\n";
  os << "M_omega = " << fmt(c.inner.M_omega) << "\n";
  os << "delta = " << fmt(c.inner.delta) << "\n";
  os << "alpha = " << fmt(c.inner.alpha) << "\n";
  os << "\n[trajectory]\n";
  os << "preset = " << c.traj.preset << "\n";
  os << "frequency = " << fmt(c.traj.frequency) << "\n";
  os << "offset = " << fmt(c.traj.offset) << "\n";
  os << "yaw_amplitude = " << fmt(c.traj.yaw_amplitude) << "\n";
  os << "\n[sim]\n";
  os << "dt = " << fmt(c.dt) << "\n";
  os << "t_final = " << fmt(c.t_final) << "\n";
  os << "position0 = " << fmt(c.position0) << "\n";
  os << "velocity0 = " << fmt(c.velocity0) << "\n";
  os << "euler_zyx0_deg = " << fmt(c.euler_zyx0_deg) << "\n";
  os << "omega0 = " << fmt(c.omega0) << "\n";
  os << "u_f0 = " << fmt(c.u_f0) << "\n";
  os << "u_s0 = " << fmt(c.u_s0) << "\n";
  os << "monitors = " << (c.monitors ? "true" : "false") << "\n";
  os << "\n[audit]\n";
  os << "filter_init_zero = " << (c.filter_init_zero ? "true" : "false") << "\n";
  return os.str();
}

}  // namespace se3sat
