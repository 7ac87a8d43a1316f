#pragma once

// Job configuration: plain-text key=value files merged with command-line
// flags (flags win). Keys are the long flag names without the leading "--".

#include "errors.hpp"
#include "expr.hpp"
#include "vec.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <tuple>
#include <sstream>
#include <string>
#include <vector>

namespace gpencil {

using ConfigMap = std::map<std::string, std::string>;

inline const std::vector<std::string>& known_config_keys() {
  static const std::vector<std::string> keys = {
      "name",      "mode",        "curve-x",      "curve-y",  "curve-z",        "s-range",        "t-range",
      "t0",        "theta0",      "u0",           "frame-steps", "a",           "b",              "c",
      "f",         "g",           "ruling-angle", "expect-developable", "grid", "samples",        "tol-iso",
      "tol-eq",    "eps-reg",     "tol-kg",       "tol-dev",  "tol-unit-speed", "tol-rmf",        "tol-k",
      "kappa-min", "out",         "report",       "frames-out", "defects-out",  "grid-out",       "note",
  };
  return keys;
}

namespace detail {

inline std::string trim(std::string_view v) {
  std::size_t b = 0, e = v.size();
  while (b < e && (v[b] == ' ' || v[b] == '\t' || v[b] == '\r')) ++b;
  while (e > b && (v[e - 1] == ' ' || v[e - 1] == '\t' || v[e - 1] == '\r')) --e;
  return std::string(v.substr(b, e - b));
}

inline std::vector<std::string> split_list(std::string_view v) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = v.find(',', start);
    out.push_back(trim(v.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

[[noreturn]] inline void config_fail(const std::string& what) { throw Error(ErrorKind::invalid_argument, what); }

}  // namespace detail

// '#' starts a comment; repeated "note" keys are joined with newlines.
inline ConfigMap parse_config_text(std::string_view text) {
  ConfigMap m;
  std::size_t line_no = 0, start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string trimmed = detail::trim(line);
    if (trimmed.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) detail::config_fail("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = detail::trim(std::string_view(trimmed).substr(0, eq));
    const std::string value = detail::trim(std::string_view(trimmed).substr(eq + 1));
    const auto& keys = known_config_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      detail::config_fail("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (key == "note" && m.count(key))
      m[key] += "\n" + value;
    else
      m[key] = value;
    if (end == text.size()) break;
  }
  return m;
}

inline ConfigMap read_config_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) detail::config_fail("cannot read config file " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

struct Tolerances {
  double iso = 1e-9;
  double eq = 1e-9;
  double reg = 1e-9;
  double kg = 1e-4;
  double dev = 1e-9;
  double unit_speed = 1e-9;
  double rmf = 1e-6;
  double gauss = 1e-4;
  double kappa_min = 1e-9;
};

struct JobConfig {
  std::string name;
  std::string mode;  // pencil | ruled | developable; empty for frame-only jobs
  std::array<std::string, 3> curve;
  double s_min = 0.0, s_max = 0.0;
  double t_min = 0.0, t_max = 0.0;
  bool has_t_range = false;
  double t0 = 0.0;
  double theta0 = 0.0;
  std::optional<Vec3> u0;
  std::size_t frame_steps = 0;  // 0: max(2000, 4 ns)
  std::string a, b, c, f, g, ruling_angle;
  bool expect_developable = false;
  std::size_t ns = 64, nt = 64;
  std::size_t samples = 200;
  Tolerances tol;
  std::string out, report, frames_out, defects_out, grid_out;
  std::string note;

  std::size_t effective_frame_steps() const { return frame_steps ? frame_steps : std::max<std::size_t>(2000, 4 * ns); }
};

namespace detail {

inline std::pair<double, double> parse_range(const std::string& key, const std::string& v) {
  const auto parts = split_list(v);
  if (parts.size() != 2) config_fail(key + " expects 'lo, hi'");
  const double lo = evaluate_constant(parts[0]), hi = evaluate_constant(parts[1]);
  if (!(lo < hi)) config_fail(key + " requires lo < hi");
  return {lo, hi};
}

inline std::size_t parse_count(const std::string& key, const std::string& v) {
  std::size_t n = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), n);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) config_fail(key + " expects a non-negative integer");
  return n;
}

inline double parse_real(const std::string& key, const std::string& v) {
  try {
    return evaluate_constant(v);
  } catch (const Error& e) {
    config_fail(key + ": " + e.what());
  }
}

}  // namespace detail

// Typed view of a merged map; throws invalid_argument on malformed or
// conflicting entries.
inline JobConfig to_job_config(const ConfigMap& m) {
  JobConfig cfg;
  auto get = [&](const char* key) -> std::string {
    auto it = m.find(key);
    return it == m.end() ? std::string() : it->second;
  };
  cfg.name = get("name");
  cfg.mode = get("mode");
  cfg.curve = {get("curve-x"), get("curve-y"), get("curve-z")};
  for (const auto& comp : cfg.curve)
    if (comp.empty()) detail::config_fail("curve-x, curve-y and curve-z are required");
  if (get("s-range").empty()) detail::config_fail("s-range is required");
  std::tie(cfg.s_min, cfg.s_max) = detail::parse_range("s-range", get("s-range"));
  if (!get("t-range").empty()) {
    std::tie(cfg.t_min, cfg.t_max) = detail::parse_range("t-range", get("t-range"));
    cfg.has_t_range = true;
  }
  if (!get("t0").empty()) cfg.t0 = detail::parse_real("t0", get("t0"));
  if (!get("theta0").empty()) cfg.theta0 = detail::parse_real("theta0", get("theta0"));
  if (!get("u0").empty()) {
    const auto parts = detail::split_list(get("u0"));
    if (parts.size() != 3) detail::config_fail("u0 expects 'x, y, z'");
    cfg.u0 = Vec3(detail::parse_real("u0", parts[0]), detail::parse_real("u0", parts[1]),
                  detail::parse_real("u0", parts[2]));
  }
  if (!get("frame-steps").empty()) cfg.frame_steps = detail::parse_count("frame-steps", get("frame-steps"));
  cfg.a = get("a");
  cfg.b = get("b");
  cfg.c = get("c");
  cfg.f = get("f");
  cfg.g = get("g");
  cfg.ruling_angle = get("ruling-angle");
  if (const auto v = get("expect-developable"); !v.empty()) {
    if (v != "true" && v != "false") detail::config_fail("expect-developable expects true or false");
    cfg.expect_developable = v == "true";
  }
  if (const auto v = get("grid"); !v.empty()) {
    const auto x = v.find('x');
    if (x == std::string::npos) detail::config_fail("grid expects NSxNT");
    cfg.ns = detail::parse_count("grid", v.substr(0, x));
    cfg.nt = detail::parse_count("grid", v.substr(x + 1));
    if (cfg.ns < 2 || cfg.nt < 2) detail::config_fail("grid sizes must be >= 2");
  }
  if (const auto v = get("samples"); !v.empty()) {
    cfg.samples = detail::parse_count("samples", v);
    if (cfg.samples < 2) detail::config_fail("samples must be >= 2");
  }
  auto tol = [&](const char* key, double& dst) {
    if (const auto v = get(key); !v.empty()) dst = detail::parse_real(key, v);
  };
  tol("tol-iso", cfg.tol.iso);
  tol("tol-eq", cfg.tol.eq);
  tol("eps-reg", cfg.tol.reg);
  tol("tol-kg", cfg.tol.kg);
  tol("tol-dev", cfg.tol.dev);
  tol("tol-unit-speed", cfg.tol.unit_speed);
  tol("tol-rmf", cfg.tol.rmf);
  tol("tol-k", cfg.tol.gauss);
  tol("kappa-min", cfg.tol.kappa_min);
  cfg.out = get("out");
  cfg.report = get("report");
  cfg.frames_out = get("frames-out");
  cfg.defects_out = get("defects-out");
  cfg.grid_out = get("grid-out");
  cfg.note = get("note");
  return cfg;
}

// Exactly one marching-scale group per mode: a/b/c or f for pencil, g for
// ruled, nothing (or g = tau/kappa) for developable.
inline void validate_surface_inputs(const JobConfig& cfg) {
  const bool abc = !cfg.a.empty() || !cfg.b.empty() || !cfg.c.empty();
  const bool f = !cfg.f.empty();
  const bool g = !cfg.g.empty();
  const bool angle = !cfg.ruling_angle.empty();
  if (!cfg.has_t_range) detail::config_fail("t-range is required for surface jobs");
  if (cfg.mode == "pencil") {
    if (abc == f) detail::config_fail("pencil mode takes either a/b/c or f");
    if (g || angle) detail::config_fail("g and ruling-angle belong to ruled mode");
  } else if (cfg.mode == "ruled") {
    if (abc || f) detail::config_fail("ruled mode takes g, not a/b/c or f");
    if (!g) detail::config_fail("ruled mode requires g");
  } else if (cfg.mode == "developable") {
    if (abc || f || angle) detail::config_fail("developable mode takes no marching-scale inputs");
    std::string compact;
    for (char ch : cfg.g)
      if (ch != ' ') compact += ch;
    if (g && compact != "tau/kappa") detail::config_fail("developable mode fixes g = tau/kappa");
  } else {
    detail::config_fail("mode must be pencil, ruled or developable (got '" + cfg.mode + "')");
  }
  if (!(cfg.t_min <= cfg.t0 && cfg.t0 <= cfg.t_max)) detail::config_fail("t0 must lie inside t-range");
}

}  // namespace gpencil
