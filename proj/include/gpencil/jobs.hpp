#pragma once

// Job orchestration behind the command-line tool: builds curves, frames and
// pencils from a JobConfig, runs every check and renders fixed-format reports.

#include "config.hpp"
#include "curve.hpp"
#include "errors.hpp"
#include "fixtures.hpp"
#include "mesh_io.hpp"
#include "pencil.hpp"
#include "rmf.hpp"
#include "ruled.hpp"
#include "verify.hpp"

#include <charconv>
#include <cmath>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace gpencil {

enum class Status { pass, fail, info };

struct CheckLine {
  std::string name;
  std::string metric_name;
  double metric = 0.0;
  std::string relation;  // "<=", ">=", "==" or empty for info lines
  double threshold = 0.0;
  Status status = Status::info;
};

struct Report {
  std::string title;
  std::vector<CheckLine> lines;
  std::vector<std::string> notes;

  bool pass() const {
    for (const auto& l : lines)
      if (l.status == Status::fail) return false;
    return true;
  }

  int exit_code() const { return pass() ? 0 : 1; }

  void check_le(std::string name, std::string metric_name, double metric, double threshold) {
    lines.push_back({std::move(name), std::move(metric_name), metric, "<=", threshold,
                     metric <= threshold ? Status::pass : Status::fail});
  }

  void check_ge(std::string name, std::string metric_name, double metric, double threshold) {
    lines.push_back({std::move(name), std::move(metric_name), metric, ">=", threshold,
                     metric >= threshold ? Status::pass : Status::fail});
  }

  void check_true(std::string name, bool ok) {
    lines.push_back({std::move(name), "ok", ok ? 1.0 : 0.0, "==", 1.0, ok ? Status::pass : Status::fail});
  }

  void info(std::string name, std::string metric_name, double metric) {
    lines.push_back({std::move(name), std::move(metric_name), metric, "", 0.0, Status::info});
  }

  void error(std::string name, const std::string& what) {
    lines.push_back({std::move(name), "error", std::nan(""), "", 0.0, Status::fail});
    notes.push_back(what);
  }

  std::string text() const;
};

namespace detail {

inline std::string sci(double v, int precision) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, precision);
  return std::string(buf, res.ptr);
}

inline std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace detail

// One line per check: name, metric, threshold, PASS/FAIL/INFO.
inline std::string Report::text() const {
  std::string out;
  if (!title.empty()) out += "# " + title + "\n";
  for (const auto& n : notes) out += "# note: " + n + "\n";
  for (const auto& l : lines) {
    std::string line = detail::pad(l.name, 26) + ' ';
    line += detail::pad(l.metric_name + "=" + detail::sci(l.metric, 6), 28) + ' ';
    line += detail::pad(l.relation.empty() ? std::string("-") : l.relation + " " + detail::sci(l.threshold, 1), 12);
    line += ' ';
    line += l.status == Status::pass ? "PASS" : l.status == Status::fail ? "FAIL" : "INFO";
    out += line + '\n';
  }
  out += std::string("overall ") + (pass() ? "PASS" : "FAIL") + '\n';
  return out;
}

inline Curve3 build_curve(const JobConfig& cfg) {
  return Curve3::parse(cfg.curve[0], cfg.curve[1], cfg.curve[2], cfg.s_min, cfg.s_max);
}

inline std::shared_ptr<const FrameField> build_frame_field(const JobConfig& cfg, const Curve3& curve) {
  FrameOptions opt;
  opt.theta0 = cfg.theta0;
  opt.U0 = cfg.u0;
  opt.steps = cfg.effective_frame_steps();
  opt.kappa_min = cfg.tol.kappa_min;
  return std::make_shared<const FrameField>(build_frames(curve, opt));
}

inline RuledSpec build_ruled_spec(const JobConfig& cfg) {
  RuledSpec spec;
  spec.t0 = cfg.t0;
  spec.g = cfg.mode == "developable" ? RulingCoefficient::tau_over_kappa() : RulingCoefficient::parse(cfg.g);
  if (!cfg.ruling_angle.empty()) spec.ruling_angle = parse(cfg.ruling_angle);
  return spec;
}

inline SurfacePencil build_pencil(const JobConfig& cfg, std::shared_ptr<const FrameField> frames) {
  if (cfg.mode == "pencil") {
    if (!cfg.f.empty())
      return SurfacePencil(frames, from_sufficient_condition(parse(cfg.f), frames, cfg.t0, cfg.samples, cfg.tol.reg),
                           cfg.t0, cfg.t_min, cfg.t_max);
    auto expr_or_zero = [](const std::string& s) { return s.empty() ? Expression(0.0) : parse(s); };
    return SurfacePencil(frames, MarchingScale::from_expressions(expr_or_zero(cfg.a), expr_or_zero(cfg.b), expr_or_zero(cfg.c)),
                         cfg.t0, cfg.t_min, cfg.t_max);
  }
  if (cfg.mode == "developable") return make_developable(frames, cfg.t0, cfg.t_min, cfg.t_max, cfg.samples);
  return make_ruled(frames, build_ruled_spec(cfg), cfg.t_min, cfg.t_max);
}

struct FramesOutcome {
  Report report;
  std::string csv;
};

inline FramesOutcome run_frames(const JobConfig& cfg) {
  FramesOutcome out;
  out.report.title = "frames" + (cfg.name.empty() ? std::string() : " " + cfg.name);
  const Curve3 curve = build_curve(cfg);
  const auto speed = check_unit_speed(curve, cfg.samples, cfg.tol.unit_speed);
  out.report.check_le("unit-speed", "max_dev", speed.max_deviation, speed.tolerance);
  if (!speed.pass) return out;
  try {
    const auto frames = build_frame_field(cfg, curve);
    const auto rows = frame_table(*frames, cfg.effective_frame_steps() + 1);
    double kmin = INFINITY, kmax = -INFINITY, tmin = INFINITY, tmax = -INFINITY;
    for (const auto& r : rows) {
      kmin = std::min(kmin, r.kappa);
      kmax = std::max(kmax, r.kappa);
      if (std::isfinite(r.tau)) {
        tmin = std::min(tmin, r.tau);
        tmax = std::max(tmax, r.tau);
      }
    }
    out.report.info("curvature", "min", kmin);
    out.report.info("curvature", "max", kmax);
    if (std::isfinite(tmin)) {
      out.report.info("torsion", "min", tmin);
      out.report.info("torsion", "max", tmax);
    }
    out.report.info("frame-method", frames->from_frenet() ? "theta_rk4" : "direct_rk4", 1.0);
    std::vector<RmfFrame> fr;
    fr.reserve(rows.size());
    for (const auto& r : rows) fr.push_back(r.frame);
    const auto rmf = check_rmf(fr, cfg.tol.rmf);
    out.report.check_le("rmf-U'.V", "max", rmf.max_uv, rmf.tolerance);
    out.report.check_le("rmf-V'.U", "max", rmf.max_vu, rmf.tolerance);
    out.csv = frames_csv_text(rows);
  } catch (const Error& e) {
    out.report.error("frames", e.what());
  }
  return out;
}

struct SurfaceOutcome {
  Report report;
  std::string obj;
  std::string grid_csv;
  std::string frames_csv;
  std::string defects_csv;  // ruled modes only
};

// Relative mismatch between the closed-form normal and the FD normal at
// seeded random interior points; points with |n| < threshold are skipped.
struct NormalAgreement {
  double max_rel = 0.0;
  std::size_t used = 0;
  std::size_t skipped = 0;
};

inline NormalAgreement normal_agreement(const SurfacePencil& p, std::size_t count, std::uint64_t seed = 20240607) {
  const SurfaceProbe probe = SurfaceProbe::of(p);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> us(p.s_min() + 2 * probe.h_s, p.s_max() - 2 * probe.h_s);
  std::uniform_real_distribution<double> ut(p.t_min() + 2 * probe.h_t, p.t_max() - 2 * probe.h_t);
  NormalAgreement out;
  for (std::size_t k = 0; k < count; ++k) {
    const double s = us(rng), t = ut(rng);
    const Vec3 na = analytic_normal(p, s, t).n;
    if (na.norm() < default_regularity_threshold) {
      ++out.skipped;
      continue;
    }
    const Vec3 nf = numeric_normal_raw(probe, s, t);
    out.max_rel = std::max(out.max_rel, (na - nf).norm() / na.norm());
    ++out.used;
  }
  return out;
}

struct CurvatureScan {
  double max_abs = 0.0;
  std::size_t used = 0;
  std::size_t excluded = 0;
};

// |K| over an m x m interior grid, skipping points flagged as singular.
inline CurvatureScan gaussian_curvature_scan(const SurfaceProbe& probe, std::size_t m) {
  CurvatureScan out;
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      const double s = probe.s_min + (probe.s_max - probe.s_min) * (static_cast<double>(i) + 1.0) / (static_cast<double>(m) + 1.0);
      const double t = probe.t_min + (probe.t_max - probe.t_min) * (static_cast<double>(j) + 1.0) / (static_cast<double>(m) + 1.0);
      if (numeric_normal_raw(probe, s, t).norm() < default_regularity_threshold) {
        ++out.excluded;
        continue;
      }
      try {
        out.max_abs = std::max(out.max_abs, std::fabs(gaussian_curvature(probe, s, t)));
        ++out.used;
      } catch (const Error&) {
        ++out.excluded;
      }
    }
  }
  return out;
}

// Builds the pencil for cfg.mode, runs the verification suite and, when
// tessellate is set, produces mesh and table texts.
inline SurfaceOutcome run_surface(const JobConfig& cfg, bool tessellate_mesh = true) {
  validate_surface_inputs(cfg);
  SurfaceOutcome out;
  Report& rep = out.report;
  rep.title = cfg.mode + (cfg.name.empty() ? std::string() : " " + cfg.name);
  if (!cfg.note.empty()) {
    std::size_t start = 0;
    for (;;) {
      const auto nl = cfg.note.find('\n', start);
      rep.notes.push_back(cfg.note.substr(start, nl == std::string::npos ? std::string::npos : nl - start));
      if (nl == std::string::npos) break;
      start = nl + 1;
    }
  }

  const Curve3 curve = build_curve(cfg);
  const auto speed = check_unit_speed(curve, cfg.samples, cfg.tol.unit_speed);
  rep.check_le("unit-speed", "max_dev", speed.max_deviation, speed.tolerance);
  if (!speed.pass) return out;

  std::shared_ptr<const FrameField> frames;
  std::optional<SurfacePencil> pencil;
  try {
    frames = build_frame_field(cfg, curve);
    pencil.emplace(build_pencil(cfg, frames));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::syntax || e.kind() == ErrorKind::unknown_identifier ||
        e.kind() == ErrorKind::invalid_argument)
      throw;
    rep.error("construction", e.what());
    return out;
  }
  const SurfacePencil& p = *pencil;
  const SurfaceProbe probe = SurfaceProbe::of(p);
  const std::size_t n = cfg.samples;

  const auto iso = check_isoparametric(p, n, cfg.tol.iso);
  rep.check_le("isoparametric", "max_dev", iso.max_deviation, iso.tolerance);

  std::optional<bool> symbolic_pass;
  if (iso.pass) {
    try {
      const auto geo = geodesic_condition_report(p, n, cfg.tol.eq, cfg.tol.reg, cfg.tol.iso);
      rep.check_le("geodesic-B-coefficient", "max", geo.max_residual, geo.tol_eq);
      rep.check_ge("geodesic-N-coefficient", "min", geo.min_magnitude, geo.eps_reg);
      symbolic_pass = geo.pass;
      double phi1 = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        phi1 = std::max(phi1, std::fabs(analytic_normal(p, grid_node(p.s_min(), p.s_max(), i, n), p.t0()).phi1));
      rep.check_le("normal-T-coefficient-t0", "max", phi1, 1e-10);
    } catch (const Error& e) {
      rep.error("geodesic-conditions", e.what());
    }
  }

  try {
    const auto kg = geodesic_curvature_along(probe, curve, p.t0(), n);
    rep.check_le("geodesic-curvature-fd", "max_abs", kg.max_abs, cfg.tol.kg);
    if (symbolic_pass) rep.check_true("geodesic-tests-agree", *symbolic_pass == (kg.max_abs <= cfg.tol.kg));
  } catch (const Error& e) {
    rep.error("geodesic-curvature-fd", e.what());
  }

  try {
    const auto agree = normal_agreement(p, 100);
    rep.check_le("normal-closed-form-vs-fd", "max_rel", agree.max_rel, 1e-6);
  } catch (const Error& e) {
    rep.error("normal-closed-form-vs-fd", e.what());
  }

  if (cfg.mode != "pencil") {
    try {
      const RuledSpec spec = build_ruled_spec(cfg);
      const auto table = defect_table(*frames, spec, n);
      double max_defect = 0.0, max_gap = 0.0;
      for (const auto& d : table) {
        max_defect = std::max(max_defect, std::fabs(d.defect));
        max_gap = std::max(max_gap, std::fabs(d.defect - d.closed_form));
      }
      rep.check_le("defect-closed-form-gap", "max", max_gap, 1e-9);
      const bool require = cfg.mode == "developable" || cfg.expect_developable;
      if (require)
        rep.check_le("developability-defect", "max_abs", max_defect, cfg.tol.dev);
      else
        rep.info("developability-defect", "max_abs", max_defect);
      const auto scan = gaussian_curvature_scan(probe, 41);
      if (require)
        rep.check_le("gaussian-curvature-fd", "max_abs", scan.max_abs, cfg.tol.gauss);
      else
        rep.info("gaussian-curvature-fd", "max_abs", scan.max_abs);
      rep.info("singular-points-excluded", "count", static_cast<double>(scan.excluded));
      out.defects_csv = defects_csv_text(table);
    } catch (const Error& e) {
      rep.error("developability", e.what());
    }
  }

  if (tessellate_mesh) {
    try {
      const SurfaceGrid grid = tessellate(p, cfg.ns, cfg.nt);
      out.obj = obj_text(grid);
      out.grid_csv = grid_csv_text(grid);
      out.frames_csv = frames_csv_text(frame_table(*frames, cfg.samples));
    } catch (const Error& e) {
      rep.error("tessellation", e.what());
    }
  }
  return out;
}

struct ExampleArtifacts {
  std::string id;
  SurfaceOutcome outcome;
  std::vector<std::pair<std::string, std::string>> files;  // (file name, contents)
};

// Output files for one reference example, named <id>.obj, <id>_grid.csv,
// <id>_frames.csv, <id>_defects.csv (ruled) and <id>_report.txt.
inline ExampleArtifacts run_example(std::string_view id) {
  ExampleArtifacts a;
  a.id = std::string(id);
  a.outcome = run_surface(fixtures::config(id));
  const auto& o = a.outcome;
  if (!o.obj.empty()) a.files.emplace_back(a.id + ".obj", o.obj);
  if (!o.grid_csv.empty()) a.files.emplace_back(a.id + "_grid.csv", o.grid_csv);
  if (!o.frames_csv.empty()) a.files.emplace_back(a.id + "_frames.csv", o.frames_csv);
  if (!o.defects_csv.empty()) a.files.emplace_back(a.id + "_defects.csv", o.defects_csv);
  a.files.emplace_back(a.id + "_report.txt", o.report.text());
  return a;
}

}  // namespace gpencil
