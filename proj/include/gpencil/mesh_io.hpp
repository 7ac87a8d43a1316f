#pragma once

// Quad-grid tessellation of pencils plus OBJ and CSV writers/readers.
// All numbers are written with std::to_chars, so output never depends on
// the process locale.

#include "errors.hpp"
#include "pencil.hpp"
#include "rmf.hpp"
#include "ruled.hpp"
#include "vec.hpp"

#include <array>
#include <algorithm>
#include <charconv>
#include <limits>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace gpencil {

struct SurfaceGrid {
  std::size_t ns = 0, nt = 0;
  std::vector<double> s_values, t_values;
  std::vector<Vec3> points;   // row j (fixed t) is contiguous: index j * ns + i
  std::vector<Vec3> normals;  // empty when not computed
  std::optional<std::size_t> curve_row;

  std::size_t index(std::size_t i, std::size_t j) const { return j * ns + i; }
  const Vec3& point(std::size_t i, std::size_t j) const { return points[index(i, j)]; }
  bool empty() const { return ns < 2 || nt < 2 || points.size() != ns * nt; }
};

// t-grid with a row exactly on t0 when possible; piecewise uniform either side of it.
inline std::pair<std::vector<double>, std::optional<std::size_t>> snapped_t_grid(double t_min, double t_max,
                                                                                  double t0, std::size_t nt) {
  std::vector<double> ts(nt);
  if (t0 == t_min || t0 == t_max || nt < 3) {
    for (std::size_t j = 0; j < nt; ++j) ts[j] = grid_node(t_min, t_max, j, nt);
    if (t0 == t_min) return {ts, 0};
    if (t0 == t_max) return {ts, nt - 1};
    return {ts, std::nullopt};
  }
  const double f = (t0 - t_min) / (t_max - t_min) * static_cast<double>(nt - 1);
  const std::size_t j0 = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(f)), 1, nt - 2);
  for (std::size_t j = 0; j <= j0; ++j) ts[j] = grid_node(t_min, t0, j, j0 + 1);
  for (std::size_t j = j0; j < nt; ++j) ts[j] = grid_node(t0, t_max, j - j0, nt - j0);
  return {ts, j0};
}

inline SurfaceGrid tessellate(const SurfacePencil& p, std::size_t ns, std::size_t nt, bool with_normals = true) {
  if (ns < 2 || nt < 2) throw Error(ErrorKind::invalid_argument, "tessellate needs ns, nt >= 2");
  SurfaceGrid g;
  g.ns = ns;
  g.nt = nt;
  g.s_values.resize(ns);
  for (std::size_t i = 0; i < ns; ++i) g.s_values[i] = grid_node(p.s_min(), p.s_max(), i, ns);
  auto [ts, row] = snapped_t_grid(p.t_min(), p.t_max(), p.t0(), nt);
  g.t_values = std::move(ts);
  g.curve_row = row;
  g.points.resize(ns * nt);
  if (with_normals) g.normals.resize(ns * nt);
  for (std::size_t j = 0; j < nt; ++j) {
    for (std::size_t i = 0; i < ns; ++i) {
      const double s = g.s_values[i], t = g.t_values[j];
      try {
        g.points[g.index(i, j)] = p(s, t);
        if (with_normals) {
          const Vec3 n = analytic_normal(p, s, t).n;
          const double m = n.norm();
          g.normals[g.index(i, j)] = m > 1e-12 ? Vec3(n / m) : Vec3::Zero();
        }
      } catch (const Error& e) {
        throw Error(e.kind(), std::string(e.what()) + " at grid (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  return g;
}

namespace detail {

inline void put_number(std::string& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  out.append(buf, res.ptr);
}

inline double get_number(std::string_view tok) {
  double v = 0.0;
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  auto res = std::from_chars(first, tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw Error(ErrorKind::io, "malformed number '" + std::string(tok) + "'");
  return v;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline void write_all(std::ostream& os, const std::string& text) {
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!os) throw Error(ErrorKind::io, "write failed");
}

}  // namespace detail

inline std::string obj_text(const SurfaceGrid& g) {
  if (g.empty()) throw Error(ErrorKind::invalid_argument, "cannot export an empty grid");
  std::string out;
  for (const Vec3& v : g.points) {
    out += "v ";
    detail::put_number(out, v.x());
    out += ' ';
    detail::put_number(out, v.y());
    out += ' ';
    detail::put_number(out, v.z());
    out += '\n';
  }
  // Counterclockwise in the (s,t) parameter plane.
  for (std::size_t j = 0; j + 1 < g.nt; ++j) {
    for (std::size_t i = 0; i + 1 < g.ns; ++i) {
      out += "f " + std::to_string(g.index(i, j) + 1) + ' ' + std::to_string(g.index(i + 1, j) + 1) + ' ' +
             std::to_string(g.index(i + 1, j + 1) + 1) + ' ' + std::to_string(g.index(i, j + 1) + 1) + '\n';
    }
  }
  if (g.curve_row) {
    out += 'l';
    for (std::size_t i = 0; i < g.ns; ++i) out += ' ' + std::to_string(g.index(i, *g.curve_row) + 1);
    out += '\n';
  }
  return out;
}

inline void export_obj(const SurfaceGrid& g, std::ostream& os) { detail::write_all(os, obj_text(g)); }

struct ObjMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<std::size_t, 4>> faces;  // 1-indexed as in the file
  std::vector<std::size_t> polyline;              // 1-indexed
};

inline ObjMesh read_obj(std::istream& is) {
  ObjMesh m;
  std::string line;
  while (std::getline(is, line)) {
    const auto tok = detail::split_ws(line);
    if (tok.empty()) continue;
    if (tok[0] == "v" && tok.size() == 4) {
      m.vertices.emplace_back(detail::get_number(tok[1]), detail::get_number(tok[2]), detail::get_number(tok[3]));
    } else if (tok[0] == "f" && tok.size() == 5) {
      std::array<std::size_t, 4> f{};
      for (int k = 0; k < 4; ++k) f[k] = static_cast<std::size_t>(detail::get_number(tok[k + 1]));
      m.faces.push_back(f);
    } else if (tok[0] == "l") {
      for (std::size_t k = 1; k < tok.size(); ++k) m.polyline.push_back(static_cast<std::size_t>(detail::get_number(tok[k])));
    } else {
      throw Error(ErrorKind::io, "unexpected OBJ line: " + line);
    }
  }
  return m;
}

// Column orders:
//   grid:    i,j,s,t,x,y,z[,nx,ny,nz]
//   frames:  s,Tx,Ty,Tz,Ux,Uy,Uz,Vx,Vy,Vz,theta,kappa,tau
//   defects: s,tau,kappa,g,defect
inline std::string grid_csv_text(const SurfaceGrid& g) {
  if (g.empty()) throw Error(ErrorKind::invalid_argument, "cannot export an empty grid");
  const bool with_normals = g.normals.size() == g.points.size();
  std::string out = with_normals ? "i,j,s,t,x,y,z,nx,ny,nz\n" : "i,j,s,t,x,y,z\n";
  for (std::size_t j = 0; j < g.nt; ++j) {
    for (std::size_t i = 0; i < g.ns; ++i) {
      out += std::to_string(i) + ',' + std::to_string(j);
      const Vec3& v = g.point(i, j);
      for (double x : {g.s_values[i], g.t_values[j], v.x(), v.y(), v.z()}) {
        out += ',';
        detail::put_number(out, x);
      }
      if (with_normals) {
        const Vec3& n = g.normals[g.index(i, j)];
        for (double x : {n.x(), n.y(), n.z()}) {
          out += ',';
          detail::put_number(out, x);
        }
      }
      out += '\n';
    }
  }
  return out;
}

struct FrameRow {
  RmfFrame frame;
  double kappa = 0.0;
  double tau = std::numeric_limits<double>::quiet_NaN();
};

// Frames at n uniform nodes with kappa and tau (tau is NaN where kappa vanishes).
inline std::vector<FrameRow> frame_table(const FrameField& frames, std::size_t n) {
  if (n < 2) throw Error(ErrorKind::invalid_argument, "frame table needs n >= 2");
  const Curve3& c = frames.curve();
  std::vector<FrameRow> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = grid_node(c.s_min(), c.s_max(), i, n);
    FrameRow row;
    row.frame = frames.frame(s);
    const Vec3 r1 = c.derivative(1, s), r2 = c.derivative(2, s);
    row.kappa = r2.norm();
    if (row.kappa > frames.kappa_min()) row.tau = torsion_from_derivatives(r1, r2, c.derivative(3, s));
    rows.push_back(row);
  }
  return rows;
}

inline std::string frames_csv_text(const std::vector<FrameRow>& rows) {
  if (rows.empty()) throw Error(ErrorKind::invalid_argument, "cannot export an empty frame table");
  std::string out = "s,Tx,Ty,Tz,Ux,Uy,Uz,Vx,Vy,Vz,theta,kappa,tau\n";
  for (const auto& r : rows) {
    const RmfFrame& f = r.frame;
    const double vals[] = {f.s,      f.T.x(), f.T.y(), f.T.z(), f.U.x(), f.U.y(), f.U.z(),
                           f.V.x(),  f.V.y(), f.V.z(), f.theta, r.kappa, r.tau};
    for (std::size_t k = 0; k < std::size(vals); ++k) {
      if (k) out += ',';
      detail::put_number(out, vals[k]);
    }
    out += '\n';
  }
  return out;
}

inline std::string defects_csv_text(const std::vector<DefectSample>& rows) {
  if (rows.empty()) throw Error(ErrorKind::invalid_argument, "cannot export an empty defect table");
  std::string out = "s,tau,kappa,g,defect\n";
  for (const auto& r : rows) {
    const double vals[] = {r.s, r.tau, r.kappa, r.g, r.defect};
    for (std::size_t k = 0; k < std::size(vals); ++k) {
      if (k) out += ',';
      detail::put_number(out, vals[k]);
    }
    out += '\n';
  }
  return out;
}

inline void export_csv(const SurfaceGrid& g, std::ostream& os) { detail::write_all(os, grid_csv_text(g)); }
inline void export_csv(const std::vector<FrameRow>& rows, std::ostream& os) { detail::write_all(os, frames_csv_text(rows)); }
inline void export_csv(const std::vector<DefectSample>& rows, std::ostream& os) {
  detail::write_all(os, defects_csv_text(rows));
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorKind::io, "empty CSV");
  for (auto h : detail::split(line, ',')) t.header.emplace_back(h);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (auto cell : detail::split(line, ',')) row.push_back(detail::get_number(cell));
    if (row.size() != t.header.size()) throw Error(ErrorKind::io, "CSV row width mismatch");
    t.rows.push_back(std::move(row));
  }
  return t;
}

// The whole text is produced before the file is opened, so a failed export
// never leaves a truncated file behind.
inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorKind::io, "cannot open " + path);
  detail::write_all(os, text);
}

}  // namespace gpencil
