// gpencil: build surface pencils through a curve and check them.
//
//   gpencil frames      --config c.cfg --out frames.csv
//   gpencil pencil      --config c.cfg --out mesh.obj --report report.txt
//   gpencil ruled|developable ...
//   gpencil verify      --config c.cfg
//   gpencil examples    --id P3 --out-dir out/
//
// Exit status: 0 all checks pass, 1 a check failed, 2 usage or config error.

#include "gpencil/gpencil.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

namespace {

using namespace gpencil;

struct JobFlags {
  std::string config_path;
  std::map<std::string, std::string> values;  // only flags actually given
};

void add_job_flags(CLI::App* sub, JobFlags& flags) {
  sub->add_option("--config", flags.config_path, "key = value config file")->check(CLI::ExistingFile);
  for (const auto& key : known_config_keys()) {
    if (key == "note") continue;
    sub->add_option_function<std::string>("--" + key, [&flags, key](const std::string& v) { flags.values[key] = v; });
  }
}

JobConfig merged_config(const JobFlags& flags, const std::string& forced_mode) {
  ConfigMap m;
  if (!flags.config_path.empty()) m = read_config_file(flags.config_path);
  for (const auto& [k, v] : flags.values) m[k] = v;
  if (!forced_mode.empty()) m["mode"] = forced_mode;
  return to_job_config(m);
}

void emit_report(const Report& rep, const std::string& path) {
  const std::string text = rep.text();
  std::cout << text;
  if (!path.empty()) write_text_file(path, text);
}

void write_if(const std::string& path, const std::string& text) {
  if (!path.empty() && !text.empty()) write_text_file(path, text);
}

int frames_job(const JobConfig& cfg) {
  const auto out = run_frames(cfg);
  emit_report(out.report, cfg.report);
  write_if(cfg.out.empty() ? cfg.frames_out : cfg.out, out.csv);
  return out.report.exit_code();
}

int surface_job(const JobConfig& cfg, bool artifacts) {
  const auto out = run_surface(cfg, artifacts);
  emit_report(out.report, cfg.report);
  if (artifacts) {
    write_if(cfg.out, out.obj);
    write_if(cfg.grid_out, out.grid_csv);
    write_if(cfg.frames_out, out.frames_csv);
    write_if(cfg.defects_out, out.defects_csv);
  }
  return out.report.exit_code();
}

int examples_job(const std::string& id, const std::string& out_dir) {
  std::vector<std::string> ids;
  if (id.empty())
    ids = fixtures::ids();
  else
    ids.push_back(id);
  fixtures::text(ids.front());  // rejects unknown ids before any work
  std::filesystem::create_directories(out_dir);
  int code = 0;
  for (const auto& one : ids) {
    const auto art = run_example(one);
    std::cout << art.outcome.report.text();
    for (const auto& [name, text] : art.files) write_text_file((std::filesystem::path(out_dir) / name).string(), text);
    code = std::max(code, art.outcome.report.exit_code());
  }
  return code;
}

bool is_usage_error(ErrorKind k) {
  return k == ErrorKind::syntax || k == ErrorKind::unknown_identifier || k == ErrorKind::invalid_argument ||
         k == ErrorKind::io;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surface pencils with a common geodesic curve"};
  app.require_subcommand(1);

  JobFlags flags;
  auto* frames = app.add_subcommand("frames", "rotation-minimizing frames along the curve (CSV + report)");
  auto* pencil = app.add_subcommand("pencil", "pencil from marching scales a, b, c or from f");
  auto* ruled = app.add_subcommand("ruled", "ruled surface with ruling coefficient g");
  auto* developable = app.add_subcommand("developable", "developable ruled surface, g = tau/kappa");
  auto* verify = app.add_subcommand("verify", "run the checks for a config and print the report");
  for (auto* sub : {frames, pencil, ruled, developable, verify}) add_job_flags(sub, flags);

  std::string example_id, out_dir = ".";
  auto* examples = app.add_subcommand("examples", "regenerate the five example surfaces");
  examples->add_option("--id", example_id, "P1..P5 (default: all)");
  examples->add_option("--out-dir", out_dir, "directory for OBJ/CSV/report files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*examples) return examples_job(example_id, out_dir);
    if (*frames) return frames_job(merged_config(flags, ""));
    if (*verify) {
      const JobConfig cfg = merged_config(flags, "");
      return cfg.mode.empty() ? frames_job(cfg) : surface_job(cfg, false);
    }
    const std::string mode = *pencil ? "pencil" : *ruled ? "ruled" : "developable";
    return surface_job(merged_config(flags, mode), true);
  } catch (const Error& e) {
    std::cerr << "gpencil: " << e.what() << '\n';
    return is_usage_error(e.kind()) ? 2 : 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "gpencil: " << e.what() << '\n';
    return 2;
  }
}
