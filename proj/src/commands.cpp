#include "pmlres/commands.hpp"

#include "pmlres/analytic.hpp"
#include "pmlres/pipeline.hpp"
#include "pmlres/spectrum_io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace pmlres {

namespace fs = std::filesystem;

namespace {

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::string cfmt(Complex z, int digits = 10) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.*g%+.*gi", digits, z.real(), digits, z.imag());
  return buf;
}

std::string verdict(bool ok) { return ok ? "pass" : "FAIL"; }

fs::path output_dir(const RunConfig& config, const CommandOptions& options) {
  const fs::path dir = options.out ? fs::path(*options.out) : fs::path(config.output.directory);
  fs::create_directories(dir);
  return dir;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + path.string());
  return f;
}

double obstacle_extent(const Geometry& g) { return std::max(g.a1, g.a2); }

// Reads a spectrum CSV (non-spurious rows) or a reference CSV as references.
std::vector<ResonanceReference> read_roots(const std::string& path, bool& was_spectrum) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open " + path);
  std::string header;
  std::getline(f, header);
  if (!header.empty() && header.back() == '\r') header.pop_back();
  f.clear();
  f.seekg(0);
  std::vector<ResonanceReference> out;
  if (header.rfind("re_omega,", 0) == 0) {
    was_spectrum = true;
    int k = 0;
    for (const SpectrumRow& row : read_spectrum_csv(f)) {
      if (row.spurious) continue;
      ResonanceReference r;
      r.n = -1;
      r.k = ++k;
      r.root = row.omega;
      r.residual = row.residual;
      out.push_back(r);
    }
  } else {
    was_spectrum = false;
    out = read_references_csv(f);
  }
  return out;
}

}  // namespace

int cmd_check(const RunConfig& config, std::ostream& out, std::ostream&) {
  const ScalingProfile profile = config.profile();
  const Medium& medium = config.medium;
  const double r0 = obstacle_extent(config.geometry);
  const AdmissibilityReport rep = admissible(profile, medium, r0);
  const ScalingLimits& lim = rep.limits;

  out << "config              " << config.source << " (" << hex64(config.hash) << ")\n";
  out << "medium              sigma_min = " << fmt("%.10g", medium.sigma_min())
      << ", sigma_max = " << fmt("%.10g", medium.sigma_max())
      << ", anisotropy = " << fmt("%.10g", rep.anisotropy) << "\n";
  out << "profile             " << to_string(profile.kind()) << ", r1 = " << fmt("%.10g", profile.r1())
      << ", gamma = " << cfmt(profile.gamma()) << "\n";
  out << "d0                  " << cfmt(lim.d0) << "\n";
  out << "d_inf               " << cfmt(lim.d_inf) << "\n";
  out << "tau*                " << fmt("%.10g", lim.tau_star)
      << (lim.closed_form ? " (closed form)" : " (sampled)") << "\n";
  out << "psi*                " << fmt("%.10g", lim.psi_star)
      << (lim.psi_flagged ? " (flagged: argument of a number with non-positive real part)" : "") << "\n";
  out << "profile shape       " << verdict(rep.profile_ok);
  for (const std::string& f : rep.profile_failures) out << "; " << f;
  out << "\n";
  out << "interface radius    " << verdict(rep.interface_ok) << "  r1 = " << fmt("%.10g", profile.r1())
      << (rep.interface_ok ? " > " : " <= ") << "(sigma_max/sigma_min) r0 = "
      << fmt("%.10g", rep.interface_threshold) << " with r0 = " << fmt("%.10g", r0) << "\n";
  out << "cos tau* condition  " << verdict(rep.cos_tau_ok) << "  cos tau* = " << fmt("%.10g", rep.cos_tau_star)
      << (rep.cos_tau_ok ? " > " : " <= ") << "1 - sigma_min/sigma_max = " << fmt("%.10g", rep.anisotropy)
      << "\n";
  out << "far-field decay     " << verdict(rep.decay_ok);
  for (const std::string& f : rep.decay_failures) out << "; " << f;
  out << "\n";
  out << "min stabilizing c   " << fmt("%.10g", min_stabilizing_c(medium))
      << " for gamma(omega) = 1/(c - i omega)\n";
  if (rep.all()) {
    out << "verdict             all conditions hold\n";
    return exit_code::ok;
  }
  out << "verdict             sufficient conditions violated (reported, not enforced)\n";
  return exit_code::violation;
}

int cmd_reference(const RunConfig& config, const CommandOptions& options, std::ostream& out,
                  std::ostream& err) {
  const ReferenceConfig& rc = config.reference;
  std::vector<ResonanceReference> refs;
  try {
    refs = find_disk_neumann_references(rc.n_max, rc.box);
  } catch (const IncompleteSearchError& e) {
    err << "error [reference]: " << e.what();
    if (e.expected() >= 0) err << " (expected " << e.expected() << ", found " << e.found() << ")";
    err << "; shrink or move the box\n";
    return exit_code::incomplete;
  } catch (const DomainError& e) {
    err << "error [reference]: " << e.what() << "\n";
    return exit_code::config;
  }
  const fs::path path = output_dir(config, options) / "references.csv";
  {
    std::ofstream f = open_out(path);
    write_references_csv(f, refs);
  }
  out << "  n  k  root                                     |H_n'(root)|\n";
  for (const ResonanceReference& r : refs) {
    char line[160];
    std::snprintf(line, sizeof line, "%3d %2d  %-40s %.2e\n", r.n, r.k, cfmt(r.root, 17).c_str(),
                  r.residual);
    out << line;
  }
  out << refs.size() << " roots written to " << path.string() << "\n";
  return exit_code::ok;
}

int cmd_solve(const RunConfig& config_in, const CommandOptions& options, std::ostream& out,
              std::ostream& err) {
  RunConfig config = config_in;
  if (options.seed) config.solver.seed = *options.seed;
  const double tolerance = options.tolerance.value_or(1e-2);

  std::vector<ResonanceReference> refs;
  if (!config.reference.file.empty()) {
    fs::path ref = config.reference.file;
    if (ref.is_relative()) ref = fs::path(config.source).parent_path() / ref;
    std::ifstream f(ref);
    if (!f) {
      err << "error [config]: cannot open reference file " << ref.string() << "\n";
      return exit_code::config;
    }
    refs = read_references_csv(f);
  }

  PipelineResult result;
  try {
    result = run_pipeline(config, [&](const std::string& msg) { err << "  " << msg << "\n"; });
  } catch (const PipelineError& e) {
    err << "error [" << e.stage() << "]: " << e.what() << "\n";
    return exit_code::failure;
  }

  const fs::path dir = output_dir(config, options);
  const std::string& name = config.output.name;
  if (config.output.csv) {
    std::ofstream f = open_out(dir / (name + ".csv"));
    write_spectrum_csv(f, result.spectrum);
  }
  if (config.output.json) {
    nlohmann::json run = {
        {"config", config.source},
        {"config_hash", hex64(config.hash)},
        {"triangles", result.triangles},
        {"dofs", result.dofs},
        {"hmax", config.discretization.hmax},
        {"p", config.discretization.p},
        {"gamma", {config.profile().gamma().real(), config.profile().gamma().imag()}},
    };
    nlohmann::json doc = spectrum_json(result.spectrum, run);
    if (config.solver.spurious) doc["stretched"] = spectrum_json(result.stretched);
    std::ofstream f = open_out(dir / (name + ".json"));
    f << doc.dump(2) << "\n";
  }
  if (config.output.svg) {
    std::ofstream f = open_out(dir / (name + ".svg"));
    PlotOptions plot;
    plot.title = "Computed spectrum (" + to_string(config.geometry.obstacle) + ", p = " +
                 std::to_string(config.discretization.p) + ")";
    write_spectrum_svg(f, result.spectrum, refs, plot);
  }

  int spurious = 0;
  for (const Eigenpair& p : result.spectrum.pairs) spurious += p.spurious ? 1 : 0;
  for (const std::string& w : result.spectrum.warnings) err << "warning: " << w << "\n";
  out << result.spectrum.pairs.size() << " eigenvalues (" << spurious << " spurious), " << result.dofs
      << " dofs, " << fmt("%.1f", result.seconds) << " s; output in " << dir.string() << "\n";
  out << "  re_omega            im_omega            residual   flags\n";
  for (const Eigenpair& p : result.spectrum.pairs) {
    char line[160];
    std::snprintf(line, sizeof line, "  %-19.12g %-19.12g %.2e  %s%s%s\n", p.omega.real(), p.omega.imag(),
                  p.residual, p.spurious ? "spurious " : "", p.ambiguous ? "ambiguous " : "",
                  p.in_lambda_d0 ? "" : "outside-lambda-d0");
    out << line;
  }
  if (!refs.empty()) {
    const auto matches =
        match_references(physical_eigenvalues(result.spectrum), refs, config.reference.count, tolerance);
    out << "reference matches (tolerance " << fmt("%g", tolerance) << "):\n";
    for (const ReferenceMatch& m : matches) {
      out << "  " << cfmt(m.reference.root, 12) << "  ->  "
          << (m.found ? cfmt(m.omega, 12) + "  rel " + fmt("%.3e", m.relative_error) : "none")
          << (m.matched ? "" : "  UNMATCHED") << "\n";
    }
  }
  return exit_code::ok;
}

int cmd_compare(const std::string& computed_path, const std::string& reference_path,
                const CommandOptions& options, std::ostream& out, std::ostream& err) {
  const double tolerance = options.tolerance.value_or(1e-2);
  const int count = options.count.value_or(5);
  std::vector<ResonanceReference> computed, refs;
  try {
    bool spectrum = false;
    computed = read_roots(computed_path, spectrum);
    refs = read_roots(reference_path, spectrum);
  } catch (const Error& e) {
    err << "error [compare]: " << e.what() << "\n";
    return exit_code::config;
  }
  std::vector<Complex> omegas;
  for (const ResonanceReference& c : computed) omegas.push_back(c.root);
  const auto matches = match_references(omegas, refs, count, tolerance);

  bool all = static_cast<int>(matches.size()) == count;
  out << "  #  reference                                computed                                 rel error   status\n";
  int i = 0;
  for (const ReferenceMatch& m : matches) {
    char line[240];
    std::snprintf(line, sizeof line, "%3d  %-40s %-40s %-11s %s\n", ++i, cfmt(m.reference.root, 12).c_str(),
                  m.found ? cfmt(m.omega, 12).c_str() : "-",
                  m.found ? fmt("%.3e", m.relative_error).c_str() : "-", m.matched ? "ok" : "UNMATCHED");
    out << line;
    all = all && m.matched;
  }
  for (int j = static_cast<int>(matches.size()); j < count; ++j) {
    out << fmt("%3.0f", j + 1.0) << "  (missing reference)                                                                  UNMATCHED\n";
  }
  out << (all ? "all " : "not all ") << count << " leading references matched within " << fmt("%g", tolerance)
      << "\n";
  return all ? exit_code::ok : exit_code::unmatched;
}

int cmd_damping(const RunConfig& config, const CommandOptions& options, std::ostream& out,
                std::ostream& err) {
  const Complex omega = options.omega.value_or(config.damping.omega);
  const int rays = options.rays.value_or(config.damping.rays);
  if (rays < 0) {
    err << "error [config]: ray count must be non-negative\n";
    return exit_code::config;
  }
  const ScalingProfile profile = config.profile();
  const double r0 = config.damping_r0();
  Eigen::VectorXd y = Eigen::VectorXd::Zero(config.medium.dim());
  y(0) = r0;
  out << "omega = " << cfmt(omega) << ", source point (" << fmt("%g", r0) << ", 0)\n";
  out << "  angle        measured     bound        ratio\n";
  for (int j = 0; j < rays; ++j) {
    const double angle = 2.0 * M_PI * j / rays;
    Eigen::VectorXd dir = Eigen::VectorXd::Zero(config.medium.dim());
    dir(0) = std::cos(angle);
    dir(1) = std::sin(angle);
    DampingRate rate;
    try {
      rate = damping_rate(omega, profile, config.medium, dir, y);
    } catch (const PreconditionError& e) {
      err << "error [damping]: " << e.what() << "\n";
      return exit_code::violation;
    }
    char line[128];
    std::snprintf(line, sizeof line, "  %-12.6f %-12.6f %-12.6f %.4f\n", angle, rate.measured, rate.bound,
                  rate.measured / rate.bound);
    out << line;
  }
  return exit_code::ok;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Resonances of anisotropic exterior Helmholtz problems with radial complex scaling",
               "pmlres"};
  app.require_subcommand(1);
  std::string config_path, computed_path, reference_path, omega_text;
  CommandOptions opts;
  std::string out_dir;
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  int count = 0, rays = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "Output directory (overrides [output] directory)");
    sub->add_option("--tolerance", tolerance, "Relative matching tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Arnoldi start-vector seed");
  };
  CLI::App* check = app.add_subcommand("check", "Admissibility report of the scaling");
  check->add_option("config", config_path, "Config file")->required();
  add_common(check);
  CLI::App* reference = app.add_subcommand("reference", "Hankel-derivative reference roots");
  reference->add_option("config", config_path, "Config file")->required();
  add_common(reference);
  CLI::App* solve = app.add_subcommand("solve", "Compute the spectrum with spurious filtering");
  solve->add_option("config", config_path, "Config file")->required();
  add_common(solve);
  CLI::App* compare = app.add_subcommand("compare", "Match computed eigenvalues against references");
  compare->add_option("computed", computed_path, "Spectrum or reference CSV")->required();
  compare->add_option("reference", reference_path, "Reference or spectrum CSV")->required();
  compare->add_option("--count", count, "Number of leading references that must match")
      ->check(CLI::NonNegativeNumber);
  add_common(compare);
  CLI::App* damping = app.add_subcommand("damping", "Measured damping rates along rays");
  damping->add_option("config", config_path, "Config file")->required();
  damping->add_option("--omega", omega_text, "Frequency, e.g. 1 or 1-0.5i");
  damping->add_option("--rays", rays, "Number of rays")->check(CLI::NonNegativeNumber);
  add_common(damping);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_code::ok : exit_code::config;
  }

  for (CLI::App* sub : app.get_subcommands()) {
    auto given = [sub](const std::string& name) {
      const CLI::Option* o = sub->get_option_no_throw(name);
      return o != nullptr && o->count() > 0;
    };
    if (given("--out")) opts.out = out_dir;
    if (given("--tolerance")) opts.tolerance = tolerance;
    if (given("--seed")) opts.seed = seed;
    if (given("--count")) opts.count = count;
    if (given("--rays")) opts.rays = rays;
    if (given("--omega")) {
      try {
        opts.omega = parse_complex(omega_text);
      } catch (const ConfigError& e) {
        err << "error [config]: --omega: " << e.what() << "\n";
        return exit_code::config;
      }
    }
  }

  try {
    if (compare->parsed()) return cmd_compare(computed_path, reference_path, opts, out, err);
    RunConfig config;
    try {
      config = load_config(config_path);
    } catch (const ConfigError& e) {
      err << "error [config]: " << e.what() << "\n";
      return exit_code::config;
    }
    if (check->parsed()) return cmd_check(config, out, err);
    if (reference->parsed()) return cmd_reference(config, opts, out, err);
    if (solve->parsed()) return cmd_solve(config, opts, out, err);
    if (damping->parsed()) return cmd_damping(config, opts, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::failure;
  }
  return exit_code::config;
}

}  // namespace pmlres
