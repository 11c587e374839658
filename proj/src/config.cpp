#include "pmlres/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace pmlres {

namespace pt = boost::property_tree;

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"geometry", {"obstacle", "radius", "a1", "a2", "r1", "layer_width"}},
      {"medium", {"sigma11", "sigma12", "sigma21", "sigma22"}},
      {"scaling",
       {"profile", "gamma", "c", "omega_dependent", "omega", "ramp_width", "ramp_height",
        "coefficients"}},
      {"discretization", {"hmax", "p", "q", "refinements", "threads"}},
      {"solver",
       {"shift", "count", "krylov_dim", "tolerance", "spurious", "stretch", "radius", "move_factor",
        "move_floor", "seed"}},
      {"reference", {"n_max", "re_min", "re_max", "im_min", "im_max", "count", "file"}},
      {"output", {"directory", "name", "formats"}},
      {"damping", {"omega", "rays", "r0"}},
  };
  return keys;
}

class Reader {
 public:
  Reader(const pt::ptree& tree, std::string source) : tree_(tree), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& section, const std::string& key,
                         const std::string& message) const {
    throw ConfigError(source_ + ": [" + section + "] " + key + ": " + message);
  }

  const std::string* raw(const std::string& section, const std::string& key) const {
    const auto sec = tree_.find(section);
    if (sec == tree_.not_found()) return nullptr;
    const auto it = sec->second.find(key);
    if (it == sec->second.not_found()) return nullptr;
    return &it->second.data();
  }

  bool has(const std::string& section, const std::string& key) const { return raw(section, key); }

  double number(const std::string& section, const std::string& key, double fallback) const {
    const std::string* s = raw(section, key);
    if (!s) return fallback;
    double v;
    if (!parse_double(*s, v)) fail(section, key, "expected a decimal number, got '" + *s + "'");
    return v;
  }

  int integer(const std::string& section, const std::string& key, int fallback) const {
    const std::string* s = raw(section, key);
    if (!s) return fallback;
    const std::string_view t = trim(*s);
    int v;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
      fail(section, key, "expected an integer, got '" + *s + "'");
    }
    return v;
  }

  std::uint64_t unsigned64(const std::string& section, const std::string& key,
                           std::uint64_t fallback) const {
    const std::string* s = raw(section, key);
    if (!s) return fallback;
    const std::string_view t = trim(*s);
    std::uint64_t v;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
      fail(section, key, "expected a non-negative integer, got '" + *s + "'");
    }
    return v;
  }

  bool boolean(const std::string& section, const std::string& key, bool fallback) const {
    const std::string* s = raw(section, key);
    if (!s) return fallback;
    const std::string_view t = trim(*s);
    if (t == "true" || t == "yes" || t == "1") return true;
    if (t == "false" || t == "no" || t == "0") return false;
    fail(section, key, "expected true or false, got '" + *s + "'");
  }

  std::string text(const std::string& section, const std::string& key,
                   const std::string& fallback) const {
    const std::string* s = raw(section, key);
    return s ? std::string(trim(*s)) : fallback;
  }

  Complex complex(const std::string& section, const std::string& key, Complex fallback) const {
    const std::string* s = raw(section, key);
    if (!s) return fallback;
    try {
      return parse_complex(*s);
    } catch (const ConfigError& e) {
      fail(section, key, e.what());
    }
  }

  std::vector<double> numbers(const std::string& section, const std::string& key,
                              const std::vector<double>& fallback) const {
    const std::string* s = raw(section, key);
    if (!s) return fallback;
    std::vector<double> out;
    for (std::string_view tok : split_ws(*s)) {
      double v;
      if (!parse_double(tok, v)) fail(section, key, "expected numbers, got '" + std::string(tok) + "'");
      out.push_back(v);
    }
    return out;
  }

 private:
  const pt::ptree& tree_;
  std::string source_;
};

}  // namespace

Complex parse_complex(std::string_view text) {
  const std::string_view s = trim(text);
  const auto parts = split_ws(s);
  auto bad = [&]() -> ConfigError {
    return ConfigError("expected a complex number (a, bi, a+bi or 'a b'), got '" + std::string(s) + "'");
  };
  if (parts.size() == 2) {
    double re, im;
    if (!parse_double(parts[0], re) || !parse_double(parts[1], im)) throw bad();
    return {re, im};
  }
  if (parts.size() != 1) throw bad();
  const std::string_view t = parts[0];
  if (t.back() != 'i') {
    double re;
    if (!parse_double(t, re)) throw bad();
    return {re, 0.0};
  }
  const std::string_view body = t.substr(0, t.size() - 1);
  // Split at the last sign that is not the leading one or part of an exponent.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_part = [&](std::string_view v) {
    if (v.empty() || v == "+") return 1.0;
    if (v == "-") return -1.0;
    double im;
    if (!parse_double(v, im)) throw bad();
    return im;
  };
  if (split == std::string_view::npos) return {0.0, imag_part(body)};
  double re;
  if (!parse_double(body.substr(0, split), re)) throw bad();
  return {re, imag_part(body.substr(split))};
}

ScalingProfile RunConfig::profile() const {
  const Complex gamma =
      scaling.omega_dependent ? gamma_of_omega(scaling.c, scaling.omega_ref) : scaling.gamma;
  switch (scaling.kind) {
    case ProfileKind::affine:
      return ScalingProfile::affine(geometry.r1, gamma);
    case ProfileKind::smoothed_polynomial:
      return ScalingProfile::smoothed_polynomial(geometry.r1, gamma, scaling.coefficients);
    case ProfileKind::constant_after_ramp:
      return ScalingProfile::constant_after_ramp(geometry.r1, gamma, scaling.ramp_width,
                                                 scaling.ramp_height);
  }
  throw ConfigError("unknown profile kind");
}

double RunConfig::damping_r0() const {
  if (damping.r0 > 0.0) return damping.r0;
  return 0.9 * geometry.r1 * medium.sigma_min() / medium.sigma_max();
}

RunConfig parse_config(std::istream& in, const std::string& source) {
  const std::string content{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  pt::ptree tree;
  try {
    std::istringstream stream(content);
    pt::read_ini(stream, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source + ":" + std::to_string(e.line()) + ": " + e.message());
  }

  const auto& known = known_keys();
  for (const auto& [section, body] : tree) {
    const auto it = known.find(section);
    if (it == known.end()) {
      if (body.empty()) throw ConfigError(source + ": key '" + section + "' outside any section");
      throw ConfigError(source + ": unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ConfigError(source + ": [" + section + "] unknown key '" + key + "'");
    }
  }

  Reader r(tree, source);
  RunConfig cfg;
  cfg.source = source;
  cfg.hash = fnv1a(content);

  // geometry
  const std::string obstacle = r.text("geometry", "obstacle", "disk");
  const double r1 = r.number("geometry", "r1", 1.5);
  const double width = r.number("geometry", "layer_width", 2.0);
  if (obstacle == "disk") {
    if (r.has("geometry", "a1") || r.has("geometry", "a2")) {
      r.fail("geometry", "a1", "semi-axes require obstacle = ellipse");
    }
    cfg.geometry = Geometry::disk(r.number("geometry", "radius", 1.0), r1, width);
  } else if (obstacle == "ellipse") {
    if (r.has("geometry", "radius")) r.fail("geometry", "radius", "radius requires obstacle = disk");
    cfg.geometry = Geometry::ellipse(r.number("geometry", "a1", 0.5), r.number("geometry", "a2", 1.0),
                                     r1, width);
  } else {
    r.fail("geometry", "obstacle", "expected disk or ellipse, got '" + obstacle + "'");
  }
  try {
    cfg.geometry.validate();
  } catch (const Error& e) {
    throw ConfigError(source + ": [geometry] " + e.what());
  }

  // medium
  {
    const double s11 = r.number("medium", "sigma11", 1.0);
    const double s12 = r.number("medium", "sigma12", 0.0);
    const double s21 = r.number("medium", "sigma21", s12);
    const double s22 = r.number("medium", "sigma22", 1.0);
    Eigen::Matrix2d sigma;
    sigma << s11, s12, s21, s22;
    try {
      cfg.medium = Medium(sigma);
    } catch (const Error& e) {
      throw ConfigError(source + ": [medium] " + e.what());
    }
  }

  // solver (read before scaling: omega-dependent gamma defaults to Re(shift))
  SolverConfig& sv = cfg.solver;
  sv.shift = r.complex("solver", "shift", sv.shift);
  sv.count = r.integer("solver", "count", sv.count);
  sv.krylov_dim = r.integer("solver", "krylov_dim", std::max(sv.krylov_dim, 2 * sv.count + 10));
  sv.tolerance = r.number("solver", "tolerance", sv.tolerance);
  sv.spurious = r.boolean("solver", "spurious", sv.spurious);
  sv.stretch = r.number("solver", "stretch", sv.stretch);
  sv.radius = r.number("solver", "radius", sv.radius);
  sv.move_factor = r.number("solver", "move_factor", sv.move_factor);
  sv.move_floor = r.number("solver", "move_floor", sv.move_floor);
  sv.seed = r.unsigned64("solver", "seed", sv.seed);
  if (sv.shift.imag() > 0.0) r.fail("solver", "shift", "the shift must satisfy Im <= 0");
  if (sv.count < 1) r.fail("solver", "count", "must be at least 1");
  if (sv.krylov_dim < 2 * sv.count + 10) r.fail("solver", "krylov_dim", "must be at least 2 count + 10");
  if (!(sv.tolerance > 0.0 && sv.tolerance < 1.0)) r.fail("solver", "tolerance", "must lie in (0, 1)");
  if (!(sv.stretch > 1.0)) r.fail("solver", "stretch", "must be greater than 1");
  if (!(sv.radius > 0.0)) r.fail("solver", "radius", "must be positive");
  if (!(sv.move_factor > 0.0)) r.fail("solver", "move_factor", "must be positive");
  if (!(sv.move_floor >= 0.0)) r.fail("solver", "move_floor", "must be non-negative");

  // scaling
  ScalingConfig& sc = cfg.scaling;
  const std::string kind = r.text("scaling", "profile", "affine");
  if (kind == "affine") {
    sc.kind = ProfileKind::affine;
  } else if (kind == "ramp") {
    sc.kind = ProfileKind::constant_after_ramp;
  } else if (kind == "polynomial") {
    sc.kind = ProfileKind::smoothed_polynomial;
  } else {
    r.fail("scaling", "profile", "expected affine, ramp or polynomial, got '" + kind + "'");
  }
  sc.omega_dependent = r.boolean("scaling", "omega_dependent", false);
  if (sc.omega_dependent) {
    if (r.has("scaling", "gamma")) r.fail("scaling", "gamma", "conflicts with omega_dependent = true");
    sc.c = r.number("scaling", "c", 0.0);
    if (!(sc.c > 0.0)) r.fail("scaling", "c", "must be positive");
    sc.omega_ref = r.number("scaling", "omega", sv.shift.real());
    if (!(sc.omega_ref > 0.0)) r.fail("scaling", "omega", "must be positive so that Im gamma > 0");
  } else {
    if (r.has("scaling", "c")) r.fail("scaling", "c", "requires omega_dependent = true");
    if (r.has("scaling", "omega")) r.fail("scaling", "omega", "requires omega_dependent = true");
    sc.gamma = r.complex("scaling", "gamma", sc.gamma);
  }
  sc.ramp_width = r.number("scaling", "ramp_width", sc.ramp_width);
  sc.ramp_height = r.number("scaling", "ramp_height", sc.ramp_height);
  sc.coefficients = r.numbers("scaling", "coefficients", sc.coefficients);
  try {
    (void)cfg.profile();
  } catch (const Error& e) {
    throw ConfigError(source + ": [scaling] " + e.what());
  }

  // discretization
  DiscretizationConfig& dc = cfg.discretization;
  dc.hmax = r.number("discretization", "hmax", dc.hmax);
  dc.p = r.integer("discretization", "p", dc.p);
  dc.q = r.integer("discretization", "q", dc.q);
  dc.refinements = r.integer("discretization", "refinements", dc.refinements);
  dc.threads = r.integer("discretization", "threads", dc.threads);
  if (!(dc.hmax > 0.0)) r.fail("discretization", "hmax", "must be positive");
  if (dc.p < 1 || dc.p > 6) r.fail("discretization", "p", "must be in [1, 6]");
  if (dc.q < 0 || dc.q > 6) r.fail("discretization", "q", "must be in [0, 6]");
  if (dc.refinements < 0 || dc.refinements > 6) r.fail("discretization", "refinements", "must be in [0, 6]");
  if (dc.threads < 0) r.fail("discretization", "threads", "must be non-negative");

  // reference
  ReferenceConfig& rc = cfg.reference;
  rc.n_max = r.integer("reference", "n_max", rc.n_max);
  rc.box.re_lo = r.number("reference", "re_min", rc.box.re_lo);
  rc.box.re_hi = r.number("reference", "re_max", rc.box.re_hi);
  rc.box.im_lo = r.number("reference", "im_min", rc.box.im_lo);
  rc.box.im_hi = r.number("reference", "im_max", rc.box.im_hi);
  rc.count = r.integer("reference", "count", rc.count);
  rc.file = r.text("reference", "file", rc.file);
  if (rc.n_max < 0 || rc.n_max > 20) r.fail("reference", "n_max", "must be in [0, 20]");
  if (!(rc.box.re_lo < rc.box.re_hi)) r.fail("reference", "re_max", "must exceed re_min");
  if (!(rc.box.im_lo < rc.box.im_hi)) r.fail("reference", "im_max", "must exceed im_min");
  if (rc.count < 0) r.fail("reference", "count", "must be non-negative");

  // output
  OutputConfig& oc = cfg.output;
  oc.directory = r.text("output", "directory", oc.directory);
  oc.name = r.text("output", "name", oc.name);
  if (oc.name.empty() || oc.name.find('/') != std::string::npos) {
    r.fail("output", "name", "must be a plain file stem");
  }
  if (const std::string* formats = r.raw("output", "formats")) {
    oc.csv = oc.json = oc.svg = false;
    for (std::string_view f : split_ws(*formats)) {
      if (f == "csv") {
        oc.csv = true;
      } else if (f == "json") {
        oc.json = true;
      } else if (f == "svg") {
        oc.svg = true;
      } else {
        r.fail("output", "formats", "unknown format '" + std::string(f) + "' (csv, json, svg)");
      }
    }
  }

  // damping
  DampingConfig& dm = cfg.damping;
  dm.omega = r.complex("damping", "omega", dm.omega);
  dm.rays = r.integer("damping", "rays", dm.rays);
  dm.r0 = r.number("damping", "r0", dm.r0);
  if (dm.rays < 0) r.fail("damping", "rays", "must be non-negative");
  if (dm.r0 < 0.0) r.fail("damping", "r0", "must be non-negative");

  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  return parse_config(in, path);
}

}  // namespace pmlres
