// Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.

#include "oracles.hpp"
#include "pmlres/analytic.hpp"
#include "pmlres/bessel.hpp"
#include "pmlres/config.hpp"
#include "pmlres/eig.hpp"
#include "pmlres/fem.hpp"
#include "pmlres/media.hpp"
#include "pmlres/pipeline.hpp"
#include "pmlres/references.hpp"
#include "pmlres/scaling.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace pmlres;

namespace {

const Complex I(0.0, 1.0);
const SearchBox kBox{0.1, 8.0, -3.0, 0.0};

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::string cplx(Complex z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f%+.6fi", z.real(), z.imag());
  return buf;
}

void progress(const std::string& msg) {
  std::printf("    %s\n", msg.c_str());
  std::fflush(stdout);
}

RunConfig config_from(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "acceptance");
}

std::string disk_config(double hmax, int p, double width, const std::string& gamma, bool spurious) {
  std::ostringstream s;
  s << "[geometry]\nobstacle = disk\nradius = 1\nr1 = 1.5\nlayer_width = " << width << "\n"
    << "[scaling]\nprofile = affine\ngamma = " << gamma << "\n"
    << "[discretization]\nhmax = " << hmax << "\np = " << p << "\n"
    << "[solver]\nshift = 3.026-0.874i\ncount = 24\nkrylov_dim = 100\ntolerance = 1e-10\n"
    << "spurious = " << (spurious ? "true" : "false") << "\n";
  return s.str();
}

std::string ellipse_config(double hmax, int p) {
  std::ostringstream s;
  s << "[geometry]\nobstacle = ellipse\na1 = 0.5\na2 = 1\nr1 = 1.5\nlayer_width = 2\n"
    << "[medium]\nsigma11 = 0.25\nsigma22 = 1\n"
    << "[scaling]\nprofile = affine\ngamma = 8i\n"
    << "[discretization]\nhmax = " << hmax << "\np = " << p << "\n"
    << "[solver]\nshift = 3.026-0.874i\ncount = 24\nkrylov_dim = 100\ntolerance = 1e-10\n";
  return s.str();
}

// Shared state between criteria.
std::optional<std::vector<ResonanceReference>> g_references;
std::optional<PipelineResult> g_disk;
std::optional<PipelineResult> g_ellipse;

const std::vector<ResonanceReference>& references() {
  if (!g_references) g_references = find_disk_neumann_references(6, kBox);
  return *g_references;
}

const PipelineResult& disk_run() {
  if (!g_disk) g_disk = run_pipeline(config_from(disk_config(0.1, 6, 2.0, "8i", true)), progress);
  return *g_disk;
}

const PipelineResult& ellipse_run() {
  if (!g_ellipse) g_ellipse = run_pipeline(config_from(ellipse_config(0.1, 6)), progress);
  return *g_ellipse;
}

const Eigenpair* pair_with(const Spectrum& s, Complex omega) {
  for (const Eigenpair& p : s.pairs)
    if (p.omega == omega) return &p;
  return nullptr;
}

// ---------------------------------------------------------------------------

Outcome numerical_range() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> tau_dist(-M_PI / 2, M_PI / 2);
  double worst = 0.0;
  int outside = 0;
  const int samples = 10000;
  for (int i = 0; i < samples; ++i) {
    const int n = 2 + i % 2;
    const Eigen::MatrixXd b = oracle::random_spd(n, rng, 0.05, 5.0);
    double tau = tau_dist(rng);
    while (std::abs(tau) >= M_PI / 2) tau = tau_dist(rng);
    const RangeBox box = numerical_range_bounds(b, tau);
    const Eigen::VectorXcd x = oracle::random_unit(n, rng);
    const Complex v = x.dot(b_tau(b, tau) * x);
    const double excess = std::max({box.re_lo - v.real(), v.real() - box.re_hi, box.im_lo - v.imag(),
                                    v.imag() - box.im_hi, 0.0});
    worst = std::max(worst, excess);
    if (!box.contains(v, 1e-10)) ++outside;
  }
  return {outside == 0, std::to_string(samples) + " samples, " + std::to_string(outside) +
                            " outside, worst excess " + sci(worst)};
}

Outcome scaling_algebra() {
  Outcome o;
  // Finite-difference order of d/dr r~ against d inside the ramp.
  const ScalingProfile ramp = ScalingProfile::constant_after_ramp(1.5, 8.0 * I, 1.0);
  auto fd_err = [](const ScalingProfile& p, double r, double h) {
    const Complex fd = (eval(p, r + h).r_tilde - eval(p, r - h).r_tilde) / (2.0 * h);
    return std::abs(fd - eval(p, r).d);
  };
  double min_order = 1e300;
  for (double r : {1.6, 1.8, 2.0, 2.2, 2.4}) {
    min_order = std::min(min_order, std::log2(fd_err(ramp, r, 1e-2) / fd_err(ramp, r, 5e-3)));
  }
  // The affine r~ is linear beyond r1: its central difference is exact.
  const ScalingProfile affine = ScalingProfile::affine(1.5, 8.0 * I);
  double affine_err = 0.0;
  for (double r : {1.6, 2.0, 3.0, 10.0}) affine_err = std::max(affine_err, fd_err(affine, r, 1e-2));
  const bool fd_ok = min_order >= 1.9 && affine_err <= 1e-10;

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> rad(0.0, 60.0), gre(0.0, 5.0), gim(1e-3, 20.0);
  double min_mod = 1e300;
  for (int i = 0; i < 100000; ++i) {
    const Complex g(gre(rng), gim(rng));
    const ScalingProfile p = i % 2 ? ScalingProfile::affine(1.5, g)
                                   : ScalingProfile::constant_after_ramp(1.5, g, 0.8, 1.0);
    const ScalingState s = eval(p, rad(rng));
    min_mod = std::min({min_mod, std::abs(s.d_tilde), std::abs(s.d)});
  }
  const bool mod_ok = min_mod >= 1.0 - 1e-15;

  double tau_err = 0.0;
  for (Complex g : {8.0 * I, Complex(1, 1), Complex(0.2, 3.0), Complex(4.0, 0.5)}) {
    const ScalingLimits lim = limits(ScalingProfile::affine(1.5, g), Medium::isotropic(2));
    tau_err = std::max(tau_err, std::abs(lim.tau_star - std::arg(1.0 + g)));
  }
  const bool tau_ok = tau_err <= 1e-12;

  o.pass = fd_ok && mod_ok && tau_ok;
  o.detail = "ramp FD order min " + std::to_string(min_order).substr(0, 5) + ", affine FD exact (err " +
             sci(affine_err) + "); min |d~|,|d| over 1e5 = " + std::to_string(min_mod).substr(0, 8) +
             "; |tau* - arg(1+gamma)| = " + sci(tau_err);
  return o;
}

Outcome damping() {
  Outcome o;
  const ScalingProfile p = ScalingProfile::affine(1.5, 8.0 * I);
  std::string detail;
  for (const Medium& m : {Medium::isotropic(2), Medium::diagonal(Eigen::Vector2d(0.25, 1.0))}) {
    const double r0 = 0.9 * 1.5 * m.sigma_min() / m.sigma_max();
    Eigen::VectorXd y(2);
    y << r0, 0.0;
    double worst_ratio = 1e300, bound = 0.0;
    for (int j = 0; j < 8; ++j) {
      const double a = 2.0 * M_PI * j / 8.0;
      Eigen::VectorXd dir(2);
      dir << std::cos(a), std::sin(a);
      const DampingRate r = damping_rate(1.0, p, m, dir, y);
      bound = r.bound;
      worst_ratio = std::min(worst_ratio, r.measured / r.bound);
    }
    const bool iso = m.sigma_min() == m.sigma_max();
    const bool ok = worst_ratio >= 0.95 && (!iso || std::abs(bound - 8.0) < 1e-12);
    o.pass = o.pass && ok;
    detail += std::string(iso ? "isotropic" : "diag(0.25,1)") + ": bound " + std::to_string(bound).substr(0, 6) +
              ", min measured/bound " + std::to_string(worst_ratio).substr(0, 6) + "; ";
  }
  o.detail = detail.substr(0, detail.size() - 2);
  return o;
}

Outcome reference_roots() {
  Outcome o;
  const std::vector<ResonanceReference>& refs = references();
  std::string counts;
  double worst_res = 0.0, worst_reconv = 0.0;
  for (int n = 0; n <= 6; ++n) {
    const int count = count_hankel_deriv_zeros(n, kBox);
    std::vector<Complex> distinct;
    for (const ResonanceReference& r : refs) {
      if (r.n != n) continue;
      if (std::none_of(distinct.begin(), distinct.end(), [&](Complex d) { return std::abs(d - r.root) < 1e-8; }))
        distinct.push_back(r.root);
      worst_res = std::max(worst_res, std::abs(hankel1_deriv(n, r.root)));
      for (int k = 0; k < 4; ++k) {
        const Complex seed = r.root + 1e-3 * std::polar(1.0, M_PI / 4 + k * M_PI / 2);
        const auto z = newton_hankel_deriv(n, seed);
        worst_reconv = std::max(worst_reconv, z ? std::abs(*z - r.root) : 1e300);
      }
    }
    if (count != static_cast<int>(distinct.size())) o.pass = false;
    counts += std::to_string(count) + (n < 6 ? "," : "");
  }
  o.pass = o.pass && worst_res < 1e-10 && worst_reconv <= 1e-9;
  o.detail = "counts n=0..6 [" + counts + "] = distinct roots, max residual " + sci(worst_res) +
             ", max reconvergence " + sci(worst_reconv);
  return o;
}

Outcome resonance_match(const PipelineResult& run) {
  Outcome o;
  const auto matches = match_references(physical_eigenvalues(run.spectrum), references(), 5, 1e-2);
  double worst = 0.0, worst_res = 0.0;
  for (const ReferenceMatch& m : matches) {
    worst = std::max(worst, m.found ? m.relative_error : 1e300);
    const Eigenpair* p = m.found ? pair_with(run.spectrum, m.omega) : nullptr;
    const double res = p ? p->residual : 1e300;
    worst_res = std::max(worst_res, res);
    o.pass = o.pass && m.matched && res < 1e-8;
  }
  o.pass = o.pass && matches.size() == 5;
  o.detail = std::to_string(run.dofs) + " dofs, max rel error " + sci(worst) + " over 5 leading, max residual " +
             sci(worst_res);
  return o;
}

Outcome spurious_behaviour() {
  Outcome o;
  std::string detail;
  std::map<std::string, std::pair<const PipelineResult*, int>> flagged_in_window;
  const PipelineResult* runs[2] = {&disk_run(), &ellipse_run()};
  const char* names[2] = {"isotropic", "anisotropic"};

  // Common window: the disc around the shift that both runs cover completely.
  const Complex shift = runs[0]->spectrum.provenance.shift;
  double window = 1e300;
  for (const PipelineResult* r : runs) {
    double reach = 0.0;
    for (const Eigenpair& p : r->spectrum.pairs) reach = std::max(reach, std::abs(p.omega - shift));
    window = std::min(window, reach);
  }
  int counts[2] = {0, 0}, distinct[2] = {0, 0};
  for (int i = 0; i < 2; ++i) {
    const Spectrum& s = runs[i]->spectrum;
    const auto matches = match_references(physical_eigenvalues(s), references(), 5, 1e-2);
    std::vector<double> moves;
    for (const ReferenceMatch& m : matches) {
      const Eigenpair* p = m.matched ? pair_with(s, m.omega) : nullptr;
      if (p && p->movement >= 0.0) moves.push_back(p->movement);
    }
    std::sort(moves.begin(), moves.end());
    const double median = moves.empty() ? 0.0
                          : moves.size() % 2 ? moves[moves.size() / 2]
                                             : 0.5 * (moves[moves.size() / 2 - 1] + moves[moves.size() / 2]);
    int flagged = 0, weak = 0;
    double min_ratio = 1e300;
    for (const Eigenpair& p : s.pairs) {
      if (!p.spurious) continue;
      ++flagged;
      if (std::abs(p.omega - shift) <= window) {
        ++counts[i];
        // Rotational symmetry makes disk values come in degenerate pairs; count each once as well.
        bool repeat = false;
        for (const Eigenpair& q : s.pairs) {
          if (&q == &p) break;
          repeat = repeat || (q.spurious && std::abs(q.omega - p.omega) <= 1e-6 * std::abs(p.omega));
        }
        if (!repeat) ++distinct[i];
      }
      // No partner within the matching radius: it moved by more than the radius.
      const double moved = p.movement < 0.0 ? 0.5 : p.movement;
      min_ratio = std::min(min_ratio, moved / std::max(median, 1e-300));
      if (!(moved > 10.0 * median)) ++weak;
    }
    o.pass = o.pass && !moves.empty() && weak == 0;
    detail += std::string(names[i]) + ": " + std::to_string(flagged) + " flagged, median physical movement " +
              sci(median) + (flagged ? ", min flagged/median " + sci(min_ratio) : "") + "; ";
  }
  o.pass = o.pass && counts[1] >= counts[0];
  detail += "in window |omega - shift| <= " + std::to_string(window).substr(0, 5) + ": " +
            std::to_string(counts[1]) + " anisotropic vs " + std::to_string(counts[0]) + " isotropic (distinct " +
            std::to_string(distinct[1]) + " vs " + std::to_string(distinct[0]) + ")";
  o.detail = detail;
  return o;
}

Outcome convergence_proxy() {
  Outcome o;
  const ResonanceReference first = leading_references(references(), 1).at(0);
  auto first_error = [&](const std::string& cfg) {
    const PipelineResult r = run_pipeline(config_from(cfg), progress);
    const auto m = match_references(physical_eigenvalues(r.spectrum), {first}, 1, 1.0);
    return m.at(0).found ? m.at(0).relative_error : 1e300;
  };
  // p-sequence at fixed hmax; a factor-2 rise is tolerated only at the floor.
  std::vector<double> errs;
  for (int p : {2, 3, 4}) errs.push_back(first_error(disk_config(0.15, p, 2.0, "8i", false)));
  bool mono = true;
  for (std::size_t i = 1; i < errs.size(); ++i) {
    const bool plateau = errs[i - 1] < 1e-9 && errs[i] <= 2.0 * errs[i - 1];
    mono = mono && (errs[i] < errs[i - 1] || plateau);
  }
  // Layer doubling at fixed hmax and p with a weak scaling, where truncation dominates.
  std::vector<double> terr;
  for (double width : {0.5, 1.0, 2.0}) terr.push_back(first_error(disk_config(0.15, 4, width, "3i", false)));
  const bool trunc = terr[1] < terr[0] && terr[2] < terr[1];
  o.pass = mono && trunc;
  o.detail = "p=2,3,4: " + sci(errs[0]) + ", " + sci(errs[1]) + ", " + sci(errs[2]) +
             "; gamma=3i L=0.5,1,2: " + sci(terr[0]) + ", " + sci(terr[1]) + ", " + sci(terr[2]);
  return o;
}

Outcome solver_oracle() {
  Outcome o;
  double worst = 0.0;
  std::string sizes;
  struct Case {
    Geometry geometry;
    Medium medium;
    double hmax;
  };
  const Case cases[] = {
      {Geometry::disk(1.0, 1.5, 1.0), Medium::isotropic(2), 0.9},
      {Geometry::ellipse(0.5, 1.0, 1.5, 1.0), Medium::diagonal(Eigen::Vector2d(0.25, 1.0)), 1.2},
  };
  for (const Case& c : cases) {
    auto mesh = std::make_shared<const Mesh>(generate(c.geometry, c.hmax, 2));
    const FunctionSpace space(mesh, 2);
    const int n = space.dof_count();
    sizes += std::to_string(n) + " ";
    if (n > 200) {
      o.pass = false;
      continue;
    }
    const AssembledPencil a = assemble(space, ScalingProfile::affine(1.5, 8.0 * I), c.medium);
    const Eigen::MatrixXcd k(a.K), m(a.M);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m.partialPivLu().solve(k), false);
    std::vector<Complex> dense(es.eigenvalues().data(), es.eigenvalues().data() + n);
    const Complex shift_sq = Complex(2.0, -0.6) * Complex(2.0, -0.6);
    std::sort(dense.begin(), dense.end(),
              [&](Complex x, Complex y) { return std::abs(x - shift_sq) < std::abs(y - shift_sq); });
    const int kk = 12;
    const Spectrum s = shift_invert_arnoldi(a, shift_sq, kk, 2 * kk + 10);
    if (static_cast<int>(s.pairs.size()) != kk) o.pass = false;
    // Every dense eigenvalue of the window is found, and every Ritz value is one of them.
    std::vector<Complex> found;
    for (const Eigenpair& p : s.pairs) found.push_back(p.omega * p.omega);
    for (int i = 0; i < kk; ++i) {
      double best = 1e300;
      for (Complex f : found) best = std::min(best, std::abs(f - dense[i]) / std::abs(dense[i]));
      worst = std::max(worst, best);
    }
    for (Complex f : found) {
      double best = 1e300;
      for (int i = 0; i < kk; ++i) best = std::min(best, std::abs(f - dense[i]) / std::abs(f));
      worst = std::max(worst, best);
    }
  }
  o.pass = o.pass && worst <= 1e-9;
  o.detail = "dofs " + sizes + "window of 12, max relative deviation " + sci(worst);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "numerical-range bounds", numerical_range},
      {2, "scaling algebra", scaling_algebra},
      {3, "damping rate", damping},
      {4, "Hankel-derivative reference roots", reference_roots},
      {5, "isotropic disk resonances (p=6, hmax=0.1)", [] { return resonance_match(disk_run()); }},
      {6, "anisotropic ellipse resonances (p=6, hmax=0.1)", [] { return resonance_match(ellipse_run()); }},
      {7, "spurious eigenvalue behaviour", spurious_behaviour},
      {8, "convergence in p and in layer width", convergence_proxy},
      {9, "shift-invert Arnoldi vs dense oracle", solver_oracle},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  std::vector<std::string> summary;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    std::printf("criterion %d: %s\n", c.id, c.title);
    std::fflush(stdout);
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char line[1024];
    std::snprintf(line, sizeof line, "[%s] criterion %d (%s): %s (%.1f s)", out.pass ? "PASS" : "FAIL", c.id,
                  c.title, out.detail.c_str(), sec);
    std::printf("%s\n", line);
    std::fflush(stdout);
    summary.push_back(line);
    failed += out.pass ? 0 : 1;
  }
  std::printf("\nsummary\n");
  for (const std::string& s : summary) std::printf("%s\n", s.c_str());
  std::printf("%d of %zu criteria failed\n", failed, summary.size());
  return failed == 0 ? 0 : 1;
}
