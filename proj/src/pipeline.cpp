#include "pmlres/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

namespace pmlres {

namespace {

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(name, e.what());
  }
}

void note(const Logger& log, const std::string& message) {
  if (log) log(message);
}

}  // namespace

Discretization discretize(const RunConfig& config, double layer_width, const Logger& log) {
  const DiscretizationConfig& dc = config.discretization;
  Discretization disc;
  disc.mesh = stage("mesh", [&] {
    const Geometry g = config.geometry.with_layer_width(layer_width);
    const int q = dc.q > 0 ? dc.q : dc.p;
    Mesh mesh = generate(g, dc.hmax, q);
    for (int i = 0; i < dc.refinements; ++i) mesh = refine(mesh);
    return std::make_shared<const Mesh>(std::move(mesh));
  });
  disc.space = stage("space", [&] { return std::make_unique<FunctionSpace>(disc.mesh, dc.p); });
  disc.pencil = stage("assemble", [&] {
    AssemblyOptions opts;
    opts.threads = dc.threads;
    const ScalingProfile profile = config.profile();
    return assemble(*disc.space, profile, config.medium, opts);
  });
  char buf[160];
  std::snprintf(buf, sizeof buf, "layer width %g: %d triangles, %d dofs, %ld nonzeros", layer_width,
                static_cast<int>(disc.mesh->triangles.size()), disc.space->dof_count(),
                static_cast<long>(disc.pencil.K.nonZeros()));
  note(log, buf);
  return disc;
}

Spectrum solve_discretization(const RunConfig& config, const Discretization& disc, double layer_width,
                              const Logger& log) {
  const SolverConfig& sv = config.solver;
  return stage("eig", [&] {
    ArnoldiOptions opts;
    opts.seed = sv.seed;
    opts.d0 = limits(config.profile(), config.medium).d0;
    opts.layer_width = layer_width;
    opts.tolerance = sv.tolerance;
    opts.keep_vectors = false;
    const int k = std::min(sv.count, disc.space->dof_count());
    const int dim = std::max(sv.krylov_dim, 2 * k + 10);
    Spectrum s = shift_invert_arnoldi(disc.pencil, sv.shift * sv.shift, k, dim, opts);
    char buf[160];
    std::snprintf(buf, sizeof buf, "layer width %g: %zu eigenvalues after %d cycles", layer_width,
                  s.pairs.size(), s.provenance.iterations);
    note(log, buf);
    return s;
  });
}

PipelineResult run_pipeline(const RunConfig& config, const Logger& log) {
  const auto start = std::chrono::steady_clock::now();
  PipelineResult result;
  auto solve_width = [&](double width, bool record) {
    const Discretization disc = discretize(config, width, log);
    if (record) {
      result.triangles = static_cast<int>(disc.mesh->triangles.size());
      result.dofs = disc.space->dof_count();
    }
    return solve_discretization(config, disc, width, log);
  };
  const Spectrum base = solve_width(config.geometry.layer_width, true);
  if (config.solver.spurious) {
    SpuriousOptions opts;
    opts.stretch = config.solver.stretch;
    opts.radius = config.solver.radius;
    opts.move_factor = config.solver.move_factor;
    opts.move_floor = config.solver.move_floor;
    result.spectrum = stage("spurious", [&] {
      return spurious_filter([&](double width) { return solve_width(width, false); }, base, opts,
                             &result.stretched);
    });
  } else {
    result.spectrum = base;
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::vector<ReferenceMatch> match_references(const std::vector<Complex>& computed,
                                             const std::vector<ResonanceReference>& references,
                                             int count, double tolerance) {
  std::vector<ReferenceMatch> out;
  for (const ResonanceReference& ref : leading_references(references, count)) {
    ReferenceMatch m;
    m.reference = ref;
    double best = -1.0;
    for (Complex z : computed) {
      const double d = std::abs(z - ref.root);
      if (best < 0.0 || d < best) {
        best = d;
        m.omega = z;
      }
    }
    m.found = best >= 0.0;
    if (m.found) {
      m.relative_error = best / std::abs(ref.root);
      m.matched = m.relative_error <= tolerance;
    }
    out.push_back(m);
  }
  return out;
}

std::vector<Complex> physical_eigenvalues(const Spectrum& spectrum) {
  std::vector<Complex> out;
  for (const Eigenpair& p : spectrum.pairs) {
    if (!p.spurious) out.push_back(p.omega);
  }
  return out;
}

}  // namespace pmlres
