#pragma once

#include "pmlres/config.hpp"
#include "pmlres/eig.hpp"
#include "pmlres/fem.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace pmlres {

/// Failure inside the solve pipeline, tagged with the stage that raised it
/// (mesh, space, assemble, eig, spurious).
class PipelineError : public Error {
 public:
  PipelineError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

using Logger = std::function<void(const std::string&)>;

/// Discrete problem for one layer width.
struct Discretization {
  std::shared_ptr<const Mesh> mesh;
  std::unique_ptr<FunctionSpace> space;
  AssembledPencil pencil;
};

Discretization discretize(const RunConfig& config, double layer_width, const Logger& log = {});

/// Shift-invert solve of one discretization with the config's solver block.
Spectrum solve_discretization(const RunConfig& config, const Discretization& disc, double layer_width,
                              const Logger& log = {});

struct PipelineResult {
  Spectrum spectrum;                ///< base run, spurious flags set when enabled
  Spectrum stretched;               ///< layer-stretched run (empty when disabled)
  int triangles = 0;
  int dofs = 0;
  double seconds = 0.0;
};

/// mesh -> assemble -> shift-invert Arnoldi, followed by the layer-stretch
/// spurious filter when config.solver.spurious is set. Eigenvectors are not
/// kept. Errors are rethrown as PipelineError naming the stage.
PipelineResult run_pipeline(const RunConfig& config, const Logger& log = {});

/// Result of matching one reference root against computed eigenvalues.
struct ReferenceMatch {
  ResonanceReference reference;
  bool found = false;        ///< a computed candidate exists at all
  Complex omega;             ///< nearest computed eigenvalue
  double relative_error = 0.0;
  bool matched = false;      ///< relative_error <= tolerance
};

/// Nearest-neighbour matching of the `count` leading references (least
/// damped first) against `computed`.
std::vector<ReferenceMatch> match_references(const std::vector<Complex>& computed,
                                             const std::vector<ResonanceReference>& references,
                                             int count, double tolerance);

/// Non-spurious eigenvalues of a spectrum.
std::vector<Complex> physical_eigenvalues(const Spectrum& spectrum);

}  // namespace pmlres
