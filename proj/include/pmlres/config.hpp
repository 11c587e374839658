#pragma once

#include "pmlres/error.hpp"
#include "pmlres/media.hpp"
#include "pmlres/mesh.hpp"
#include "pmlres/references.hpp"
#include "pmlres/scaling.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace pmlres {

/// Unparseable file, unknown or missing key, or a value out of range.
class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

struct ScalingConfig {
  ProfileKind kind = ProfileKind::affine;
  Complex gamma{0.0, 8.0};
  /// gamma = 1/(c - i omega_ref) instead of a fixed value.
  bool omega_dependent = false;
  double c = 0.0;
  double omega_ref = 0.0;
  double ramp_width = 1.0;
  double ramp_height = 1.0;
  std::vector<double> coefficients{1.0};
};

struct DiscretizationConfig {
  double hmax = 0.1;
  int p = 6;
  int q = 0;  ///< mapping order, 0 means q = p
  int refinements = 0;
  int threads = 0;
};

struct SolverConfig {
  Complex shift{3.026, -0.874};  ///< omega-plane shift
  int count = 24;
  int krylov_dim = 100;
  double tolerance = 1e-10;
  bool spurious = true;
  double stretch = 1.5;
  double radius = 0.5;
  double move_factor = 10.0;
  double move_floor = 1e-3;
  std::uint64_t seed = 1;
};

struct ReferenceConfig {
  int n_max = 6;
  SearchBox box{0.1, 8.0, -3.0, 0.0};
  int count = 5;
  std::string file;  ///< reference CSV overlaid on the SVG plot, optional
};

struct OutputConfig {
  std::string directory = "out";
  std::string name = "spectrum";
  bool csv = true;
  bool json = true;
  bool svg = true;
};

struct DampingConfig {
  Complex omega{1.0, 0.0};
  int rays = 8;
  double r0 = 0.0;  ///< source sphere radius, 0 means 0.9 r1 sigma_min/sigma_max
};

/// Sectioned key = value run description:
///
///   [geometry]       obstacle (disk|ellipse), radius | a1 a2, r1, layer_width
///   [medium]         sigma11, sigma12, sigma22
///   [scaling]        profile (affine|ramp|polynomial), gamma | c omega_dependent omega,
///                    ramp_width, ramp_height, coefficients
///   [discretization] hmax, p, q, refinements, threads
///   [solver]         shift, count, krylov_dim, tolerance, spurious, stretch,
///                    radius, move_factor, move_floor, seed
///   [reference]      n_max, re_min, re_max, im_min, im_max, count, file
///   [output]         directory, name, formats
///   [damping]        omega, rays, r0
///
/// Complex values are written "a", "bi", "a+bi", "a-bi" or as a pair "a b".
/// All sections are optional; missing keys take the defaults above.
struct RunConfig {
  Geometry geometry = Geometry::disk(1.0, 1.5, 2.0);
  Medium medium = Medium::isotropic(2);
  ScalingConfig scaling;
  DiscretizationConfig discretization;
  SolverConfig solver;
  ReferenceConfig reference;
  OutputConfig output;
  DampingConfig damping;

  std::string source;      ///< file name used in diagnostics
  std::uint64_t hash = 0;  ///< FNV-1a of the config text

  /// Profile with gamma resolved (omega-dependent gamma at omega_ref).
  ScalingProfile profile() const;
  double damping_r0() const;
};

/// Parses and validates; throws ConfigError naming the file, line or key.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

/// Parses "a", "bi", "a+bi", "a-bi", "i", "-i" or a pair "a b".
Complex parse_complex(std::string_view text);

std::uint64_t fnv1a(std::string_view text);
std::string hex64(std::uint64_t value);

}  // namespace pmlres
