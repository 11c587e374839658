#pragma once

#include "pmlres/config.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace pmlres {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;     ///< pipeline or I/O error
inline constexpr int violation = 2;   ///< admissibility condition or hypothesis violated
inline constexpr int incomplete = 3;  ///< reference search incomplete
inline constexpr int unmatched = 4;   ///< compare found an unmatched reference
inline constexpr int config = 64;     ///< unusable config or command line
}  // namespace exit_code

struct CommandOptions {
  std::optional<std::string> out;  ///< overrides [output] directory
  std::optional<double> tolerance;
  std::optional<std::uint64_t> seed;
  std::optional<int> count;        ///< compare: number of leading references
  std::optional<Complex> omega;    ///< damping: overrides [damping] omega
  std::optional<int> rays;         ///< damping: overrides [damping] rays
};

/// Admissibility report of the scaling for the configured medium and obstacle.
int cmd_check(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Hankel-derivative roots of the [reference] block, written to
/// <out>/references.csv.
int cmd_reference(const RunConfig& config, const CommandOptions& options, std::ostream& out,
                  std::ostream& err);

/// Full pipeline; writes <out>/<name>.csv, .json and .svg as configured.
int cmd_solve(const RunConfig& config, const CommandOptions& options, std::ostream& out,
              std::ostream& err);

/// Matches non-spurious computed eigenvalues against the leading references.
/// Either file may be a spectrum CSV or a reference CSV.
int cmd_compare(const std::string& computed_path, const std::string& reference_path,
                const CommandOptions& options, std::ostream& out, std::ostream& err);

/// Measured damping rates along equally spaced rays against their bound.
int cmd_damping(const RunConfig& config, const CommandOptions& options, std::ostream& out,
                std::ostream& err);

/// Command-line entry point: pmlres <check|reference|solve|compare|damping> ...
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pmlres
