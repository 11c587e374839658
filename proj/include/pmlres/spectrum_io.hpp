#pragma once

#include "pmlres/eig.hpp"
#include "pmlres/references.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace pmlres {

/// One line of a spectrum CSV.
struct SpectrumRow {
  Complex omega;
  double residual = 0.0;
  bool in_lambda_d0 = true;
  bool spurious = false;
};

/// Header re_omega,im_omega,residual,in_lambda_d0,spurious; 17 significant
/// digits, booleans as 0/1, rows in spectrum order.
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum);
std::vector<SpectrumRow> read_spectrum_csv(std::istream& in);

/// Eigenvalues, flags, warnings and solver provenance. `run` is merged in
/// under "run" (config source, hash and anything else the caller records).
nlohmann::json spectrum_json(const Spectrum& spectrum, const nlohmann::json& run = {});

struct PlotOptions {
  std::string title = "Computed spectrum";
  double width = 720.0;
  double height = 480.0;
};

/// Scatter plot of the spectrum in the omega plane: physical eigenvalues as
/// filled circles, spurious ones as crosses, ambiguous ones as triangles and
/// reference roots, when given, as open squares.
void write_spectrum_svg(std::ostream& out, const Spectrum& spectrum,
                        const std::vector<ResonanceReference>& references = {},
                        const PlotOptions& options = {});

}  // namespace pmlres
