#include "pmlres/spectrum_io.hpp"

#include "pmlres/error.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace pmlres {

namespace {

constexpr const char* kHeader = "re_omega,im_omega,residual,in_lambda_d0,spurious";

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double field_double(const std::string& s, int line) {
  double v;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError("spectrum csv line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

bool field_bool(const std::string& s, int line) {
  if (s == "0") return false;
  if (s == "1") return true;
  throw ValidationError("spectrum csv line " + std::to_string(line) + ": expected 0 or 1, got '" + s + "'");
}

}  // namespace

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum) {
  out << kHeader << '\n';
  for (const Eigenpair& p : spectrum.pairs) {
    out << g17(p.omega.real()) << ',' << g17(p.omega.imag()) << ',' << g17(p.residual) << ','
        << (p.in_lambda_d0 ? 1 : 0) << ',' << (p.spurious ? 1 : 0) << '\n';
  }
}

std::vector<SpectrumRow> read_spectrum_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("spectrum csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) throw ValidationError("spectrum csv: unexpected header '" + line + "'");
  std::vector<SpectrumRow> rows;
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (f.size() != 5) {
      throw ValidationError("spectrum csv line " + std::to_string(number) + ": expected 5 fields");
    }
    SpectrumRow row;
    row.omega = Complex(field_double(f[0], number), field_double(f[1], number));
    row.residual = field_double(f[2], number);
    row.in_lambda_d0 = field_bool(f[3], number);
    row.spurious = field_bool(f[4], number);
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json spectrum_json(const Spectrum& spectrum, const nlohmann::json& run) {
  using nlohmann::json;
  const SpectrumProvenance& p = spectrum.provenance;
  json doc;
  doc["format"] = "pmlres-spectrum 1";
  doc["run"] = run.is_null() ? json::object() : run;
  doc["provenance"] = {
      {"shift", {p.shift.real(), p.shift.imag()}},
      {"shift_sq", {p.shift_sq.real(), p.shift_sq.imag()}},
      {"requested", p.requested},
      {"krylov_dim", p.krylov_dim},
      {"layer_width", p.layer_width},
      {"seed", p.seed},
      {"restarts", p.restarts},
      {"cycles", p.iterations},
      {"dofs", p.dofs},
  };
  json pairs = json::array();
  for (const Eigenpair& e : spectrum.pairs) {
    pairs.push_back({
        {"omega", {e.omega.real(), e.omega.imag()}},
        {"residual", e.residual},
        {"in_lambda_d0", e.in_lambda_d0},
        {"spurious", e.spurious},
        {"ambiguous", e.ambiguous},
        {"movement", e.movement},
    });
  }
  doc["eigenvalues"] = std::move(pairs);
  doc["warnings"] = spectrum.warnings;
  return doc;
}

}  // namespace pmlres
