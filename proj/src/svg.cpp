#include "pmlres/spectrum_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

namespace pmlres {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double tick_step(double span) {
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double f : {1.0, 2.0, 5.0}) {
    if (f * mag >= raw) return f * mag;
  }
  return 10.0 * mag;
}

}  // namespace

void write_spectrum_svg(std::ostream& out, const Spectrum& spectrum,
                        const std::vector<ResonanceReference>& references, const PlotOptions& options) {
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
  auto extend = [&](Complex z) {
    xlo = std::min(xlo, z.real());
    xhi = std::max(xhi, z.real());
    ylo = std::min(ylo, z.imag());
    yhi = std::max(yhi, z.imag());
  };
  for (const Eigenpair& p : spectrum.pairs) extend(p.omega);
  for (const ResonanceReference& r : references) extend(r.root);
  if (!(xlo <= xhi)) {
    xlo = 0.0, xhi = 1.0, ylo = -1.0, yhi = 0.0;
  }
  yhi = std::max(yhi, 0.0);
  const double padx = std::max(0.05 * (xhi - xlo), 0.1);
  const double pady = std::max(0.05 * (yhi - ylo), 0.1);
  xlo -= padx, xhi += padx, ylo -= pady, yhi += pady;

  const double W = options.width, H = options.height;
  const double left = 70.0, right = 20.0, top = 40.0, bottom = 55.0;
  const double pw = W - left - right, ph = H - top - bottom;
  auto sx = [&](double x) { return left + (x - xlo) / (xhi - xlo) * pw; };
  auto sy = [&](double y) { return top + (yhi - y) / (yhi - ylo) * ph; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(W) << "\" height=\"" << num(H)
      << "\" viewBox=\"0 0 " << num(W) << ' ' << num(H) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << num(W / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(options.title) << "</text>\n";

  const double stepx = tick_step(xhi - xlo), stepy = tick_step(yhi - ylo);
  out << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
  for (double x = std::ceil(xlo / stepx) * stepx; x <= xhi; x += stepx) {
    out << "<line x1=\"" << num(sx(x)) << "\" y1=\"" << num(top) << "\" x2=\"" << num(sx(x)) << "\" y2=\""
        << num(top + ph) << "\"/>\n";
  }
  for (double y = std::ceil(ylo / stepy) * stepy; y <= yhi; y += stepy) {
    out << "<line x1=\"" << num(left) << "\" y1=\"" << num(sy(y)) << "\" x2=\"" << num(left + pw)
        << "\" y2=\"" << num(sy(y)) << "\"/>\n";
  }
  out << "</g>\n";
  out << "<g text-anchor=\"middle\">\n";
  for (double x = std::ceil(xlo / stepx) * stepx; x <= xhi; x += stepx) {
    out << "<text x=\"" << num(sx(x)) << "\" y=\"" << num(top + ph + 18) << "\">" << label(x) << "</text>\n";
  }
  out << "</g>\n<g text-anchor=\"end\">\n";
  for (double y = std::ceil(ylo / stepy) * stepy; y <= yhi; y += stepy) {
    out << "<text x=\"" << num(left - 6) << "\" y=\"" << num(sy(y) + 4) << "\">" << label(y) << "</text>\n";
  }
  out << "</g>\n";
  out << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw) << "\" height=\""
      << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  if (ylo < 0.0 && yhi > 0.0) {
    out << "<line x1=\"" << num(left) << "\" y1=\"" << num(sy(0)) << "\" x2=\"" << num(left + pw)
        << "\" y2=\"" << num(sy(0)) << "\" stroke=\"#888888\"/>\n";
  }
  out << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(H - 12) << "\" text-anchor=\"middle\">Re &#969;</text>\n";
  out << "<text x=\"18\" y=\"" << num(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << num(top + ph / 2) << ")\">Im &#969;</text>\n";

  auto circle = [&](double x, double y) {
    out << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"3.5\" fill=\"#1f5fbf\"/>\n";
  };
  auto cross = [&](double x, double y) {
    out << "<path d=\"M" << num(x - 4) << ' ' << num(y - 4) << "L" << num(x + 4) << ' ' << num(y + 4) << "M"
        << num(x - 4) << ' ' << num(y + 4) << "L" << num(x + 4) << ' ' << num(y - 4)
        << "\" stroke=\"#c0392b\" stroke-width=\"1.5\"/>\n";
  };
  auto triangle = [&](double x, double y) {
    out << "<path d=\"M" << num(x) << ' ' << num(y - 5) << "L" << num(x + 4.5) << ' ' << num(y + 3.5) << "L"
        << num(x - 4.5) << ' ' << num(y + 3.5) << "Z\" fill=\"#e08e0b\"/>\n";
  };
  auto square = [&](double x, double y) {
    out << "<rect x=\"" << num(x - 6) << "\" y=\"" << num(y - 6)
        << "\" width=\"12\" height=\"12\" fill=\"none\" stroke=\"#1e8449\" stroke-width=\"1.5\"/>\n";
  };

  for (const ResonanceReference& r : references) square(sx(r.root.real()), sy(r.root.imag()));
  for (const Eigenpair& p : spectrum.pairs) {
    const double x = sx(p.omega.real()), y = sy(p.omega.imag());
    if (p.spurious) {
      cross(x, y);
    } else if (p.ambiguous) {
      triangle(x, y);
    } else {
      circle(x, y);
    }
  }

  // Legend
  double ly = top + 16;
  const double lx = left + pw - 150;
  out << "<rect x=\"" << num(lx - 10) << "\" y=\"" << num(top + 4) << "\" width=\"155\" height=\""
      << num(references.empty() ? 64 : 82) << "\" fill=\"white\" stroke=\"#999999\"/>\n";
  auto entry = [&](const char* text) {
    out << "<text x=\"" << num(lx + 14) << "\" y=\"" << num(ly + 4) << "\">" << text << "</text>\n";
    ly += 18;
  };
  circle(lx, ly);
  entry("computed");
  cross(lx, ly);
  entry("spurious");
  triangle(lx, ly);
  entry("ambiguous match");
  if (!references.empty()) {
    square(lx, ly);
    entry("reference");
  }
  out << "</svg>\n";
}

}  // namespace pmlres
