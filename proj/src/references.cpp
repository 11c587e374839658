#include "pmlres/references.hpp"

#include "pmlres/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

namespace pmlres {

namespace {

// Gauss-Kronrod 7/15 on [-1, 1]; Kronrod nodes listed from the end point
// inwards, Gauss nodes are the odd entries.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

Complex log_derivative(int n, Complex z) {
  const HankelValues v = hankel1_all(n, z);
  return v.ddh / v.dh;
}

// Integral of f'/f along the segment a -> b.
Complex segment_integral(int n, Complex a, Complex b, double tol, int depth) {
  const Complex mid = 0.5 * (a + b);
  const Complex half = 0.5 * (b - a);
  Complex kronrod = kWgk[7] * log_derivative(n, mid);
  Complex gauss = kWg[3] * log_derivative(n, mid);
  for (int i = 0; i < 7; ++i) {
    const Complex fp = log_derivative(n, mid + kXgk[i] * half);
    const Complex fm = log_derivative(n, mid - kXgk[i] * half);
    kronrod += kWgk[i] * (fp + fm);
    if (i % 2 == 1) gauss += kWg[i / 2] * (fp + fm);
  }
  kronrod *= half;
  gauss *= half;
  if (std::abs(kronrod - gauss) <= tol) return kronrod;
  if (depth >= 40) {
    throw IncompleteSearchError("argument principle: contour integral does not converge "
                                "(zero on or near the contour)",
                                -1, -1);
  }
  return segment_integral(n, a, mid, 0.5 * tol, depth + 1) +
         segment_integral(n, mid, b, 0.5 * tol, depth + 1);
}

void validate_box(const SearchBox& box) {
  if (!(box.re_lo < box.re_hi) || !(box.im_lo < box.im_hi)) {
    throw DomainError("reference search: empty or inverted box");
  }
  const bool spans_real_axis = box.im_lo <= 0.0 && box.im_hi >= 0.0;
  if (spans_real_axis && box.re_lo <= 0.0) {
    throw DomainError("reference search: box touches z = 0 or the branch cut on the negative real axis");
  }
  for (double re : {box.re_lo, box.re_hi}) {
    for (double im : {box.im_lo, box.im_hi}) {
      if (std::abs(Complex(re, im)) > kMaxBesselArgument) {
        throw DomainError("reference search: box leaves the supported range |z| <= 30");
      }
    }
  }
}

}  // namespace

int count_hankel_deriv_zeros(int n, const SearchBox& box) {
  validate_box(box);
  const Complex c0(box.re_lo, box.im_lo), c1(box.re_hi, box.im_lo);
  const Complex c2(box.re_hi, box.im_hi), c3(box.re_lo, box.im_hi);
  const double tol = 1e-9;
  const Complex total = segment_integral(n, c0, c1, tol, 0) + segment_integral(n, c1, c2, tol, 0) +
                        segment_integral(n, c2, c3, tol, 0) + segment_integral(n, c3, c0, tol, 0);
  const Complex winding = total / Complex(0.0, 2.0 * std::numbers::pi);
  const double rounded = std::round(winding.real());
  if (std::abs(winding - rounded) > 0.05) {
    throw IncompleteSearchError("argument principle: winding number " +
                                    std::to_string(winding.real()) + " is not an integer",
                                -1, -1);
  }
  return static_cast<int>(rounded);
}

std::optional<Complex> newton_hankel_deriv(int n, Complex seed, int max_iterations) {
  Complex z = seed;
  for (int it = 0; it < max_iterations; ++it) {
    if (!(std::abs(z) > 1e-6) || !(std::abs(z) < kMaxBesselArgument) ||
        (z.real() < 0.0 && std::abs(z.imag()) < 1e-12)) {
      return std::nullopt;
    }
    const HankelValues v = hankel1_all(n, z);
    if (v.ddh == 0.0) return std::nullopt;
    const Complex step = v.dh / v.ddh;
    z -= step;
    if (std::abs(step) <= 1e-14 * std::abs(z)) {
      if (!(std::abs(z) > 1e-6) || !(std::abs(z) < kMaxBesselArgument)) return std::nullopt;
      const double residual = std::abs(hankel1_all(n, z).dh);
      if (residual < 1e-10) return z;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::vector<ResonanceReference> find_disk_neumann_references(int n_max, const SearchBox& box) {
  if (n_max < 0 || n_max > kMaxBesselOrder) {
    throw DomainError("reference search: n_max outside [0, 20]");
  }
  validate_box(box);
  std::vector<ResonanceReference> all;
  for (int n = 0; n <= n_max; ++n) {
    const int expected = count_hankel_deriv_zeros(n, box);
    std::vector<Complex> roots;
    double spacing = 0.5;
    for (int level = 0; level < 5 && static_cast<int>(roots.size()) < expected; ++level) {
      roots.clear();
      const int nx = static_cast<int>(std::ceil((box.re_hi - box.re_lo) / spacing));
      const int ny = static_cast<int>(std::ceil((box.im_hi - box.im_lo) / spacing));
      for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
          const Complex seed(box.re_lo + (i + 0.5) * (box.re_hi - box.re_lo) / nx,
                             box.im_lo + (j + 0.5) * (box.im_hi - box.im_lo) / ny);
          const auto z = newton_hankel_deriv(n, seed);
          if (!z || !box.contains(*z)) continue;
          const bool seen = std::any_of(roots.begin(), roots.end(),
                                        [&](Complex r) { return std::abs(r - *z) < 1e-8; });
          if (!seen) roots.push_back(*z);
        }
      }
      spacing *= 0.5;
    }
    if (static_cast<int>(roots.size()) != expected) {
      throw IncompleteSearchError("reference search: order " + std::to_string(n) + " has " +
                                      std::to_string(expected) + " zeros but Newton found " +
                                      std::to_string(roots.size()),
                                  expected, static_cast<int>(roots.size()));
    }
    std::sort(roots.begin(), roots.end(),
              [](Complex a, Complex b) { return std::abs(a.real()) < std::abs(b.real()); });
    for (std::size_t i = 0; i < roots.size(); ++i) {
      ResonanceReference ref;
      ref.n = n;
      ref.k = static_cast<int>(i) + 1;
      ref.root = roots[i];
      ref.residual = std::abs(hankel1_all(n, roots[i]).dh);
      all.push_back(ref);
    }
  }
  std::stable_sort(all.begin(), all.end(), [](const ResonanceReference& a, const ResonanceReference& b) {
    if (a.n != b.n) return a.n < b.n;
    return a.root.real() < b.root.real();
  });
  return all;
}

std::vector<ResonanceReference> leading_references(const std::vector<ResonanceReference>& refs,
                                                   int count) {
  std::vector<ResonanceReference> sorted = refs;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const ResonanceReference& a, const ResonanceReference& b) {
                     const double ia = std::abs(a.root.imag()), ib = std::abs(b.root.imag());
                     if (ia != ib) return ia < ib;
                     return a.root.real() < b.root.real();
                   });
  if (count >= 0 && static_cast<std::size_t>(count) < sorted.size()) sorted.resize(count);
  return sorted;
}

void write_references_csv(std::ostream& out, const std::vector<ResonanceReference>& refs) {
  out << "n,k,re,im,residual\n";
  char buf[128];
  for (const auto& r : refs) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g\n", r.n, r.k, r.root.real(),
                  r.root.imag(), r.residual);
    out << buf;
  }
}

std::vector<ResonanceReference> read_references_csv(std::istream& in) {
  std::vector<ResonanceReference> refs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    if (line_no == 1 && line.rfind("n,", 0) == 0) continue;
    std::stringstream ss(line);
    std::string cell[5];
    int i = 0;
    while (i < 5 && std::getline(ss, cell[i], ',')) ++i;
    if (i != 5) {
      throw ValidationError("reference csv: line " + std::to_string(line_no) +
                            " does not have 5 columns");
    }
    try {
      ResonanceReference r;
      r.n = std::stoi(cell[0]);
      r.k = std::stoi(cell[1]);
      r.root = Complex(std::stod(cell[2]), std::stod(cell[3]));
      r.residual = std::stod(cell[4]);
      refs.push_back(r);
    } catch (const std::exception&) {
      throw ValidationError("reference csv: line " + std::to_string(line_no) + " is not numeric");
    }
  }
  return refs;
}

}  // namespace pmlres
