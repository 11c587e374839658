#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "pmlres/eig.hpp"
#include "pmlres/error.hpp"
#include "pmlres/sparse_lu.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

using namespace pmlres;

namespace {

const Complex I(0.0, 1.0);

AssembledPencil small_pencil(double hmax, int p, double* dofs = nullptr) {
  const Geometry g = Geometry::disk(1.0, 1.5, 1.0);
  auto mesh = std::make_shared<const Mesh>(generate(g, hmax, p));
  const FunctionSpace s(mesh, p);
  if (dofs) *dofs = s.dof_count();
  return assemble(s, ScalingProfile::affine(1.5, 2.0 * I), Medium::isotropic(2));
}

// All omega^2 of the pencil from a dense eigensolve of M^{-1} K.
std::vector<Complex> dense_spectrum(const AssembledPencil& a) {
  const Eigen::MatrixXcd k(a.K), m(a.M);
  const Eigen::MatrixXcd op = m.partialPivLu().solve(k);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(op, false);
  return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

Complex nearest(const std::vector<Complex>& set, Complex z) {
  return *std::min_element(set.begin(), set.end(),
                           [z](Complex a, Complex b) { return std::abs(a - z) < std::abs(b - z); });
}

SparseMatrix diagonal(std::initializer_list<double> d) {
  SparseMatrix m(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  int i = 0;
  for (double v : d) m.insert(i, i) = v, ++i;
  m.makeCompressed();
  return m;
}

Spectrum synthetic(std::initializer_list<Complex> omegas, double width) {
  Spectrum s;
  for (Complex w : omegas) {
    Eigenpair p;
    p.omega = w;
    s.pairs.push_back(p);
  }
  s.provenance.layer_width = width;
  return s;
}

}  // namespace

TEST_CASE("lower_sqrt") {
  CHECK(lower_sqrt(4.0) == Complex(2.0, 0.0));
  CHECK(std::abs(lower_sqrt(-4.0) - Complex(0.0, -2.0)) < 1e-15);
  const Complex z(3.0, -1.0);
  CHECK(std::abs(lower_sqrt(z * z) - z) < 1e-14);
  CHECK(std::abs(lower_sqrt(std::conj(z * z)) - (-std::conj(z))) < 1e-14);
}

TEST_CASE("diagonal pencil") {
  AssembledPencil a{diagonal({2.0, 5.0}), diagonal({1.0, 1.0})};
  const Spectrum s = shift_invert_arnoldi(a, 1.9, 1, 12);
  REQUIRE(s.pairs.size() == 1);
  CHECK(std::abs(s.pairs[0].omega - std::sqrt(2.0)) < 1e-13);
  CHECK(s.pairs[0].residual < 1e-14);
  CHECK(s.provenance.dofs == 2);
  CHECK(s.provenance.requested == 1);
  CHECK_THROWS_AS(shift_invert_arnoldi(a, 2.0, 1, 12), ShiftRejectedError);
  CHECK_THROWS_AS(shift_invert_arnoldi(a, 1.9, 3, 20), ValidationError);
  const Spectrum both = shift_invert_arnoldi(a, 1.9, 2, 14);
  REQUIRE(both.pairs.size() == 2);
  CHECK(std::abs(both.pairs[1].omega - std::sqrt(5.0)) < 1e-13);
}

TEST_CASE("shift-invert Arnoldi matches a dense oracle on small pencils") {
  for (double h : {1.2, 0.9}) {
    double n = 0;
    const AssembledPencil a = small_pencil(h, 2, &n);
    CAPTURE(n);
    REQUIRE(n <= 200);
    const std::vector<Complex> dense = dense_spectrum(a);
    const Complex shift_sq = Complex(2.0, -0.5) * Complex(2.0, -0.5);
    const int k = std::min(10, static_cast<int>(n) / 4);
    const Spectrum s = shift_invert_arnoldi(a, shift_sq, k, 2 * k + 10);
    REQUIRE(static_cast<int>(s.pairs.size()) == k);
    // The k dense eigenvalues nearest the shift.
    std::vector<Complex> window = dense;
    std::sort(window.begin(), window.end(),
              [&](Complex x, Complex y) { return std::abs(x - shift_sq) < std::abs(y - shift_sq); });
    window.resize(k);
    for (const Eigenpair& p : s.pairs) {
      const Complex w2 = p.omega * p.omega;
      CHECK(std::abs(nearest(window, w2) - w2) <= 1e-9 * std::abs(w2));
      CHECK(p.omega.imag() <= 0.0);
      CHECK(p.residual < 1e-10);
    }
  }
}

TEST_CASE("Arnoldi is deterministic for a fixed seed") {
  const AssembledPencil a = small_pencil(0.9, 2);
  const Spectrum s1 = shift_invert_arnoldi(a, Complex(4.0, -1.0), 6, 22);
  const Spectrum s2 = shift_invert_arnoldi(a, Complex(4.0, -1.0), 6, 22);
  REQUIRE(s1.pairs.size() == s2.pairs.size());
  for (std::size_t i = 0; i < s1.pairs.size(); ++i) CHECK(s1.pairs[i].omega == s2.pairs[i].omega);
  ArnoldiOptions other;
  other.seed = 99;
  const Spectrum s3 = shift_invert_arnoldi(a, Complex(4.0, -1.0), 6, 22, other);
  REQUIRE(s3.pairs.size() == s1.pairs.size());
  for (std::size_t i = 0; i < s1.pairs.size(); ++i)
    CHECK(std::abs(s3.pairs[i].omega - s1.pairs[i].omega) < 1e-9 * std::abs(s1.pairs[i].omega));
}

TEST_CASE("SparseLU on identity, random dense and tridiagonal systems") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;

  SparseMatrix id(50, 50);
  id.setIdentity();
  Eigen::VectorXcd b = Eigen::VectorXcd::Random(50);
  CHECK((SparseLU(id).solve(b) - b).norm() == 0.0);

  Eigen::MatrixXcd dense(60, 60);
  for (int i = 0; i < 60; ++i)
    for (int j = 0; j < 60; ++j) dense(i, j) = Complex(g(rng), g(rng));
  const SparseMatrix sd = dense.sparseView();
  const Eigen::VectorXcd rhs = Eigen::VectorXcd::Random(60);
  const Eigen::VectorXcd ref = dense.fullPivLu().solve(rhs);
  for (int cutoff : {3000, 1}) {
    const SparseLU lu(sd, 0.1, cutoff);
    CHECK(lu.is_dense() == (cutoff == 3000));
    CHECK((lu.solve(rhs) - ref).norm() < 1e-10 * ref.norm());
  }

  // Diagonally dominant tridiagonal system large enough for the sparse path.
  const int n = 5000;
  std::vector<double> sub(n), diag(n), sup(n), d(n);
  SparseMatrix t(n, n);
  std::vector<Eigen::Triplet<Complex>> trip;
  for (int i = 0; i < n; ++i) {
    sub[i] = i ? g(rng) : 0.0;
    sup[i] = i + 1 < n ? g(rng) : 0.0;
    diag[i] = 4.0 + std::abs(g(rng));
    d[i] = g(rng);
    trip.emplace_back(i, i, diag[i]);
    if (i) trip.emplace_back(i, i - 1, sub[i]);
    if (i + 1 < n) trip.emplace_back(i, i + 1, sup[i]);
  }
  t.setFromTriplets(trip.begin(), trip.end());
  const SparseLU lu(t);
  CHECK_FALSE(lu.is_dense());
  Eigen::VectorXcd rhs_t(n);
  for (int i = 0; i < n; ++i) rhs_t(i) = d[i];
  const Eigen::VectorXcd x = lu.solve(rhs_t);
  const std::vector<double> xt = oracle::thomas(sub, diag, sup, d);
  double err = 0.0, scale = 0.0;
  for (int i = 0; i < n; ++i) err = std::max(err, std::abs(x(i) - xt[i])), scale = std::max(scale, std::abs(xt[i]));
  CHECK(err <= 1e-13 * scale);
}

TEST_CASE("SparseLU reports singular matrices") {
  SparseMatrix z(3, 3);
  z.insert(0, 0) = 1.0;
  z.insert(1, 1) = 2.0;
  z.makeCompressed();
  CHECK_THROWS_AS(SparseLU{z}, SingularMatrixError);
  CHECK_THROWS_AS((SparseLU{z, 0.1, 1}), SingularMatrixError);
}

TEST_CASE("spurious filter on synthetic spectra") {
  const Spectrum base = synthetic({{1.0, -0.1}, {2.0, -0.2}, {3.0, -0.3}, {0.5, -2.0}, {6.0, -1.0}}, 2.0);
  double seen_width = 0.0;
  auto factory = [&](double width) {
    seen_width = width;
    // Physical values move by ~1e-4, one value by 0.3, and the last has no partner.
    return synthetic({{1.0001, -0.1}, {2.0, -0.2002}, {3.00015, -0.3}, {0.8, -2.0}}, width);
  };
  Spectrum stretched;
  const Spectrum out = spurious_filter(factory, base, {}, &stretched);
  CHECK(seen_width == doctest::Approx(3.0));
  CHECK(stretched.pairs.size() == 4);
  REQUIRE(out.pairs.size() == 5);
  CHECK_FALSE(out.pairs[0].spurious);
  CHECK_FALSE(out.pairs[1].spurious);
  CHECK_FALSE(out.pairs[2].spurious);
  CHECK(out.pairs[3].spurious);
  CHECK(out.pairs[3].movement == doctest::Approx(0.3));
  CHECK(out.pairs[4].spurious);
  CHECK(out.pairs[4].movement == -1.0);
  CHECK(out.pairs[0].movement == doctest::Approx(1e-4).epsilon(1e-6));
}

TEST_CASE("spurious filter: identical spectra, ambiguity and options") {
  const Spectrum base = synthetic({{1.0, -0.1}, {2.0, -0.2}}, 2.0);
  const Spectrum same = spurious_filter([&](double w) { return synthetic({{1.0, -0.1}, {2.0, -0.2}}, w); },
                                        base, {});
  for (const Eigenpair& p : same.pairs) {
    CHECK_FALSE(p.spurious);
    CHECK(p.movement == 0.0);
  }
  // Partners at 0.01 and 0.015 for the first value.
  const Spectrum amb = spurious_filter(
      [&](double w) { return synthetic({{1.01, -0.1}, {0.985, -0.1}, {2.0, -0.2}}, w); }, base, {});
  CHECK(amb.pairs[0].ambiguous);
  CHECK_FALSE(amb.pairs[1].ambiguous);
  CHECK_FALSE(amb.warnings.empty());

  SpuriousOptions bad;
  bad.stretch = 1.0;
  CHECK_THROWS_AS(spurious_filter([&](double w) { return synthetic({}, w); }, base, bad), ValidationError);
  bad.stretch = 1.5;
  bad.radius = 0.0;
  CHECK_THROWS_AS(spurious_filter([&](double w) { return synthetic({}, w); }, base, bad), ValidationError);
}
