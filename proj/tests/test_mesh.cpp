#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pmlres/error.hpp"
#include "pmlres/mesh.hpp"

#include <cmath>
#include <map>
#include <sstream>

using namespace pmlres;

namespace {

double ellipse_level(const Point2& x, double a1, double a2) {
  return std::hypot(x.x() / a1, x.y() / a2);
}

}  // namespace

TEST_CASE("generated disk mesh is valid and respects hmax") {
  const Geometry g = Geometry::disk(1.0, 1.5, 2.0);
  for (double h : {0.5, 0.3, 0.15}) {
    const Mesh m = generate(g, h, 2);
    CAPTURE(h);
    CHECK_NOTHROW(m.validate());
    CHECK(m.max_edge_length() <= h * (1.0 + 1e-12));
    CHECK(m.size() > 0);
  }
  CHECK(generate(g, 0.15, 1).size() > 3 * generate(g, 0.3, 1).size());
}

TEST_CASE("regions, boundary tags and the interface circle") {
  const Geometry g = Geometry::ellipse(0.5, 1.0, 1.5, 2.0);
  const Mesh m = generate(g, 0.25, 3);
  for (int t = 0; t < m.size(); ++t) {
    Point2 c = Point2::Zero();
    for (int v : m.triangles[t]) c += m.vertices[v] / 3.0;
    CHECK((m.regions[t] == Region::pml) == (c.norm() > 1.5));
  }
  for (const BoundaryEdge& e : m.boundary) {
    for (int v : {e.v0, e.v1}) {
      if (e.tag == BoundaryTag::outer)
        CHECK(m.vertices[v].norm() == doctest::Approx(3.5).epsilon(1e-14));
      else
        CHECK(ellipse_level(m.vertices[v], 0.5, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  // Edges shared by an interior and a layer triangle lie on |x| = r1.
  std::map<std::pair<int, int>, std::vector<int>> owners;
  for (int t = 0; t < m.size(); ++t)
    for (int e = 0; e < 3; ++e) {
      int a = m.triangles[t][e], b = m.triangles[t][(e + 1) % 3];
      owners[{std::min(a, b), std::max(a, b)}].push_back(t);
    }
  int interface_edges = 0;
  for (const auto& [edge, ts] : owners) {
    CHECK(ts.size() <= 2);
    if (ts.size() == 2 && m.regions[ts[0]] != m.regions[ts[1]]) {
      ++interface_edges;
      CHECK(m.vertices[edge.first].norm() == doctest::Approx(1.5).epsilon(1e-14));
      CHECK(m.vertices[edge.second].norm() == doctest::Approx(1.5).epsilon(1e-14));
    }
  }
  CHECK(interface_edges > 0);
  // Every boundary edge has exactly one owner.
  for (const BoundaryEdge& e : m.boundary)
    CHECK(owners[{std::min(e.v0, e.v1), std::max(e.v0, e.v1)}].size() == 1);
}

TEST_CASE("curved area converges with the mapping order") {
  const Geometry g = Geometry::disk(1.0, 1.5, 2.0);
  double prev = 1e300;
  for (int q = 1; q <= 4; ++q) {
    const double err = std::abs(generate(g, 0.3, q).area() - g.exact_area());
    CAPTURE(q);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-7 * g.exact_area());
  const Geometry e = Geometry::ellipse(0.5, 1.0, 1.5, 2.0);
  CHECK(std::abs(generate(e, 0.2, 6).area() - e.exact_area()) < 1e-9 * e.exact_area());
}

TEST_CASE("refinement quadruples the triangle count") {
  const Mesh m = generate(Geometry::disk(1.0, 1.5, 1.0), 0.4, 2);
  const Mesh r = refine(m);
  CHECK(r.size() == 4 * m.size());
  CHECK_NOTHROW(r.validate());
  // Parameter-space midpoints of polar edges are not chord midpoints.
  CHECK(r.max_edge_length() <= 0.6 * m.max_edge_length());
  const double exact = Geometry::disk(1.0, 1.5, 1.0).exact_area();
  CHECK(std::abs(r.area() - exact) < std::abs(m.area() - exact));
}

TEST_CASE("straight meshes have the exact polygon area") {
  std::vector<Point2> v = {{0, 0}, {2, 0}, {2, 1}, {0, 1}, {1, 0.5}};
  std::vector<std::array<int, 3>> t = {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}};
  std::vector<Region> reg(4, Region::interior);
  std::vector<BoundaryEdge> b = {{0, 1, BoundaryTag::outer}, {1, 2, BoundaryTag::outer},
                                 {2, 3, BoundaryTag::outer}, {3, 0, BoundaryTag::outer}};
  for (int q : {1, 3}) {
    const Mesh m = mesh_from_triangles(v, t, reg, b, q);
    CHECK(std::abs(m.area() - 2.0) < 1e-12);
    CHECK(std::abs(refine(m).area() - 2.0) < 1e-12);
  }
  std::vector<std::array<int, 3>> flipped = {{0, 4, 1}};
  CHECK_THROWS_AS(mesh_from_triangles(v, flipped, {Region::interior}, {}, 1).validate(), GenerationError);
}

TEST_CASE("mesh text round trip is exact") {
  const Mesh m = generate(Geometry::ellipse(0.5, 1.0, 1.5, 1.0), 0.35, 3);
  std::stringstream s;
  write_mesh(s, m);
  const Mesh r = read_mesh(s);
  REQUIRE(r.size() == m.size());
  CHECK(r.order == m.order);
  CHECK(r.vertices == m.vertices);
  CHECK(r.triangles == m.triangles);
  CHECK(r.regions == m.regions);
  CHECK(r.charts == m.charts);
  CHECK(r.mapping_nodes == m.mapping_nodes);
  CHECK(r.boundary.size() == m.boundary.size());
  CHECK(r.area() == m.area());
  std::stringstream bad("garbage\n");
  CHECK_THROWS_AS(read_mesh(bad), ValidationError);
}

TEST_CASE("geometry validation") {
  CHECK_THROWS_AS(Geometry::disk(1.6, 1.5, 2.0).validate(), GeometryError);
  CHECK_THROWS_AS(Geometry::ellipse(0.5, 1.5, 1.5, 2.0).validate(), GeometryError);
  CHECK_THROWS_AS(Geometry::disk(1.0, 1.5, 0.0).validate(), GeometryError);
  CHECK(Geometry::disk(1.0, 1.5, 2.0).with_layer_width(4.0).outer_radius() == 5.5);
}

TEST_CASE("Lagrange basis is a partition of unity with nodal interpolation") {
  for (int q = 1; q <= 6; ++q) {
    const LagrangeTriangle l(q);
    CHECK(l.size() == (q + 1) * (q + 2) / 2);
    Eigen::VectorXd val;
    Eigen::MatrixX2d grad;
    for (int i = 0; i < l.size(); ++i) {
      l.eval(l.nodes()[i], val, grad);
      for (int j = 0; j < l.size(); ++j) CHECK(val(j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
    }
    l.eval(Point2(0.21, 0.33), val, grad);
    CHECK(val.sum() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(grad.col(0).sum()) < 1e-11);
    CHECK(std::abs(grad.col(1).sum()) < 1e-11);
  }
}
