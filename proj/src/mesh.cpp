#include "pmlres/mesh.hpp"

#include "pmlres/error.hpp"
#include "pmlres/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

namespace pmlres {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Point2 unit(double theta) { return {std::cos(theta), std::sin(theta)}; }

}  // namespace

Geometry Geometry::disk(double a, double r1, double layer_width) {
  Geometry g;
  g.obstacle = Obstacle::disk;
  g.a1 = g.a2 = a;
  g.r1 = r1;
  g.layer_width = layer_width;
  return g;
}

Geometry Geometry::ellipse(double a1, double a2, double r1, double layer_width) {
  Geometry g;
  g.obstacle = Obstacle::ellipse;
  g.a1 = a1;
  g.a2 = a2;
  g.r1 = r1;
  g.layer_width = layer_width;
  return g;
}

Geometry Geometry::with_layer_width(double width) const {
  Geometry g = *this;
  g.layer_width = width;
  return g;
}

double Geometry::exact_area() const {
  const double big = outer_radius();
  return std::numbers::pi * (big * big - a1 * a2);
}

void Geometry::validate() const {
  if (!(a1 > 0.0) || !(a2 > 0.0)) throw GeometryError("geometry: obstacle dimensions must be positive");
  if (obstacle == Obstacle::disk && a1 != a2) throw GeometryError("geometry: disk with unequal axes");
  if (!(std::max(a1, a2) < r1)) {
    throw GeometryError("geometry: obstacle does not fit strictly inside the circle r1 = " +
                        std::to_string(r1));
  }
  if (!(layer_width > 0.0)) throw GeometryError("geometry: layer width must be positive");
}

Point2 Geometry::obstacle_point(double theta) const {
  return {a1 * std::cos(theta), a2 * std::sin(theta)};
}

std::string to_string(Geometry::Obstacle kind) {
  return kind == Geometry::Obstacle::disk ? "disk" : "ellipse";
}

std::string to_string(Region region) { return region == Region::interior ? "interior" : "pml"; }

std::string to_string(BoundaryTag tag) { return tag == BoundaryTag::obstacle ? "obstacle" : "outer"; }

std::string to_string(Chart chart) {
  switch (chart) {
    case Chart::affine: return "affine";
    case Chart::blend: return "blend";
    case Chart::polar: return "polar";
  }
  return "affine";
}

Point2 chart_point(const std::optional<Geometry>& geometry, Chart chart, const Point2& param) {
  switch (chart) {
    case Chart::affine:
      return param;
    case Chart::polar:
      return param.x() * unit(param.y());
    case Chart::blend: {
      if (!geometry) throw ValidationError("mesh: blended chart without geometry");
      const double s = param.x();
      const double theta = param.y();
      return (1.0 - s) * geometry->obstacle_point(theta) + s * geometry->r1 * unit(theta);
    }
  }
  return param;
}

// ---------------------------------------------------------------------------
// Lagrange basis

LagrangeTriangle::LagrangeTriangle(int order) : order_(order) {
  if (order < 1) throw ValidationError("LagrangeTriangle: order must be at least 1");
  for (int j = 0; j <= order; ++j) {
    for (int i = 0; i <= order - j; ++i) {
      nodes_.push_back({static_cast<double>(i) / order, static_cast<double>(j) / order});
      exponents_.push_back({order - i - j, i, j});
    }
  }
}

void LagrangeTriangle::eval(const Point2& xi, Eigen::VectorXd& values,
                            Eigen::MatrixX2d& grads) const {
  const int q = order_;
  const std::array<double, 3> lambda = {1.0 - xi.x() - xi.y(), xi.x(), xi.y()};
  // P_a(l) = prod_{m<a} (q l - m) / a! and its derivative, for each barycentric.
  std::array<std::vector<double>, 3> p, dp;
  for (int c = 0; c < 3; ++c) {
    p[c].assign(q + 1, 1.0);
    dp[c].assign(q + 1, 0.0);
    for (int a = 1; a <= q; ++a) {
      const double factor = (q * lambda[c] - (a - 1)) / a;
      p[c][a] = p[c][a - 1] * factor;
      dp[c][a] = dp[c][a - 1] * factor + p[c][a - 1] * q / a;
    }
  }
  const int n = size();
  values.resize(n);
  grads.resize(n, 2);
  for (int k = 0; k < n; ++k) {
    const auto& e = exponents_[k];
    const double v0 = p[0][e[0]], v1 = p[1][e[1]], v2 = p[2][e[2]];
    const double d0 = dp[0][e[0]] * v1 * v2;
    const double d1 = v0 * dp[1][e[1]] * v2;
    const double d2 = v0 * v1 * dp[2][e[2]];
    values(k) = v0 * v1 * v2;
    grads(k, 0) = d1 - d0;
    grads(k, 1) = d2 - d0;
  }
}

// ---------------------------------------------------------------------------
// Mesh queries

double Mesh::max_edge_length() const {
  double longest = 0.0;
  for (const auto& tri : triangles) {
    for (int e = 0; e < 3; ++e) {
      longest = std::max(longest, (vertices[tri[e]] - vertices[tri[(e + 1) % 3]]).norm());
    }
  }
  return longest;
}

double Mesh::area() const {
  const LagrangeTriangle basis(order);
  const TriangleRule rule = triangle_rule(2 * order);
  std::vector<Eigen::MatrixX2d> grads(rule.points.size());
  Eigen::VectorXd values;
  for (std::size_t g = 0; g < rule.points.size(); ++g) {
    basis.eval({rule.points[g][0], rule.points[g][1]}, values, grads[g]);
  }
  double total = 0.0;
  for (int t = 0; t < size(); ++t) {
    const auto nodes = triangle_nodes(t);
    for (std::size_t g = 0; g < rule.points.size(); ++g) {
      Eigen::Matrix2d jac = Eigen::Matrix2d::Zero();
      for (int k = 0; k < basis.size(); ++k) jac += nodes[k] * grads[g].row(k);
      total += rule.weights[g] * jac.determinant();
    }
  }
  return total;
}

void Mesh::validate() const {
  const std::size_t nt = triangles.size();
  if (regions.size() != nt || charts.size() != nt || params.size() != nt ||
      mapping_nodes.size() != nt * static_cast<std::size_t>(nodes_per_triangle())) {
    throw GenerationError("mesh: inconsistent per-triangle array sizes", -1);
  }
  const LagrangeTriangle basis(order);
  const TriangleRule rule = triangle_rule(2 * order);
  std::vector<Point2> points = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  for (const auto& p : rule.points) points.push_back({p[0], p[1]});
  std::vector<Eigen::MatrixX2d> grads(points.size());
  Eigen::VectorXd values;
  for (std::size_t g = 0; g < points.size(); ++g) basis.eval(points[g], values, grads[g]);

  const int nv = static_cast<int>(vertices.size());
  for (int t = 0; t < size(); ++t) {
    for (int v : triangles[t]) {
      if (v < 0 || v >= nv) throw GenerationError("mesh: vertex index out of range", t);
    }
    const auto nodes = triangle_nodes(t);
    for (std::size_t g = 0; g < points.size(); ++g) {
      Eigen::Matrix2d jac = Eigen::Matrix2d::Zero();
      for (int k = 0; k < basis.size(); ++k) jac += nodes[k] * grads[g].row(k);
      if (!(jac.determinant() > 0.0)) {
        throw GenerationError("mesh: non-positive mapping Jacobian in cell " + std::to_string(t), t);
      }
    }
  }
  for (const auto& e : boundary) {
    if (e.v0 < 0 || e.v0 >= nv || e.v1 < 0 || e.v1 >= nv) {
      throw GenerationError("mesh: boundary edge vertex out of range", -1);
    }
  }
}

void build_mapping_nodes(Mesh& mesh) {
  const LagrangeTriangle basis(mesh.order);
  const int per = basis.size();
  const int q = mesh.order;
  mesh.mapping_nodes.assign(static_cast<std::size_t>(mesh.size()) * per, Point2::Zero());
  for (int t = 0; t < mesh.size(); ++t) {
    const auto& p = mesh.params[t];
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < per; ++k) {
      Point2 x;
      if (k == 0) {
        x = mesh.vertices[tri[0]];
      } else if (k == q) {
        x = mesh.vertices[tri[1]];
      } else if (k == per - 1) {
        x = mesh.vertices[tri[2]];
      } else {
        const Point2& xi = basis.nodes()[k];
        const Point2 param = p[0] + xi.x() * (p[1] - p[0]) + xi.y() * (p[2] - p[0]);
        x = chart_point(mesh.geometry, mesh.charts[t], param);
      }
      mesh.mapping_nodes[static_cast<std::size_t>(t) * per + k] = x;
    }
  }
}

// ---------------------------------------------------------------------------
// Generation

namespace {

struct Ring {
  int first = 0;        // index of the first vertex
  int count = 0;        // angular nodes
  double offset = 0.0;  // fraction of a step
  double blend_level = 0.0;  // s, for rings inside the blended annulus
  double polar_level = 0.0;  // rho, for rings in the layer
  bool in_blend = false;
  bool in_polar = false;

  double theta(int i) const { return kTwoPi * (i + offset) / count; }
  int vertex(int i) const { return first + i % count; }
};

double blend_speed_max(const Geometry& g, double s) {
  double best = 0.0;
  const int samples = 1024;
  for (int i = 0; i < samples; ++i) {
    const double th = kTwoPi * i / samples;
    const Point2 d = (1.0 - s) * Point2(-g.a1 * std::sin(th), g.a2 * std::cos(th)) +
                     s * g.r1 * Point2(-std::sin(th), std::cos(th));
    best = std::max(best, d.norm());
  }
  return best;
}

double blend_segment_max(const Geometry& g) {
  double best = 0.0;
  const int samples = 1024;
  for (int i = 0; i < samples; ++i) {
    const double th = kTwoPi * i / samples;
    best = std::max(best, (g.r1 * unit(th) - g.obstacle_point(th)).norm());
  }
  return best;
}

Mesh build_rings(const Geometry& g, double hr, double ht, int q) {
  const int n_blend = std::max(1, static_cast<int>(std::ceil(blend_segment_max(g) / hr - 1e-9)));
  const int n_polar = std::max(1, static_cast<int>(std::ceil(g.layer_width / hr - 1e-9)));
  const int min_count = 8;

  Mesh mesh;
  mesh.geometry = g;
  mesh.order = q;

  std::vector<Ring> rings(n_blend + n_polar + 1);
  for (int k = 0; k <= n_blend + n_polar; ++k) {
    Ring& ring = rings[k];
    double speed = 0.0;
    if (k <= n_blend) {
      ring.in_blend = true;
      ring.blend_level = (k == n_blend) ? 1.0 : static_cast<double>(k) / n_blend;
      speed = blend_speed_max(g, ring.blend_level);
    }
    if (k >= n_blend) {
      ring.in_polar = true;
      const int j = k - n_blend;
      ring.polar_level = (j == n_polar) ? g.outer_radius() : g.r1 + g.layer_width * j / n_polar;
      speed = ring.polar_level;
    }
    // Counts are 8 * 2^m, non-decreasing outwards. Equal neighbours are offset
    // by half a step; at a doubling the outer ring is aligned with the inner
    // one, so every cross edge spans at most half an angular step.
    int count = min_count;
    while (kTwoPi * speed / count > ht) count *= 2;
    if (k > 0) {
      const Ring& prev = rings[k - 1];
      count = std::clamp(count, prev.count, 2 * prev.count);
      ring.offset = (count == prev.count) ? std::fmod(prev.offset + 0.5, 1.0) : 0.0;
    }
    ring.count = count;
    ring.first = static_cast<int>(mesh.vertices.size());
    for (int i = 0; i < ring.count; ++i) {
      const double th = ring.theta(i);
      const Point2 x = ring.in_blend ? chart_point(mesh.geometry, Chart::blend, {ring.blend_level, th})
                                     : chart_point(mesh.geometry, Chart::polar, {ring.polar_level, th});
      mesh.vertices.push_back(x);
    }
  }

  for (int k = 0; k < n_blend + n_polar; ++k) {
    const Ring& a = rings[k];
    const Ring& b = rings[k + 1];
    const bool blend = k < n_blend;
    const Chart chart = blend ? Chart::blend : Chart::polar;
    const Region region = blend ? Region::interior : Region::pml;
    const double la = blend ? a.blend_level : a.polar_level;
    const double lb = blend ? b.blend_level : b.polar_level;
    int i = 0, j = 0;
    while (i < a.count || j < b.count) {
      // Shorter of the two candidate diagonals.
      bool advance_a = (j == b.count);
      if (i < a.count && j < b.count) {
        const double via_a = (mesh.vertices[a.vertex(i + 1)] - mesh.vertices[b.vertex(j)]).norm();
        const double via_b = (mesh.vertices[a.vertex(i)] - mesh.vertices[b.vertex(j + 1)]).norm();
        advance_a = via_a <= via_b;
      }
      std::array<int, 3> tri;
      std::array<Point2, 3> par;
      if (advance_a) {
        tri = {a.vertex(i), b.vertex(j), a.vertex(i + 1)};
        par = {Point2(la, a.theta(i)), Point2(lb, b.theta(j)), Point2(la, a.theta(i + 1))};
        ++i;
      } else {
        tri = {a.vertex(i), b.vertex(j), b.vertex(j + 1)};
        par = {Point2(la, a.theta(i)), Point2(lb, b.theta(j)), Point2(lb, b.theta(j + 1))};
        ++j;
      }
      mesh.triangles.push_back(tri);
      mesh.params.push_back(par);
      mesh.charts.push_back(chart);
      mesh.regions.push_back(region);
    }
  }

  const Ring& inner = rings.front();
  for (int i = 0; i < inner.count; ++i) {
    mesh.boundary.push_back({inner.vertex(i), inner.vertex(i + 1), BoundaryTag::obstacle});
  }
  const Ring& outer = rings.back();
  for (int i = 0; i < outer.count; ++i) {
    mesh.boundary.push_back({outer.vertex(i), outer.vertex(i + 1), BoundaryTag::outer});
  }
  return mesh;
}

}  // namespace

Mesh generate(const Geometry& geometry, double hmax, int q) {
  geometry.validate();
  if (!(hmax > 0.0)) throw ValidationError("generate: hmax must be positive");
  if (q < 1) throw ValidationError("generate: mapping order must be at least 1");
  double factor = 1.0;
  for (int attempt = 0; attempt < 60; ++attempt) {
    Mesh mesh = build_rings(geometry, factor * hmax * std::sqrt(3.0) / 2.0, factor * hmax, q);
    if (mesh.max_edge_length() <= hmax) {
      build_mapping_nodes(mesh);
      mesh.validate();
      return mesh;
    }
    factor *= 0.95;
  }
  throw GenerationError("generate: could not meet the edge-length bound", -1);
}

Mesh refine(const Mesh& mesh) {
  Mesh out;
  out.geometry = mesh.geometry;
  out.order = mesh.order;
  out.vertices = mesh.vertices;
  std::map<std::pair<int, int>, int> midpoint;

  auto mid = [&](int t, int a, int b) {
    const int va = mesh.triangles[t][a], vb = mesh.triangles[t][b];
    const auto key = std::minmax(va, vb);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const Point2 param = 0.5 * (mesh.params[t][a] + mesh.params[t][b]);
    const int index = static_cast<int>(out.vertices.size());
    out.vertices.push_back(chart_point(mesh.geometry, mesh.charts[t], param));
    midpoint.emplace(key, index);
    return index;
  };

  for (int t = 0; t < mesh.size(); ++t) {
    const auto& v = mesh.triangles[t];
    const auto& p = mesh.params[t];
    const int m01 = mid(t, 0, 1), m12 = mid(t, 1, 2), m20 = mid(t, 2, 0);
    const Point2 q01 = 0.5 * (p[0] + p[1]), q12 = 0.5 * (p[1] + p[2]), q20 = 0.5 * (p[2] + p[0]);
    const std::array<std::array<int, 3>, 4> tris = {{{v[0], m01, m20},
                                                     {m01, v[1], m12},
                                                     {m20, m12, v[2]},
                                                     {m01, m12, m20}}};
    const std::array<std::array<Point2, 3>, 4> pars = {{{p[0], q01, q20},
                                                        {q01, p[1], q12},
                                                        {q20, q12, p[2]},
                                                        {q01, q12, q20}}};
    for (int c = 0; c < 4; ++c) {
      out.triangles.push_back(tris[c]);
      out.params.push_back(pars[c]);
      out.charts.push_back(mesh.charts[t]);
      out.regions.push_back(mesh.regions[t]);
    }
  }
  for (const auto& e : mesh.boundary) {
    const auto it = midpoint.find(std::minmax(e.v0, e.v1));
    if (it == midpoint.end()) throw GenerationError("refine: boundary edge not in any triangle", -1);
    out.boundary.push_back({e.v0, it->second, e.tag});
    out.boundary.push_back({it->second, e.v1, e.tag});
  }
  build_mapping_nodes(out);
  out.validate();
  return out;
}

Mesh mesh_from_triangles(std::vector<Point2> vertices, std::vector<std::array<int, 3>> triangles,
                         std::vector<Region> regions, std::vector<BoundaryEdge> boundary, int q) {
  Mesh mesh;
  mesh.order = q;
  mesh.vertices = std::move(vertices);
  mesh.triangles = std::move(triangles);
  mesh.regions = std::move(regions);
  mesh.boundary = std::move(boundary);
  mesh.charts.assign(mesh.triangles.size(), Chart::affine);
  for (const auto& tri : mesh.triangles) {
    for (int v : tri) {
      if (v < 0 || v >= static_cast<int>(mesh.vertices.size())) {
        throw ValidationError("mesh_from_triangles: vertex index out of range");
      }
    }
    mesh.params.push_back({mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]});
  }
  if (mesh.regions.size() != mesh.triangles.size()) {
    throw ValidationError("mesh_from_triangles: one region tag per triangle required");
  }
  build_mapping_nodes(mesh);
  mesh.validate();
  return mesh;
}

}  // namespace pmlres
