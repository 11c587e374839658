#include "pmlres/error.hpp"
#include "pmlres/mesh.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace pmlres {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Region parse_region(const std::string& s) {
  if (s == "interior") return Region::interior;
  if (s == "pml") return Region::pml;
  throw ValidationError("mesh file: unknown region '" + s + "'");
}

BoundaryTag parse_tag(const std::string& s) {
  if (s == "obstacle") return BoundaryTag::obstacle;
  if (s == "outer") return BoundaryTag::outer;
  throw ValidationError("mesh file: unknown boundary tag '" + s + "'");
}

Chart parse_chart(const std::string& s) {
  if (s == "affine") return Chart::affine;
  if (s == "blend") return Chart::blend;
  if (s == "polar") return Chart::polar;
  throw ValidationError("mesh file: unknown chart '" + s + "'");
}

// Reads "<keyword> <count>" and returns the count.
long expect_block(std::istream& in, const std::string& keyword) {
  std::string word;
  long count = -1;
  if (!(in >> word) || word != keyword || !(in >> count) || count < 0) {
    throw ValidationError("mesh file: expected '" + keyword + " <count>'");
  }
  return count;
}

template <class T>
void read_value(std::istream& in, T& value, const char* what) {
  if (!(in >> value)) throw ValidationError(std::string("mesh file: cannot read ") + what);
}

}  // namespace

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << "pmlres-mesh 1\n";
  out << "order " << mesh.order << "\n";
  if (mesh.geometry) {
    const Geometry& g = *mesh.geometry;
    out << "geometry " << to_string(g.obstacle) << ' ' << num(g.a1) << ' ' << num(g.a2) << ' '
        << num(g.r1) << ' ' << num(g.layer_width) << "\n";
  } else {
    out << "geometry none\n";
  }
  out << "vertices " << mesh.vertices.size() << "\n";
  for (const auto& v : mesh.vertices) out << num(v.x()) << ' ' << num(v.y()) << "\n";
  out << "triangles " << mesh.triangles.size() << "\n";
  for (int t = 0; t < mesh.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    out << tri[0] << ' ' << tri[1] << ' ' << tri[2] << ' ' << to_string(mesh.regions[t]) << ' '
        << to_string(mesh.charts[t]);
    for (const auto& p : mesh.params[t]) out << ' ' << num(p.x()) << ' ' << num(p.y());
    out << "\n";
  }
  out << "boundary " << mesh.boundary.size() << "\n";
  for (const auto& e : mesh.boundary) out << e.v0 << ' ' << e.v1 << ' ' << to_string(e.tag) << "\n";
  out << "mapping " << mesh.triangles.size() << ' ' << mesh.nodes_per_triangle() << "\n";
  for (int t = 0; t < mesh.size(); ++t) {
    const auto nodes = mesh.triangle_nodes(t);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      out << (k ? " " : "") << num(nodes[k].x()) << ' ' << num(nodes[k].y());
    }
    out << "\n";
  }
}

Mesh read_mesh(std::istream& in) {
  std::string word;
  int version = 0;
  if (!(in >> word) || word != "pmlres-mesh" || !(in >> version) || version != 1) {
    throw ValidationError("mesh file: missing 'pmlres-mesh 1' header");
  }
  Mesh mesh;
  mesh.order = static_cast<int>(expect_block(in, "order"));
  if (mesh.order < 1) throw ValidationError("mesh file: order must be at least 1");

  if (!(in >> word) || word != "geometry") throw ValidationError("mesh file: expected 'geometry'");
  std::string kind;
  read_value(in, kind, "geometry kind");
  if (kind != "none") {
    Geometry g;
    if (kind == "disk") {
      g.obstacle = Geometry::Obstacle::disk;
    } else if (kind == "ellipse") {
      g.obstacle = Geometry::Obstacle::ellipse;
    } else {
      throw ValidationError("mesh file: unknown geometry '" + kind + "'");
    }
    read_value(in, g.a1, "a1");
    read_value(in, g.a2, "a2");
    read_value(in, g.r1, "r1");
    read_value(in, g.layer_width, "layer width");
    mesh.geometry = g;
  }

  const long nv = expect_block(in, "vertices");
  mesh.vertices.resize(nv);
  for (auto& v : mesh.vertices) {
    read_value(in, v.x(), "vertex");
    read_value(in, v.y(), "vertex");
  }

  const long nt = expect_block(in, "triangles");
  mesh.triangles.resize(nt);
  mesh.regions.resize(nt);
  mesh.charts.resize(nt);
  mesh.params.resize(nt);
  for (long t = 0; t < nt; ++t) {
    for (int& v : mesh.triangles[t]) read_value(in, v, "triangle vertex");
    std::string region, chart;
    read_value(in, region, "region");
    read_value(in, chart, "chart");
    mesh.regions[t] = parse_region(region);
    mesh.charts[t] = parse_chart(chart);
    for (auto& p : mesh.params[t]) {
      read_value(in, p.x(), "chart parameter");
      read_value(in, p.y(), "chart parameter");
    }
  }

  const long nb = expect_block(in, "boundary");
  mesh.boundary.resize(nb);
  for (auto& e : mesh.boundary) {
    std::string tag;
    read_value(in, e.v0, "boundary vertex");
    read_value(in, e.v1, "boundary vertex");
    read_value(in, tag, "boundary tag");
    e.tag = parse_tag(tag);
  }

  const long nm = expect_block(in, "mapping");
  long per = 0;
  read_value(in, per, "mapping node count");
  if (nm != nt || per != mesh.nodes_per_triangle()) {
    throw ValidationError("mesh file: mapping block does not match triangles and order");
  }
  mesh.mapping_nodes.resize(static_cast<std::size_t>(nt) * per);
  for (auto& x : mesh.mapping_nodes) {
    read_value(in, x.x(), "mapping node");
    read_value(in, x.y(), "mapping node");
  }
  mesh.validate();
  return mesh;
}

}  // namespace pmlres
