#pragma once

#include <Eigen/Dense>

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pmlres {

using Point2 = Eigen::Vector2d;

/// Truncated exterior domain: obstacle inside the circle r1, scaling layer
/// r1 <= |x| <= R = r1 + layer_width, circular outer boundary at R.
struct Geometry {
  enum class Obstacle { disk, ellipse };

  Obstacle obstacle = Obstacle::disk;
  double a1 = 1.0;  ///< semi-axis along x (the radius for a disk)
  double a2 = 1.0;  ///< semi-axis along y
  double r1 = 1.5;
  double layer_width = 2.0;

  static Geometry disk(double a, double r1, double layer_width);
  static Geometry ellipse(double a1, double a2, double r1, double layer_width);

  double outer_radius() const { return r1 + layer_width; }
  Geometry with_layer_width(double width) const;

  /// Area of the truncated domain, pi R^2 - pi a1 a2.
  double exact_area() const;

  /// Throws GeometryError unless the obstacle lies strictly inside B_{r1}
  /// and the layer width is positive.
  void validate() const;

  Point2 obstacle_point(double theta) const;
};

std::string to_string(Geometry::Obstacle kind);

enum class Region : unsigned char { interior, pml };
enum class BoundaryTag : unsigned char { obstacle, outer };

/// Parameterization a triangle is defined in. Vertex and mapping-node
/// positions are images of straight parameter-space triangles.
///   affine  identity map, parameters are the physical coordinates
///   blend   (s, theta) -> (1 - s) E(theta) + s r1 (cos theta, sin theta), E the obstacle curve
///   polar   (rho, theta) -> rho (cos theta, sin theta)
enum class Chart : unsigned char { affine, blend, polar };

std::string to_string(Region region);
std::string to_string(BoundaryTag tag);
std::string to_string(Chart chart);

Point2 chart_point(const std::optional<Geometry>& geometry, Chart chart, const Point2& param);

/// Lagrange basis of order q on equispaced nodes of the reference triangle
/// (0,0), (1,0), (0,1). Node order: row by row in eta, xi increasing within a
/// row, so the vertices are nodes 0, q and size() - 1.
class LagrangeTriangle {
 public:
  explicit LagrangeTriangle(int order);

  int order() const { return order_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Point2>& nodes() const { return nodes_; }

  /// Values (size()) and gradients (size() x 2) at a reference point.
  void eval(const Point2& xi, Eigen::VectorXd& values, Eigen::MatrixX2d& grads) const;

 private:
  int order_;
  std::vector<Point2> nodes_;
  std::vector<std::array<int, 3>> exponents_;
};

struct BoundaryEdge {
  int v0 = 0;
  int v1 = 0;
  BoundaryTag tag = BoundaryTag::outer;
};

/// Curved triangulation. Triangle t has vertices triangles[t] (counterclockwise),
/// a region tag, a chart with the parameter coordinates of its vertices, and
/// nodes_per_triangle() mapping nodes in LagrangeTriangle order.
struct Mesh {
  std::optional<Geometry> geometry;
  int order = 1;
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<Region> regions;
  std::vector<Chart> charts;
  std::vector<std::array<Point2, 3>> params;
  std::vector<BoundaryEdge> boundary;
  std::vector<Point2> mapping_nodes;

  int size() const { return static_cast<int>(triangles.size()); }
  int nodes_per_triangle() const { return (order + 1) * (order + 2) / 2; }
  std::span<const Point2> triangle_nodes(int t) const {
    return {mapping_nodes.data() + static_cast<std::size_t>(t) * nodes_per_triangle(),
            static_cast<std::size_t>(nodes_per_triangle())};
  }

  /// Longest vertex-to-vertex chord over all triangle edges.
  double max_edge_length() const;

  /// Integral of the mapping Jacobian over all triangles.
  double area() const;

  /// Checks sizes, tags and positive mapping Jacobians at the vertices and the
  /// points of a degree-2q rule. Throws GenerationError with the first bad cell.
  void validate() const;
};

/// Build mapping nodes for every triangle from its chart and parameters.
void build_mapping_nodes(Mesh& mesh);

/// Structured ring mesh of the truncated domain with curved elements of order q.
///
/// Rings of constant chart level (s in the blended obstacle annulus, rho in the
/// layer) are spaced about hmax sqrt(3)/2 apart, each carrying its own number
/// of equispaced angular nodes (about hmax apart, at least 8); consecutive
/// rings are offset by half a step and zipped into triangles. Spacings shrink
/// until every chord is at most hmax. The circle r1 is a ring, so the layer
/// interface is edge-conforming.
Mesh generate(const Geometry& geometry, double hmax, int q);

/// Uniform red refinement in parameter space: every triangle splits into four,
/// new nodes are placed by the chart, so curved boundaries stay exact and
/// affine triangles are split affinely. Tags and charts are inherited.
Mesh refine(const Mesh& mesh);

/// Affine mesh from raw data (mapping nodes interpolate straight edges).
Mesh mesh_from_triangles(std::vector<Point2> vertices, std::vector<std::array<int, 3>> triangles,
                         std::vector<Region> regions, std::vector<BoundaryEdge> boundary,
                         int q = 1);

/// Plain-text export with 17 significant digits; read_mesh reproduces the mesh exactly.
void write_mesh(std::ostream& out, const Mesh& mesh);
Mesh read_mesh(std::istream& in);

}  // namespace pmlres
