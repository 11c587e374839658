#pragma once

#include "pmlres/basis.hpp"
#include "pmlres/media.hpp"
#include "pmlres/mesh.hpp"
#include "pmlres/scaling.hpp"

#include <Eigen/Sparse>

#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

namespace pmlres {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

enum class BoundaryCondition { neumann, dirichlet };

struct BoundaryConditions {
  BoundaryCondition obstacle = BoundaryCondition::neumann;
  BoundaryCondition outer = BoundaryCondition::dirichlet;
};

/// Continuous piecewise polynomials of order p on a mesh, with the dofs of
/// Dirichlet boundary entities removed.
class FunctionSpace {
 public:
  struct DofInfo {
    enum class Kind { vertex, edge, bubble } kind;
    int entity;  ///< vertex, edge or triangle index
    int mode;    ///< 1 for vertices, k = 2..p on edges, running bubble index
  };

  FunctionSpace(std::shared_ptr<const Mesh> mesh, int p, BoundaryConditions bc = {});

  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  int order() const { return basis_.order(); }
  const HierarchicBasis& basis() const { return basis_; }
  const BoundaryConditions& boundary_conditions() const { return bc_; }
  int dof_count() const { return static_cast<int>(info_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<DofInfo>& dof_info() const { return info_; }

  /// Free dof index (-1 when eliminated) and orientation sign of every local
  /// basis function of triangle t.
  void element_dofs(int t, std::vector<int>& dofs, std::vector<double>& signs) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  HierarchicBasis basis_;
  BoundaryConditions bc_;
  std::vector<std::array<int, 2>> edges_;             // global vertex pair, low -> high
  std::vector<std::array<int, 3>> triangle_edges_;    // local edge e -> global edge
  std::vector<int> vertex_dof_;                        // -1 when eliminated
  std::vector<int> edge_dof_;                          // first mode, -1 when eliminated
  std::vector<int> bubble_dof_;                        // first bubble of each triangle
  std::vector<DofInfo> info_;
};

/// Complex-symmetric pencil K - omega^2 M over the free dofs.
struct AssembledPencil {
  SparseMatrix K;
  SparseMatrix M;
};

struct ScaledTensor {
  Eigen::Matrix2cd tensor;
  Complex weight;
};

/// sigma~ = (d~ d)^{-1} A sigma A with A = F diag(d~, d) F^T, F = (x/|x|, x/|x| rotated),
/// and weight d~ d. Returns (sigma, 1) for |x| <= r1. Throws SingularityError at x = 0.
ScaledTensor scaled_tensor(const Point2& x, const ScalingProfile& profile, const Medium& medium);

struct AssemblyOptions {
  int quadrature_degree = -1;  ///< -1: 2p + 2
  int threads = 0;             ///< 0: hardware concurrency
};

/// Assembles K (sigma~ grad u . grad v) and M (w u v) without conjugation.
/// Interior-tagged triangles, and all triangles when no profile is given, use
/// sigma and weight 1 without evaluating the profile. Throws AssemblyError on a
/// non-positive mapping Jacobian at a quadrature point.
AssembledPencil assemble(const FunctionSpace& space, const std::optional<ScalingProfile>& profile,
                         const Medium& medium, const AssemblyOptions& options = {});

/// Local stiffness and mass of one triangle, before orientation signs.
std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> element_matrices(
    const FunctionSpace& space, int t, const std::optional<ScalingProfile>& profile,
    const Medium& medium, int quadrature_degree = -1);

/// ||K u - omega^2 M u|| / (||u|| (||K||_F + |omega^2| ||M||_F)).
double rayleigh_residual(const AssembledPencil& pencil, Complex omega, const Eigen::VectorXcd& u);

/// Coordinate listing "row col re im" (0-based) preceded by a "rows cols nnz" line.
void write_coo(std::ostream& out, const SparseMatrix& matrix);

}  // namespace pmlres
