#include "pmlres/fem.hpp"

#include "pmlres/error.hpp"
#include "pmlres/quadrature.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <thread>

namespace pmlres {

// ---------------------------------------------------------------------------
// Function space

FunctionSpace::FunctionSpace(std::shared_ptr<const Mesh> mesh, int p, BoundaryConditions bc)
    : mesh_(std::move(mesh)), basis_(p), bc_(bc) {
  if (!mesh_) throw ValidationError("FunctionSpace: null mesh");
  const Mesh& m = *mesh_;

  std::map<std::pair<int, int>, int> edge_id;
  triangle_edges_.resize(m.size());
  for (int t = 0; t < m.size(); ++t) {
    const auto& tri = m.triangles[t];
    for (int e = 0; e < 3; ++e) {
      const auto key = std::minmax(tri[e], tri[(e + 1) % 3]);
      auto [it, inserted] = edge_id.emplace(key, static_cast<int>(edges_.size()));
      if (inserted) edges_.push_back({key.first, key.second});
      triangle_edges_[t][e] = it->second;
    }
  }

  std::vector<char> vertex_fixed(m.vertices.size(), 0);
  std::vector<char> edge_fixed(edges_.size(), 0);
  for (const auto& be : m.boundary) {
    const BoundaryCondition cond = be.tag == BoundaryTag::obstacle ? bc_.obstacle : bc_.outer;
    if (cond != BoundaryCondition::dirichlet) continue;
    vertex_fixed[be.v0] = vertex_fixed[be.v1] = 1;
    const auto it = edge_id.find(std::minmax(be.v0, be.v1));
    if (it == edge_id.end()) throw ValidationError("FunctionSpace: boundary edge not in mesh");
    edge_fixed[it->second] = 1;
  }

  int next = 0;
  vertex_dof_.assign(m.vertices.size(), -1);
  for (std::size_t v = 0; v < m.vertices.size(); ++v) {
    if (vertex_fixed[v]) continue;
    vertex_dof_[v] = next++;
    info_.push_back({DofInfo::Kind::vertex, static_cast<int>(v), 1});
  }
  edge_dof_.assign(edges_.size(), -1);
  if (p >= 2) {
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      if (edge_fixed[e]) continue;
      edge_dof_[e] = next;
      for (int k = 2; k <= p; ++k) info_.push_back({DofInfo::Kind::edge, static_cast<int>(e), k});
      next += p - 1;
    }
  }
  bubble_dof_.assign(m.size(), -1);
  const int nb = basis_.bubble_count();
  if (nb > 0) {
    for (int t = 0; t < m.size(); ++t) {
      bubble_dof_[t] = next;
      for (int i = 0; i < nb; ++i) info_.push_back({DofInfo::Kind::bubble, t, i});
      next += nb;
    }
  }
}

void FunctionSpace::element_dofs(int t, std::vector<int>& dofs, std::vector<double>& signs) const {
  const int p = order();
  const auto& tri = mesh_->triangles[t];
  dofs.assign(basis_.size(), -1);
  signs.assign(basis_.size(), 1.0);
  for (int v = 0; v < 3; ++v) dofs[v] = vertex_dof_[tri[v]];
  for (int e = 0; e < 3; ++e) {
    const int g = triangle_edges_[t][e];
    const bool reversed = tri[e] > tri[(e + 1) % 3];
    for (int k = 2; k <= p; ++k) {
      const int local = basis_.edge_index(e, k);
      dofs[local] = edge_dof_[g] < 0 ? -1 : edge_dof_[g] + (k - 2);
      if (reversed && (k % 2 == 1)) signs[local] = -1.0;
    }
  }
  for (int i = 0; i < basis_.bubble_count(); ++i) {
    dofs[basis_.bubble_offset() + i] = bubble_dof_[t] + i;
  }
}

// ---------------------------------------------------------------------------
// Coefficients

ScaledTensor scaled_tensor(const Point2& x, const ScalingProfile& profile, const Medium& medium) {
  if (medium.dim() != 2) throw ValidationError("scaled_tensor: 2D media only");
  const double r = x.norm();
  if (r == 0.0) throw SingularityError("scaled_tensor: polar frame undefined at x = 0");
  if (r <= profile.r1()) return {medium.sigma().cast<Complex>(), Complex(1.0, 0.0)};
  const ScalingState s = eval(profile, r);
  const Point2 radial = x / r;
  const Point2 tangential(-radial.y(), radial.x());
  Eigen::Matrix2d f;
  f.col(0) = radial;
  f.col(1) = tangential;
  const Eigen::Matrix2cd a = f.cast<Complex>() *
                             Eigen::Vector2cd(s.d_tilde, s.d).asDiagonal() *
                             f.transpose().cast<Complex>();
  Eigen::Matrix2cd t = a * medium.sigma().cast<Complex>() * a / (s.d_tilde * s.d);
  const Complex off = 0.5 * (t(0, 1) + t(1, 0));
  t(0, 1) = t(1, 0) = off;
  return {t, s.d_tilde * s.d};
}

// ---------------------------------------------------------------------------
// Element integration

namespace {

struct ReferenceData {
  std::vector<double> weights;
  std::vector<Eigen::VectorXd> values;       // basis values per point
  std::vector<Eigen::MatrixX2d> grads;       // basis gradients per point
  std::vector<Eigen::VectorXd> map_values;   // Lagrange mapping values
  std::vector<Eigen::MatrixX2d> map_grads;   // Lagrange mapping gradients
};

ReferenceData reference_data(const FunctionSpace& space, int degree) {
  const TriangleRule rule = triangle_rule(degree);
  const LagrangeTriangle mapping(space.mesh().order);
  ReferenceData ref;
  const std::size_t n = rule.points.size();
  ref.weights = rule.weights;
  ref.values.resize(n);
  ref.grads.resize(n);
  ref.map_values.resize(n);
  ref.map_grads.resize(n);
  for (std::size_t g = 0; g < n; ++g) {
    const Eigen::Vector2d xi(rule.points[g][0], rule.points[g][1]);
    space.basis().eval(xi, ref.values[g], ref.grads[g]);
    mapping.eval(xi, ref.map_values[g], ref.map_grads[g]);
  }
  return ref;
}

int default_degree(const FunctionSpace& space, int requested) {
  return requested > 0 ? requested : 2 * space.order() + 2;
}

void integrate_element(const FunctionSpace& space, const ReferenceData& ref, int t,
                       const std::optional<ScalingProfile>& profile, const Medium& medium,
                       Eigen::MatrixXcd& k_loc, Eigen::MatrixXcd& m_loc) {
  const Mesh& mesh = space.mesh();
  const auto nodes = mesh.triangle_nodes(t);
  const int n = space.basis().size();
  const bool scaled = profile.has_value() && mesh.regions[t] == Region::pml;
  const Eigen::Matrix2d sigma = medium.sigma();

  Eigen::MatrixXd k_real = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd m_real = Eigen::MatrixXd::Zero(n, n);
  k_loc.setZero(n, n);
  m_loc.setZero(n, n);

  for (std::size_t g = 0; g < ref.weights.size(); ++g) {
    Eigen::Matrix2d jac = Eigen::Matrix2d::Zero();
    Point2 x = Point2::Zero();
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      jac += nodes[k] * ref.map_grads[g].row(k);
      x += ref.map_values[g](k) * nodes[k];
    }
    const double det = jac.determinant();
    if (!(det > 0.0)) {
      throw AssemblyError("assemble: non-positive mapping Jacobian in triangle " + std::to_string(t));
    }
    const Eigen::MatrixX2d grad = ref.grads[g] * jac.inverse();
    const double w = ref.weights[g] * det;
    const Eigen::VectorXd& phi = ref.values[g];
    if (!scaled) {
      k_real.noalias() += (w * grad) * sigma * grad.transpose();
      m_real.noalias() += (w * phi) * phi.transpose();
    } else {
      const ScaledTensor c = scaled_tensor(x, *profile, medium);
      const Eigen::MatrixX2cd gc = grad.cast<Complex>();
      k_loc.noalias() += (w * gc) * c.tensor * gc.transpose();
      m_loc.noalias() += (w * c.weight) * (phi.cast<Complex>() * phi.transpose().cast<Complex>());
    }
  }
  if (!scaled) {
    k_loc = k_real.cast<Complex>();
    m_loc = m_real.cast<Complex>();
  }
  // Exact symmetry: mirror the upper triangle.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      k_loc(j, i) = k_loc(i, j);
      m_loc(j, i) = m_loc(i, j);
    }
  }
}

}  // namespace

std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> element_matrices(
    const FunctionSpace& space, int t, const std::optional<ScalingProfile>& profile,
    const Medium& medium, int quadrature_degree) {
  const ReferenceData ref = reference_data(space, default_degree(space, quadrature_degree));
  Eigen::MatrixXcd k, m;
  integrate_element(space, ref, t, profile, medium, k, m);
  return {k, m};
}

AssembledPencil assemble(const FunctionSpace& space, const std::optional<ScalingProfile>& profile,
                         const Medium& medium, const AssemblyOptions& options) {
  if (medium.dim() != 2) throw ValidationError("assemble: 2D media only");
  const Mesh& mesh = space.mesh();
  const int n = space.dof_count();
  const int nt = mesh.size();
  const int nloc = space.basis().size();
  const ReferenceData ref = reference_data(space, default_degree(space, options.quadrature_degree));

  // Element dof lists and the shared sparsity pattern.
  std::vector<int> all_dofs(static_cast<std::size_t>(nt) * nloc);
  std::vector<double> all_signs(static_cast<std::size_t>(nt) * nloc);
  {
    std::vector<int> dofs;
    std::vector<double> signs;
    for (int t = 0; t < nt; ++t) {
      space.element_dofs(t, dofs, signs);
      std::copy(dofs.begin(), dofs.end(), all_dofs.begin() + static_cast<std::ptrdiff_t>(t) * nloc);
      std::copy(signs.begin(), signs.end(), all_signs.begin() + static_cast<std::ptrdiff_t>(t) * nloc);
    }
  }
  std::vector<std::uint64_t> keys;
  keys.reserve(static_cast<std::size_t>(nt) * nloc * nloc);
  for (int t = 0; t < nt; ++t) {
    const int* d = all_dofs.data() + static_cast<std::size_t>(t) * nloc;
    for (int a = 0; a < nloc; ++a) {
      if (d[a] < 0) continue;
      for (int b = 0; b < nloc; ++b) {
        if (d[b] < 0) continue;
        keys.push_back((static_cast<std::uint64_t>(d[b]) << 32) | static_cast<std::uint32_t>(d[a]));
      }
    }
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::vector<int> outer(n + 1, 0);
  std::vector<int> inner(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    outer[(keys[i] >> 32) + 1]++;
    inner[i] = static_cast<int>(keys[i] & 0xffffffffu);
  }
  for (int c = 0; c < n; ++c) outer[c + 1] += outer[c];
  keys.clear();
  keys.shrink_to_fit();
  std::vector<Complex> k_values(inner.size(), Complex(0.0, 0.0));
  std::vector<Complex> m_values(inner.size(), Complex(0.0, 0.0));

  auto position = [&](int row, int col) {
    const auto first = inner.begin() + outer[col];
    const auto last = inner.begin() + outer[col + 1];
    return static_cast<std::size_t>(std::lower_bound(first, last, row) - inner.begin());
  };

  // Local matrices are computed in parallel batches and scattered serially in
  // element order, so the result does not depend on the thread count.
  const int threads = std::max(1, options.threads > 0 ? options.threads
                                                      : static_cast<int>(std::thread::hardware_concurrency()));
  const int batch = 256;
  std::vector<Eigen::MatrixXcd> k_batch(batch), m_batch(batch);
  for (int start = 0; start < nt; start += batch) {
    const int count = std::min(batch, nt - start);
    auto work = [&](int first, int last) {
      for (int i = first; i < last; ++i) {
        integrate_element(space, ref, start + i, profile, medium, k_batch[i], m_batch[i]);
      }
    };
    if (threads == 1 || count < 2 * threads) {
      work(0, count);
    } else {
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> errors(threads);
      for (int w = 0; w < threads; ++w) {
        const int first = count * w / threads, last = count * (w + 1) / threads;
        pool.emplace_back([&, w, first, last] {
          try {
            work(first, last);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
      for (auto& th : pool) th.join();
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }
    for (int i = 0; i < count; ++i) {
      const int t = start + i;
      const int* d = all_dofs.data() + static_cast<std::size_t>(t) * nloc;
      const double* s = all_signs.data() + static_cast<std::size_t>(t) * nloc;
      for (int b = 0; b < nloc; ++b) {
        if (d[b] < 0) continue;
        for (int a = 0; a < nloc; ++a) {
          if (d[a] < 0) continue;
          const std::size_t pos = position(d[a], d[b]);
          const double sign = s[a] * s[b];
          k_values[pos] += sign * k_batch[i](a, b);
          m_values[pos] += sign * m_batch[i](a, b);
        }
      }
    }
  }

  AssembledPencil pencil;
  const auto nnz = static_cast<Eigen::Index>(inner.size());
  pencil.K = Eigen::Map<const SparseMatrix>(n, n, nnz, outer.data(), inner.data(), k_values.data());
  pencil.M = Eigen::Map<const SparseMatrix>(n, n, nnz, outer.data(), inner.data(), m_values.data());
  return pencil;
}

double rayleigh_residual(const AssembledPencil& pencil, Complex omega, const Eigen::VectorXcd& u) {
  const Complex lambda = omega * omega;
  const Eigen::VectorXcd r = pencil.K * u - lambda * (pencil.M * u);
  const double scale = u.norm() * (pencil.K.norm() + std::abs(lambda) * pencil.M.norm());
  return r.norm() / scale;
}

void write_coo(std::ostream& out, const SparseMatrix& matrix) {
  out << matrix.rows() << ' ' << matrix.cols() << ' ' << matrix.nonZeros() << "\n";
  char buf[96];
  for (int c = 0; c < matrix.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(matrix, c); it; ++it) {
      std::snprintf(buf, sizeof buf, "%ld %ld %.17g %.17g\n", static_cast<long>(it.row()),
                    static_cast<long>(it.col()), it.value().real(), it.value().imag());
      out << buf;
    }
  }
}

}  // namespace pmlres
