#include "poletbc/assembly.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include <Eigen/LU>
#include <unsupported/Eigen/KroneckerProduct>

#include "poletbc/fe.hpp"

namespace poletbc {

InteriorLocal interior_local(const std::array<Point, 3>& tri, int fe_order, const Point& drift) {
  const fe::LagrangeTriangle& ref = fe::reference_triangle(fe_order);
  Eigen::Matrix2d B;
  B.col(0) = tri[1] - tri[0];
  B.col(1) = tri[2] - tri[0];
  const double det = B.determinant();
  if (!(std::abs(det) > 0)) throw GeometryError("interior_local: degenerate triangle");
  const Eigen::Matrix2d Binv = B.inverse();

  const int n = ref.size();
  InteriorLocal out{RMatrix::Zero(n, n), RMatrix::Zero(n, n), RMatrix::Zero(n, n)};
  const fe::RuleTriangle rule = fe::triangle_rule(2 * fe_order);
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const double w = rule.weights[q] * std::abs(det);
    const RVector phi = ref.values(rule.points[q]);
    const Eigen::MatrixX2d grad = ref.gradients(rule.points[q]) * Binv;
    const RVector dgrad = grad * drift;
    out.mass.noalias() += w * phi * phi.transpose();
    out.stiffness.noalias() += w * grad * grad.transpose();
    out.drift.noalias() += w * phi * dgrad.transpose();
  }
  return out;
}

EtaBlocks eta_blocks(const ExteriorElementGeometry& g, int fe_order, const Point& drift) {
  const fe::Lagrange1D basis(fe_order);
  const int n = basis.size();
  const fe::Rule1D rule = fe::gauss_legendre(fe_order + 2);
  const Point dt = g.R.transpose() * drift;
  const double s = g.a + g.b;

  EtaBlocks e;
  for (RMatrix* m : {&e.L11, &e.L12, &e.L21, &e.L22, &e.M_eta, &e.D3}) m->setZero(n, n);
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const double eta = rule.points[q], w = rule.weights[q];
    const RVector phi = basis.values(eta);
    const RVector dphi = basis.derivatives(eta);
    const double beta = g.b - s * eta;
    e.L11.noalias() += (w * (g.h_xi + beta * beta / g.h_xi)) * dphi * dphi.transpose();
    e.L12.noalias() += (w * beta / g.h_xi) * dphi * phi.transpose();
    e.L21.noalias() += (w * beta / g.h_xi) * phi * dphi.transpose();
    e.M_eta.noalias() += w * phi * phi.transpose();
    e.D3.noalias() += (w * (dt.y() * beta + dt.x() * g.h_xi)) * phi * dphi.transpose();
  }
  e.L22 = e.M_eta / g.h_xi;
  e.D1 = (g.h_eta * dt.y()) * e.M_eta;
  e.D2 = dt.y() * e.M_eta;
  return e;
}

XiBlocks xi_blocks(const ExteriorElementGeometry& g, const HardyOperatorSet& h) {
  const RMatrix& tp = h.t_plus;
  const RMatrix& tm = h.t_minus;
  const RMatrix& p = h.p;
  const double s = g.a + g.b;
  XiBlocks x;
  x.L12_0 = 0.5 * tm.transpose() * tp;
  x.L21_0 = 0.5 * tp.transpose() * tm;
  x.L22_1 = (0.5 * g.h_eta) * tp.transpose() * tp;
  x.L22_0 = (0.25 * s) * tp.transpose() * p * tp;
  x.M_m1 = (-0.5 * g.h_xi * g.h_eta) * tm.transpose() * tm;
  x.M_m2 = (-0.25 * g.h_xi * s) * tm.transpose() * p * tm;
  x.D1_0 = -0.5 * tm.transpose() * tp;
  x.D2_m1 = (-0.25 * s) * tm.transpose() * p * tp;
  x.D3_m1 = -0.5 * tm.transpose() * tm;
  return x;
}

LocalExteriorMatrices local_exterior(const ExteriorElementGeometry& g, int n_xi, int fe_order, const Point& drift) {
  const HardyOperatorSet h(n_xi);
  const EtaBlocks e = eta_blocks(g, fe_order, drift);
  const XiBlocks x = xi_blocks(g, h);
  const int n_eta = fe_order + 1;
  const int n = n_eta * (n_xi + 1);
  const RMatrix I_eta = RMatrix::Identity(n_eta, n_eta);
  const double s = g.a + g.b;
  using Eigen::kroneckerProduct;

  LocalExteriorMatrices m;
  m.n_eta = n_eta;
  m.n_xi = n_xi;
  for (RMatrix* a : {&m.L0, &m.L1, &m.Mm1, &m.Mm2, &m.D0, &m.Dm1}) a->setZero(2 * n, 2 * n);

  m.L0.topLeftCorner(n, n) = kroneckerProduct(e.L22, x.L22_0) + kroneckerProduct(e.L12, x.L12_0) +
                             kroneckerProduct(e.L21, x.L21_0);
  m.L0.topRightCorner(n, n) = kroneckerProduct(e.L11, RMatrix(h.t_minus.transpose()));
  m.L0.bottomLeftCorner(n, n) = kroneckerProduct(I_eta, h.t_minus);
  m.L0.bottomRightCorner(n, n) = -s * RMatrix(kroneckerProduct(I_eta, h.p));

  m.L1.topLeftCorner(n, n) = kroneckerProduct(e.L22, x.L22_1);
  m.L1.bottomRightCorner(n, n) = -2.0 * g.h_eta * RMatrix::Identity(n, n);

  m.Mm1.topLeftCorner(n, n) = kroneckerProduct(e.M_eta, x.M_m1);
  m.Mm2.topLeftCorner(n, n) = kroneckerProduct(e.M_eta, x.M_m2);

  m.D0.topLeftCorner(n, n) = kroneckerProduct(e.D1, x.D1_0);
  m.Dm1.topLeftCorner(n, n) = kroneckerProduct(e.D2, x.D2_m1) + kroneckerProduct(e.D3, x.D3_m1);
  return m;
}

namespace {

// Position of the m-th node (fraction m/k from va toward vb) in the DOF slots
// of edge {va, vb}, which are stored from the smaller vertex index.
int edge_slot(int va, int vb, int m, int k) { return va < vb ? m - 1 : k - m - 1; }

std::int64_t edge_key(int va, int vb, int nv) {
  return static_cast<std::int64_t>(std::min(va, vb)) * nv + std::max(va, vb);
}

}  // namespace

DofMap build_dof_map(const Mesh& mesh, int fe_order, int n_xi) {
  if (fe_order < 1 || fe_order > 4) throw std::invalid_argument("build_dof_map: fe_order must be in 1..4");
  if (n_xi < 0) throw std::invalid_argument("build_dof_map: n_xi must be >= 0");
  const int k = fe_order;
  const int nv = static_cast<int>(mesh.vertices.size());
  const int per_edge = k - 1;
  const int per_interior = (k - 1) * (k - 2) / 2;

  DofMap d;
  d.fe_order = k;
  d.n_xi = n_xi;
  d.n_eta = k + 1;

  std::unordered_map<std::int64_t, int> edge_id;
  std::vector<std::array<int, 2>> edges;
  for (const auto& t : mesh.triangles) {
    for (int l = 0; l < 3; ++l) {
      const int va = t[l], vb = t[(l + 1) % 3];
      if (edge_id.emplace(edge_key(va, vb, nv), static_cast<int>(edges.size())).second) {
        edges.push_back({std::min(va, vb), std::max(va, vb)});
      }
    }
  }
  const int edge_base = nv;
  const int interior_base = edge_base + static_cast<int>(edges.size()) * per_edge;
  d.n_fe = interior_base + static_cast<int>(mesh.triangles.size()) * per_interior;

  d.fe_points.resize(d.n_fe);
  for (int v = 0; v < nv; ++v) d.fe_points[v] = mesh.vertices[v];
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const Point& a = mesh.vertices[edges[e][0]];
    const Point& b = mesh.vertices[edges[e][1]];
    for (int m = 1; m < k; ++m) d.fe_points[edge_base + e * per_edge + (m - 1)] = a + (b - a) * (double(m) / k);
  }

  const fe::LagrangeTriangle& ref = fe::reference_triangle(k);
  d.triangle_dofs.reserve(mesh.triangles.size());
  for (std::size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
    const auto& t = mesh.triangles[ti];
    std::vector<int> dofs(t.begin(), t.end());
    for (int l = 0; l < 3; ++l) {
      const int va = t[l], vb = t[(l + 1) % 3];
      const int e = edge_id.at(edge_key(va, vb, nv));
      for (int m = 1; m < k; ++m) dofs.push_back(edge_base + e * per_edge + edge_slot(va, vb, m, k));
    }
    const Point& A = mesh.vertices[t[0]];
    Eigen::Matrix2d B;
    B.col(0) = mesh.vertices[t[1]] - A;
    B.col(1) = mesh.vertices[t[2]] - A;
    for (int i = 0; i < per_interior; ++i) {
      const int dof = interior_base + static_cast<int>(ti) * per_interior + i;
      dofs.push_back(dof);
      d.fe_points[dof] = A + B * ref.nodes()[3 + 3 * per_edge + i];
    }
    d.triangle_dofs.push_back(std::move(dofs));
  }

  // Rays: walk the boundary loop, each vertex followed by the nodes of the
  // edge to its successor.
  d.ray_of_dof.assign(d.n_fe, -1);
  const int nb = static_cast<int>(mesh.boundary_loop.size());
  auto add_ray = [&](int dof) {
    d.ray_of_dof[dof] = static_cast<int>(d.ray_trace_dof.size());
    d.ray_trace_dof.push_back(dof);
  };
  for (int q = 0; q < nb; ++q) {
    const int va = mesh.boundary_loop[q], vb = mesh.boundary_loop[(q + 1) % nb];
    const auto it = edge_id.find(edge_key(va, vb, nv));
    if (it == edge_id.end()) throw GeometryError("build_dof_map: boundary loop edge not in triangulation");
    add_ray(va);
    for (int m = 1; m < k; ++m) add_ray(edge_base + it->second * per_edge + edge_slot(va, vb, m, k));
  }
  d.n_rays = static_cast<int>(d.ray_trace_dof.size());

  if (n_xi == 0) {
    d.hardy_offset = d.aux_offset = d.n_total = d.n_fe;
    return d;
  }
  d.hardy_offset = d.n_fe;
  d.aux_offset = d.hardy_offset + d.n_rays * n_xi;
  d.n_total = d.aux_offset + nb * d.n_eta * (n_xi + 1);

  // Exterior element q lies on the loop edge q, parametrized from
  // loop[q+1] (eta = 0) to loop[q] (eta = 1).
  const int block = d.n_eta * (n_xi + 1);
  for (int q = 0; q < nb; ++q) {
    const int v0 = mesh.boundary_loop[(q + 1) % nb], v1 = mesh.boundary_loop[q];
    const int e = edge_id.at(edge_key(v0, v1, nv));
    std::vector<int> dofs(2 * block);
    for (int m = 0; m <= k; ++m) {
      int fe_dof;
      if (m == 0) {
        fe_dof = v0;
      } else if (m == k) {
        fe_dof = v1;
      } else {
        fe_dof = edge_base + e * per_edge + edge_slot(v0, v1, m, k);
      }
      const int ray = d.ray_of_dof[fe_dof];
      dofs[m * (n_xi + 1)] = fe_dof;
      for (int j = 1; j <= n_xi; ++j) dofs[m * (n_xi + 1) + j] = d.hardy_dof(ray, j);
      for (int j = 0; j <= n_xi; ++j) dofs[block + m * (n_xi + 1) + j] = d.aux_dof(q, m, j);
    }
    d.exterior_dofs.push_back(std::move(dofs));
  }
  return d;
}

namespace {

struct Entry {
  int row, col, source;
  double value;
};

class Accumulator {
 public:
  void add(const RMatrix& local, const std::vector<int>& dofs, int source, double scale = 1.0) {
    for (Eigen::Index i = 0; i < local.rows(); ++i) {
      for (Eigen::Index j = 0; j < local.cols(); ++j) {
        const double v = local(i, j);
        if (v != 0.0) entries_.push_back({dofs[i], dofs[j], source, scale * v});
      }
    }
  }

  // Sums duplicates in a fixed order so that the result does not depend on
  // the element visiting order.
  SparseMatrix build(int n) {
    std::sort(entries_.begin(), entries_.end(), [](const Entry& x, const Entry& y) {
      if (x.row != y.row) return x.row < y.row;
      if (x.col != y.col) return x.col < y.col;
      return x.source < y.source;
    });
    std::vector<Eigen::Triplet<Complex>> trip;
    for (std::size_t i = 0; i < entries_.size();) {
      double sum = 0;
      std::size_t j = i;
      for (; j < entries_.size() && entries_[j].row == entries_[i].row && entries_[j].col == entries_[i].col; ++j) {
        sum += entries_[j].value;
      }
      trip.emplace_back(entries_[i].row, entries_[i].col, Complex(sum, 0.0));
      i = j;
    }
    SparseMatrix a(n, n);
    a.setFromTriplets(trip.begin(), trip.end());
    a.makeCompressed();
    entries_.clear();
    return a;
  }

 private:
  std::vector<Entry> entries_;
};

}  // namespace

GlobalSystem assemble_global(const Mesh& mesh, int fe_order, int n_xi, const PhysicalParameters& params,
                             const AssemblyOptions& options) {
  if (options.exterior && n_xi < 1) throw std::invalid_argument("assemble_global: n_xi must be >= 1");
  GlobalSystem sys;
  sys.params = params;
  sys.fe_order = fe_order;
  sys.n_xi = options.exterior ? n_xi : 0;
  sys.dofs = build_dof_map(mesh, fe_order, sys.n_xi);
  if (options.exterior) sys.exterior = exterior_geometry(mesh);

  const int n_tri = static_cast<int>(mesh.triangles.size());
  const int n_elem = n_tri + static_cast<int>(sys.exterior.size());
  std::vector<int> order = options.element_order;
  if (order.empty()) {
    order.resize(n_elem);
    std::iota(order.begin(), order.end(), 0);
  } else {
    std::vector<int> check = order;
    std::sort(check.begin(), check.end());
    for (int i = 0; i < n_elem; ++i) {
      if (static_cast<int>(check.size()) != n_elem || check[i] != i) {
        throw std::invalid_argument("assemble_global: element_order is not a permutation");
      }
    }
  }

  Accumulator m0, mm1, mm2, l0, l1, d0, dm1, m_fe, k_fe;
  for (const int id : order) {
    if (id < n_tri) {
      const auto& t = mesh.triangles[id];
      const InteriorLocal loc =
          interior_local({mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]}, fe_order, params.d);
      const auto& dofs = sys.dofs.triangle_dofs[id];
      m0.add(loc.mass, dofs, id);
      m_fe.add(loc.mass, dofs, id);
      k_fe.add(loc.stiffness, dofs, id);
      l0.add(loc.stiffness, dofs, id, -1.0);
      d0.add(loc.drift, dofs, id);
    } else {
      const int e = id - n_tri;
      const LocalExteriorMatrices loc = local_exterior(sys.exterior[e], n_xi, fe_order, params.d);
      const auto& dofs = sys.dofs.exterior_dofs[e];
      mm1.add(loc.Mm1, dofs, id);
      mm2.add(loc.Mm2, dofs, id);
      l0.add(loc.L0, dofs, id);
      l1.add(loc.L1, dofs, id);
      d0.add(loc.D0, dofs, id);
      dm1.add(loc.Dm1, dofs, id);
    }
  }
  const int n = sys.dofs.n_total;
  sys.M0 = m0.build(n);
  sys.Mm1 = mm1.build(n);
  sys.Mm2 = mm2.build(n);
  sys.L0 = l0.build(n);
  sys.L1 = l1.build(n);
  sys.D0 = d0.build(n);
  sys.Dm1 = dm1.build(n);
  sys.M_fe = m_fe.build(sys.dofs.n_fe);
  sys.K_fe = k_fe.build(sys.dofs.n_fe);
  return sys;
}

void write_coordinate(std::ostream& os, const SparseMatrix& a) {
  const auto old = os.precision(17);
  for (int r = 0; r < a.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(a, r); it; ++it) {
      os << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' ' << it.value().imag() << '\n';
    }
  }
  os.precision(old);
}

}  // namespace poletbc
