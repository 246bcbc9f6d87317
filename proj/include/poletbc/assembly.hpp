#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "poletbc/hardy.hpp"
#include "poletbc/mesh.hpp"
#include "poletbc/types.hpp"

namespace poletbc {

struct InteriorLocal {
  RMatrix mass;       // int phi_i phi_j
  RMatrix stiffness;  // int grad phi_i . grad phi_j
  RMatrix drift;      // int phi_i (d . grad phi_j)
};

/// Pk Lagrange local matrices (k = 1..4) on one triangle; quadrature is exact
/// for the polynomial integrands.
InteriorLocal interior_local(const std::array<Point, 3>& triangle, int fe_order, const Point& drift = Point::Zero());

/// Integrals over eta in [0, 1] for one exterior element. Row index = test
/// function. beta(eta) = b - (a+b) eta, (d1, d2) = R^T d.
struct EtaBlocks {
  RMatrix L11;    // phi_i' (h_xi + beta^2 / h_xi) phi_j'
  RMatrix L12;    // phi_i' (beta / h_xi) phi_j
  RMatrix L21;    // phi_i (beta / h_xi) phi_j'
  RMatrix L22;    // phi_i phi_j / h_xi
  RMatrix M_eta;  // phi_i phi_j
  RMatrix D1;     // h_eta d2 M_eta
  RMatrix D2;     // d2 M_eta
  RMatrix D3;     // phi_i (d2 beta + d1 h_xi) phi_j'
};

EtaBlocks eta_blocks(const ExteriorElementGeometry& geom, int fe_order, const Point& drift = Point::Zero());

/// Integrals over xi in [0, inf) in the truncated Hardy basis, grouped by
/// their power of s0 (suffix _1: s0, _0: 1, _m1: 1/s0, _m2: 1/s0^2).
/// L blocks belong to the Laplacian (minus the stiffness form), M blocks to
/// the mass form and D blocks to the drift form.
struct XiBlocks {
  RMatrix L12_0, L21_0, L22_1, L22_0;
  RMatrix M_m1, M_m2;
  RMatrix D1_0, D2_m1, D3_m1;
};

XiBlocks xi_blocks(const ExteriorElementGeometry& geom, const HardyOperatorSet& hardy);

/// Local exterior matrices on [Hardy DOFs | auxiliary DOFs], each of size
/// 2 n_eta (n_xi+1), Kronecker index eta_node * (n_xi+1) + xi_index. The
/// auxiliary rows enforce (2 s0 h_eta I + (a+b) P) w = T- u, which keeps the
/// inverse of the 1/(h_eta + (a+b) xi) block out of the assembled operator.
struct LocalExteriorMatrices {
  int n_eta = 0, n_xi = 0;
  RMatrix L0, L1, Mm1, Mm2, D0, Dm1;
};

LocalExteriorMatrices local_exterior(const ExteriorElementGeometry& geom, int n_xi, int fe_order,
                                     const Point& drift = Point::Zero());

/// Global numbering: [FE DOFs in the domain | Hardy DOFs F_0..F_{n-1} per ray |
/// auxiliary DOFs per exterior element]. Every boundary FE DOF owns a ray and
/// doubles as the f0 slot of that ray.
struct DofMap {
  int fe_order = 1;
  int n_xi = 0;
  int n_fe = 0;
  int n_rays = 0;
  int n_eta = 0;
  int hardy_offset = 0;
  int aux_offset = 0;
  int n_total = 0;

  std::vector<Point> fe_points;
  std::vector<std::vector<int>> triangle_dofs;
  std::vector<int> ray_trace_dof;
  std::vector<int> ray_of_dof;  // -1 for non-boundary FE DOFs
  std::vector<std::vector<int>> exterior_dofs;

  bool is_boundary(int dof) const { return ray_of_dof[dof] >= 0; }
  int hardy_dof(int ray, int j) const { return hardy_offset + ray * n_xi + (j - 1); }
  int aux_dof(int element, int eta_node, int j) const {
    return aux_offset + (element * n_eta + eta_node) * (n_xi + 1) + j;
  }
};

/// n_xi == 0 builds the map without exterior unknowns.
DofMap build_dof_map(const Mesh& mesh, int fe_order, int n_xi);

struct PhysicalParameters {
  double c = 1.0;
  Point d = Point::Zero();
  double k = 0.0;
};

/// s0-graded matrices of the semi-discrete system
///   p(d/dt) (M0 + Mm1/s0 + Mm2/s0^2) u = c^2 (L0 + s0 L1) u - (D0 + Dm1/s0) u - k^2 M u.
struct GlobalSystem {
  SparseMatrix M0, Mm1, Mm2, L0, L1, D0, Dm1;
  // Mass and stiffness of the triangles alone, on the FE DOFs (n_fe x n_fe).
  SparseMatrix M_fe, K_fe;
  DofMap dofs;
  std::vector<ExteriorElementGeometry> exterior;
  PhysicalParameters params;
  int fe_order = 1;
  int n_xi = 0;

  Eigen::Index size() const { return M0.rows(); }
};

struct AssemblyOptions {
  bool exterior = true;
  // Permutation of element ids (triangles first, then exterior elements) to
  // visit; empty means natural order. The result does not depend on it.
  std::vector<int> element_order;
};

GlobalSystem assemble_global(const Mesh& mesh, int fe_order, int n_xi, const PhysicalParameters& params,
                             const AssemblyOptions& options = {});

/// Coordinate text dump: `i j re im` per stored entry.
void write_coordinate(std::ostream& os, const SparseMatrix& a);

}  // namespace poletbc
