#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "poletbc/types.hpp"

namespace poletbc {

/// Triangulation of a convex polygonal domain together with the outward rays
/// that span the semi-infinite exterior elements.
struct Mesh {
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<int> boundary_loop;             // counterclockwise, no repeat
  std::vector<Point> rays;                    // unit direction per boundary_loop entry
  int refinement_level = 0;
};

/// Square [-half_width, half_width]^2 with 45 degree corner chamfers. The
/// chamfer is the distance cut from the corner along each side. Boundary
/// edges have length <= target_edge; the interior is a Delaunay triangulation
/// of a hexagonal point lattice of spacing target_edge.
Mesh build_base_mesh(double half_width, double corner_chamfer, double target_edge);

/// Red refinement: every triangle split into four through its edge midpoints.
Mesh refine_uniform(const Mesh& mesh);

/// Repeated refine_uniform.
Mesh refine_uniform(const Mesh& mesh, int times);

/// Throws GeometryError when one of the Mesh invariants is violated.
void validate(const Mesh& mesh);

double signed_area(const Point& a, const Point& b, const Point& c);

/// Bisector-of-normals ray directions for a counterclockwise boundary loop.
std::vector<Point> bisector_rays(const std::vector<Point>& vertices, const std::vector<int>& loop);

/// Debug export: `v x y`, `t i j k`, `r i dx dy` lines (0-based indices).
void write_mesh(std::ostream& os, const Mesh& mesh);

/// Semi-infinite trapezoid g(eta, xi) = (1-eta)(p0 + xi w0) + eta (p1 + xi w1)
/// over one boundary edge. p0 -> p1 runs clockwise so that R = [t n] with the
/// outward normal n is a proper rotation.
struct ExteriorElementGeometry {
  int edge_index = 0;  // position in boundary_loop of the counterclockwise edge start
  int v0 = 0, v1 = 0;  // vertex indices of p0 and p1
  Point p0, p1;
  Point w0, w1;  // scaled ray vectors, normal component h_xi
  double h_eta = 0;
  double h_xi = 1;
  double a = 0, b = 0;
  Eigen::Matrix2d R = Eigen::Matrix2d::Identity();

  Point map(double eta, double xi) const;
  Point tangent() const { return R.col(0); }
  Point normal() const { return R.col(1); }
};

std::vector<ExteriorElementGeometry> exterior_geometry(const Mesh& mesh, double h_xi = 1.0);

struct Jacobian {
  Eigen::Matrix2d matrix;
  double det;
};

/// J = R [[h_eta + (a+b) xi, -b + (a+b) eta], [0, h_xi]],
/// |J| = h_xi (h_eta + (a+b) xi).
Jacobian jacobian(const ExteriorElementGeometry& geom, double eta, double xi);

}  // namespace poletbc
