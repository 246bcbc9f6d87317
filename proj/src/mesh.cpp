#include "poletbc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <utility>

namespace poletbc {

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

namespace {

Point outward_normal(const Point& from, const Point& to) {
  const Point e = (to - from).normalized();
  return {e.y(), -e.x()};
}

// > 0 when d lies strictly inside the circumcircle of the counterclockwise
// triangle (a, b, c).
double incircle(const Point& a, const Point& b, const Point& c, const Point& d) {
  const double adx = a.x() - d.x(), ady = a.y() - d.y();
  const double bdx = b.x() - d.x(), bdy = b.y() - d.y();
  const double cdx = c.x() - d.x(), cdy = c.y() - d.y();
  const double ad = adx * adx + ady * ady;
  const double bd = bdx * bdx + bdy * bdy;
  const double cd = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

// Bowyer-Watson. Intended for the small base meshes only (quadratic cost).
std::vector<std::array<int, 3>> delaunay(const std::vector<Point>& pts) {
  const int n = static_cast<int>(pts.size());
  Point lo = pts.front(), hi = pts.front();
  for (const auto& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Point center = 0.5 * (lo + hi);
  const double span = std::max((hi - lo).maxCoeff(), 1.0);

  std::vector<Point> all = pts;
  all.push_back(center + Point(-20 * span, -20 * span));
  all.push_back(center + Point(20 * span, -20 * span));
  all.push_back(center + Point(0, 20 * span));

  std::vector<std::array<int, 3>> tris{{n, n + 1, n + 2}};
  const double tol = 1e-10 * std::pow(span, 4);

  for (int p = 0; p < n; ++p) {
    std::vector<std::array<int, 3>> keep;
    std::map<std::pair<int, int>, int> edge_count;
    std::vector<std::pair<int, int>> cavity_edges;
    for (const auto& t : tris) {
      if (incircle(all[t[0]], all[t[1]], all[t[2]], all[p]) > tol) {
        for (int e = 0; e < 3; ++e) {
          const int a = t[e], b = t[(e + 1) % 3];
          cavity_edges.emplace_back(a, b);
          ++edge_count[{std::min(a, b), std::max(a, b)}];
        }
      } else {
        keep.push_back(t);
      }
    }
    for (const auto& [a, b] : cavity_edges) {
      if (edge_count[{std::min(a, b), std::max(a, b)}] == 1) keep.push_back({a, b, p});
    }
    tris = std::move(keep);
  }

  std::vector<std::array<int, 3>> out;
  for (const auto& t : tris) {
    if (t[0] < n && t[1] < n && t[2] < n) out.push_back(t);
  }
  return out;
}

double polygon_area(const std::vector<Point>& v, const std::vector<int>& loop) {
  double area = 0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Point& a = v[loop[i]];
    const Point& b = v[loop[(i + 1) % loop.size()]];
    area += 0.5 * (a.x() * b.y() - b.x() * a.y());
  }
  return area;
}

}  // namespace

std::vector<Point> bisector_rays(const std::vector<Point>& vertices, const std::vector<int>& loop) {
  const std::size_t nb = loop.size();
  std::vector<Point> rays(nb);
  for (std::size_t q = 0; q < nb; ++q) {
    const Point& prev = vertices[loop[(q + nb - 1) % nb]];
    const Point& here = vertices[loop[q]];
    const Point& next = vertices[loop[(q + 1) % nb]];
    rays[q] = (outward_normal(prev, here) + outward_normal(here, next)).normalized();
  }
  return rays;
}

Mesh build_base_mesh(double half_width, double corner_chamfer, double target_edge) {
  if (!(half_width > 0) || !(target_edge > 0)) {
    throw GeometryError("build_base_mesh: dimensions must be positive");
  }
  if (!(corner_chamfer >= 0) || !(corner_chamfer < half_width)) {
    throw GeometryError("build_base_mesh: chamfer must satisfy 0 <= chamfer < half_width");
  }
  const double w = half_width, c = corner_chamfer;

  std::vector<Point> corners;
  if (c > 0) {
    corners = {{-w + c, -w}, {w - c, -w}, {w, -w + c}, {w, w - c},
               {w - c, w},   {-w + c, w}, {-w, w - c}, {-w, -w + c}};
  } else {
    corners = {{-w, -w}, {w, -w}, {w, w}, {-w, w}};
  }

  Mesh mesh;
  for (std::size_t i = 0; i < corners.size(); ++i) {
    const Point& a = corners[i];
    const Point& b = corners[(i + 1) % corners.size()];
    const int m = std::max(1, static_cast<int>(std::ceil((b - a).norm() / target_edge - 1e-9)));
    for (int j = 0; j < m; ++j) {
      mesh.vertices.push_back(a + (b - a) * (static_cast<double>(j) / m));
    }
  }
  const int nb = static_cast<int>(mesh.vertices.size());
  for (int i = 0; i < nb; ++i) mesh.boundary_loop.push_back(i);

  // Interior lattice points, kept away from the boundary to avoid slivers.
  std::vector<std::pair<Point, Point>> edges;  // (point on edge, inward normal)
  for (std::size_t i = 0; i < corners.size(); ++i) {
    const Point& a = corners[i];
    const Point& b = corners[(i + 1) % corners.size()];
    edges.emplace_back(a, -outward_normal(a, b));
  }
  const double dy = target_edge * std::sqrt(3.0) / 2;
  const int rows = static_cast<int>(std::ceil(w / dy)) + 1;
  const int cols = static_cast<int>(std::ceil(w / target_edge)) + 1;
  for (int j = -rows; j <= rows; ++j) {
    const double shift = (std::abs(j) % 2 == 1) ? 0.5 : 0.0;
    for (int i = -cols; i <= cols; ++i) {
      const Point p((i + shift) * target_edge, j * dy);
      double dist = 1e300;
      for (const auto& [q, inward] : edges) dist = std::min(dist, inward.dot(p - q));
      if (dist >= 0.6 * target_edge) mesh.vertices.push_back(p);
    }
  }

  mesh.triangles = delaunay(mesh.vertices);
  for (auto& t : mesh.triangles) {
    if (signed_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]) < 0) {
      std::swap(t[1], t[2]);
    }
  }
  std::sort(mesh.triangles.begin(), mesh.triangles.end());
  mesh.rays = bisector_rays(mesh.vertices, mesh.boundary_loop);
  mesh.refinement_level = 0;
  validate(mesh);
  return mesh;
}

Mesh refine_uniform(const Mesh& mesh) {
  Mesh out;
  out.vertices = mesh.vertices;
  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    const auto key = std::make_pair(std::min(a, b), std::max(a, b));
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int id = static_cast<int>(out.vertices.size());
    out.vertices.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
    midpoint.emplace(key, id);
    return id;
  };

  out.triangles.reserve(4 * mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    const int m01 = mid(t[0], t[1]);
    const int m12 = mid(t[1], t[2]);
    const int m20 = mid(t[2], t[0]);
    out.triangles.push_back({t[0], m01, m20});
    out.triangles.push_back({m01, t[1], m12});
    out.triangles.push_back({m20, m12, t[2]});
    out.triangles.push_back({m01, m12, m20});
  }

  const std::size_t nb = mesh.boundary_loop.size();
  for (std::size_t q = 0; q < nb; ++q) {
    const int a = mesh.boundary_loop[q];
    const int b = mesh.boundary_loop[(q + 1) % nb];
    out.boundary_loop.push_back(a);
    out.boundary_loop.push_back(mid(a, b));
  }
  out.rays = bisector_rays(out.vertices, out.boundary_loop);
  out.refinement_level = mesh.refinement_level + 1;
  return out;
}

Mesh refine_uniform(const Mesh& mesh, int times) {
  Mesh out = mesh;
  for (int i = 0; i < times; ++i) out = refine_uniform(out);
  return out;
}

void validate(const Mesh& mesh) {
  const auto& v = mesh.vertices;
  const std::size_t nb = mesh.boundary_loop.size();
  if (nb < 3) throw GeometryError("mesh: boundary loop has fewer than 3 vertices");
  if (mesh.rays.size() != nb) throw GeometryError("mesh: one ray per boundary vertex required");

  double tri_area = 0;
  for (const auto& t : mesh.triangles) {
    const double area = signed_area(v[t[0]], v[t[1]], v[t[2]]);
    if (!(area > 0)) throw GeometryError("mesh: triangle with non-positive signed area");
    tri_area += area;
  }
  const double poly = polygon_area(v, mesh.boundary_loop);
  if (std::abs(tri_area - poly) > 1e-9 * poly) {
    throw GeometryError("mesh: triangles do not tile the boundary polygon");
  }
  for (std::size_t q = 0; q < nb; ++q) {
    const Point& a = v[mesh.boundary_loop[(q + nb - 1) % nb]];
    const Point& b = v[mesh.boundary_loop[q]];
    const Point& c = v[mesh.boundary_loop[(q + 1) % nb]];
    if (signed_area(a, b, c) < -1e-12 * poly) throw GeometryError("mesh: boundary loop is not convex");
    const Point& d = mesh.rays[q];
    if (!(d.dot(outward_normal(a, b)) > 0) || !(d.dot(outward_normal(b, c)) > 0)) {
      throw GeometryError("mesh: ray is not outward for an adjacent boundary edge");
    }
  }
}

void write_mesh(std::ostream& os, const Mesh& mesh) {
  const auto old = os.precision(17);
  for (const auto& p : mesh.vertices) os << "v " << p.x() << ' ' << p.y() << '\n';
  for (const auto& t : mesh.triangles) os << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (std::size_t q = 0; q < mesh.boundary_loop.size(); ++q) {
    os << "r " << mesh.boundary_loop[q] << ' ' << mesh.rays[q].x() << ' ' << mesh.rays[q].y() << '\n';
  }
  os.precision(old);
}

Point ExteriorElementGeometry::map(double eta, double xi) const {
  return (1 - eta) * (p0 + xi * w0) + eta * (p1 + xi * w1);
}

std::vector<ExteriorElementGeometry> exterior_geometry(const Mesh& mesh, double h_xi) {
  if (!(h_xi > 0)) throw GeometryError("exterior_geometry: h_xi must be positive");
  const auto& v = mesh.vertices;
  const std::size_t nb = mesh.boundary_loop.size();

  // One scaled ray vector per boundary vertex, shared by both adjacent
  // elements. With bisector rays both edges see the same normal component.
  std::vector<Point> scaled(nb);
  for (std::size_t q = 0; q < nb; ++q) {
    const Point& prev = v[mesh.boundary_loop[(q + nb - 1) % nb]];
    const Point& here = v[mesh.boundary_loop[q]];
    const Point& next = v[mesh.boundary_loop[(q + 1) % nb]];
    const double c_prev = mesh.rays[q].dot(outward_normal(prev, here));
    const double c_next = mesh.rays[q].dot(outward_normal(here, next));
    if (!(c_prev > 0) || !(c_next > 0)) {
      throw GeometryError("exterior_geometry: ray not outward relative to an adjacent edge");
    }
    scaled[q] = mesh.rays[q] * (h_xi / (0.5 * (c_prev + c_next)));
  }

  std::vector<ExteriorElementGeometry> out;
  out.reserve(nb);
  for (std::size_t q = 0; q < nb; ++q) {
    const std::size_t qn = (q + 1) % nb;
    ExteriorElementGeometry g;
    g.edge_index = static_cast<int>(q);
    g.v0 = mesh.boundary_loop[qn];
    g.v1 = mesh.boundary_loop[q];
    g.p0 = v[g.v0];
    g.p1 = v[g.v1];
    g.w0 = scaled[qn];
    g.w1 = scaled[q];
    g.h_eta = (g.p1 - g.p0).norm();
    if (!(g.h_eta > 0)) throw GeometryError("exterior_geometry: degenerate boundary edge");
    g.h_xi = h_xi;
    const Point t = (g.p1 - g.p0) / g.h_eta;
    const Point n(-t.y(), t.x());
    g.R.col(0) = t;
    g.R.col(1) = n;
    if (!(g.w0.dot(n) > 0) || !(g.w1.dot(n) > 0)) {
      throw GeometryError("exterior_geometry: ray not outward relative to its edge");
    }
    g.b = -g.w0.dot(t);
    g.a = g.w1.dot(t);
    if (g.a + g.b < -1e-12 * g.h_eta) {
      throw GeometryError("exterior_geometry: a + b < 0 (domain not convex)");
    }
    out.push_back(g);
  }
  return out;
}

Jacobian jacobian(const ExteriorElementGeometry& g, double eta, double xi) {
  const double s = g.a + g.b;
  Eigen::Matrix2d k;
  k << g.h_eta + s * xi, -g.b + s * eta, 0.0, g.h_xi;
  return {g.R * k, g.h_xi * (g.h_eta + s * xi)};
}

}  // namespace poletbc
