#pragma once

#include <vector>

#include <Eigen/Core>

#include "poletbc/types.hpp"

namespace poletbc::fe {

/// Gauss-Legendre rule on [0, 1] with n points (exact to degree 2n-1).
struct Rule1D {
  std::vector<double> points, weights;
};
Rule1D gauss_legendre(int n);

/// Collapsed (Duffy) tensor Gauss rule on the reference triangle
/// (0,0), (1,0), (0,1); exact for polynomials of the given total degree.
/// Weights sum to 1/2.
struct RuleTriangle {
  std::vector<Point> points;
  std::vector<double> weights;
};
RuleTriangle triangle_rule(int degree);

/// Lagrange basis of order k on the reference triangle with equispaced nodes.
/// Node order: the three vertices, k-1 nodes on each edge (v0->v1, v1->v2,
/// v2->v0, listed from the first vertex), then interior nodes.
class LagrangeTriangle {
 public:
  explicit LagrangeTriangle(int order);

  int order() const { return order_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Point>& nodes() const { return nodes_; }

  RVector values(const Point& x) const;
  // size() x 2, columns d/dx and d/dy on the reference element.
  Eigen::MatrixX2d gradients(const Point& x) const;

 private:
  int order_;
  std::vector<Point> nodes_;
  std::vector<std::pair<int, int>> exponents_;
  RMatrix coeffs_;  // monomial m -> basis i
};

/// Shared immutable reference element for orders 1..4.
const LagrangeTriangle& reference_triangle(int order);

/// Lagrange basis of order k on [0, 1], nodes m/k in increasing order.
class Lagrange1D {
 public:
  explicit Lagrange1D(int order);

  int order() const { return order_; }
  int size() const { return order_ + 1; }
  RVector values(double x) const;
  RVector derivatives(double x) const;

 private:
  int order_;
  std::vector<double> nodes_;
};

}  // namespace poletbc::fe
