#include "poletbc/fe.hpp"

#include <array>
#include <cmath>
#include <memory>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace poletbc::fe {

Rule1D gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  // Golub-Welsch on the Jacobi matrix of the Legendre recurrence.
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    jac(k, k - 1) = jac(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  Rule1D rule;
  for (int i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    rule.points.push_back(0.5 * (es.eigenvalues()(i) + 1.0));
    rule.weights.push_back(v0 * v0);  // 2 v0^2 on [-1, 1], halved for [0, 1]
  }
  return rule;
}

RuleTriangle triangle_rule(int degree) {
  // The collapsed integrand has degree <= degree + 1 in the collapsed variable.
  const int n = std::max(1, (degree + 2 + 1) / 2);
  const Rule1D g = gauss_legendre(n);
  RuleTriangle rule;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double u = g.points[i], v = g.points[j];
      rule.points.emplace_back(u, v * (1 - u));
      rule.weights.push_back(g.weights[i] * g.weights[j] * (1 - u));
    }
  }
  return rule;
}

LagrangeTriangle::LagrangeTriangle(int order) : order_(order) {
  if (order < 1 || order > 4) throw std::invalid_argument("LagrangeTriangle: order must be in 1..4");
  const int k = order;
  const double h = 1.0 / k;
  nodes_ = {{0, 0}, {1, 0}, {0, 1}};
  for (int m = 1; m < k; ++m) nodes_.emplace_back(m * h, 0);
  for (int m = 1; m < k; ++m) nodes_.emplace_back((k - m) * h, m * h);
  for (int m = 1; m < k; ++m) nodes_.emplace_back(0, (k - m) * h);
  for (int j = 1; j < k; ++j) {
    for (int i = 1; i + j < k; ++i) nodes_.emplace_back(i * h, j * h);
  }
  for (int total = 0; total <= k; ++total) {
    for (int q = 0; q <= total; ++q) exponents_.emplace_back(total - q, q);
  }
  const int n = size();
  RMatrix vandermonde(n, n);
  for (int r = 0; r < n; ++r) {
    for (int m = 0; m < n; ++m) {
      vandermonde(r, m) = std::pow(nodes_[r].x(), exponents_[m].first) * std::pow(nodes_[r].y(), exponents_[m].second);
    }
  }
  coeffs_ = vandermonde.fullPivLu().inverse();
}

RVector LagrangeTriangle::values(const Point& x) const {
  const int n = size();
  RVector mono(n);
  for (int m = 0; m < n; ++m) {
    mono(m) = std::pow(x.x(), exponents_[m].first) * std::pow(x.y(), exponents_[m].second);
  }
  return coeffs_.transpose() * mono;
}

Eigen::MatrixX2d LagrangeTriangle::gradients(const Point& x) const {
  const int n = size();
  Eigen::MatrixX2d dmono(n, 2);
  for (int m = 0; m < n; ++m) {
    const auto [p, q] = exponents_[m];
    dmono(m, 0) = p == 0 ? 0.0 : p * std::pow(x.x(), p - 1) * std::pow(x.y(), q);
    dmono(m, 1) = q == 0 ? 0.0 : q * std::pow(x.x(), p) * std::pow(x.y(), q - 1);
  }
  return coeffs_.transpose() * dmono;
}

const LagrangeTriangle& reference_triangle(int order) {
  static const std::array<LagrangeTriangle, 4> elements{LagrangeTriangle(1), LagrangeTriangle(2), LagrangeTriangle(3),
                                                        LagrangeTriangle(4)};
  if (order < 1 || order > 4) throw std::invalid_argument("reference_triangle: order must be in 1..4");
  return elements[order - 1];
}

Lagrange1D::Lagrange1D(int order) : order_(order) {
  if (order < 1) throw std::invalid_argument("Lagrange1D: order must be >= 1");
  for (int m = 0; m <= order; ++m) nodes_.push_back(static_cast<double>(m) / order);
}

RVector Lagrange1D::values(double x) const {
  RVector v(size());
  for (int i = 0; i < size(); ++i) {
    double p = 1;
    for (int j = 0; j < size(); ++j) {
      if (j != i) p *= (x - nodes_[j]) / (nodes_[i] - nodes_[j]);
    }
    v(i) = p;
  }
  return v;
}

RVector Lagrange1D::derivatives(double x) const {
  RVector d(size());
  for (int i = 0; i < size(); ++i) {
    double sum = 0;
    for (int l = 0; l < size(); ++l) {
      if (l == i) continue;
      double p = 1.0 / (nodes_[i] - nodes_[l]);
      for (int j = 0; j < size(); ++j) {
        if (j != i && j != l) p *= (x - nodes_[j]) / (nodes_[i] - nodes_[j]);
      }
      sum += p;
    }
    d(i) = sum;
  }
  return d;
}

}  // namespace poletbc::fe
