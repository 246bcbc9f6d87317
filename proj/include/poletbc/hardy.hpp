#pragma once

#include <optional>

#include <Eigen/Core>

#include "poletbc/types.hpp"

namespace poletbc {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Truncated Hardy-space operators on the stacked vector (f0, F_0, ..., F_{n-1})
// or on monomial coefficients (c_0, ..., c_n). Each is exactly twice the
// coefficient map of the continuous operator:
//   T+ (f0, F) <-> f0 + (z+1) F(z)
//   T- (f0, F) <-> f0 + (z-1) F(z)
//   P c        <-> (z-1)^2 c'(z) + (z-1) c(z), truncated at degree n
// All three are (n_xi+1) x (n_xi+1).

template <typename Scalar = int>
DenseMatrix<Scalar> t_plus_matrix(int n_xi) {
  if (n_xi < 1) throw std::invalid_argument("t_plus_matrix: n_xi must be >= 1");
  DenseMatrix<Scalar> t = DenseMatrix<Scalar>::Identity(n_xi + 1, n_xi + 1);
  t.template diagonal<1>().setConstant(Scalar(1));
  return t;
}

template <typename Scalar = int>
DenseMatrix<Scalar> t_minus_matrix(int n_xi) {
  if (n_xi < 1) throw std::invalid_argument("t_minus_matrix: n_xi must be >= 1");
  DenseMatrix<Scalar> t = DenseMatrix<Scalar>::Identity(n_xi + 1, n_xi + 1);
  t.template diagonal<1>().setConstant(Scalar(-1));
  return t;
}

template <typename Scalar = int>
DenseMatrix<Scalar> p_matrix(int n_xi) {
  if (n_xi < 1) throw std::invalid_argument("p_matrix: n_xi must be >= 1");
  const int n = n_xi + 1;
  DenseMatrix<Scalar> p = DenseMatrix<Scalar>::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    if (j > 0) p(j - 1, j) = Scalar(j);
    p(j, j) = Scalar(-(2 * j + 1));
    if (j + 1 < n) p(j + 1, j) = Scalar(j + 1);
  }
  return p;
}

struct HardyOperatorSet {
  int n_xi = 0;
  RMatrix t_plus, t_minus, p;

  explicit HardyOperatorSet(int n)
      : n_xi(n), t_plus(t_plus_matrix<double>(n)), t_minus(t_minus_matrix<double>(n)), p(p_matrix<double>(n)) {}
};

/// Disc image z* = (pole + s0) / (pole - s0) of a Laplace-domain pole. A mode
/// exp(pole * xi) violates the pole condition iff |z*| < 1.
Complex mobius_pole_image(Complex pole, Complex s0);

/// Truncated representation of a function on a ray:
///   (M L f)(z) = (f0 + (z - 1) F(z)) / (2 s0),   F(z) = sum_j F_j z^j.
struct HardyCoefficients {
  Complex f0;
  CVector F;

  int n_xi() const { return static_cast<int>(F.size()); }
  CVector stacked() const;
};

/// Monomial coefficients of (M L f)(z), length n_xi + 1.
CVector disc_coefficients(const HardyCoefficients& f, Complex s0);

/// Evaluates (M L f)(z).
Complex evaluate_disc(const HardyCoefficients& f, Complex s0, Complex z);

/// Integral over [0, inf) of f g, evaluated on the disc as
/// -2 s0 / (2 pi) \oint (M L f)(conj z) (M L g)(z) |dz|. The conjugate
/// applies to the argument only, so the pairing is bilinear: it reduces to
/// -2 s0 sum_j a_j b_j over the monomial coefficients.
Complex hardy_pairing(const HardyCoefficients& f, const HardyCoefficients& g, Complex s0);

/// Half-plane C_in of non-physical poles for an equation family, together
/// with the Mobius parameter that maps it onto the unit disc.
struct PoleRegion {
  Equation equation;
  std::optional<Complex> s0;  // empty: frequency dependent s0 = i omega

  bool contains(Complex z) const;
};

PoleRegion pole_region(Equation equation);

}  // namespace poletbc
