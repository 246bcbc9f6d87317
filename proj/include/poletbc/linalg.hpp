#pragma once

#include <memory>

#include <Eigen/LU>

#include "poletbc/types.hpp"

namespace poletbc {

/// Sparse product A*x; throws std::invalid_argument on a dimension mismatch.
CVector matvec(const SparseMatrix& a, const CVector& x);

/// Sparse direct LU factorization with a fill-reducing column ordering.
///
/// The factors are immutable after construction; copies share them and
/// concurrent calls to solve() are safe.
class SparseLU {
 public:
  SparseLU() = default;
  explicit SparseLU(const SparseMatrix& a);

  CVector solve(const CVector& b) const;
  Eigen::Index rows() const noexcept { return n_; }

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  Eigen::Index n_ = 0;
};

/// Dense partial-pivoting LU solve, intended for oracles and small systems.
/// Throws SolverError carrying the pivot index when the matrix is singular.
template <typename MatA, typename MatB>
auto dense_solve(const Eigen::MatrixBase<MatA>& a, const Eigen::MatrixBase<MatB>& b) {
  using Scalar = typename MatA::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (a.rows() != a.cols() || a.rows() != b.rows()) {
    throw std::invalid_argument("dense_solve: dimension mismatch");
  }
  Eigen::PartialPivLU<Mat> lu(a.derived());
  const auto diag = lu.matrixLU().diagonal().cwiseAbs().eval();
  const double scale = a.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (!(diag(i) > 1e-14 * scale)) {
      throw SolverError("dense_solve: matrix is singular", static_cast<long>(i));
    }
  }
  return lu.solve(b.derived()).eval();
}

}  // namespace poletbc
