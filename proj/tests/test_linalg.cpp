#include <gtest/gtest.h>

#include <random>

#include "poletbc/linalg.hpp"

using namespace poletbc;

namespace {

SparseMatrix random_sparse(int n, double density, std::mt19937& rng, bool dominant) {
  std::uniform_real_distribution<double> u(-1, 1), p(0, 1);
  std::vector<Eigen::Triplet<Complex>> t;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || p(rng) < density) t.emplace_back(i, j, Complex(u(rng), u(rng)));
    }
    if (dominant) t.emplace_back(i, i, Complex(2.0 + n * density, 0));
  }
  SparseMatrix a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

CVector random_vector(int n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  return v;
}

}  // namespace

TEST(Matvec, Identity) {
  SparseMatrix id(5, 5);
  id.setIdentity();
  std::mt19937 rng(1);
  const CVector x = random_vector(5, rng);
  EXPECT_EQ(matvec(id, x), x);
}

TEST(Matvec, MatchesDenseProduct) {
  std::mt19937 rng(2);
  const SparseMatrix a = random_sparse(10, 0.3, rng, false);
  const CVector x = random_vector(10, rng), y = random_vector(10, rng);
  EXPECT_LT((matvec(a, x) - CMatrix(a) * x).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((matvec(a, x + y) - matvec(a, x) - matvec(a, y)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Matvec, DimensionMismatch) {
  SparseMatrix a(3, 4);
  EXPECT_THROW(matvec(a, CVector::Zero(3)), std::invalid_argument);
}

TEST(SparseLU, Diagonal) {
  SparseMatrix a(4, 4);
  for (int i = 0; i < 4; ++i) a.insert(i, i) = Complex(i + 1, -0.5 * i);
  a.makeCompressed();
  const CVector b = CVector::Ones(4);
  const CVector x = SparseLU(a).solve(b);
  for (int i = 0; i < 4; ++i) EXPECT_LT(std::abs(x(i) - 1.0 / Complex(i + 1, -0.5 * i)), 1e-15);
}

TEST(SparseLU, RandomAgainstDenseLU) {
  std::mt19937 rng(3);
  for (int k = 0; k < 5; ++k) {
    const SparseMatrix a = random_sparse(50, 0.1, rng, k % 2 == 0);
    const CVector b = random_vector(50, rng);
    const CVector x = SparseLU(a).solve(b);
    const CVector ref = dense_solve(CMatrix(a), b);
    EXPECT_LT((x - ref).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(SparseLU, DuplicateRowsAreSingular) {
  SparseMatrix a(3, 3);
  std::vector<Eigen::Triplet<Complex>> t{{0, 0, 1.0}, {0, 1, 2.0}, {1, 0, 1.0}, {1, 1, 2.0}, {2, 2, 3.0}};
  a.setFromTriplets(t.begin(), t.end());
  try {
    SparseLU lu(a);
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    EXPECT_GE(e.index(), 0);
  }
}

TEST(SparseLU, NonSquareRejected) {
  SparseMatrix a(3, 2);
  EXPECT_THROW(SparseLU{a}, std::invalid_argument);
}

TEST(SparseLU, EmptyFactorizationCannotSolve) {
  const SparseLU lu;
  EXPECT_THROW(lu.solve(CVector::Zero(1)), std::logic_error);
}

TEST(SparseLU, FactorReusedForManyRightHandSides) {
  std::mt19937 rng(4);
  const SparseMatrix a = random_sparse(40, 0.15, rng, true);
  const SparseLU lu(a);
  const SparseLU copy = lu;
  for (int k = 0; k < 100; ++k) {
    const CVector b = random_vector(40, rng);
    const CVector x = (k % 2 ? copy : lu).solve(b);
    EXPECT_LT((a * x - b).norm() / b.norm(), 1e-12);
  }
}

TEST(DenseSolve, Identity) {
  std::mt19937 rng(5);
  const CVector b = random_vector(6, rng);
  EXPECT_EQ(dense_solve(CMatrix::Identity(6, 6), b), b);
}

TEST(DenseSolve, HilbertMatchesExactInverse) {
  const int n = 5;
  RMatrix h(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) h(i, j) = 1.0 / (i + j + 1);
  }
  // exact integer inverse of the 5x5 Hilbert matrix
  RMatrix inv(n, n);
  inv << 25, -300, 1050, -1400, 630, -300, 4800, -18900, 26880, -12600, 1050, -18900, 79380, -117600, 56700, -1400,
      26880, -117600, 179200, -88200, 630, -12600, 56700, -88200, 44100;
  const RMatrix x = dense_solve(h, RMatrix::Identity(n, n));
  EXPECT_LT((x - inv).cwiseAbs().maxCoeff() / inv.cwiseAbs().maxCoeff(), 1e-8);
}

TEST(DenseSolve, PermutationPermutes) {
  RMatrix p = RMatrix::Zero(3, 3);
  p(0, 2) = p(1, 0) = p(2, 1) = 1;
  const Eigen::Vector3d b(1, 2, 3);
  const RMatrix x = dense_solve(p, RMatrix(b));
  EXPECT_EQ(x(0), 2);
  EXPECT_EQ(x(1), 3);
  EXPECT_EQ(x(2), 1);
}

TEST(DenseSolve, SingularReportsPivot) {
  RMatrix a(2, 2);
  a << 1, 2, 2, 4;
  try {
    dense_solve(a, RMatrix::Identity(2, 2));
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    EXPECT_EQ(e.index(), 1);
  }
}
