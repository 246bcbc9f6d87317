#include "poletbc/linalg.hpp"

#include <regex>

#include <Eigen/SparseLU>
#ifdef POLETBC_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

namespace poletbc {

CVector matvec(const SparseMatrix& a, const CVector& x) {
  if (a.cols() != x.size()) {
    throw std::invalid_argument("matvec: dimension mismatch");
  }
  return a * x;
}

namespace {

using ColMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor, int>;
using EigenLU = Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>>;

long trailing_index(const std::string& msg) {
  static const std::regex number(R"((\d+)\s*$)");
  std::smatch m;
  if (std::regex_search(msg, m, number)) return std::stol(m[1]);
  return -1;
}

[[noreturn]] void report_singular(const EigenLU& lu) {
  const std::string msg = lu.lastErrorMessage();
  throw SolverError("SparseLU: singular matrix (" + msg + ")", trailing_index(msg));
}

}  // namespace

struct SparseLU::Impl {
  ColMatrix matrix;  // the UMFPACK wrapper refers to it during solves
#ifdef POLETBC_HAVE_UMFPACK
  Eigen::UmfPackLU<ColMatrix> lu;
#else
  EigenLU lu;
#endif
};

SparseLU::SparseLU(const SparseMatrix& a) : n_(a.rows()) {
  if (a.rows() != a.cols()) throw std::invalid_argument("SparseLU: matrix is not square");
  auto impl = std::make_shared<Impl>();
  impl->matrix = a;
  impl->matrix.makeCompressed();
  const ColMatrix& col = impl->matrix;
  impl->lu.analyzePattern(col);
  impl->lu.factorize(col);
  if (impl->lu.info() != Eigen::Success) {
#ifdef POLETBC_HAVE_UMFPACK
    // Only the supernodal factorization reports the failing pivot.
    EigenLU check;
    check.analyzePattern(col);
    check.factorize(col);
    if (check.info() != Eigen::Success) report_singular(check);
    throw SolverError("SparseLU: singular matrix", -1);
#else
    report_singular(impl->lu);
#endif
  }
  impl_ = std::move(impl);
}

CVector SparseLU::solve(const CVector& b) const {
  if (!impl_) throw std::logic_error("SparseLU::solve: no factorization");
  if (b.size() != n_) throw std::invalid_argument("SparseLU::solve: dimension mismatch");
  return impl_->lu.solve(b);
}

}  // namespace poletbc
