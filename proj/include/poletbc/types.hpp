#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace poletbc {

using Real = double;
using Complex = std::complex<double>;

using Point = Eigen::Vector2d;
using RVector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;

// Compressed sparse row storage, complex entries for every problem family.
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor, int>;

// Equation families of  p(d/dt) u = c^2 Lap u - d.grad u - k^2 u.
enum class Equation { schrodinger, driftdiffusion, heat, wave, kleingordon };

inline bool is_second_order(Equation e) {
  return e == Equation::wave || e == Equation::kleingordon;
}

std::string to_string(Equation e);
Equation equation_from_string(const std::string& name);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Linear solve failures. `index` is the pivot (factorization) or time step
// (driver) at which the failure was detected, -1 when unknown.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, long index = -1) : Error(what), index_(index) {}
  long index() const noexcept { return index_; }

 private:
  long index_;
};

}  // namespace poletbc
