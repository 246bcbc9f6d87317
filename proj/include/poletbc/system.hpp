#pragma once

#include <array>
#include <variant>
#include <vector>

#include "poletbc/assembly.hpp"
#include "poletbc/linalg.hpp"
#include "poletbc/types.hpp"

namespace poletbc {

/// Frequency dependent s0 = i omega of the second-order equations. It is
/// never evaluated; the wave scheme substitutes s0 -> -d/dt.
struct FrequencyDependent {
  bool operator==(const FrequencyDependent&) const = default;
};

using S0 = std::variant<Complex, FrequencyDependent>;

S0 s0_default(Equation kind);

/// Throws ConfigError for the symbolic value.
Complex numeric_s0(const S0& s0);

struct ProblemSpec {
  Equation kind = Equation::schrodinger;
  double c = 1.0;
  Point d = Point::Zero();
  double k = 0.0;
  S0 s0 = Complex(-1.0, -1.0);

  /// Parameters of the experiments for each family.
  static ProblemSpec defaults(Equation kind);

  /// Throws ConfigError when the parameters do not fit the family.
  void validate() const;

  PhysicalParameters physical() const { return {c, d, k}; }
};

/// First-order form M u' = F u of the semi-discrete system at a numeric s0.
///   M = M0 + Mm1/s0 + Mm2/s0^2,  L = L0 + s0 L1,  D = D0 + Dm1/s0
///   F = -i c^2 L                      (Schrodinger, i u_t = c^2 Lap u)
///   F = c^2 L - D - k^2 M             (drift-diffusion, heat)
struct SemiDiscrete {
  Complex s0;
  SparseMatrix M, L, D, F;
};

/// Throws ConfigError for second-order families or a symbolic s0.
SemiDiscrete build_semidiscrete(const GlobalSystem& global, const ProblemSpec& spec);

/// Raw matrices for the second-order scheme, with c^2 and k^2 applied by
/// the stepper.
struct WaveOperators {
  SparseMatrix M0, Mm1, Mm2, L0, L1;
  double c = 1.0, k = 0.0;
};

/// Throws ConfigError for first-order families.
WaveOperators build_wave_operators(const GlobalSystem& global, const ProblemSpec& spec);

/// Crank-Nicolson: (M/h - F/2) u1 = (M/h + F/2) u0, factorized once.
class TrapezoidalStepper {
 public:
  TrapezoidalStepper(const SparseMatrix& M, const SparseMatrix& F, double h);

  CVector step(const CVector& u) const;
  double dt() const { return h_; }

 private:
  double h_;
  SparseMatrix rhs_;
  SparseLU lu_;
};

struct ButcherTableau {
  Eigen::Matrix3d A;
  Eigen::Vector3d b, c;
};

/// Three-stage Radau IIA tableau (order 5).
const ButcherTableau& radau5_tableau();

/// R(z) = (1 + 2z/5 + z^2/20) / (1 - 3z/5 + 3z^2/20 - z^3/60).
Complex radau5_stability(Complex z);

enum class RadauSolve { decoupled, block };

/// Radau IIA(5) for M u' = F u.
///   block:     (I x M - h A x F) Z = h c x F u, u1 = u + Z_3
///   decoupled: A^{-1} = T diag(lambda) T^{-1} splits the stage system into
///              three solves with (lambda_i M - h F).
class Radau5Stepper {
 public:
  Radau5Stepper(const SparseMatrix& M, const SparseMatrix& F, double h, RadauSolve mode = RadauSolve::decoupled);

  CVector step(const CVector& u) const;
  double dt() const { return h_; }
  RadauSolve mode() const { return mode_; }

 private:
  double h_;
  RadauSolve mode_;
  SparseMatrix F_;
  std::vector<SparseLU> lu_;
  std::array<Complex, 3> weight_{};  // T_3i (T^{-1} 1)_i
};

/// Implicit scheme for p(d/dt) = d^2/dt^2 with s0 -> -d/dt:
///   M0 (u+ - 2u + u-)/h^2 - Mm1 (u+ - u-)/(2h) + Mm2 <u>
///     = c^2 L0 <u> - c^2 L1 (u+ - u-)/(2h) - k^2 M0 <u>,
/// <u> = (u+ + 2u + u-)/4.
class WaveStepper {
 public:
  WaveStepper(const WaveOperators& ops, double h);

  /// First step from u0 with zero initial velocity: one trapezoidal step of
  /// the first-order system (u, v).
  CVector bootstrap(const CVector& u0) const;

  CVector step(const CVector& u, const CVector& u_prev) const;
  double dt() const { return h_; }

 private:
  double h_;
  SparseMatrix M0_, B_, K_;  // M0 v' = B v + K u
  SparseLU lu_, lu_boot_;
  SparseMatrix boot_rhs_;
};

/// Closed-form solutions of the experiments.
Complex exact_schrodinger(double x, double y, double t);
double exact_driftdiffusion(double x, double y, double t, const Point& d = Point(1.5, 1.5), double c = 0.5);

/// Radial solution of u_tt = c^2 Lap u - k^2 u with u(0) = exp(-2 r^2),
/// u_t(0) = 0, as a Hankel integral evaluated by quadrature and tabulated in r.
class RadialWaveReference {
 public:
  RadialWaveReference(double c, double k, double r_max);

  /// Values at the given points at time t.
  RVector evaluate(const std::vector<Point>& points, double t) const;

 private:
  double c_, k_, dr_;
  std::vector<double> kappa_, weight_;
  RMatrix bessel_;  // J0(kappa_q r_j), r_j = j dr
};

/// ||u_h - u||_2 / ||u||_2 over the first `u_exact.size()` entries of u_h.
double relative_l2_error(const CVector& u_h, const CVector& u_exact);

/// E = 1/2 v^H M v + 1/2 c^2 w^H K w + 1/2 k^2 w^H M w, v = (u - u_prev)/h,
/// w = (u + u_prev)/2, over the FE DOFs with the interior mass M and
/// stiffness K.
double discrete_energy(const SparseMatrix& M_fe, const SparseMatrix& K_fe, double c, double k, const CVector& u,
                       const CVector& u_prev, double h);

}  // namespace poletbc
