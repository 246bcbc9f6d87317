#include "poletbc/system.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "poletbc/fe.hpp"

namespace poletbc {

std::string to_string(Equation e) {
  switch (e) {
    case Equation::schrodinger:
      return "schrodinger";
    case Equation::driftdiffusion:
      return "driftdiffusion";
    case Equation::heat:
      return "heat";
    case Equation::wave:
      return "wave";
    case Equation::kleingordon:
      return "kleingordon";
  }
  return "unknown";
}

Equation equation_from_string(const std::string& name) {
  for (Equation e : {Equation::schrodinger, Equation::driftdiffusion, Equation::heat, Equation::wave,
                     Equation::kleingordon}) {
    if (to_string(e) == name) return e;
  }
  throw ConfigError("unknown equation '" + name + "'");
}

S0 s0_default(Equation kind) {
  switch (kind) {
    case Equation::schrodinger:
      return Complex(-1.0, -1.0);
    case Equation::driftdiffusion:
    case Equation::heat:
      return Complex(-5.0, 0.0);
    case Equation::wave:
    case Equation::kleingordon:
      return FrequencyDependent{};
  }
  return FrequencyDependent{};
}

Complex numeric_s0(const S0& s0) {
  if (const auto* v = std::get_if<Complex>(&s0)) return *v;
  throw ConfigError("s0 is frequency dependent (i omega) and has no numeric value");
}

ProblemSpec ProblemSpec::defaults(Equation kind) {
  ProblemSpec p;
  p.kind = kind;
  p.s0 = s0_default(kind);
  switch (kind) {
    case Equation::schrodinger:
    case Equation::wave:
      break;
    case Equation::driftdiffusion:
      p.c = 0.5;
      p.d = Point(1.5, 1.5);
      break;
    case Equation::heat:
      p.c = 0.5;
      break;
    case Equation::kleingordon:
      p.k = 1.0;
      break;
  }
  return p;
}

void ProblemSpec::validate() const {
  const std::string name = to_string(kind);
  if (!std::isfinite(c) || !(c > 0)) throw ConfigError(name + ": c must be positive");
  if (!d.allFinite() || !std::isfinite(k)) throw ConfigError(name + ": parameters must be finite");
  if (kind != Equation::driftdiffusion && !d.isZero(0)) throw ConfigError(name + ": requires d = 0");
  if (kind != Equation::driftdiffusion && kind != Equation::kleingordon && k != 0) {
    throw ConfigError(name + ": requires k = 0");
  }
  const bool symbolic = std::holds_alternative<FrequencyDependent>(s0);
  if (is_second_order(kind) && !symbolic) throw ConfigError(name + ": s0 must be frequency dependent");
  if (!is_second_order(kind)) {
    if (symbolic) throw ConfigError(name + ": s0 must be numeric");
    const Complex v = std::get<Complex>(s0);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || v == Complex(0)) {
      throw ConfigError(name + ": s0 must be finite and nonzero");
    }
  }
}

SemiDiscrete build_semidiscrete(const GlobalSystem& g, const ProblemSpec& spec) {
  spec.validate();
  if (is_second_order(spec.kind)) throw ConfigError(to_string(spec.kind) + ": no first-order semi-discrete form");
  SemiDiscrete s;
  s.s0 = numeric_s0(spec.s0);
  s.M = g.M0 + (1.0 / s.s0) * g.Mm1 + (1.0 / (s.s0 * s.s0)) * g.Mm2;
  s.L = g.L0 + s.s0 * g.L1;
  s.D = g.D0 + (1.0 / s.s0) * g.Dm1;
  const double c2 = spec.c * spec.c;
  if (spec.kind == Equation::schrodinger) {
    s.F = Complex(0.0, -c2) * s.L;
  } else {
    s.F = Complex(c2) * s.L - s.D - Complex(spec.k * spec.k) * s.M;
  }
  s.F.prune(Complex(0.0));
  return s;
}

WaveOperators build_wave_operators(const GlobalSystem& g, const ProblemSpec& spec) {
  spec.validate();
  if (!is_second_order(spec.kind)) throw ConfigError(to_string(spec.kind) + ": not a second-order equation");
  return {g.M0, g.Mm1, g.Mm2, g.L0, g.L1, spec.c, spec.k};
}

TrapezoidalStepper::TrapezoidalStepper(const SparseMatrix& M, const SparseMatrix& F, double h)
    : h_(h), rhs_(Complex(1.0 / h) * M + Complex(0.5) * F), lu_(SparseMatrix(Complex(1.0 / h) * M - Complex(0.5) * F)) {
  if (!(h > 0)) throw std::invalid_argument("TrapezoidalStepper: h must be positive");
}

CVector TrapezoidalStepper::step(const CVector& u) const { return lu_.solve(rhs_ * u); }

const ButcherTableau& radau5_tableau() {
  static const ButcherTableau t = [] {
    const double s6 = std::sqrt(6.0);
    ButcherTableau r;
    r.A << (88 - 7 * s6) / 360, (296 - 169 * s6) / 1800, (-2 + 3 * s6) / 225,  //
        (296 + 169 * s6) / 1800, (88 + 7 * s6) / 360, (-2 - 3 * s6) / 225,     //
        (16 - s6) / 36, (16 + s6) / 36, 1.0 / 9;
    r.b = r.A.row(2).transpose();
    r.c << (4 - s6) / 10, (4 + s6) / 10, 1.0;
    return r;
  }();
  return t;
}

Complex radau5_stability(Complex z) {
  return (1.0 + 2.0 * z / 5.0 + z * z / 20.0) / (1.0 - 3.0 * z / 5.0 + 3.0 * z * z / 20.0 - z * z * z / 60.0);
}

Radau5Stepper::Radau5Stepper(const SparseMatrix& M, const SparseMatrix& F, double h, RadauSolve mode)
    : h_(h), mode_(mode), F_(F) {
  if (!(h > 0)) throw std::invalid_argument("Radau5Stepper: h must be positive");
  if (M.rows() != F.rows() || M.cols() != F.cols()) throw std::invalid_argument("Radau5Stepper: size mismatch");
  const ButcherTableau& tab = radau5_tableau();
  if (mode == RadauSolve::decoupled) {
    const Eigen::Matrix3d Ainv = tab.A.inverse();
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(Ainv.cast<Complex>());
    const Eigen::Matrix3cd T = es.eigenvectors();
    const Eigen::Vector3cd rhs = T.partialPivLu().solve(Eigen::Vector3cd::Ones());
    for (int i = 0; i < 3; ++i) {
      weight_[i] = T(2, i) * rhs(i);
      lu_.emplace_back(SparseMatrix(es.eigenvalues()(i) * M - Complex(h) * F));
    }
    return;
  }
  const Eigen::Index n = M.rows();
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(3 * M.nonZeros() + 9 * F.nonZeros());
  for (int bi = 0; bi < 3; ++bi) {
    for (int bj = 0; bj < 3; ++bj) {
      if (bi == bj) {
        for (int r = 0; r < M.outerSize(); ++r) {
          for (SparseMatrix::InnerIterator it(M, r); it; ++it) trip.emplace_back(bi * n + r, bj * n + it.col(), it.value());
        }
      }
      const double s = -h * tab.A(bi, bj);
      for (int r = 0; r < F.outerSize(); ++r) {
        for (SparseMatrix::InnerIterator it(F, r); it; ++it) trip.emplace_back(bi * n + r, bj * n + it.col(), s * it.value());
      }
    }
  }
  SparseMatrix block(3 * n, 3 * n);
  block.setFromTriplets(trip.begin(), trip.end());
  lu_.emplace_back(block);
}

CVector Radau5Stepper::step(const CVector& u) const {
  const CVector Fu = F_ * u;
  if (mode_ == RadauSolve::decoupled) {
    CVector out = u;
    for (int i = 0; i < 3; ++i) out += (h_ * weight_[i]) * lu_[i].solve(Fu);
    return out;
  }
  const ButcherTableau& tab = radau5_tableau();
  const Eigen::Index n = u.size();
  CVector rhs(3 * n);
  for (int i = 0; i < 3; ++i) rhs.segment(i * n, n) = (h_ * tab.c(i)) * Fu;
  const CVector z = lu_[0].solve(rhs);
  return u + z.tail(n);
}

WaveStepper::WaveStepper(const WaveOperators& ops, double h) : h_(h) {
  if (!(h > 0)) throw std::invalid_argument("WaveStepper: h must be positive");
  const double c2 = ops.c * ops.c, k2 = ops.k * ops.k;
  M0_ = ops.M0;
  B_ = ops.Mm1 - Complex(c2) * ops.L1;
  K_ = Complex(c2) * ops.L0 - ops.Mm2 - Complex(k2) * ops.M0;
  const Complex ih2(1.0 / (h * h)), ih(1.0 / h);
  lu_ = SparseLU(SparseMatrix(ih2 * M0_ - (0.5 * ih) * B_ - Complex(0.25) * K_));
  const SparseMatrix boot = Complex(2.0) * ih2 * M0_ - ih * B_;
  lu_boot_ = SparseLU(SparseMatrix(boot - Complex(0.5) * K_));
  boot_rhs_ = boot + Complex(0.5) * K_;
}

CVector WaveStepper::bootstrap(const CVector& u0) const { return lu_boot_.solve(boot_rhs_ * u0); }

CVector WaveStepper::step(const CVector& u, const CVector& u_prev) const {
  const double ih2 = 1.0 / (h_ * h_);
  CVector rhs = M0_ * (ih2 * (2.0 * u - u_prev));
  rhs -= B_ * ((0.5 / h_) * u_prev);
  rhs += K_ * (0.25 * (2.0 * u + u_prev));
  return lu_.solve(rhs);
}

Complex exact_schrodinger(double x, double y, double t) {
  const Complex i(0.0, 1.0);
  const Complex den = 4.0 * t + i;
  const double r2 = x * x + y * y;
  Complex sum = 0;
  for (double alpha : {1.4, -2.0}) sum += i / den * std::exp((-i * r2 - alpha * (x + y) - 2.0 * alpha * alpha * t) / den);
  return sum;
}

double exact_driftdiffusion(double x, double y, double t, const Point& d, double c) {
  if (!(t > 0)) throw std::domain_error("exact_driftdiffusion: t must be positive");
  const double dx = x - d.x() * t, dy = y - d.y() * t;
  return std::exp(-(dx * dx + dy * dy) / (4.0 * t * c * c)) / t;
}

RadialWaveReference::RadialWaveReference(double c, double k, double r_max) : c_(c), k_(k) {
  // u(r, t) = int_0^inf G(kappa) cos(omega t) J0(kappa r) kappa dkappa,
  // G = exp(-kappa^2/8)/4 is the Hankel transform of exp(-2 r^2).
  constexpr double kappa_max = 16.0, panel = 0.1;
  constexpr int n_r = 3000;
  const fe::Rule1D g = fe::gauss_legendre(8);
  const int panels = static_cast<int>(std::lround(kappa_max / panel));
  for (int p = 0; p < panels; ++p) {
    for (std::size_t q = 0; q < g.points.size(); ++q) {
      const double kappa = (p + g.points[q]) * panel;
      kappa_.push_back(kappa);
      weight_.push_back(g.weights[q] * panel * 0.25 * std::exp(-kappa * kappa / 8.0) * kappa);
    }
  }
  dr_ = r_max / n_r;
  bessel_.resize(n_r + 2, kappa_.size());
  for (int j = 0; j < n_r + 2; ++j) {
    for (std::size_t q = 0; q < kappa_.size(); ++q) bessel_(j, q) = std::cyl_bessel_j(0.0, kappa_[q] * j * dr_);
  }
}

RVector RadialWaveReference::evaluate(const std::vector<Point>& points, double t) const {
  RVector coeff(kappa_.size());
  for (std::size_t q = 0; q < kappa_.size(); ++q) {
    coeff(q) = weight_[q] * std::cos(std::sqrt(c_ * c_ * kappa_[q] * kappa_[q] + k_ * k_) * t);
  }
  const RVector table = bessel_ * coeff;
  RVector out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double s = points[i].norm() / dr_;
    const auto j = static_cast<Eigen::Index>(s);
    if (j + 1 >= table.size()) throw std::domain_error("RadialWaveReference: point outside tabulated range");
    const double f = s - j;
    out(i) = (1 - f) * table(j) + f * table(j + 1);
  }
  return out;
}

double relative_l2_error(const CVector& u_h, const CVector& u_exact) {
  if (u_h.size() < u_exact.size()) throw std::invalid_argument("relative_l2_error: size mismatch");
  const double ref = u_exact.norm();
  if (!(ref > 0)) throw std::domain_error("relative_l2_error: exact solution has zero norm");
  return (u_h.head(u_exact.size()) - u_exact).norm() / ref;
}

double discrete_energy(const SparseMatrix& M, const SparseMatrix& K, double c, double k, const CVector& u,
                       const CVector& u_prev, double h) {
  const Eigen::Index n = M.rows();
  const CVector v = (u.head(n) - u_prev.head(n)) / h;
  const CVector w = 0.5 * (u.head(n) + u_prev.head(n));
  const Complex e = 0.5 * v.dot(M * v) + 0.5 * c * c * w.dot(K * w) + 0.5 * k * k * w.dot(M * w);
  return e.real();
}

}  // namespace poletbc
