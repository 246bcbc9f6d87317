#include "poletbc/hardy.hpp"

#include "poletbc/system.hpp"

namespace poletbc {

Complex mobius_pole_image(Complex pole, Complex s0) {
  if (pole == s0) throw std::domain_error("mobius_pole_image: pole coincides with s0");
  return (pole + s0) / (pole - s0);
}

CVector HardyCoefficients::stacked() const {
  CVector v(F.size() + 1);
  v(0) = f0;
  v.tail(F.size()) = F;
  return v;
}

CVector disc_coefficients(const HardyCoefficients& f, Complex s0) {
  if (f.n_xi() < 1) throw std::invalid_argument("disc_coefficients: empty coefficient vector");
  return t_minus_matrix<double>(f.n_xi()).cast<Complex>() * f.stacked() / (2.0 * s0);
}

Complex evaluate_disc(const HardyCoefficients& f, Complex s0, Complex z) {
  const CVector c = disc_coefficients(f, s0);
  Complex acc = 0;
  for (Eigen::Index j = c.size() - 1; j >= 0; --j) acc = acc * z + c(j);
  return acc;
}

Complex hardy_pairing(const HardyCoefficients& f, const HardyCoefficients& g, Complex s0) {
  if (f.n_xi() != g.n_xi()) throw std::invalid_argument("hardy_pairing: truncation mismatch");
  const CVector a = disc_coefficients(f, s0);
  const CVector b = disc_coefficients(g, s0);
  return -2.0 * s0 * (a.transpose() * b)(0);
}

bool PoleRegion::contains(Complex z) const {
  switch (equation) {
    case Equation::schrodinger:
      return z.real() > -z.imag();
    case Equation::driftdiffusion:
    case Equation::heat:
      return z.real() > 0;
    case Equation::wave:
    case Equation::kleingordon:
      return z.imag() < 0;
  }
  return false;
}

PoleRegion pole_region(Equation equation) {
  const S0 s0 = s0_default(equation);
  if (const auto* value = std::get_if<Complex>(&s0)) return {equation, *value};
  return {equation, std::nullopt};
}

}  // namespace poletbc
