// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails. `acceptance 3 9` runs a subset.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "oracles.hpp"
#include "poletbc/experiment.hpp"

using namespace poletbc;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string join(const std::vector<double>& v, const char* f = "%.3g") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(f, v[i]);
  return s;
}

// ---------------------------------------------------------------- 1

Outcome hardy_symbolic() {
  int mismatches = 0;
  for (int n = 1; n <= 8; ++n) {
    const Eigen::MatrixXi tp = t_plus_matrix(n), tm = t_minus_matrix(n), p = p_matrix(n);
    for (int k = 0; k <= n; ++k) {
      oracle::Poly F(n, 0), c(n + 1, 0);
      if (k > 0) F[k - 1] = 1;
      c[k] = 1;
      const oracle::Poly plus = oracle::tau_twice(k == 0, F, +1), minus = oracle::tau_twice(k == 0, F, -1);
      const oracle::Poly pc = oracle::p_twice(c);
      for (int i = 0; i <= n; ++i) {
        mismatches += tp(i, k) != plus[i];
        mismatches += tm(i, k) != minus[i];
        mismatches += p(i, k) != pc[i];
      }
    }
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatched entries for n_xi <= 8"};
}

// ---------------------------------------------------------------- 2

Outcome pairing_identity() {
  HardyCoefficients e{1.0, CVector::Zero(5)};
  const double exp_case = std::abs(hardy_pairing(e, e, -1.0) - 0.5);
  std::mt19937 rng(20);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> nd(1, 12);
  const Complex s0s[] = {Complex(-1), Complex(-5), Complex(-1, -1), Complex(-0.5, 2)};
  double worst = 0;
  for (int k = 0; k < 20; ++k) {
    const int n = nd(rng);
    HardyCoefficients f{Complex(g(rng), g(rng)), CVector(n)}, h{Complex(g(rng), g(rng)), CVector(n)};
    for (int j = 0; j < n; ++j) {
      f.F(j) = Complex(g(rng), g(rng));
      h.F(j) = Complex(g(rng), g(rng));
    }
    const Complex s0 = s0s[k % 4];
    worst = std::max(worst, std::abs(hardy_pairing(f, h, s0) - oracle::pairing_quadrature(f, h, s0)));
  }
  return {worst <= 1e-12 && exp_case <= 1e-12,
          "max |closed - quadrature| = " + fmt("%.2e", worst) + ", |<e,e> - 0.5| = " + fmt("%.1e", exp_case)};
}

// ---------------------------------------------------------------- 3

Outcome schur_equivalence() {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> nd(1, 8), od(1, 4);
  std::uniform_real_distribution<double> u(0.2, 5.0);
  double worst = 0;
  for (int k = 0; k < 50; ++k) {
    const ExteriorElementGeometry geom = oracle::random_geometry(rng);
    const int n_xi = nd(rng), order = od(rng);
    const Complex s0 = k % 2 ? Complex(-u(rng)) : Complex(-u(rng), -u(rng));
    const LocalExteriorMatrices m = local_exterior(geom, n_xi, order);
    const CMatrix expected = oracle::exterior_direct_part(geom, n_xi, order, s0) +
                             oracle::kron(eta_blocks(geom, order).L11, oracle::l11_explicit(geom, n_xi, s0));
    const double err = (oracle::eliminate_auxiliary(m, s0) - expected).cwiseAbs().maxCoeff() /
                       std::max(1.0, expected.cwiseAbs().maxCoeff());
    worst = std::max(worst, err);
  }
  return {worst <= 1e-10, "50 draws, max relative deviation " + fmt("%.2e", worst)};
}

// ---------------------------------------------------------------- 4, 5

std::string time_detail(const std::vector<TimeRow>& rows) {
  std::vector<double> err, rate;
  for (const auto& r : rows) {
    err.push_back(r.max_error);
    if (r.rate) rate.push_back(*r.rate);
  }
  std::string s = "errors " + join(err) + ", rates " + join(rate, "%.2f");
  if (rows.size() > 1 && rows[1].self_rate) s += ", self-convergence rate " + fmt("%.2f", *rows[1].self_rate);
  return s;
}

Outcome temporal_schrodinger() {
  ExperimentConfig c = ExperimentConfig::defaults(Equation::schrodinger);
  c.fe_order = 3;
  c.refinements = 3;
  c.n_xi = 20;
  c.t_end = 2;
  c.n_outputs = 41;
  const auto rows = sweep_time(c, {1.0 / 400, 1.0 / 800, 1.0 / 1600});
  bool pass = true;
  for (const auto& r : rows) {
    if (r.rate) pass = pass && *r.rate >= 1.7 && *r.rate <= 2.3;
  }
  return {pass, time_detail(rows)};
}

Outcome temporal_driftdiffusion() {
  ExperimentConfig c = ExperimentConfig::defaults(Equation::driftdiffusion);
  c.fe_order = 4;
  c.refinements = 2;
  c.n_xi = 30;
  c.n_outputs = 25;
  // The errors against the exact solution reach the spatial floor at 1/40,
  // so the integrator's rate is read from the self-convergence of the runs.
  const auto rows = sweep_time(c, {1.0 / 10, 1.0 / 20, 1.0 / 40});
  const bool pass = rows[1].self_rate && *rows[1].self_rate >= 4.5;
  return {pass, time_detail(rows)};
}

// ---------------------------------------------------------------- 6

Outcome spatial_convergence() {
  bool pass = true;
  std::string detail;
  for (Equation eq : {Equation::schrodinger, Equation::driftdiffusion}) {
    ExperimentConfig c = ExperimentConfig::defaults(eq);
    if (eq == Equation::schrodinger) {
      c.n_xi = 20;
      c.dt = 1.0 / 1600;
      c.t_end = 2;
      c.n_outputs = 21;
    } else {
      c.n_xi = 30;
      c.dt = 1.0 / 40;
      c.n_outputs = 25;
    }
    detail += to_string(eq) + ":";
    for (int order = 1; order <= 4; ++order) {
      const auto rows = sweep_space(c, {order}, {1, 2, 3});
      std::vector<double> rates;
      for (const auto& r : rows) {
        if (!r.rate) continue;
        rates.push_back(*r.rate);
        pass = pass && *r.rate >= order - 0.3;
      }
      detail += " p" + std::to_string(order) + "[" + join(rates, "%.2f") + "]";
    }
    detail += " ";
  }
  return {pass, "rates by order " + detail};
}

// ---------------------------------------------------------------- 7

// Index of the first entry that improves on its predecessor by less than 20%.
std::size_t saturation(const std::vector<double>& e) {
  for (std::size_t i = 1; i < e.size(); ++i) {
    if (e[i] > 0.8 * e[i - 1]) return i;
  }
  return e.size();
}

Outcome nxi_decay() {
  ExperimentConfig s = ExperimentConfig::defaults(Equation::schrodinger);
  s.fe_order = 4;
  s.refinements = 3;
  s.dt = 1.0 / 1600;
  s.t_end = 1;
  s.n_outputs = 21;
  const std::vector<int> ns{2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
  std::vector<double> es;
  for (const auto& r : sweep_nxi(s, ns)) es.push_back(r.max_error);
  const std::size_t sat = saturation(es);
  bool convex = sat >= 3;
  for (std::size_t i = 1; i + 1 < sat; ++i) {
    const double second = std::log10(es[i + 1]) - 2 * std::log10(es[i]) + std::log10(es[i - 1]);
    convex = convex && second >= -0.05;
  }
  const bool s_pass = es.back() <= 1e-2 * es.front() && convex;

  ExperimentConfig d = ExperimentConfig::defaults(Equation::driftdiffusion);
  d.fe_order = 4;
  d.refinements = 2;
  d.dt = 1.0 / 40;
  d.n_outputs = 25;
  std::vector<double> ed;
  for (const auto& r : sweep_nxi(d, {5, 30})) ed.push_back(r.max_error);
  const bool d_pass = ed[1] <= 1e-2 * ed[0];
  return {s_pass && d_pass, "schrodinger n_xi=2..20: " + join(es) + " (saturation after n_xi=" +
                                std::to_string(ns[sat - 1]) + (convex ? ", convex" : ", NOT convex") +
                                "); driftdiffusion n_xi=5,30: " + join(ed)};
}

// ---------------------------------------------------------------- 8

std::vector<double> energies(const RunResult& r) {
  std::vector<double> e;
  for (const auto& row : r.series) e.push_back(row.energy);
  return e;
}

Outcome wave_behaviour() {
  ExperimentConfig a = ExperimentConfig::defaults(Equation::wave);
  a.fe_order = 1;
  a.n_xi = 10;
  a.t_end = 20;
  a.n_outputs = 41;
  double worst = 0;
  for (int level = 0; level <= 3; ++level) {
    a.refinements = level;
    const auto e = energies(run(a, {{}, false}));
    worst = std::max(worst, *std::max_element(e.begin(), e.end()) / e.front());
  }
  const bool a_pass = worst <= 10;

  // The growth sets in after t = 30 at these parameters, so the run is
  // extended to T = 60.
  ExperimentConfig b = ExperimentConfig::defaults(Equation::wave);
  b.fe_order = 3;
  b.refinements = 3;
  b.n_xi = 15;
  b.t_end = 60;
  b.n_outputs = 61;
  const auto e = energies(run(b, {{}, false}));
  const std::size_t start = 2 * (e.size() - 1) / 3;
  bool monotone = true;
  for (std::size_t i = start + 1; i < e.size(); ++i) monotone = monotone && e[i] > e[i - 1];
  const double growth = e.back() / e[start];
  const bool b_pass = monotone && growth >= 10;
  return {a_pass && b_pass, "(a) P1 levels 0-3, max E/E0 = " + fmt("%.3g", worst) + "; (b) P3 level 3, E(40) = " +
                                fmt("%.3g", e[start]) + ", E(60) = " + fmt("%.3g", e.back()) + ", growth x" +
                                fmt("%.3g", growth) + (monotone ? ", monotone" : ", NOT monotone")};
}

// ---------------------------------------------------------------- 9

Outcome interior_conservation() {
  const Mesh mesh = refine_uniform(build_base_mesh(4, 0.5, 2), 2);
  AssemblyOptions opt;
  opt.exterior = false;
  const GlobalSystem sys = assemble_global(mesh, 2, 0, {1.0, Point::Zero(), 0.0}, opt);
  std::vector<int> keep;
  for (int i = 0; i < sys.dofs.n_fe; ++i) {
    if (!sys.dofs.is_boundary(i)) keep.push_back(i);
  }
  const int n = static_cast<int>(keep.size());
  SparseMatrix p(n, sys.dofs.n_fe);
  for (int i = 0; i < n; ++i) p.insert(i, keep[i]) = 1.0;
  const SparseMatrix pt = p.transpose();
  WaveOperators ops;
  ops.M0 = p * sys.M_fe * pt;
  const SparseMatrix K = p * sys.K_fe * pt;
  ops.L0 = -K;
  ops.Mm1 = ops.Mm2 = ops.L1 = SparseMatrix(n, n);
  const double h = 1.0 / 40;
  const WaveStepper stepper(ops, h);
  CVector prev(n);
  for (int i = 0; i < n; ++i) prev(i) = std::exp(-2.0 * sys.dofs.fe_points[keep[i]].squaredNorm());
  CVector u = stepper.bootstrap(prev);
  const double e0 = discrete_energy(ops.M0, K, 1, 0, u, prev, h);
  double drift = 0;
  for (int step = 0; step < 100; ++step) {
    CVector next = stepper.step(u, prev);
    prev = std::move(u);
    u = std::move(next);
    drift = std::max(drift, std::abs(discrete_energy(ops.M0, K, 1, 0, u, prev, h) - e0) / e0);
  }
  return {drift <= 1e-10, "max relative energy drift over 100 steps " + fmt("%.2e", drift)};
}

// ---------------------------------------------------------------- 10

Outcome residual_oracles() {
  std::mt19937 rng(10);
  std::uniform_real_distribution<double> x(-2, 2), ts(0.1, 2), td(0.2, 2);
  double rs = 0, rd = 0;
  for (int k = 0; k < 10; ++k) {
    rs = std::max(rs, std::abs(oracle::schrodinger_residual(x(rng), x(rng), ts(rng), 1e-4)));
    rd = std::max(rd, std::abs(oracle::driftdiffusion_residual(x(rng), x(rng), td(rng), 1e-4)));
  }
  return {rs <= 1e-5 && rd <= 1e-5,
          "schrodinger residual " + fmt("%.2e", rs) + ", driftdiffusion residual " + fmt("%.2e", rd)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Hardy operator oracle", hardy_symbolic},
      {"pairing identity", pairing_identity},
      {"Schur complement equivalence", schur_equivalence},
      {"temporal convergence, Schrodinger", temporal_schrodinger},
      {"temporal convergence, drift-diffusion", temporal_driftdiffusion},
      {"spatial convergence", spatial_convergence},
      {"super-algebraic n_xi decay", nxi_decay},
      {"wave equation behaviour", wave_behaviour},
      {"interior-only energy conservation", interior_conservation},
      {"exact-solution residuals", residual_oracles},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!selected.empty() && !selected.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.pass;
    std::printf("criterion %2d %s  %s: %s [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
