#include "poletbc/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "poletbc/mesh.hpp"

namespace poletbc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

int parse_int(const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(text, &pos);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  }
  if (pos != text.size()) throw ConfigError(key + ": expected an integer, got '" + text + "'");
  return v;
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(const std::string& text) {
  const std::string t = trim(text);
  const auto slash = t.find('/');
  try {
    std::size_t pos = 0;
    if (slash != std::string::npos) {
      const std::string num = trim(t.substr(0, slash)), den = trim(t.substr(slash + 1));
      const double p = std::stod(num, &pos);
      if (pos != num.size()) throw ConfigError("bad number '" + text + "'");
      const double q = std::stod(den, &pos);
      if (pos != den.size()) throw ConfigError("bad number '" + text + "'");
      if (q == 0) throw ConfigError("zero denominator in '" + text + "'");
      return p / q;
    }
    const double v = std::stod(t, &pos);
    if (pos != t.size()) throw ConfigError("bad number '" + text + "'");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("bad number '" + text + "'");
  }
}

ExperimentConfig ExperimentConfig::defaults(Equation equation) {
  ExperimentConfig c;
  c.equation = equation;
  const ProblemSpec p = ProblemSpec::defaults(equation);
  c.c = p.c;
  c.d1 = p.d.x();
  c.d2 = p.d.y();
  c.k = p.k;
  switch (equation) {
    case Equation::schrodinger:
      break;
    case Equation::driftdiffusion:
    case Equation::heat:
      c.fe_order = 3;
      c.n_xi = 30;
      c.dt = 1.0 / 40;
      c.t_start = 0.2;
      c.t_end = 5.0;
      break;
    case Equation::wave:
    case Equation::kleingordon:
      c.fe_order = 1;
      c.dt = 1.0 / 40;
      c.t_end = 30.0;
      break;
  }
  return c;
}

ProblemSpec ExperimentConfig::problem() const {
  ProblemSpec p = ProblemSpec::defaults(equation);
  p.c = c;
  p.d = Point(d1, d2);
  p.k = k;
  if (s0) p.s0 = *s0;
  return p;
}

long ExperimentConfig::steps() const {
  const double span = t_end - t_start;
  const double n = std::round(span / dt);
  if (n < 1 || std::abs(n * dt - span) > 1e-9 * std::max(1.0, std::abs(span))) {
    throw ConfigError("t_end - t_start must be a positive multiple of dt");
  }
  return static_cast<long>(n);
}

std::vector<long> ExperimentConfig::output_steps() const {
  const long n = steps();
  std::vector<long> out;
  for (int j = 0; j < n_outputs; ++j) {
    const long s = std::lround(static_cast<double>(j) * n / (n_outputs - 1));
    if (out.empty() || s != out.back()) out.push_back(s);
  }
  return out;
}

void ExperimentConfig::validate() const {
  if (fe_order < 1 || fe_order > 4) throw ConfigError("fe_order must be in 1..4");
  if (refinements < 0 || refinements > 5) throw ConfigError("refinements must be in 0..5");
  if (n_xi < 1 || n_xi > 51) throw ConfigError("n_xi must be in 1..51");
  if (!(dt > 0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  if (!(t_end > 0) || !std::isfinite(t_end)) throw ConfigError("t_end must be positive");
  if (!(t_start >= 0) || !(t_start < t_end)) throw ConfigError("t_start must be in [0, t_end)");
  if ((equation == Equation::driftdiffusion || equation == Equation::heat) && !(t_start > 0)) {
    throw ConfigError("t_start must be positive for the diffusion families");
  }
  if (n_outputs < 2) throw ConfigError("n_outputs must be >= 2");
  if (!(half_width > 0) || !(chamfer >= 0) || !(chamfer < half_width) || !(base_edge > 0)) {
    throw ConfigError("invalid domain geometry");
  }
  static const std::set<std::string> integrators{"default", "trapezoidal", "radau5", "radau5-block"};
  if (!integrators.count(integrator)) throw ConfigError("unknown integrator '" + integrator + "'");
  if (is_second_order(equation) && integrator != "default") {
    throw ConfigError("second-order equations use the default integrator");
  }
  problem().validate();
  steps();
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> e{
      {"equation", to_string(equation)},
      {"fe_order", std::to_string(fe_order)},
      {"refinements", std::to_string(refinements)},
      {"n_xi", std::to_string(n_xi)},
      {"dt", format_real(dt)},
      {"t_start", format_real(t_start)},
      {"t_end", format_real(t_end)},
      {"n_outputs", std::to_string(n_outputs)},
  };
  if (s0) e.emplace_back("s0", format_real(s0->real()) + "," + format_real(s0->imag()));
  e.insert(e.end(), {{"c", format_real(c)},
                     {"d1", format_real(d1)},
                     {"d2", format_real(d2)},
                     {"k", format_real(k)},
                     {"integrator", integrator},
                     {"half_width", format_real(half_width)},
                     {"chamfer", format_real(chamfer)},
                     {"base_edge", format_real(base_edge)}});
  if (!output.empty()) e.emplace_back("output", output);
  return e;
}

namespace {

ExperimentConfig config_from_pairs(const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::map<std::string, std::string> kv;
  for (const auto& [key, value] : pairs) {
    if (!kv.emplace(key, value).second) throw ConfigError("duplicate key '" + key + "'");
  }
  Equation eq = Equation::schrodinger;
  if (const auto it = kv.find("equation"); it != kv.end()) eq = equation_from_string(it->second);
  ExperimentConfig c = ExperimentConfig::defaults(eq);
  for (const auto& [key, value] : kv) {
    if (key == "equation") {
      continue;
    } else if (key == "fe_order") {
      c.fe_order = parse_int(key, value);
    } else if (key == "refinements") {
      c.refinements = parse_int(key, value);
    } else if (key == "n_xi") {
      c.n_xi = parse_int(key, value);
    } else if (key == "n_outputs") {
      c.n_outputs = parse_int(key, value);
    } else if (key == "dt") {
      c.dt = parse_real(value);
    } else if (key == "t_start") {
      c.t_start = parse_real(value);
    } else if (key == "t_end") {
      c.t_end = parse_real(value);
    } else if (key == "c") {
      c.c = parse_real(value);
    } else if (key == "d1") {
      c.d1 = parse_real(value);
    } else if (key == "d2") {
      c.d2 = parse_real(value);
    } else if (key == "k") {
      c.k = parse_real(value);
    } else if (key == "half_width") {
      c.half_width = parse_real(value);
    } else if (key == "chamfer") {
      c.chamfer = parse_real(value);
    } else if (key == "base_edge") {
      c.base_edge = parse_real(value);
    } else if (key == "integrator") {
      c.integrator = value;
    } else if (key == "output") {
      c.output = value;
    } else if (key == "s0") {
      const auto comma = value.find(',');
      if (comma == std::string::npos) {
        c.s0 = Complex(parse_real(value), 0.0);
      } else {
        c.s0 = Complex(parse_real(value.substr(0, comma)), parse_real(value.substr(comma + 1)));
      }
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  return c;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    pairs.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  ExperimentConfig c = config_from_pairs(pairs);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse_config(in);
}

namespace {

class Reference {
 public:
  Reference(const ExperimentConfig& cfg, const std::vector<Point>& points) : cfg_(cfg), points_(points) {
    if (is_second_order(cfg.equation)) {
      double r_max = 0;
      for (const Point& p : points) r_max = std::max(r_max, p.norm());
      wave_.emplace(cfg.c, cfg.k, 1.01 * r_max);
    }
  }

  CVector at(double t) const {
    const std::size_t n = points_.size();
    CVector u(n);
    switch (cfg_.equation) {
      case Equation::schrodinger:
        for (std::size_t i = 0; i < n; ++i) u(i) = exact_schrodinger(points_[i].x(), points_[i].y(), t);
        break;
      case Equation::driftdiffusion:
      case Equation::heat:
        for (std::size_t i = 0; i < n; ++i) {
          u(i) = exact_driftdiffusion(points_[i].x(), points_[i].y(), t, Point(cfg_.d1, cfg_.d2), cfg_.c);
        }
        break;
      case Equation::wave:
      case Equation::kleingordon:
        if (t == 0) {
          for (std::size_t i = 0; i < n; ++i) u(i) = std::exp(-2.0 * points_[i].squaredNorm());
        } else {
          u = wave_->evaluate(points_, t).cast<Complex>();
        }
        break;
    }
    return u;
  }

 private:
  const ExperimentConfig& cfg_;
  const std::vector<Point>& points_;
  std::optional<RadialWaveReference> wave_;
};

bool finite(const CVector& u) { return u.allFinite(); }

}  // namespace

RunResult run(const ExperimentConfig& cfg, const RunOptions& options) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const ProblemSpec spec = cfg.problem();

  Mesh mesh = build_base_mesh(cfg.half_width, cfg.chamfer, cfg.base_edge);
  mesh = refine_uniform(mesh, cfg.refinements);
  const GlobalSystem global = assemble_global(mesh, cfg.fe_order, cfg.n_xi, spec.physical());
  const DofMap& dofs = global.dofs;
  const std::vector<Point> points(dofs.fe_points.begin(), dofs.fe_points.begin() + dofs.n_fe);
  const Reference reference(cfg, points);

  RunResult result;
  result.config = cfg;
  result.has_energy = is_second_order(cfg.equation);
  result.n_dofs = dofs.n_total;

  const long n_steps = cfg.steps();
  const std::vector<long> outputs = cfg.output_steps();
  std::set<long> snapshot_steps;
  for (double t : options.snapshot_times) {
    const double s = (t - cfg.t_start) / cfg.dt;
    const long si = std::lround(s);
    if (std::abs(s - si) < 1e-6 && si >= 0 && si <= n_steps) snapshot_steps.insert(si);
  }

  CVector u = CVector::Zero(dofs.n_total);
  u.head(dofs.n_fe) = reference.at(cfg.t_start);
  CVector u_prev = u;

  auto time_of = [&](long s) { return cfg.t_start + s * cfg.dt; };
  std::size_t next_output = 0;
  auto record = [&](long s) {
    const double t = time_of(s);
    if (next_output < outputs.size() && outputs[next_output] == s) {
      SeriesRow row;
      row.t = t;
      row.error = relative_l2_error(u, reference.at(t));
      if (result.has_energy) row.energy = discrete_energy(global.M_fe, global.K_fe, cfg.c, cfg.k, u, u_prev, cfg.dt);
      result.series.push_back(row);
      ++next_output;
    }
    if (snapshot_steps.count(s)) {
      result.snapshots.emplace_back(t, u.head(dofs.n_fe));
      result.exact_snapshots.push_back(reference.at(t));
    }
  };

  auto guarded = [&](long s, auto&& fn) {
    try {
      fn();
    } catch (const SolverError& e) {
      throw SolverError(std::string(e.what()) + " at step " + std::to_string(s), s);
    }
    if (!finite(u)) throw SolverError("non-finite state at step " + std::to_string(s), s);
  };

  record(0);
  if (result.has_energy) {
    const WaveOperators ops = build_wave_operators(global, spec);
    std::optional<WaveStepper> stepper;
    guarded(0, [&] { stepper.emplace(ops, cfg.dt); });
    for (long s = 1; s <= n_steps; ++s) {
      guarded(s, [&] {
        CVector next = s == 1 ? stepper->bootstrap(u) : stepper->step(u, u_prev);
        u_prev = std::move(u);
        u = std::move(next);
      });
      record(s);
    }
  } else {
    const SemiDiscrete sd = build_semidiscrete(global, spec);
    std::string integrator = cfg.integrator;
    if (integrator == "default") integrator = cfg.equation == Equation::schrodinger ? "trapezoidal" : "radau5";
    std::optional<TrapezoidalStepper> trap;
    std::optional<Radau5Stepper> radau;
    guarded(0, [&] {
      if (integrator == "trapezoidal") {
        trap.emplace(sd.M, sd.F, cfg.dt);
      } else {
        radau.emplace(sd.M, sd.F, cfg.dt, integrator == "radau5" ? RadauSolve::decoupled : RadauSolve::block);
      }
    });
    for (long s = 1; s <= n_steps; ++s) {
      guarded(s, [&] { u = trap ? trap->step(u) : radau->step(u); });
      record(s);
    }
  }

  for (const SeriesRow& r : result.series) result.max_error = std::max(result.max_error, r.error);
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (options.write_output && !cfg.output.empty()) {
    std::ostringstream os;
    write_csv(os, result);
    write_file_atomic(cfg.output, os.str());
  }
  return result;
}

void write_csv(std::ostream& os, const RunResult& r) {
  for (const auto& [key, value] : r.config.echo()) os << "# " << key << '=' << value << '\n';
  os << "# max_error=" << format_real(r.max_error) << '\n';
  os << (r.has_energy ? "t,rel_l2_error,energy\n" : "t,rel_l2_error\n");
  for (const SeriesRow& row : r.series) {
    os << format_real(row.t) << ',' << format_real(row.error);
    if (r.has_energy) os << ',' << format_real(row.energy);
    os << '\n';
  }
}

RunResult read_csv(std::istream& is) {
  RunResult r;
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = trim(line.substr(1));
      const auto eq = body.find('=');
      if (eq == std::string::npos) throw ConfigError("malformed CSV header line '" + line + "'");
      const std::string key = body.substr(0, eq), value = body.substr(eq + 1);
      if (key == "max_error") {
        r.max_error = parse_real(value);
      } else {
        pairs.emplace_back(key, value);
      }
      continue;
    }
    if (!header) {
      if (line == "t,rel_l2_error,energy") {
        r.has_energy = true;
      } else if (line != "t,rel_l2_error") {
        throw ConfigError("unexpected CSV columns '" + line + "'");
      }
      header = true;
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(parse_real(cell));
    if (cells.size() != (r.has_energy ? 3u : 2u)) throw ConfigError("malformed CSV row '" + line + "'");
    r.series.push_back({cells[0], cells[1], r.has_energy ? cells[2] : 0.0});
  }
  if (!header) throw ConfigError("CSV has no column header");
  r.config = config_from_pairs(pairs);
  return r;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.flush()) throw Error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

double observed_rate(double e0, double e1, double h0, double h1) {
  if (h0 == h1) return 0.0;
  return std::log(e0 / e1) / std::log(h0 / h1);
}

std::vector<SpaceRow> sweep_space(const ExperimentConfig& base, const std::vector<int>& orders,
                                  const std::vector<int>& levels) {
  std::vector<SpaceRow> rows;
  RunOptions opts;
  opts.write_output = false;
  for (int order : orders) {
    for (std::size_t i = 0; i < levels.size(); ++i) {
      ExperimentConfig c = base;
      c.fe_order = order;
      c.refinements = levels[i];
      const RunResult r = run(c, opts);
      SpaceRow row{order, levels[i], r.n_dofs, r.max_error, std::nullopt};
      if (i > 0) row.rate = std::log2(rows.back().max_error / r.max_error) / (levels[i] - levels[i - 1]);
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<TimeRow> sweep_time(const ExperimentConfig& base, const std::vector<double>& dts) {
  std::vector<TimeRow> rows;
  std::vector<RunResult> results;
  // Common comparison times: the outputs of the first run.
  ExperimentConfig first = base;
  first.dt = dts.at(0);
  RunOptions opts;
  opts.write_output = false;
  for (long s : first.output_steps()) opts.snapshot_times.push_back(first.t_start + s * first.dt);

  for (double dt : dts) {
    ExperimentConfig c = base;
    c.dt = dt;
    results.push_back(run(c, opts));
    TimeRow row;
    row.dt = dt;
    row.max_error = results.back().max_error;
    if (rows.size() > 0) row.rate = observed_rate(rows.back().max_error, row.max_error, rows.back().dt, dt);
    rows.push_back(row);
  }
  for (std::size_t i = 0; i + 1 < results.size(); ++i) {
    const auto& a = results[i].snapshots;
    const auto& b = results[i + 1].snapshots;
    if (a.size() != b.size() || a.empty()) continue;
    double diff = 0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      diff = std::max(diff, (a[j].second - b[j].second).norm() / results[i].exact_snapshots[j].norm());
    }
    rows[i].self_difference = diff;
    if (i > 0 && rows[i - 1].self_difference) {
      rows[i].self_rate = observed_rate(*rows[i - 1].self_difference, diff, rows[i - 1].dt, rows[i].dt);
    }
  }
  return rows;
}

std::vector<NxiRow> sweep_nxi(const ExperimentConfig& base, const std::vector<int>& n_xi) {
  std::vector<NxiRow> rows;
  RunOptions opts;
  opts.write_output = false;
  for (int n : n_xi) {
    ExperimentConfig c = base;
    c.n_xi = n;
    rows.push_back({n, run(c, opts).max_error});
  }
  return rows;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_real(*v) : ""; }

}  // namespace

std::string space_table_csv(const std::vector<SpaceRow>& rows) {
  std::ostringstream os;
  os << "order,level,n_dofs,max_error,rate\n";
  for (const auto& r : rows) {
    os << r.order << ',' << r.level << ',' << r.n_dofs << ',' << format_real(r.max_error) << ',' << opt(r.rate)
       << '\n';
  }
  return os.str();
}

std::string time_table_csv(const std::vector<TimeRow>& rows) {
  std::ostringstream os;
  os << "dt,max_error,rate,self_difference,self_rate\n";
  for (const auto& r : rows) {
    os << format_real(r.dt) << ',' << format_real(r.max_error) << ',' << opt(r.rate) << ','
       << opt(r.self_difference) << ',' << opt(r.self_rate) << '\n';
  }
  return os.str();
}

std::string nxi_table_csv(const std::vector<NxiRow>& rows) {
  std::ostringstream os;
  os << "n_xi,max_error\n";
  for (const auto& r : rows) os << r.n_xi << ',' << format_real(r.max_error) << '\n';
  return os.str();
}

CsvTable read_table(std::istream& is) {
  CsvTable t;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (t.columns.empty()) {
      t.columns = cells;
      continue;
    }
    if (cells.size() != t.columns.size()) throw ConfigError("malformed CSV row '" + line + "'");
    std::vector<double> row;
    for (const auto& c : cells) {
      if (c.empty() || c == "nan" || c == "NaN") {
        row.push_back(std::nan(""));
      } else {
        row.push_back(parse_real(c));
      }
    }
    t.rows.push_back(std::move(row));
  }
  if (t.columns.empty()) throw ConfigError("CSV has no column header");
  return t;
}

}  // namespace poletbc
