#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "poletbc/system.hpp"
#include "poletbc/types.hpp"

namespace poletbc {

struct ExperimentConfig {
  Equation equation = Equation::schrodinger;
  int fe_order = 2;
  int refinements = 2;
  int n_xi = 10;
  double dt = 1.0 / 800;
  double t_start = 0.0;
  double t_end = 2.0;
  int n_outputs = 200;
  std::optional<Complex> s0;  // empty: family default
  double c = 1.0, d1 = 0.0, d2 = 0.0, k = 0.0;
  std::string integrator = "default";  // default, trapezoidal, radau5, radau5-block
  double half_width = 4.0, chamfer = 0.5, base_edge = 2.0;
  std::string output;

  /// Desk-scale settings of the experiment for each family.
  static ExperimentConfig defaults(Equation equation);

  ProblemSpec problem() const;

  /// Throws ConfigError.
  void validate() const;

  /// Number of time steps; t_end - t_start must be a multiple of dt.
  long steps() const;

  /// Step indices at which output is produced, increasing, first 0, last steps().
  std::vector<long> output_steps() const;

  /// key/value pairs in a fixed order; parsing them reproduces the config.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

/// INI lines `key = value`, `#` starts a comment. `equation` selects the
/// defaults, the other keys override them; unknown or repeated keys throw
/// ConfigError. dt and other reals accept `p/q`; s0 accepts `re`, `re,im`.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// Parses `p/q` or a plain real number.
double parse_real(const std::string& text);

struct SeriesRow {
  double t = 0;
  double error = 0;
  double energy = 0;  // only meaningful when RunResult::has_energy
};

struct RunResult {
  ExperimentConfig config;
  bool has_energy = false;
  std::vector<SeriesRow> series;
  double max_error = 0;
  double wall_seconds = 0;
  long n_dofs = 0;
  // FE DOF values at the requested snapshot times.
  std::vector<std::pair<double, CVector>> snapshots;
  std::vector<CVector> exact_snapshots;
};

struct RunOptions {
  std::vector<double> snapshot_times;
  bool write_output = true;
};

/// Runs one simulation. Throws SolverError with the failing step index.
RunResult run(const ExperimentConfig& config, const RunOptions& options = {});

/// CSV with `# key=value` header lines, then `t,rel_l2_error[,energy]` rows.
void write_csv(std::ostream& os, const RunResult& result);
RunResult read_csv(std::istream& is);

/// Writes to a temporary file next to `path` and renames it.
void write_file_atomic(const std::string& path, const std::string& content);

struct SpaceRow {
  int order = 0, level = 0;
  long n_dofs = 0;
  double max_error = 0;
  std::optional<double> rate;  // log2(e_{level-1} / e_level)
};
std::vector<SpaceRow> sweep_space(const ExperimentConfig& base, const std::vector<int>& orders,
                                  const std::vector<int>& levels);

struct TimeRow {
  double dt = 0;
  double max_error = 0;
  std::optional<double> rate;
  // max over common output times of ||u_dt - u_next|| / ||u_exact||, with
  // u_next the run with the next dt in the list.
  std::optional<double> self_difference;
  std::optional<double> self_rate;
};
std::vector<TimeRow> sweep_time(const ExperimentConfig& base, const std::vector<double>& dts);

/// log(e0/e1) / log(h0/h1); 0 when h0 == h1.
double observed_rate(double e0, double e1, double h0, double h1);

struct NxiRow {
  int n_xi = 0;
  double max_error = 0;
};
std::vector<NxiRow> sweep_nxi(const ExperimentConfig& base, const std::vector<int>& n_xi);

std::string format_real(double v);
std::string space_table_csv(const std::vector<SpaceRow>& rows);
std::string time_table_csv(const std::vector<TimeRow>& rows);
std::string nxi_table_csv(const std::vector<NxiRow>& rows);

/// Generic numeric CSV: `#` lines skipped, first line column names.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};
CsvTable read_table(std::istream& is);

struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
};

struct PlotStyle {
  int width = 640, height = 480;
  int margin = 60;
  bool log_x = false, log_y = true;
  std::string x_label, y_label, title;
};

/// Maps data coordinates to SVG pixels for the given axis ranges.
struct PlotFrame {
  PlotStyle style;
  double x_min = 0, x_max = 1, y_min = 1, y_max = 10;

  Point to_pixel(double x, double y) const;
};

/// Log-scale line plot. Points that cannot be drawn (NaN, non-positive on a
/// log axis) are skipped; `warnings` counts them.
std::string render_svg(const std::vector<PlotSeries>& series, const PlotStyle& style, int* warnings = nullptr);

/// Series from CSV files: first column against each further column.
std::vector<PlotSeries> series_from_table(const CsvTable& table, const std::string& prefix);

}  // namespace poletbc
