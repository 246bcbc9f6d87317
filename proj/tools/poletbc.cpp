// Command-line driver for the transparent-boundary experiments.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "poletbc/experiment.hpp"

using namespace poletbc;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& item : split(s, ',')) {
    if (const auto dots = item.find(".."); dots != std::string::npos) {
      const int a = std::stoi(item.substr(0, dots)), b = std::stoi(item.substr(dots + 2));
      if (b < a) throw ConfigError("empty range '" + item + "'");
      for (int v = a; v <= b; ++v) out.push_back(v);
    } else {
      out.push_back(std::stoi(item));
    }
  }
  if (out.empty()) throw ConfigError("empty list '" + s + "'");
  return out;
}

void emit(const std::string& table, const std::string& path) {
  std::cout << table;
  if (!path.empty()) write_file_atomic(path, table);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite elements with pole-condition transparent boundaries"};
  app.require_subcommand(1);

  std::string config_path, out_path, orders = "1,2,3,4", levels = "1..3", dts = "1/800,1/1600", nxi = "1,2,5,10,20";
  std::vector<std::string> csv_paths;
  bool linear_x = false, linear_y = false;
  std::string title;

  auto* run_cmd = app.add_subcommand("run", "run one simulation and write its CSV");
  run_cmd->add_option("config", config_path, "INI configuration")->required();
  run_cmd->add_option("-o,--output", out_path, "CSV path (overrides the config)");

  auto* space_cmd = app.add_subcommand("sweep-space", "spatial convergence table");
  space_cmd->add_option("config", config_path)->required();
  space_cmd->add_option("--orders", orders, "comma list of element orders");
  space_cmd->add_option("--levels", levels, "refinement levels, a..b or a comma list");
  space_cmd->add_option("-o,--output", out_path, "table CSV path");

  auto* time_cmd = app.add_subcommand("sweep-time", "temporal convergence table");
  time_cmd->add_option("config", config_path)->required();
  time_cmd->add_option("--dts", dts, "comma list of time steps, p/q allowed");
  time_cmd->add_option("-o,--output", out_path, "table CSV path");

  auto* nxi_cmd = app.add_subcommand("sweep-nxi", "error against the number of Hardy coefficients");
  nxi_cmd->add_option("config", config_path)->required();
  nxi_cmd->add_option("--nxi", nxi, "comma list of n_xi values");
  nxi_cmd->add_option("-o,--output", out_path, "table CSV path");

  auto* plot_cmd = app.add_subcommand("plot", "render CSV files as an SVG line plot");
  plot_cmd->add_option("csv", csv_paths)->required();
  plot_cmd->add_option("-o,--output", out_path)->required();
  plot_cmd->add_flag("--linear-x", linear_x, "linear x axis (default for time series)");
  plot_cmd->add_flag("--linear-y", linear_y, "linear y axis");
  plot_cmd->add_option("--title", title);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run_cmd) {
      ExperimentConfig cfg = load_config(config_path);
      if (!out_path.empty()) cfg.output = out_path;
      const RunResult r = run(cfg);
      std::printf("dofs=%ld outputs=%zu max_error=%.6e wall=%.2fs\n", r.n_dofs, r.series.size(), r.max_error,
                  r.wall_seconds);
      if (cfg.output.empty()) write_csv(std::cout, r);
    } else if (*space_cmd) {
      const ExperimentConfig cfg = load_config(config_path);
      emit(space_table_csv(sweep_space(cfg, parse_int_list(orders), parse_int_list(levels))), out_path);
    } else if (*time_cmd) {
      const ExperimentConfig cfg = load_config(config_path);
      std::vector<double> list;
      for (const auto& item : split(dts, ',')) list.push_back(parse_real(item));
      if (list.empty()) throw ConfigError("empty dt list");
      emit(time_table_csv(sweep_time(cfg, list)), out_path);
    } else if (*nxi_cmd) {
      const ExperimentConfig cfg = load_config(config_path);
      emit(nxi_table_csv(sweep_nxi(cfg, parse_int_list(nxi))), out_path);
    } else if (*plot_cmd) {
      std::vector<PlotSeries> series;
      std::string x_label, y_label;
      bool time_axis = false;
      for (const auto& path : csv_paths) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open '" + path + "'");
        const CsvTable table = read_table(in);
        if (table.columns.size() < 2) throw ConfigError("'" + path + "' needs at least two columns");
        x_label = table.columns[0];
        y_label = table.columns[1];
        time_axis = time_axis || x_label == "t";
        auto s = series_from_table(table, csv_paths.size() > 1 ? path : "");
        series.insert(series.end(), s.begin(), s.end());
      }
      PlotStyle style;
      style.log_x = !linear_x && !time_axis;
      style.log_y = !linear_y;
      style.x_label = x_label;
      style.y_label = y_label;
      style.title = title;
      int skipped = 0;
      const std::string svg = render_svg(series, style, &skipped);
      if (skipped > 0) std::fprintf(stderr, "warning: skipped %d points that cannot be drawn\n", skipped);
      write_file_atomic(out_path, svg);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
