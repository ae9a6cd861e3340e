#pragma once

#include "teleop/service/runlog.hpp"

#include <string>
#include <vector>

namespace teleop {

// One CSV per figure panel: odometry, mode timelines, hand positions and
// contact forces.
struct PlotTable {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// Headers of every table, in order, without data.
std::vector<PlotTable> plot_table_headers();
std::vector<PlotTable> plot_tables(const RunLog& log);
std::string format_plot_table(const PlotTable& table);
// Markdown description of the tables (docs/plot-data.md).
std::string plot_data_dictionary();

}  // namespace teleop
