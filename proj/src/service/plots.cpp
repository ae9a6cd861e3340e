#include "teleop/service/plots.hpp"

#include "teleop/sim/world.hpp"

#include <cmath>

namespace teleop {

namespace {

struct TableLayout {
  const char* name;
  const char* about;
  std::vector<std::string> log_columns;  // copied straight from the log
  bool hands = false;                    // append world-frame hand positions
};

const std::vector<TableLayout>& layouts() {
  static const std::vector<TableLayout> s = {
      {"odometry", "base trajectory and heading",
       {"t", "base_x", "base_y", "phi", "x", "xdot", "theta", "x_R_des"}},
      {"modes", "per-channel mode timeline and manipulation blend",
       {"t", "u_s", "u_y", "u_A", "mode_s", "mode_y", "mode_A", "alpha"}},
      {"hands", "hand positions in the world plane, with the box and object",
       {"t", "box_x", "box_y", "box_yaw", "object_x", "object_y", "object_yaw"}, true},
      {"contact_forces", "hand forces, external force and moment, and their feedback",
       {"t", "hand_force_lx", "hand_force_ly", "hand_force_lz", "hand_force_rx", "hand_force_ry",
        "hand_force_rz", "contact", "F_ext_x", "M_ext_z", "M_ext_est", "wall_force", "F_xH",
        "M_zH_fb"}},
  };
  return s;
}

const std::vector<std::string> kHandColumns = {"hand_lx", "hand_ly", "hand_lz",
                                               "hand_rx", "hand_ry", "hand_rz"};

}  // namespace

std::vector<PlotTable> plot_table_headers() {
  std::vector<PlotTable> out;
  for (const TableLayout& s : layouts()) {
    PlotTable t{s.name, s.log_columns, {}};
    if (s.hands) t.columns.insert(t.columns.end(), kHandColumns.begin(), kHandColumns.end());
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<PlotTable> plot_tables(const RunLog& log) {
  std::vector<PlotTable> out = plot_table_headers();
  const TeleopConfig cfg = log_config(log);
  World w;
  w.params = cfg.physical;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const TableLayout& s = layouts()[k];
    std::vector<std::size_t> idx;
    for (const std::string& c : s.log_columns) idx.push_back(log_column_index(c));
    for (std::size_t r = 0; r < log.rows.size(); ++r) {
      const auto& row = log.rows[r];
      std::vector<double> v;
      for (std::size_t i : idx) v.push_back(row[i]);
      if (s.hands) {
        w.robot.theta = log.at(r, "theta");
        w.robot.phi = log.at(r, "phi");
        w.base_x = log.at(r, "base_x");
        w.base_y = log.at(r, "base_y");
        const std::size_t q0 = log_column_index("q_l0");
        for (std::size_t a = 0; a < 2; ++a) {
          for (int j = 0; j < 4; ++j) w.robot.q[a][j] = row[q0 + 4 * a + j];
        }
        for (const Vec3& h : hand_positions(w)) v.insert(v.end(), {h.x(), h.y(), h.z()});
      }
      out[k].rows.push_back(std::move(v));
    }
  }
  return out;
}

std::string format_plot_table(const PlotTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_double(row[i]);
    out += "\n";
  }
  return out;
}

std::string plot_data_dictionary() {
  std::string out;
  const auto headers = plot_table_headers();
  for (std::size_t k = 0; k < headers.size(); ++k) {
    out += "### " + headers[k].name + ".csv\n\n" + layouts()[k].about + ".\n\n```\n";
    for (std::size_t i = 0; i < headers[k].columns.size(); ++i) {
      out += (i ? "," : "") + headers[k].columns[i];
    }
    out += "\n```\n\n";
  }
  out += "Hand positions (`hand_*`) are world-frame, computed from the logged pose and joint angles.\n";
  return out;
}

}  // namespace teleop
