#include "se3sat/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace se3sat {

const char* const kCsvHeader =
    "t,j,p_x,p_y,p_z,pd_x,pd_y,pd_z,pos_err,yaw,psi_d,mrp_err,T,"
    "tau_x,tau_y,tau_z,up_bar_norm,u_f_norm,u_s_norm,s_theta_norm,s_omega_norm,"
    "V1,V2,omega_d_norm,domega_d_norm";

std::string log_to_csv(const Log& log) {
  std::ostringstream os;
  os << kCsvHeader << "\n";
  char b[64];
  const auto put = [&](double v, char sep) {
    std::snprintf(b, sizeof(b), "%.17g%c", v, sep);
    os << b;
  };
  for (const StepRecord& r : log.steps) {
    put(r.t, ',');
    os << r.j << ',';
    put(r.p.x(), ','); put(r.p.y(), ','); put(r.p.z(), ',');
    put(r.p_d.x(), ','); put(r.p_d.y(), ','); put(r.p_d.z(), ',');
    put(r.pos_err, ',');
    put(r.yaw, ','); put(r.psi_d, ',');
    put(r.mrp_err, ',');
    put(r.T, ',');
    put(r.tau.x(), ','); put(r.tau.y(), ','); put(r.tau.z(), ',');
    put(r.u_p_bar.norm(), ','); put(r.u_f.norm(), ','); put(r.u_s.norm(), ',');
    put(r.s_theta_norm, ','); put(r.s_omega_norm, ',');
    put(r.V1, ','); put(r.V2, ',');
    put(r.omega_d.norm(), ',');
    put(r.domega_d.norm(), '\n');
  }
  return os.str();
}

void write_csv(const std::string& path, const Log& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << log_to_csv(log);
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  throw std::runtime_error("CSV column '" + name + "' not found");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV '" + path + "'");
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) t.columns.push_back(cell);
  }
  if (t.columns.empty()) throw std::runtime_error("CSV '" + path + "' has no columns");
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> row;
    row.reserve(t.columns.size());
    while (std::getline(ls, cell, ',')) {
      try {
        std::size_t pos = 0;
        row.push_back(std::stod(cell, &pos));
        if (pos != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": malformed numeric cell '" + cell + "'");
      }
    }
    if (row.size() != t.columns.size())
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected " +
                               std::to_string(t.columns.size()) + " cells, got " +
                               std::to_string(row.size()));
    t.rows.push_back(std::move(row));
  }
  if (t.rows.empty()) throw std::runtime_error("CSV '" + path + "' has no data rows");
  return t;
}

namespace {

void write_panel(const std::string& dir, const std::string& name, const CsvTable& t,
                 const std::vector<std::string>& cols, std::vector<std::string>& written) {
  const std::string path = dir + "/" + name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  std::vector<int> idx;
  idx.reserve(cols.size());
  for (const auto& c : cols) idx.push_back(t.column(c));
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? " " : "") << cols[i];
  out << "\n";
  char b[64];
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < idx.size(); ++i) {
      std::snprintf(b, sizeof(b), "%s%.17g", i ? " " : "", row[idx[i]]);
      out << b;
    }
    out << "\n";
  }
  written.push_back(name);
}

}  // namespace

std::vector<std::string> write_plot_panels(const CsvTable& t, const std::string& dir) {
  std::vector<std::string> written;
  write_panel(dir, "panel_position.dat", t,
              {"t", "p_x", "p_y", "p_z", "pd_x", "pd_y", "pd_z"}, written);
  write_panel(dir, "panel_yaw.dat", t, {"t", "yaw", "psi_d"}, written);
  write_panel(dir, "panel_pos_err.dat", t, {"t", "pos_err"}, written);
  write_panel(dir, "panel_mrp_err.dat", t, {"t", "mrp_err"}, written);
  write_panel(dir, "panel_thrust.dat", t, {"t", "T"}, written);
  write_panel(dir, "panel_moments.dat", t, {"t", "tau_x", "tau_y", "tau_z"}, written);
  write_panel(dir, "panel_filter_norms.dat", t,
              {"t", "up_bar_norm", "u_f_norm", "u_s_norm"}, written);
  write_panel(dir, "panel_sat_norms.dat", t, {"t", "s_theta_norm", "s_omega_norm"}, written);
  return written;
}

}  // namespace se3sat
