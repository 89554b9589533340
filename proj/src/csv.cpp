#include "ft/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ft {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_snapshot_csv(const std::string& path, const Profile& p) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "x,u_left,u_right\n";
  for (std::size_t i = 0; i < p.xs.size(); ++i)
    out << format_full(p.xs[i]) << ',' << format_full(p.us[i]) << ','
        << format_full(p.us[i + 1]) << '\n';
}

void write_trace_csv(const std::string& path, const ObservationTrace& tr,
                     double T, double dt_grid) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "t,u_left,u_right\n";
  std::vector<double> times;
  for (const auto& e : tr.entries)
    if (e.t <= T) times.push_back(e.t);
  if (dt_grid > 0.0)
    for (double t = 0.0; t <= T + 1e-15; t += dt_grid) times.push_back(std::min(t, T));
  times.push_back(T);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  for (double t : times)
    out << format_full(t) << ',' << format_full(tr.left(t)) << ','
        << format_full(tr.right(t)) << '\n';
}

void write_coeff_csv(const std::string& path, const SpatialCoeff& k) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "x_break,k_value\n";
  out << "-inf," << format_full(k.values().front()) << '\n';
  for (std::size_t i = 0; i < k.breakpoints().size(); ++i)
    out << format_full(k.breakpoints()[i]) << ',' << format_full(k.values()[i + 1])
        << '\n';
}

void write_flux_table_csv(const std::string& path,
                          const std::vector<std::pair<double, double>>& nodes) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "u,f\n";
  for (const auto& n : nodes)
    out << format_full(n.first) << ',' << format_full(n.second) << '\n';
}

namespace {
std::vector<std::vector<std::string>> read_csv(const std::string& path,
                                               const std::string& header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  if (line != header)
    throw std::runtime_error(path + ": expected header '" + header + "'");
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}
}  // namespace

std::vector<std::pair<double, double>> read_flux_table_csv(const std::string& path) {
  auto rows = read_csv(path, "u,f");
  std::vector<std::pair<double, double>> nodes;
  for (const auto& r : rows) {
    if (r.size() != 2) throw std::runtime_error(path + ": malformed row");
    nodes.emplace_back(std::stod(r[0]), std::stod(r[1]));
  }
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (!(nodes[i].first > nodes[i - 1].first))
      throw std::runtime_error(path + ": u column must increase strictly");
  return nodes;
}

SpatialCoeff read_coeff_csv(const std::string& path) {
  auto rows = read_csv(path, "x_break,k_value");
  std::vector<double> breaks, values;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != 2) throw std::runtime_error(path + ": malformed row");
    if (i == 0 && rows[i][0] == "-inf") {
      values.push_back(std::stod(rows[i][1]));
      continue;
    }
    breaks.push_back(std::stod(rows[i][0]));
    values.push_back(std::stod(rows[i][1]));
  }
  if (values.size() != breaks.size() + 1)
    throw std::runtime_error(path + ": first row must carry the leftmost value");
  return SpatialCoeff(breaks, values);
}

}  // namespace ft
