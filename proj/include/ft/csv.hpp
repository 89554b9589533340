#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ft/front_tracking.hpp"
#include "ft/spatial_coeff.hpp"

namespace ft {

/// All numeric output uses 17 significant digits so files round-trip
/// bit-exactly through text.
std::string format_full(double v);

void write_snapshot_csv(const std::string& path, const Profile& p);
void write_trace_csv(const std::string& path, const ObservationTrace& tr,
                     double T, double dt_grid);
void write_coeff_csv(const std::string& path, const SpatialCoeff& k);
void write_flux_table_csv(const std::string& path,
                          const std::vector<std::pair<double, double>>& nodes);

/// Flux table file: header `u,f`, strictly increasing u.
std::vector<std::pair<double, double>> read_flux_table_csv(const std::string& path);
SpatialCoeff read_coeff_csv(const std::string& path);

}  // namespace ft
