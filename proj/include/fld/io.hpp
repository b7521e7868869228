#ifndef FLD_IO_HPP
#define FLD_IO_HPP

#include <string>
#include <vector>

#include "fld/model.hpp"
#include "json.hpp"

namespace fld {

/// 17 significant digits, enough to round-trip a double.
std::string format_real(double x);

/// Writes through a temporary file and a rename, so readers never see a
/// partial file. Throws InvalidArgument on I/O failure.
void write_file_atomic(const std::string& path, const std::string& content);

/// `x,u` rows at the cell centers.
std::string field_csv(const GridField& field);

/// `x,u` rows of a function sampled at the given points.
template <typename Function>
std::string sampled_csv(const std::vector<double>& xs, const Function& f) {
  std::string out = "x,u\n";
  for (double x : xs) out += format_real(x) + "," + format_real(f(x)) + "\n";
  return out;
}

/// `t,mass,support_radius,min,max`.
std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& records);

/// Indented JSON with every float at 17 significant digits (non-finite as null).
std::string json_dump(const nlohmann::json& doc);

/// Cell centers of a uniform grid.
std::vector<double> cell_centers(double x_min, double x_max, Eigen::Index cells);

}  // namespace fld

#endif  // FLD_IO_HPP
