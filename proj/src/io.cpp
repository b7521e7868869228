#include "fld/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace fld {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) throw Error(ErrorKind::InvalidArgument, "cannot move " + tmp + " to " + path + ": " + ec.message());
}

std::string field_csv(const GridField& field) {
  std::string out = "x,u\n";
  for (Eigen::Index i = 0; i < field.size(); ++i) {
    out += format_real(field.center(i)) + "," + format_real(field.values[i]) + "\n";
  }
  return out;
}

std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& records) {
  std::string out = "t,mass,support_radius,min,max\n";
  for (const auto& d : records) {
    out += format_real(d.t) + "," + format_real(d.mass) + "," + format_real(d.support_radius) + "," +
           format_real(d.min_value) + "," + format_real(d.max_value) + "\n";
  }
  return out;
}

namespace {

void dump(const nlohmann::json& v, int depth, std::string& out) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close(2 * depth, ' ');
  if (v.is_object() || v.is_array()) {
    if (v.empty()) {
      out += v.is_object() ? "{}" : "[]";
      return;
    }
    out += v.is_object() ? "{\n" : "[\n";
    bool first = true;
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += pad;
      if (v.is_object()) out += nlohmann::json(it.key()).dump() + ": ";
      dump(it.value(), depth + 1, out);
    }
    out += "\n" + close + (v.is_object() ? "}" : "]");
  } else if (v.is_number_float()) {
    const double x = v.get<double>();
    out += std::isfinite(x) ? format_real(x) : "null";
  } else {
    out += v.dump();
  }
}

}  // namespace

std::string json_dump(const nlohmann::json& doc) {
  std::string out;
  dump(doc, 0, out);
  return out + "\n";
}

std::vector<double> cell_centers(double x_min, double x_max, Eigen::Index cells) {
  if (cells <= 0 || !(x_max > x_min)) throw Error(ErrorKind::InvalidArgument, "cell_centers: empty grid");
  std::vector<double> xs(static_cast<std::size_t>(cells));
  const double h = (x_max - x_min) / static_cast<double>(cells);
  for (Eigen::Index i = 0; i < cells; ++i) xs[static_cast<std::size_t>(i)] = x_min + (static_cast<double>(i) + 0.5) * h;
  return xs;
}

}  // namespace fld
