#include "tof/io.hpp"

#include "tof/common.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <system_error>

namespace tof {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

CsvTable::CsvTable(std::string hash, std::vector<std::string> columns) : width_(columns.size()) {
  text_ = "# config_hash: " + hash + "\n";
  for (std::size_t k = 0; k < columns.size(); ++k) text_ += (k ? "," : "") + columns[k];
  text_ += "\n";
}

void CsvTable::add_row(const std::vector<CsvCell>& row) {
  if (row.size() != width_) throw Error(ErrorKind::config, "csv", "row width does not match the header");
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (k) text_ += ",";
    if (const double* d = std::get_if<double>(&row[k])) text_ += format_number(*d);
    else if (const long long* i = std::get_if<long long>(&row[k])) text_ += std::to_string(*i);
    else text_ += std::get<std::string>(row[k]);
  }
  text_ += "\n";
  ++rows_;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::config, "unwritable", "cannot write " + tmp.string());
    out << content;
    if (!out) throw Error(ErrorKind::config, "unwritable", "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw Error(ErrorKind::config, "unwritable", "cannot rename onto " + path + ": " + ec.message());
}

void write_csv(const std::string& path, const CsvTable& table) { write_atomic(path, table.str()); }

void write_json(const std::string& path, const Json& j) { write_atomic(path, j.dump(2) + "\n"); }

}  // namespace tof
