#pragma once

#include <json.hpp>

#include <string>
#include <variant>
#include <vector>

namespace tof {

using Json = nlohmann::ordered_json;

// Shortest round-trip decimal form; "nan"/"inf" for non-finite values.
std::string format_number(double v);

using CsvCell = std::variant<double, long long, std::string>;

// First line "# config_hash: <hash>", then the header row; comma separated, LF endings.
class CsvTable {
 public:
  CsvTable(std::string hash, std::vector<std::string> columns);
  void add_row(const std::vector<CsvCell>& row);
  std::string str() const { return text_; }
  std::size_t rows() const { return rows_; }

 private:
  std::size_t width_;
  std::size_t rows_ = 0;
  std::string text_;
};

// Writes to a temporary file next to path, then renames it into place.
void write_atomic(const std::string& path, const std::string& content);
void write_csv(const std::string& path, const CsvTable& table);
// Non-finite numbers become null; two-space indentation with a trailing newline.
void write_json(const std::string& path, const Json& j);

}  // namespace tof
