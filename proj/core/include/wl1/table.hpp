#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace wl1 {

using CsvCell = std::variant<std::string, double, long long>;

/// Decimal with 17 significant digits; NaN and infinities as nan/inf/-inf.
std::string format_number(double value);

/// Comma-separated rows under a fixed header.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> columns);

  void row(const std::vector<double>& values);
  void row(const std::vector<CsvCell>& cells);
  const std::vector<std::string>& columns() const noexcept { return columns_; }

 private:
  std::ostream& out_;
  std::vector<std::string> columns_;
};

/// Parsed comma-separated text with a header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column position; throws when absent.
  std::size_t column(std::string_view name) const;
};

CsvTable read_csv(std::istream& in);

/// key=value lines; '#' starts a comment, blank lines are ignored.
using Config = std::map<std::string, std::string>;
Config parse_config(std::istream& in);
Config read_config_file(const std::string& path);

std::uint64_t fnv1a(std::string_view text);
std::string hex64(std::uint64_t value);

}  // namespace wl1
