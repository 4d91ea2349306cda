#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cxr {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A header row plus data rows. Quoted fields ("a,b", "say ""hi""") are
/// supported; embedded newlines inside quotes are not.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(std::string_view name) const;
  std::size_t require_column(std::string_view name) const;
};

std::vector<std::string> split_csv_line(std::string_view line);

/// Parses text with a header line. Blank lines are skipped. Every row must
/// have exactly as many fields as the header.
CsvTable parse_csv(std::string_view text);

std::string csv_escape(std::string_view field);
std::string csv_join(const std::vector<std::string>& fields);

}  // namespace cxr
