#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cxr::dataset {

inline constexpr const char* kManifestHeader = "path,label,projection,age,quality_ok";
inline constexpr std::array<std::string_view, 3> kLabels = {"COVID-19", "Non-COVID-19",
                                                            "No Finding"};

enum class Projection { PA, AP };

struct ManifestEntry {
  std::string path;
  std::string label;
  Projection projection = Projection::PA;
  int age = 0;
  bool quality_ok = true;

  bool operator==(const ManifestEntry&) const = default;
};

class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses and validates every row (closed label and projection sets,
/// age >= 0, quality_ok in {true,false,1,0,yes,no}).
std::vector<ManifestEntry> read_manifest(std::string_view csv_text);
std::string write_manifest(const std::vector<ManifestEntry>& entries);

struct FilterOptions {
  std::optional<int> min_age;  // inclusive lower bound
  bool require_quality = false;
};

struct FilterResult {
  std::vector<ManifestEntry> kept;
  std::size_t dropped_age = 0;
  std::size_t dropped_quality = 0;
  std::array<std::size_t, 3> kept_per_class{};
};

FilterResult filter_manifest(const std::vector<ManifestEntry>& entries, const FilterOptions& opt);

/// "COVID-19: 3,987" style per-class counts plus totals.
std::string summarize(const FilterResult& result);

}  // namespace cxr::dataset
