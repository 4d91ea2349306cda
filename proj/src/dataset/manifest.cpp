#include "cxr/dataset/manifest.hpp"

#include <algorithm>
#include <charconv>

#include "cxr/common/csv.hpp"

namespace cxr::dataset {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool parse_bool(const std::string& s, const std::string& where) {
  const auto v = lower(s);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ManifestError(where + ": quality_ok '" + s + "' is not a boolean");
}

std::string with_thousands(std::size_t n) {
  std::string s = std::to_string(n);
  for (int i = static_cast<int>(s.size()) - 3; i > 0; i -= 3) s.insert(static_cast<std::size_t>(i), ",");
  return s;
}

}  // namespace

std::vector<ManifestEntry> read_manifest(std::string_view csv_text) {
  CsvTable table;
  try {
    table = parse_csv(csv_text);
  } catch (const CsvError& e) {
    throw ManifestError(e.what());
  }
  std::size_t path, label, projection, age, quality;
  try {
    path = table.require_column("path");
    label = table.require_column("label");
    projection = table.require_column("projection");
    age = table.require_column("age");
    quality = table.require_column("quality_ok");
  } catch (const CsvError& e) {
    throw ManifestError(e.what());
  }

  std::vector<ManifestEntry> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = "manifest row " + std::to_string(r + 2);
    ManifestEntry e;
    e.path = row[path];
    e.label = row[label];
    if (std::find(kLabels.begin(), kLabels.end(), e.label) == kLabels.end()) {
      throw ManifestError(where + ": unknown label '" + e.label + "'");
    }
    if (row[projection] == "PA") {
      e.projection = Projection::PA;
    } else if (row[projection] == "AP") {
      e.projection = Projection::AP;
    } else {
      throw ManifestError(where + ": projection must be PA or AP, got '" + row[projection] + "'");
    }
    const auto& a = row[age];
    auto [p, ec] = std::from_chars(a.data(), a.data() + a.size(), e.age);
    if (ec != std::errc{} || p != a.data() + a.size() || e.age < 0) {
      throw ManifestError(where + ": age '" + a + "' is not a non-negative integer");
    }
    e.quality_ok = parse_bool(row[quality], where);
    out.push_back(std::move(e));
  }
  return out;
}

std::string write_manifest(const std::vector<ManifestEntry>& entries) {
  std::string out = std::string(kManifestHeader) + "\n";
  for (const auto& e : entries) {
    out += csv_join({e.path, e.label, e.projection == Projection::PA ? "PA" : "AP",
                     std::to_string(e.age), e.quality_ok ? "true" : "false"}) +
           "\n";
  }
  return out;
}

FilterResult filter_manifest(const std::vector<ManifestEntry>& entries, const FilterOptions& opt) {
  FilterResult r;
  for (const auto& e : entries) {
    if (opt.min_age && e.age < *opt.min_age) {
      ++r.dropped_age;
      continue;
    }
    if (opt.require_quality && !e.quality_ok) {
      ++r.dropped_quality;
      continue;
    }
    const auto idx = std::find(kLabels.begin(), kLabels.end(), e.label) - kLabels.begin();
    ++r.kept_per_class[static_cast<std::size_t>(idx)];
    r.kept.push_back(e);
  }
  return r;
}

std::string summarize(const FilterResult& r) {
  std::string out;
  for (std::size_t c = 0; c < kLabels.size(); ++c) {
    out += std::string(kLabels[c]) + ": " + with_thousands(r.kept_per_class[c]) + "\n";
  }
  out += "Total kept: " + with_thousands(r.kept.size()) + "\n";
  out += "Dropped (age): " + with_thousands(r.dropped_age) + "\n";
  out += "Dropped (quality): " + with_thousands(r.dropped_quality) + "\n";
  return out;
}

}  // namespace cxr::dataset
