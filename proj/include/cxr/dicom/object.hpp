#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cxr/dicom/element.hpp"

namespace cxr::dicom {

inline constexpr std::string_view kExplicitVrLittleEndian = "1.2.840.10008.1.2.1";

/// A Part 10 object: file meta (group 0002) plus the dataset, each kept
/// strictly ascending by tag.
struct DicomObject {
  std::vector<DataElement> meta;
  std::vector<DataElement> dataset;
  std::string transfer_syntax{kExplicitVrLittleEndian};

  bool operator==(const DicomObject&) const = default;

  const DataElement* find(Tag tag) const;
  /// Trimmed string value, or empty when absent.
  std::string get_string(Tag tag) const;

  /// Inserts or replaces, keeping tag order. Group 0002 goes to meta.
  void set(DataElement element);
};

}  // namespace cxr::dicom
