#pragma once

#include <array>
#include <chrono>
#include <string>
#include <string_view>
#include <vector>

#include "cxr/dicom/object.hpp"
#include "cxr/dicom/uid.hpp"

namespace cxr::dicom {

inline constexpr std::array<std::string_view, 3> kClassLabels = {"COVID-19", "Non-COVID-19",
                                                                 "No Finding"};
inline constexpr std::string_view kBasicTextSrSopClass = "1.2.840.10008.5.1.4.1.1.88.11";

struct SRDocument {
  std::string source_sop_instance_uid;
  /// Study the report is filed under. A fresh study UID is generated when empty.
  std::string study_instance_uid;
  std::array<std::string, 3> class_labels{std::string(kClassLabels[0]),
                                          std::string(kClassLabels[1]),
                                          std::string(kClassLabels[2])};
  std::array<double, 3> probabilities{};
  bool gate_accepted = true;
  std::string model_version;
  std::chrono::system_clock::time_point created_at{};
};

/// Throws DicomError(InvariantViolation) unless labels are exactly the three
/// classes in order and probabilities lie in [0,1] summing to 1 +/- 1e-6.
void validate(const SRDocument& doc);

/// Basic Text SR carrying one "LABEL=<p>" TEXT item per class (4 decimals)
/// and a gate item. UIDs come from `uids`; created_at stamps the content.
DicomObject build_sr(const SRDocument& doc, const UidSource& uids);

/// TextValue strings of the top-level content items, in order.
std::vector<std::string> read_sr_text_items(const DicomObject& sr);

}  // namespace cxr::dicom
