#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cxr/dicom/tag.hpp"

namespace cxr::dicom {

/// The supported value representations. Anything else is rejected by the
/// parser with ErrorCode::UnsupportedVR.
enum class VR : std::uint8_t {
  UI, SH, LO, PN, CS, DA, TM, IS, DS, US, UL, OB, OW, SQ, ST, UT,
};

std::string_view vr_name(VR vr);
std::optional<VR> parse_vr(char a, char b);

/// VRs encoded with 2 reserved bytes and a 32-bit length.
bool has_long_length(VR vr);
bool is_string_vr(VR vr);

/// Byte used to pad odd-length values: NUL for UI and binary VRs, space for
/// text VRs.
std::uint8_t pad_byte(VR vr);

struct DataElement {
  Tag tag;
  VR vr = VR::OB;
  std::vector<std::uint8_t> value;

  bool operator==(const DataElement&) const = default;

  /// String value, padded to even length.
  static DataElement text(Tag tag, VR vr, std::string_view s);
  static DataElement u16(Tag tag, std::uint16_t v);
  static DataElement u32(Tag tag, std::uint32_t v);
  static DataElement bytes(Tag tag, VR vr, std::vector<std::uint8_t> raw);

  /// Value with trailing padding (spaces and NULs) stripped.
  std::string as_string() const;
  std::uint16_t as_u16() const;
  std::uint32_t as_u32() const;
};

}  // namespace cxr::dicom
