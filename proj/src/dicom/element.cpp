#include "cxr/dicom/element.hpp"

#include <array>
#include <cstdio>

#include "cxr/dicom/errors.hpp"

namespace cxr::dicom {

namespace {

constexpr std::array<std::string_view, 16> kVrNames = {
    "UI", "SH", "LO", "PN", "CS", "DA", "TM", "IS",
    "DS", "US", "UL", "OB", "OW", "SQ", "ST", "UT"};

}  // namespace

std::string Tag::str() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "(%04X,%04X)", group, element);
  return buf;
}

std::string_view vr_name(VR vr) { return kVrNames[static_cast<std::size_t>(vr)]; }

std::optional<VR> parse_vr(char a, char b) {
  for (std::size_t i = 0; i < kVrNames.size(); ++i) {
    if (kVrNames[i][0] == a && kVrNames[i][1] == b) return static_cast<VR>(i);
  }
  return std::nullopt;
}

bool has_long_length(VR vr) {
  return vr == VR::OB || vr == VR::OW || vr == VR::SQ || vr == VR::UT;
}

bool is_string_vr(VR vr) {
  switch (vr) {
    case VR::US: case VR::UL: case VR::OB: case VR::OW: case VR::SQ:
      return false;
    default:
      return true;
  }
}

std::uint8_t pad_byte(VR vr) {
  if (vr == VR::UI || !is_string_vr(vr)) return 0x00;
  return 0x20;
}

DataElement DataElement::text(Tag tag, VR vr, std::string_view s) {
  DataElement e{tag, vr, std::vector<std::uint8_t>(s.begin(), s.end())};
  if (e.value.size() % 2 != 0) e.value.push_back(pad_byte(vr));
  return e;
}

DataElement DataElement::u16(Tag tag, std::uint16_t v) {
  return {tag, VR::US,
          {static_cast<std::uint8_t>(v & 0xFF), static_cast<std::uint8_t>(v >> 8)}};
}

DataElement DataElement::u32(Tag tag, std::uint32_t v) {
  return {tag, VR::UL,
          {static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(v >> 8),
           static_cast<std::uint8_t>(v >> 16), static_cast<std::uint8_t>(v >> 24)}};
}

DataElement DataElement::bytes(Tag tag, VR vr, std::vector<std::uint8_t> raw) {
  DataElement e{tag, vr, std::move(raw)};
  if (e.value.size() % 2 != 0) e.value.push_back(pad_byte(vr));
  return e;
}

std::string DataElement::as_string() const {
  std::string s(value.begin(), value.end());
  while (!s.empty() && (s.back() == ' ' || s.back() == '\0')) s.pop_back();
  return s;
}

std::uint16_t DataElement::as_u16() const {
  if (value.size() < 2) {
    throw DicomError(ErrorCode::InvariantViolation, tag.str() + " too short for US");
  }
  return static_cast<std::uint16_t>(value[0] | (value[1] << 8));
}

std::uint32_t DataElement::as_u32() const {
  if (value.size() < 4) {
    throw DicomError(ErrorCode::InvariantViolation, tag.str() + " too short for UL");
  }
  return static_cast<std::uint32_t>(value[0]) | (static_cast<std::uint32_t>(value[1]) << 8) |
         (static_cast<std::uint32_t>(value[2]) << 16) |
         (static_cast<std::uint32_t>(value[3]) << 24);
}

}  // namespace cxr::dicom
