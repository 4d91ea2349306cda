#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace cxr::dicom {

struct Tag {
  std::uint16_t group = 0;
  std::uint16_t element = 0;

  constexpr auto operator<=>(const Tag&) const = default;

  /// "(GGGG,EEEE)" in uppercase hex.
  std::string str() const;
};

namespace tags {
inline constexpr Tag kFileMetaGroupLength{0x0002, 0x0000};
inline constexpr Tag kFileMetaVersion{0x0002, 0x0001};
inline constexpr Tag kMediaStorageSopClassUid{0x0002, 0x0002};
inline constexpr Tag kMediaStorageSopInstanceUid{0x0002, 0x0003};
inline constexpr Tag kTransferSyntaxUid{0x0002, 0x0010};
inline constexpr Tag kImplementationClassUid{0x0002, 0x0012};

inline constexpr Tag kInstanceCreationDate{0x0008, 0x0012};
inline constexpr Tag kInstanceCreationTime{0x0008, 0x0013};
inline constexpr Tag kSopClassUid{0x0008, 0x0016};
inline constexpr Tag kSopInstanceUid{0x0008, 0x0018};
inline constexpr Tag kContentDate{0x0008, 0x0023};
inline constexpr Tag kContentTime{0x0008, 0x0033};
inline constexpr Tag kModality{0x0008, 0x0060};
inline constexpr Tag kReferencedSopInstanceUid{0x0008, 0x1155};
inline constexpr Tag kReferencedSopSequence{0x0008, 0x1199};
inline constexpr Tag kPatientId{0x0010, 0x0020};
inline constexpr Tag kPatientAge{0x0010, 0x1010};
inline constexpr Tag kSoftwareVersions{0x0018, 0x1020};
inline constexpr Tag kViewPosition{0x0018, 0x5101};
inline constexpr Tag kStudyInstanceUid{0x0020, 0x000D};
inline constexpr Tag kSeriesInstanceUid{0x0020, 0x000E};
inline constexpr Tag kSeriesNumber{0x0020, 0x0011};
inline constexpr Tag kInstanceNumber{0x0020, 0x0013};
inline constexpr Tag kSamplesPerPixel{0x0028, 0x0002};
inline constexpr Tag kPhotometricInterpretation{0x0028, 0x0004};
inline constexpr Tag kRows{0x0028, 0x0010};
inline constexpr Tag kColumns{0x0028, 0x0011};
inline constexpr Tag kBitsAllocated{0x0028, 0x0100};
inline constexpr Tag kBitsStored{0x0028, 0x0101};
inline constexpr Tag kHighBit{0x0028, 0x0102};
inline constexpr Tag kPixelRepresentation{0x0028, 0x0103};
inline constexpr Tag kRelationshipType{0x0040, 0xA010};
inline constexpr Tag kValueType{0x0040, 0xA040};
inline constexpr Tag kContinuityOfContent{0x0040, 0xA050};
inline constexpr Tag kTextValue{0x0040, 0xA160};
inline constexpr Tag kCompletionFlag{0x0040, 0xA491};
inline constexpr Tag kVerificationFlag{0x0040, 0xA493};
inline constexpr Tag kContentSequence{0x0040, 0xA730};
inline constexpr Tag kPixelData{0x7FE0, 0x0010};

inline constexpr Tag kItem{0xFFFE, 0xE000};
}  // namespace tags

}  // namespace cxr::dicom
