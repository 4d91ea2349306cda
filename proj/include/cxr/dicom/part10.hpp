#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "cxr/dicom/object.hpp"

namespace cxr::dicom {

/// Parses a Part 10 file. Only Explicit VR Little Endian datasets are
/// accepted, tags must be strictly ascending, and every element must have
/// an even, defined length. Unknown tags are kept verbatim.
DicomObject parse_part10(std::span<const std::uint8_t> bytes);

/// 128-byte zero preamble, "DICM", meta, dataset. Odd values get one pad
/// byte. A (0002,0000) group length element, when present, is recomputed.
std::vector<std::uint8_t> serialize_part10(const DicomObject& obj);

/// Parses a bare element stream (no preamble, no meta). Used for sequence
/// item contents.
std::vector<DataElement> parse_element_stream(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_element_stream(std::span<const DataElement> elements);

/// Builds a defined-length sequence value holding one item per entry.
std::vector<std::uint8_t> encode_sequence(
    std::span<const std::vector<DataElement>> items);
/// Splits a defined-length sequence value into its item element lists.
std::vector<std::vector<DataElement>> decode_sequence(
    std::span<const std::uint8_t> value);

/// Standard file meta for an Explicit VR Little Endian object.
std::vector<DataElement> make_file_meta(std::string_view sop_class_uid,
                                        std::string_view sop_instance_uid);

}  // namespace cxr::dicom
