#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "cxr/dicom/pixels.hpp"

namespace cxr::augment {

class PgmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binary P5 with maxval <= 255 (8-bit) or <= 65535 (16-bit, big-endian).
/// The grid is MONOCHROME2; samples are kept as stored.
dicom::ImageGrid read_pgm(std::span<const std::uint8_t> bytes);

/// Writes P5 with maxval 255 or 65535 according to bits_allocated.
std::vector<std::uint8_t> write_pgm(const dicom::ImageGrid& grid);

bool looks_like_pgm(std::span<const std::uint8_t> bytes);

}  // namespace cxr::augment

namespace cxr::augment {

/// PGM or Part 10 DICOM, chosen by content.
dicom::ImageGrid decode_image(std::span<const std::uint8_t> bytes);

}  // namespace cxr::augment
