#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cxr/dicom/object.hpp"

namespace cxr::dicom {

enum class Photometric { Monochrome1, Monochrome2 };

std::string_view photometric_name(Photometric p);
Photometric parse_photometric(std::string_view s);

/// Single-channel unsigned image, row-major.
struct ImageGrid {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::uint16_t bits_allocated = 8;
  Photometric photometric = Photometric::Monochrome2;
  std::vector<std::uint16_t> samples;

  bool operator==(const ImageGrid&) const = default;

  std::uint32_t max_value() const { return (1u << bits_allocated) - 1; }
  std::uint16_t at(std::uint32_t r, std::uint32_t c) const { return samples[r * cols + c]; }

  /// Throws DicomError(InvariantViolation) on bad sizes or out-of-range samples.
  void validate() const;
};

/// Reads the image pixel module. MONOCHROME1 data is returned unmodified.
ImageGrid extract_pixels(const DicomObject& obj);

/// UIDs and light demographics for a synthetic CXR instance.
struct ImageIdentity {
  std::string study_uid;
  std::string series_uid;
  std::string sop_instance_uid;
  std::string patient_id = "ANON";
  std::string view_position;  // "PA", "AP" or empty
};

inline constexpr std::string_view kDxForPresentationSopClass = "1.2.840.10008.5.1.4.1.1.1.1";

/// Wraps a grid into a minimal DX image object (the inverse of extract_pixels).
DicomObject make_image_object(const ImageGrid& grid, const ImageIdentity& id);

/// Study, series and instance UIDs drawn from `seed` mixed with a hash of
/// the samples, so distinct images under one seed get distinct UIDs.
ImageIdentity seeded_identity(const ImageGrid& grid, std::uint64_t seed);

/// Re-expresses the grid under `p`, inverting samples when the
/// interpretation changes so the displayed image stays the same.
ImageGrid with_photometric(ImageGrid grid, Photometric p);

}  // namespace cxr::dicom
