#include "cxr/dicom/pixels.hpp"

#include "cxr/dicom/errors.hpp"
#include "cxr/dicom/part10.hpp"
#include "cxr/dicom/uid.hpp"
#include "cxr/common/rng.hpp"

namespace cxr::dicom {

std::string_view photometric_name(Photometric p) {
  return p == Photometric::Monochrome1 ? "MONOCHROME1" : "MONOCHROME2";
}

Photometric parse_photometric(std::string_view s) {
  if (s == "MONOCHROME1") return Photometric::Monochrome1;
  if (s == "MONOCHROME2") return Photometric::Monochrome2;
  throw DicomError(ErrorCode::UnsupportedPixelFormat,
                   "photometric interpretation '" + std::string(s) + "'");
}

void ImageGrid::validate() const {
  if (bits_allocated != 8 && bits_allocated != 16) {
    throw DicomError(ErrorCode::InvariantViolation,
                     "bits_allocated " + std::to_string(bits_allocated));
  }
  if (samples.size() != static_cast<std::size_t>(rows) * cols) {
    throw DicomError(ErrorCode::InvariantViolation, "sample count != rows*cols");
  }
  const auto maxv = max_value();
  for (auto s : samples) {
    if (s > maxv) throw DicomError(ErrorCode::InvariantViolation, "sample exceeds bit depth");
  }
}

ImageGrid extract_pixels(const DicomObject& obj) {
  const auto* rows = obj.find(tags::kRows);
  const auto* cols = obj.find(tags::kColumns);
  const auto* bits = obj.find(tags::kBitsAllocated);
  const auto* photo = obj.find(tags::kPhotometricInterpretation);
  const auto* pixels = obj.find(tags::kPixelData);
  if (!rows || !cols || !bits || !photo || !pixels) {
    std::string missing;
    for (auto [e, name] : {std::pair{rows, "Rows"}, {cols, "Columns"}, {bits, "BitsAllocated"},
                           {photo, "PhotometricInterpretation"}, {pixels, "PixelData"}}) {
      if (!e) missing += std::string(missing.empty() ? "" : ", ") + name;
    }
    throw DicomError(ErrorCode::MissingPixelModule, "missing " + missing);
  }
  if (obj.transfer_syntax != kExplicitVrLittleEndian) {
    throw DicomError(ErrorCode::UnsupportedTransferSyntax, obj.transfer_syntax);
  }
  if (const auto* spp = obj.find(tags::kSamplesPerPixel); spp && spp->as_u16() != 1) {
    throw DicomError(ErrorCode::UnsupportedPixelFormat,
                     "samples per pixel " + std::to_string(spp->as_u16()));
  }

  ImageGrid grid;
  grid.rows = rows->as_u16();
  grid.cols = cols->as_u16();
  grid.bits_allocated = bits->as_u16();
  if (grid.bits_allocated != 8 && grid.bits_allocated != 16) {
    throw DicomError(ErrorCode::UnsupportedPixelFormat,
                     "bits allocated " + std::to_string(grid.bits_allocated));
  }
  grid.photometric = parse_photometric(photo->as_string());

  const std::size_t count = static_cast<std::size_t>(grid.rows) * grid.cols;
  const std::size_t bytes_per_sample = grid.bits_allocated / 8;
  const std::size_t expected = count * bytes_per_sample;
  const auto& value = pixels->value;
  // An odd 8-bit payload carries one trailing pad byte.
  const bool padded = expected % 2 != 0 && value.size() == expected + 1;
  if (value.size() != expected && !padded) {
    throw DicomError(ErrorCode::PixelLengthMismatch,
                     "expected " + std::to_string(expected) + " bytes, PixelData has " +
                         std::to_string(value.size()));
  }
  grid.samples.resize(count);
  if (bytes_per_sample == 1) {
    for (std::size_t i = 0; i < count; ++i) grid.samples[i] = value[i];
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      grid.samples[i] = static_cast<std::uint16_t>(value[2 * i] | (value[2 * i + 1] << 8));
    }
  }
  return grid;
}

DicomObject make_image_object(const ImageGrid& grid, const ImageIdentity& id) {
  grid.validate();
  if (grid.rows > 0xFFFF || grid.cols > 0xFFFF) {
    throw DicomError(ErrorCode::InvariantViolation, "image dimensions exceed 65535");
  }
  DicomObject obj;
  obj.meta = make_file_meta(kDxForPresentationSopClass, id.sop_instance_uid);
  obj.set(DataElement::text(tags::kSopClassUid, VR::UI, kDxForPresentationSopClass));
  obj.set(DataElement::text(tags::kSopInstanceUid, VR::UI, id.sop_instance_uid));
  obj.set(DataElement::text(tags::kModality, VR::CS, "DX"));
  obj.set(DataElement::text(tags::kPatientId, VR::LO, id.patient_id));
  if (!id.view_position.empty()) {
    obj.set(DataElement::text(tags::kViewPosition, VR::CS, id.view_position));
  }
  obj.set(DataElement::text(tags::kStudyInstanceUid, VR::UI, id.study_uid));
  obj.set(DataElement::text(tags::kSeriesInstanceUid, VR::UI, id.series_uid));
  obj.set(DataElement::text(tags::kSeriesNumber, VR::IS, "1"));
  obj.set(DataElement::text(tags::kInstanceNumber, VR::IS, "1"));
  obj.set(DataElement::u16(tags::kSamplesPerPixel, 1));
  obj.set(DataElement::text(tags::kPhotometricInterpretation, VR::CS,
                            photometric_name(grid.photometric)));
  obj.set(DataElement::u16(tags::kRows, static_cast<std::uint16_t>(grid.rows)));
  obj.set(DataElement::u16(tags::kColumns, static_cast<std::uint16_t>(grid.cols)));
  obj.set(DataElement::u16(tags::kBitsAllocated, grid.bits_allocated));
  obj.set(DataElement::u16(tags::kBitsStored, grid.bits_allocated));
  obj.set(DataElement::u16(tags::kHighBit, static_cast<std::uint16_t>(grid.bits_allocated - 1)));
  obj.set(DataElement::u16(tags::kPixelRepresentation, 0));

  std::vector<std::uint8_t> payload;
  if (grid.bits_allocated == 8) {
    payload.assign(grid.samples.begin(), grid.samples.end());
    obj.set(DataElement::bytes(tags::kPixelData, VR::OB, std::move(payload)));
  } else {
    payload.reserve(grid.samples.size() * 2);
    for (auto s : grid.samples) {
      payload.push_back(static_cast<std::uint8_t>(s & 0xFF));
      payload.push_back(static_cast<std::uint8_t>(s >> 8));
    }
    obj.set(DataElement::bytes(tags::kPixelData, VR::OW, std::move(payload)));
  }
  return obj;
}

ImageIdentity seeded_identity(const ImageGrid& grid, std::uint64_t seed) {
  auto h = fnv1a(grid.samples.data(), grid.samples.size() * sizeof(std::uint16_t));
  h = mix_seed(h, (std::uint64_t{grid.rows} << 32) | grid.cols);
  auto uids = seeded_uid_source(mix_seed(seed, h));
  ImageIdentity id;
  id.sop_instance_uid = uids();
  id.series_uid = uids();
  id.study_uid = uids();
  return id;
}

ImageGrid with_photometric(ImageGrid grid, Photometric p) {
  if (grid.photometric != p) {
    const auto max = static_cast<std::uint16_t>(grid.max_value());
    for (auto& v : grid.samples) v = static_cast<std::uint16_t>(max - v);
    grid.photometric = p;
  }
  return grid;
}

}  // namespace cxr::dicom
