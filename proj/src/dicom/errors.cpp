#include "cxr/dicom/errors.hpp"

namespace cxr::dicom {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingMagic: return "MissingMagic";
    case ErrorCode::UnsupportedTransferSyntax: return "UnsupportedTransferSyntax";
    case ErrorCode::TruncatedElement: return "TruncatedElement";
    case ErrorCode::OddLength: return "OddLength";
    case ErrorCode::UnsupportedVR: return "UnsupportedVR";
    case ErrorCode::UndefinedLength: return "UndefinedLength";
    case ErrorCode::TagOrder: return "TagOrder";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::MissingPixelModule: return "MissingPixelModule";
    case ErrorCode::PixelLengthMismatch: return "PixelLengthMismatch";
    case ErrorCode::UnsupportedPixelFormat: return "UnsupportedPixelFormat";
  }
  return "Unknown";
}

DicomError::DicomError(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

}  // namespace cxr::dicom
