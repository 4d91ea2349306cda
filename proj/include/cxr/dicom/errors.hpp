#pragma once

#include <stdexcept>
#include <string>

namespace cxr::dicom {

enum class ErrorCode {
  MissingMagic,
  UnsupportedTransferSyntax,
  TruncatedElement,
  OddLength,
  UnsupportedVR,
  UndefinedLength,
  TagOrder,
  InvariantViolation,
  MissingPixelModule,
  PixelLengthMismatch,
  UnsupportedPixelFormat,
};

const char* error_name(ErrorCode code);

class DicomError : public std::runtime_error {
 public:
  DicomError(ErrorCode code, const std::string& detail);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cxr::dicom
