#pragma once

#include <stdexcept>
#include <string>

namespace cxr::metrics {

enum class ErrorCode { UnknownLabel, LengthMismatch, NoPositives, EmptyFold, BadInput };

const char* error_name(ErrorCode code);

class MetricsError : public std::runtime_error {
 public:
  MetricsError(ErrorCode code, const std::string& detail);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cxr::metrics
