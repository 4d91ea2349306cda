#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace cxr::nn {

enum class ErrorCode { ShapeMismatch, SchemaError, NonFiniteInput };

const char* error_name(ErrorCode code);

/// Inference failure. `layer()` is set when the fault is tied to a layer.
class NnError : public std::runtime_error {
 public:
  NnError(ErrorCode code, const std::string& detail,
          std::optional<std::size_t> layer = std::nullopt);

  ErrorCode code() const { return code_; }
  std::optional<std::size_t> layer() const { return layer_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> layer_;
};

}  // namespace cxr::nn
