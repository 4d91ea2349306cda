#include "cxr/nn/tensor.hpp"

#include <cmath>

#include "cxr/nn/errors.hpp"

namespace cxr::nn {

std::size_t element_count(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

std::string shape_str(const std::vector<std::size_t>& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

Tensor::Tensor(std::vector<std::size_t> shape, double fill)
    : shape_(std::move(shape)), data_(element_count(shape_), fill) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != element_count(shape_)) {
    throw NnError(ErrorCode::ShapeMismatch, "tensor data has " + std::to_string(data_.size()) +
                                                " values for shape " + shape_str(shape_));
  }
}

Tensor Tensor::reshaped(std::vector<std::size_t> shape) const {
  return Tensor(std::move(shape), data_);
}

bool Tensor::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
  }
  return "Unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& detail, std::optional<std::size_t> layer) {
  std::string s = error_name(code);
  if (layer) s += " at layer " + std::to_string(*layer);
  return s + ": " + detail;
}

}  // namespace

NnError::NnError(ErrorCode code, const std::string& detail, std::optional<std::size_t> layer)
    : std::runtime_error(compose(code, detail, layer)), code_(code), layer_(layer) {}

}  // namespace cxr::nn
