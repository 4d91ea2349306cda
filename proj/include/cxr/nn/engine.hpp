#pragma once

#include <string>
#include <vector>

#include "cxr/nn/model.hpp"
#include "cxr/nn/tensor.hpp"

namespace cxr::nn {

struct Prediction {
  std::vector<std::string> labels;
  std::vector<double> probabilities;
  std::size_t argmax_index = 0;
  std::string argmax_label;
  std::string model_version;

  bool operator==(const Prediction&) const = default;
};

/// Index of the largest value; the lowest index wins ties.
std::size_t argmax(const std::vector<double>& values);

/// Runs the layer stack on a [C,H,W] input. A mismatch between the input
/// and model.input_shape is reported as ShapeMismatch at layer 0.
Prediction forward(const ModelFile& model, const Tensor& input);

}  // namespace cxr::nn
