#include "cxr/nn/engine.hpp"

#include "cxr/nn/errors.hpp"
#include "cxr/nn/kernels.hpp"

namespace cxr::nn {

std::size_t argmax(const std::vector<double>& values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

namespace {

Tensor apply(const LayerSpec& l, const Tensor& x) {
  switch (l.kind) {
    case LayerKind::Conv2d: return conv2d(x, l.weights, l.bias, {l.stride, l.pad});
    case LayerKind::MaxPool2d: return maxpool2d(x, l.window, l.stride);
    case LayerKind::Relu: return relu(x);
    case LayerKind::Flatten: return flatten(x);
    case LayerKind::Dense: return dense(x, l.weights, l.bias);
    case LayerKind::GlobalAvgPool: return global_avg_pool(x);
    case LayerKind::Softmax: return softmax(x);
  }
  return x;
}

}  // namespace

Prediction forward(const ModelFile& model, const Tensor& input) {
  if (input.shape() != model.input_chw()) {
    throw NnError(ErrorCode::ShapeMismatch,
                  "input " + shape_str(input.shape()) + " != model input " +
                      shape_str(model.input_chw()) + " (C,H,W)",
                  0);
  }
  if (!input.all_finite()) throw NnError(ErrorCode::NonFiniteInput, "input has NaN/Inf", 0);

  Tensor x = input;
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    try {
      x = apply(model.layers[i], x);
    } catch (const NnError& e) {
      throw NnError(e.code(), e.what(), i);
    }
  }
  if (x.rank() != 1 || x.size() != model.class_labels.size()) {
    throw NnError(ErrorCode::ShapeMismatch,
                  "output " + shape_str(x.shape()) + " does not match label count",
                  model.layers.size() - 1);
  }

  Prediction p;
  p.labels = model.class_labels;
  p.probabilities = x.values();
  p.argmax_index = argmax(p.probabilities);
  p.argmax_label = p.labels[p.argmax_index];
  p.model_version = model.name + "@" + model.version;
  return p;
}

}  // namespace cxr::nn
