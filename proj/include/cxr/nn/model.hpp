#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cxr/nn/tensor.hpp"

namespace cxr::nn {

enum class LayerKind { Conv2d, MaxPool2d, Relu, Flatten, Dense, GlobalAvgPool, Softmax };

std::string_view layer_kind_name(LayerKind kind);
LayerKind parse_layer_kind(std::string_view name);

struct LayerSpec {
  LayerKind kind = LayerKind::Relu;
  // conv2d
  std::size_t out_channels = 0;
  std::size_t kernel_h = 0;
  std::size_t kernel_w = 0;
  // conv2d and maxpool2d
  std::size_t stride = 1;
  std::size_t pad = 0;
  // maxpool2d
  std::size_t window = 0;
  // dense
  std::size_t out_features = 0;
  // conv2d: [O,C,kh,kw] + [O]; dense: [out,in] + [out]
  Tensor weights;
  Tensor bias;

  bool has_parameters() const { return kind == LayerKind::Conv2d || kind == LayerKind::Dense; }
  bool operator==(const LayerSpec&) const = default;
};

struct ModelFile {
  std::string name;
  std::string version;
  std::array<std::size_t, 3> input_shape{224, 224, 3};  // [H, W, C]
  std::vector<std::string> class_labels;
  std::vector<LayerSpec> layers;

  /// Input as the engine stores it, [C, H, W].
  std::vector<std::size_t> input_chw() const {
    return {input_shape[2], input_shape[0], input_shape[1]};
  }

  bool operator==(const ModelFile&) const = default;
};

/// Walks the layer stack checking hyperparameters and weight shapes, and
/// that the stack ends in softmax over class_labels.size() outputs.
/// Throws NnError(SchemaError) naming the layer index and field.
void validate_model(const ModelFile& model);

inline constexpr std::uint32_t kModelFormatVersion = 1;

/// .cbmf: "CBMF", u32 format version, u32 header length, key=value UTF-8
/// header, then one block per parameter tensor (u64 count + little-endian
/// f64 values), weights before bias, in layer order.
std::vector<std::uint8_t> save_model(const ModelFile& model);
ModelFile load_model(std::span<const std::uint8_t> bytes);

}  // namespace cxr::nn
