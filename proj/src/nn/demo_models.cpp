#include "cxr/nn/demo_models.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cxr/common/rng.hpp"

namespace cxr::nn {

namespace {

Tensor draw(XorShift64Star& rng, std::vector<std::size_t> shape, double limit) {
  Tensor t(std::move(shape));
  for (double& v : t.data()) v = rng.uniform(-limit, limit);
  return t;
}

LayerSpec conv(XorShift64Star& rng, std::size_t in_c, std::size_t out_c, std::size_t k,
               std::size_t stride, std::size_t pad) {
  LayerSpec l;
  l.kind = LayerKind::Conv2d;
  l.out_channels = out_c;
  l.kernel_h = l.kernel_w = k;
  l.stride = stride;
  l.pad = pad;
  const double limit = std::sqrt(6.0 / static_cast<double>(in_c * k * k));
  l.weights = draw(rng, {out_c, in_c, k, k}, limit);
  l.bias = draw(rng, {out_c}, 0.1);
  return l;
}

LayerSpec dense_layer(XorShift64Star& rng, std::size_t in, std::size_t out) {
  LayerSpec l;
  l.kind = LayerKind::Dense;
  l.out_features = out;
  const double limit = std::sqrt(6.0 / static_cast<double>(in));
  l.weights = draw(rng, {out, in}, limit);
  l.bias = draw(rng, {out}, 0.1);
  return l;
}

LayerSpec simple(LayerKind kind) {
  LayerSpec l;
  l.kind = kind;
  return l;
}

LayerSpec pool(std::size_t window, std::size_t stride) {
  LayerSpec l;
  l.kind = LayerKind::MaxPool2d;
  l.window = window;
  l.stride = stride;
  return l;
}

}  // namespace

ModelFile make_demo_model(std::string_view kind, std::uint64_t seed) {
  XorShift64Star rng(seed);
  ModelFile m;
  m.name = std::string(kind);
  m.version = "1.0.0";
  m.input_shape = {224, 224, 3};
  if (kind == kDemoCxrModel) {
    m.class_labels = {"COVID-19", "Non-COVID-19", "No Finding"};
    m.layers.push_back(conv(rng, 3, 8, 5, 4, 2));    // 8x56x56
    m.layers.push_back(simple(LayerKind::Relu));
    m.layers.push_back(pool(2, 2));                  // 8x28x28
    m.layers.push_back(conv(rng, 8, 16, 3, 2, 1));   // 16x14x14
    m.layers.push_back(simple(LayerKind::Relu));
    m.layers.push_back(pool(2, 2));                  // 16x7x7
    m.layers.push_back(simple(LayerKind::GlobalAvgPool));
    m.layers.push_back(dense_layer(rng, 16, 3));
    m.layers.push_back(simple(LayerKind::Softmax));
  } else if (kind == kDemoOodModel) {
    m.class_labels = {"in-distribution", "out-of-distribution"};
    m.layers.push_back(conv(rng, 3, 4, 7, 4, 3));    // 4x56x56
    m.layers.push_back(simple(LayerKind::Relu));
    m.layers.push_back(pool(4, 4));                  // 4x14x14
    m.layers.push_back(conv(rng, 4, 8, 3, 1, 1));    // 8x14x14
    m.layers.push_back(simple(LayerKind::Relu));
    m.layers.push_back(pool(2, 2));                  // 8x7x7
    m.layers.push_back(simple(LayerKind::Flatten));
    m.layers.push_back(dense_layer(rng, 8 * 7 * 7, 2));
    m.layers.push_back(simple(LayerKind::Softmax));
  } else {
    throw std::invalid_argument("unknown demo model kind '" + std::string(kind) + "'");
  }
  validate_model(m);
  return m;
}

}  // namespace cxr::nn
