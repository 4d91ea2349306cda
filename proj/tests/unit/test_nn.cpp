#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <limits>

#include "cxr/common/io.hpp"
#include "cxr/common/rng.hpp"
#include "cxr/dicom/pixels.hpp"
#include "cxr/nn/demo_models.hpp"
#include "cxr/nn/engine.hpp"
#include "cxr/nn/errors.hpp"
#include "cxr/nn/kernels.hpp"
#include "cxr/nn/model.hpp"
#include "cxr/nn/preprocess.hpp"
#include "support/oracles.hpp"
#include "support/paths.hpp"

using namespace cxr;
using namespace cxr::nn;

namespace {

struct ConvCase {
  Tensor input, kernel, bias;
  ConvParams p;
};

ConvCase random_conv_case(XorShift64Star& rng) {
  const std::size_t c = 1 + rng.below(3), o = 1 + rng.below(4);
  const std::size_t kh = 1 + rng.below(5), kw = 1 + rng.below(5);
  const std::size_t stride = 1 + rng.below(3), pad = rng.below(3);
  const std::size_t h = kh + rng.below(12), w = kw + rng.below(12);
  return {oracle::random_tensor(rng, {c, h, w}), oracle::random_tensor(rng, {o, c, kh, kw}),
          oracle::random_tensor(rng, {o}), {stride, pad}};
}

std::string nn_error(const std::function<void()>& f) {
  try {
    f();
  } catch (const NnError& e) {
    return error_name(e.code());
  }
  return "ok";
}

}  // namespace

TEST_CASE("conv2d matches the naive oracle on 200 random cases") {
  XorShift64Star rng(11);
  for (int i = 0; i < 200; ++i) {
    const auto k = random_conv_case(rng);
    const auto expect = oracle::conv2d(k.input, k.kernel, k.bias, k.p.stride, k.p.pad);
    CHECK(oracle::max_abs_diff(conv2d(k.input, k.kernel, k.bias, k.p), expect) <= 1e-9);
    CHECK(oracle::max_abs_diff(reference::conv2d(k.input, k.kernel, k.bias, k.p), expect) <= 1e-9);
  }
}

TEST_CASE("maxpool2d matches the naive oracle on 200 random cases") {
  XorShift64Star rng(12);
  for (int i = 0; i < 200; ++i) {
    const std::size_t window = 1 + rng.below(4), stride = 1 + rng.below(3);
    const auto in = oracle::random_tensor(
        rng, {1 + rng.below(4), window + rng.below(10), window + rng.below(10)});
    const auto expect = oracle::maxpool2d(in, window, stride);
    CHECK(oracle::max_abs_diff(maxpool2d(in, window, stride), expect) == 0.0);
    CHECK(oracle::max_abs_diff(reference::maxpool2d(in, window, stride), expect) == 0.0);
  }
}

TEST_CASE("dense matches the naive oracle on 200 random cases") {
  XorShift64Star rng(13);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng.below(300), m = 1 + rng.below(20);
    const auto in = oracle::random_tensor(rng, {n});
    const auto w = oracle::random_tensor(rng, {m, n});
    const auto b = oracle::random_tensor(rng, {m});
    const auto expect = oracle::dense(in, w, b);
    CHECK(oracle::max_abs_diff(dense(in, w, b), expect) <= 1e-9);
    CHECK(oracle::max_abs_diff(reference::dense(in, w, b), expect) <= 1e-9);
  }
}

TEST_CASE("OpenMP kernels are bit-identical to the serial reference for any thread count") {
  XorShift64Star rng(14);
  const int saved = omp_get_max_threads();
  for (int i = 0; i < 30; ++i) {
    const auto k = random_conv_case(rng);
    const auto ref = reference::conv2d(k.input, k.kernel, k.bias, k.p);
    const auto in = oracle::random_tensor(rng, {3, 9, 9});
    const auto pool_ref = reference::maxpool2d(in, 2, 2);
    const auto gap_ref = reference::global_avg_pool(in);
    for (int threads : {1, 2, 3, 4}) {
      omp_set_num_threads(threads);
      CHECK(conv2d(k.input, k.kernel, k.bias, k.p) == ref);
      CHECK(maxpool2d(in, 2, 2) == pool_ref);
      CHECK(global_avg_pool(in) == gap_ref);
    }
  }
  omp_set_num_threads(saved);
}

TEST_CASE("softmax: probability vector and shift invariance over 10,000 random logits") {
  XorShift64Star rng(15);
  for (int i = 0; i < 10000; ++i) {
    const std::size_t n = 1 + rng.below(10);
    const double scale = std::pow(10.0, static_cast<double>(rng.below(4)));
    const auto logits = oracle::random_tensor(rng, {n}, -scale, scale);
    const auto p = softmax(logits);
    double sum = 0.0;
    for (double v : p.values()) {
      CHECK((v >= 0.0 && v <= 1.0));
      sum += v;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);

    Tensor shifted = logits;
    const double c = rng.uniform(-100.0, 100.0);
    for (auto& v : shifted.values()) v += c;
    CHECK(oracle::max_abs_diff(softmax(shifted), p) <= 1e-12);
    CHECK(argmax(p.values()) == argmax(logits.values()));
  }
}

TEST_CASE("softmax survives extreme logits") {
  const auto p = softmax(Tensor({3}, std::vector<double>{1000.0, 999.0, -1000.0}));
  CHECK(p.all_finite());
  CHECK(p[0] == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))));
  CHECK(p[2] == 0.0);
}

TEST_CASE("relu, global average pool and flatten") {
  const Tensor t({1, 2, 2}, std::vector<double>{-1.0, 2.0, -0.0, 4.0});
  CHECK(relu(t).values() == std::vector<double>{0.0, 2.0, 0.0, 4.0});
  CHECK(global_avg_pool(t).values() == std::vector<double>{1.25});
  CHECK(flatten(t).shape() == std::vector<std::size_t>{4});
}

TEST_CASE("argmax resolves ties to the lowest index") {
  CHECK(argmax({0.2, 0.4, 0.4}) == 1);
  CHECK(argmax({0.5, 0.5}) == 0);
  CHECK(argmax({1.0}) == 0);
}

TEST_CASE("kernel shape errors") {
  CHECK(nn_error([] { conv2d(Tensor({1, 3, 3}), Tensor({1, 2, 2, 2}), Tensor({1}), {}); }) ==
        "ShapeMismatch");
  CHECK(nn_error([] { conv2d(Tensor({1, 2, 2}), Tensor({1, 1, 3, 3}), Tensor({1}), {}); }) ==
        "ShapeMismatch");
  CHECK(nn_error([] { dense(Tensor({3}), Tensor({2, 4}), Tensor({2})); }) == "ShapeMismatch");
  CHECK(nn_error([] { maxpool2d(Tensor({1, 2, 2}), 3, 1); }) == "ShapeMismatch");
  CHECK(nn_error([] { Tensor({2, 2}, std::vector<double>{1.0}); }) == "ShapeMismatch");
}

TEST_CASE("model files round-trip byte for byte") {
  for (auto kind : {kDemoCxrModel, kDemoOodModel}) {
    const auto m = make_demo_model(kind);
    const auto bytes = save_model(m);
    const auto loaded = load_model(bytes);
    CHECK(loaded == m);
    CHECK(save_model(loaded) == bytes);
    CHECK(save_model(make_demo_model(kind)) == bytes);
    CHECK(save_model(make_demo_model(kind, 43)) != bytes);
  }
  CHECK_THROWS_AS(make_demo_model("resnet"), std::invalid_argument);
}

TEST_CASE("committed demo models match the generator") {
  CHECK(read_file(testpaths::testdata() / "models" / "demo-cxr-3class.cbmf") ==
        save_model(make_demo_model(kDemoCxrModel)));
  CHECK(read_file(testpaths::testdata() / "models" / "demo-ood-2class.cbmf") ==
        save_model(make_demo_model(kDemoOodModel)));
}

TEST_CASE("model loader rejects damaged files") {
  auto bytes = save_model(make_demo_model(kDemoOodModel));
  CHECK(nn_error([&] { load_model(std::span(bytes).first(bytes.size() - 8)); }) == "SchemaError");
  auto extra = bytes;
  extra.push_back(0);
  CHECK(nn_error([&] { load_model(extra); }) == "SchemaError");
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK(nn_error([&] { load_model(bad_magic); }) == "SchemaError");
}

TEST_CASE("model validation names the failing layer") {
  auto m = make_demo_model(kDemoCxrModel);
  m.class_labels.pop_back();
  CHECK(nn_error([&] { validate_model(m); }) == "SchemaError");

  m = make_demo_model(kDemoCxrModel);
  m.layers.pop_back();
  CHECK(nn_error([&] { validate_model(m); }) == "SchemaError");

  m = make_demo_model(kDemoCxrModel);
  m.layers[0].weights = Tensor({1});
  try {
    validate_model(m);
    FAIL("expected SchemaError");
  } catch (const NnError& e) {
    CHECK(e.layer() == std::optional<std::size_t>(0));
  }
}

TEST_CASE("forward: shape and finiteness checks") {
  const auto m = make_demo_model(kDemoOodModel);
  CHECK(nn_error([&] { forward(m, Tensor({3, 10, 10})); }) == "ShapeMismatch");
  Tensor input({3, 224, 224}, 0.5);
  input[17] = std::numeric_limits<double>::quiet_NaN();
  CHECK(nn_error([&] { forward(m, input); }) == "NonFiniteInput");
  const auto p = forward(m, Tensor({3, 224, 224}, 0.5));
  CHECK(p.labels == m.class_labels);
  CHECK(p.model_version == m.name + "@" + m.version);
  double sum = 0.0;
  for (double v : p.probabilities) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("forward equals a hand-chained run of the oracle kernels") {
  const auto m = make_demo_model(kDemoCxrModel);
  XorShift64Star rng(16);
  const auto input = oracle::random_tensor(rng, {3, 224, 224}, 0.0, 1.0);
  Tensor x = input;
  for (const auto& l : m.layers) {
    switch (l.kind) {
      case LayerKind::Conv2d: x = oracle::conv2d(x, l.weights, l.bias, l.stride, l.pad); break;
      case LayerKind::MaxPool2d: x = oracle::maxpool2d(x, l.window, l.stride); break;
      case LayerKind::Relu:
        for (auto& v : x.values()) v = std::max(v, 0.0);
        break;
      case LayerKind::Flatten: x = x.reshaped({x.size()}); break;
      case LayerKind::Dense: x = oracle::dense(x, l.weights, l.bias); break;
      case LayerKind::GlobalAvgPool: {
        Tensor g({x.dim(0)});
        const std::size_t plane = x.dim(1) * x.dim(2);
        for (std::size_t c = 0; c < x.dim(0); ++c) {
          double s = 0.0;
          for (std::size_t i = 0; i < plane; ++i) s += x[c * plane + i];
          g[c] = s / static_cast<double>(plane);
        }
        x = g;
        break;
      }
      case LayerKind::Softmax: {
        double mx = x[0], s = 0.0;
        for (double v : x.values()) mx = std::max(mx, v);
        for (auto& v : x.values()) s += (v = std::exp(v - mx));
        for (auto& v : x.values()) v /= s;
        break;
      }
    }
  }
  const auto p = forward(m, input);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(p.probabilities[i] - x[i]) <= 1e-9);
}

TEST_CASE("preprocess: align-corners bilinear resize") {
  dicom::ImageGrid g;
  g.rows = 2;
  g.cols = 2;
  g.bits_allocated = 8;
  g.samples = {0, 255, 51, 102};
  const auto t = preprocess(g, 3, 3);
  REQUIRE(t.shape() == std::vector<std::size_t>{3, 3, 3});
  // Corners reproduce the source exactly; the center is the mean of all four.
  CHECK(t.at(0, 0, 0) == 0.0);
  CHECK(t.at(0, 0, 2) == 1.0);
  CHECK(t.at(0, 2, 0) == doctest::Approx(51.0 / 255.0));
  CHECK(t.at(0, 2, 2) == doctest::Approx(102.0 / 255.0));
  CHECK(t.at(0, 1, 1) == doctest::Approx((0 + 255 + 51 + 102) / 4.0 / 255.0));
  CHECK(t.at(0, 0, 1) == doctest::Approx(127.5 / 255.0));
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK(t[i] == t[9 + i]);
    CHECK(t[i] == t[18 + i]);
  }
  CHECK(align_corners_src(223, 64, 224) == doctest::Approx(63.0));
}

TEST_CASE("preprocess: MONOCHROME1 inverts and 16-bit scales by 65535") {
  dicom::ImageGrid g;
  g.rows = 1;
  g.cols = 2;
  g.bits_allocated = 16;
  g.samples = {0, 65535};
  g.photometric = dicom::Photometric::Monochrome1;
  const auto t = preprocess(g, 1, 2);
  CHECK(t.at(0, 0, 0) == 1.0);
  CHECK(t.at(0, 0, 1) == 0.0);
  g.photometric = dicom::Photometric::Monochrome2;
  g.samples = {13107, 13107};
  const auto u = preprocess(g, 4, 4);
  for (double v : u.values()) CHECK(v == doctest::Approx(0.2));
}
