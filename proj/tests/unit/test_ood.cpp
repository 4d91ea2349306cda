#include <doctest.h>

#include "cxr/common/rng.hpp"
#include "cxr/nn/demo_models.hpp"
#include "cxr/nn/engine.hpp"
#include "cxr/nn/preprocess.hpp"
#include "cxr/ood/gate.hpp"
#include "support/images.hpp"

using namespace cxr;

TEST_CASE("gate score is the gate model's in-distribution probability") {
  const auto m = nn::make_demo_model(nn::kDemoOodModel);
  const auto img = nn::preprocess(testimg::phantom(64, 64, 8, 1));
  const auto d = ood::gate(img, m, 0.5);
  CHECK(d.in_dist_prob == nn::forward(m, img).probabilities[0]);
  CHECK(d.accepted == (d.in_dist_prob >= 0.5));
  CHECK(d.threshold == 0.5);
  CHECK(d.ood_model_version == "demo-ood-2class@1.0.0");
}

TEST_CASE("gate decisions are monotone in the threshold") {
  const auto m = nn::make_demo_model(nn::kDemoOodModel);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto img = nn::preprocess(testimg::phantom(48, 56, seed % 2 ? 8 : 16, seed));
    bool prev = true;
    for (int i = 0; i <= 100; ++i) {
      const double t = i / 100.0;
      const bool acc = ood::gate(img, m, t).accepted;
      CHECK((prev || !acc));  // once rejected, stays rejected as t grows
      prev = acc;
    }
    CHECK(ood::gate(img, m, 0.0).accepted);
  }
}

TEST_CASE("acceptance rule boundary is inclusive") {
  CHECK(ood::accepts(0.5, 0.5));
  CHECK_FALSE(ood::accepts(0.4999999, 0.5));
  CHECK(ood::accepts(0.0, 0.0));
  CHECK_FALSE(ood::accepts(0.999, 1.0));
}

TEST_CASE("gate rejects bad thresholds and non-binary models") {
  const auto m = nn::make_demo_model(nn::kDemoOodModel);
  const auto img = nn::preprocess(testimg::flat(8, 8, 100));
  CHECK_THROWS_AS(ood::gate(img, m, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(ood::gate(img, m, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(ood::check_gate_model(nn::make_demo_model(nn::kDemoCxrModel)),
                  ood::ModelArityError);
  CHECK_NOTHROW(ood::check_gate_model(m));
}
