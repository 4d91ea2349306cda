#pragma once

#include <cstdint>
#include <string_view>

#include "cxr/nn/model.hpp"

namespace cxr::nn {

inline constexpr std::string_view kDemoCxrModel = "demo-cxr-3class";
inline constexpr std::string_view kDemoOodModel = "demo-ood-2class";
inline constexpr std::uint64_t kDemoSeed = 42;

/// Small fixed topologies over a 224x224x3 input whose weights are drawn
/// from xorshift64* (uniform, fan-in scaled). Throws std::invalid_argument
/// on an unknown kind.
ModelFile make_demo_model(std::string_view kind, std::uint64_t seed = kDemoSeed);

}  // namespace cxr::nn
