#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cxr/augment/transforms.hpp"

namespace cxr::augment {

struct AugmentPlan {
  std::uint64_t seed = 0;
  int variants_per_image = 5;
  AugmentRanges ranges;
};

/// Seed of variant `variant` of input `index`; op and parameters are
/// sampled from a fresh generator seeded with it.
std::uint64_t variant_seed(std::uint64_t plan_seed, std::size_t index, int variant);

struct BatchError {
  std::size_t index = 0;
  std::string path;
  std::string message;
};

struct BatchResult {
  std::size_t written = 0;
  std::vector<BatchError> errors;
};

inline constexpr const char* kOutputManifestName = "manifest.csv";
inline constexpr const char* kOutputManifestHeader = "path,label,source,op,params,seed";

/// Reads a CSV manifest with at least `path` and `label` columns (paths are
/// relative to the manifest's directory), writes variants_per_image PGM
/// variants per readable input into out_dir, and writes out_dir/manifest.csv
/// in input order. Unreadable inputs are reported and skipped.
BatchResult augment_batch(const std::filesystem::path& manifest_in,
                          const std::filesystem::path& out_dir, const AugmentPlan& plan);

}  // namespace cxr::augment
