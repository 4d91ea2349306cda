#pragma once

#include <cstddef>

#include "cxr/dicom/pixels.hpp"
#include "cxr/nn/tensor.hpp"

namespace cxr::nn {

inline constexpr std::size_t kInputSize = 224;

/// ImageGrid -> [3, height, width] in [0,1]. MONOCHROME1 is inverted,
/// intensities are divided by 2^bits - 1, the plane is resized bilinearly
/// with align-corners mapping and replicated into three channels.
Tensor preprocess(const dicom::ImageGrid& grid, std::size_t height = kInputSize,
                  std::size_t width = kInputSize);

/// Align-corners source coordinate for destination index `d`.
inline double align_corners_src(std::size_t d, std::size_t src_size, std::size_t dst_size) {
  if (dst_size <= 1) return 0.0;
  return static_cast<double>(d) * static_cast<double>(src_size - 1) /
         static_cast<double>(dst_size - 1);
}

}  // namespace cxr::nn
