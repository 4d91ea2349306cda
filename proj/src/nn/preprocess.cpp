#include "cxr/nn/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace cxr::nn {

Tensor preprocess(const dicom::ImageGrid& grid, std::size_t height, std::size_t width) {
  grid.validate();
  const std::size_t rows = grid.rows, cols = grid.cols;
  const double maxv = static_cast<double>(grid.max_value());
  const bool invert = grid.photometric == dicom::Photometric::Monochrome1;

  std::vector<double> norm(grid.samples.size());
  for (std::size_t i = 0; i < norm.size(); ++i) {
    const double v = grid.samples[i];
    norm[i] = (invert ? maxv - v : v) / maxv;
  }

  Tensor out({3, height, width});
  double* plane = out.data().data();
#pragma omp parallel for schedule(static)
  for (std::size_t y = 0; y < height; ++y) {
    const double sy = align_corners_src(y, rows, height);
    const std::size_t y0 = std::min(static_cast<std::size_t>(sy), rows - 1);
    const std::size_t y1 = std::min(y0 + 1, rows - 1);
    const double fy = sy - static_cast<double>(y0);
    for (std::size_t x = 0; x < width; ++x) {
      const double sx = align_corners_src(x, cols, width);
      const std::size_t x0 = std::min(static_cast<std::size_t>(sx), cols - 1);
      const std::size_t x1 = std::min(x0 + 1, cols - 1);
      const double fx = sx - static_cast<double>(x0);
      const double top = (1.0 - fx) * norm[y0 * cols + x0] + fx * norm[y0 * cols + x1];
      const double bot = (1.0 - fx) * norm[y1 * cols + x0] + fx * norm[y1 * cols + x1];
      plane[y * width + x] = std::clamp((1.0 - fy) * top + fy * bot, 0.0, 1.0);
    }
  }
  const std::size_t n = height * width;
  std::copy(plane, plane + n, plane + n);
  std::copy(plane, plane + n, plane + 2 * n);
  return out;
}

}  // namespace cxr::nn
