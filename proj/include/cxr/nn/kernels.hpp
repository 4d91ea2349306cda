#pragma once

#include "cxr/nn/tensor.hpp"

// Layer primitives. The top-level functions are the OpenMP versions used by
// the engine; `reference::` holds straightforward serial loop nests kept for
// testing and benchmarking. Both produce bit-identical results: every output
// element is accumulated in the same order regardless of thread count.

namespace cxr::nn {

struct ConvParams {
  std::size_t stride = 1;
  std::size_t pad = 0;
};

/// Cross-correlation with zero padding. input [C,H,W], kernel [O,C,kh,kw],
/// bias [O] -> [O, (H+2p-kh)/s+1, (W+2p-kw)/s+1].
Tensor conv2d(const Tensor& input, const Tensor& kernel, const Tensor& bias, ConvParams p);

/// input [C,H,W] -> [C, (H-window)/stride+1, (W-window)/stride+1].
Tensor maxpool2d(const Tensor& input, std::size_t window, std::size_t stride);

/// input [n], weights [m,n], bias [m] -> [m].
Tensor dense(const Tensor& input, const Tensor& weights, const Tensor& bias);

Tensor relu(const Tensor& input);

/// Max-subtracted softmax over a rank-1 tensor.
Tensor softmax(const Tensor& logits);

/// [C,H,W] -> [C], mean over each plane.
Tensor global_avg_pool(const Tensor& input);

Tensor flatten(const Tensor& input);

namespace reference {
Tensor conv2d(const Tensor& input, const Tensor& kernel, const Tensor& bias, ConvParams p);
Tensor maxpool2d(const Tensor& input, std::size_t window, std::size_t stride);
Tensor dense(const Tensor& input, const Tensor& weights, const Tensor& bias);
Tensor global_avg_pool(const Tensor& input);
}  // namespace reference

/// Shape checks shared by both implementations; throw NnError(ShapeMismatch).
std::vector<std::size_t> conv2d_output_shape(const std::vector<std::size_t>& input,
                                             const std::vector<std::size_t>& kernel,
                                             const std::vector<std::size_t>& bias,
                                             ConvParams p);
std::vector<std::size_t> maxpool2d_output_shape(const std::vector<std::size_t>& input,
                                                std::size_t window, std::size_t stride);
std::vector<std::size_t> dense_output_shape(const std::vector<std::size_t>& input,
                                            const std::vector<std::size_t>& weights,
                                            const std::vector<std::size_t>& bias);

}  // namespace cxr::nn
