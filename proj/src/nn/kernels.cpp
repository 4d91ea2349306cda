#include "cxr/nn/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cxr/nn/errors.hpp"

namespace cxr::nn {

std::vector<std::size_t> conv2d_output_shape(const std::vector<std::size_t>& in,
                                             const std::vector<std::size_t>& k,
                                             const std::vector<std::size_t>& b, ConvParams p) {
  if (in.size() != 3 || k.size() != 4 || b.size() != 1) {
    throw NnError(ErrorCode::ShapeMismatch, "conv2d expects input [C,H,W], kernel [O,C,kh,kw], "
                                            "bias [O]; got " +
                                                shape_str(in) + ", " + shape_str(k) + ", " +
                                                shape_str(b));
  }
  if (k[1] != in[0]) {
    throw NnError(ErrorCode::ShapeMismatch, "conv2d kernel expects " + std::to_string(k[1]) +
                                                " input channels, input has " +
                                                std::to_string(in[0]));
  }
  if (b[0] != k[0]) {
    throw NnError(ErrorCode::ShapeMismatch, "conv2d bias length != output channels");
  }
  if (p.stride == 0) throw NnError(ErrorCode::ShapeMismatch, "conv2d stride must be positive");
  if (in[1] + 2 * p.pad < k[2] || in[2] + 2 * p.pad < k[3]) {
    throw NnError(ErrorCode::ShapeMismatch, "conv2d kernel larger than padded input " +
                                                shape_str(in));
  }
  return {k[0], (in[1] + 2 * p.pad - k[2]) / p.stride + 1,
          (in[2] + 2 * p.pad - k[3]) / p.stride + 1};
}

std::vector<std::size_t> maxpool2d_output_shape(const std::vector<std::size_t>& in,
                                                std::size_t window, std::size_t stride) {
  if (in.size() != 3) {
    throw NnError(ErrorCode::ShapeMismatch, "maxpool2d expects [C,H,W], got " + shape_str(in));
  }
  if (window == 0 || stride == 0) {
    throw NnError(ErrorCode::ShapeMismatch, "maxpool2d window and stride must be positive");
  }
  if (in[1] < window || in[2] < window) {
    throw NnError(ErrorCode::ShapeMismatch, "maxpool2d window " + std::to_string(window) +
                                                " exceeds input " + shape_str(in));
  }
  return {in[0], (in[1] - window) / stride + 1, (in[2] - window) / stride + 1};
}

std::vector<std::size_t> dense_output_shape(const std::vector<std::size_t>& in,
                                            const std::vector<std::size_t>& w,
                                            const std::vector<std::size_t>& b) {
  if (in.size() != 1 || w.size() != 2 || b.size() != 1 || w[1] != in[0] || b[0] != w[0]) {
    throw NnError(ErrorCode::ShapeMismatch, "dense expects input [n], weights [m,n], bias [m]; "
                                            "got " +
                                                shape_str(in) + ", " + shape_str(w) + ", " +
                                                shape_str(b));
  }
  return {w[0]};
}

Tensor conv2d(const Tensor& input, const Tensor& kernel, const Tensor& bias, ConvParams p) {
  const auto out_shape = conv2d_output_shape(input.shape(), kernel.shape(), bias.shape(), p);
  const std::size_t C = input.dim(0), H = input.dim(1), W = input.dim(2);
  const std::size_t O = out_shape[0], OH = out_shape[1], OW = out_shape[2];
  const std::size_t KH = kernel.dim(2), KW = kernel.dim(3);
  const std::size_t s = p.stride;
  const auto pad = static_cast<std::ptrdiff_t>(p.pad);
  Tensor out(out_shape);
  const double* in = input.data().data();
  const double* k = kernel.data().data();
  double* dst = out.data().data();

  // Each (o, oy) row is owned by one thread and accumulated in (c, ky, kx)
  // order, matching the reference loop nest exactly.
#pragma omp parallel for collapse(2) schedule(static)
  for (std::size_t o = 0; o < O; ++o) {
    for (std::size_t oy = 0; oy < OH; ++oy) {
      double* row = dst + (o * OH + oy) * OW;
      std::fill(row, row + OW, bias[o]);
      for (std::size_t c = 0; c < C; ++c) {
        for (std::size_t ky = 0; ky < KH; ++ky) {
          const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(oy * s + ky) - pad;
          if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(H)) continue;
          const double* src = in + (c * H + static_cast<std::size_t>(iy)) * W;
          const double* wrow = k + ((o * C + c) * KH + ky) * KW;
          for (std::size_t kx = 0; kx < KW; ++kx) {
            const double w = wrow[kx];
            // ix = ox*s + kx - pad must lie in [0, W).
            const std::ptrdiff_t shift = static_cast<std::ptrdiff_t>(kx) - pad;
            std::size_t ox_lo = 0;
            if (shift < 0) ox_lo = (static_cast<std::size_t>(-shift) + s - 1) / s;
            const std::ptrdiff_t span = static_cast<std::ptrdiff_t>(W) - 1 - shift;
            if (span < 0) continue;
            const std::size_t ox_hi = std::min(OW, static_cast<std::size_t>(span) / s + 1);
            for (std::size_t ox = ox_lo; ox < ox_hi; ++ox) {
              row[ox] += w * src[static_cast<std::ptrdiff_t>(ox * s) + shift];
            }
          }
        }
      }
    }
  }
  return out;
}

Tensor maxpool2d(const Tensor& input, std::size_t window, std::size_t stride) {
  const auto out_shape = maxpool2d_output_shape(input.shape(), window, stride);
  const std::size_t C = out_shape[0], OH = out_shape[1], OW = out_shape[2];
  Tensor out(out_shape);
#pragma omp parallel for collapse(2) schedule(static)
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t oy = 0; oy < OH; ++oy) {
      for (std::size_t ox = 0; ox < OW; ++ox) {
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t dy = 0; dy < window; ++dy) {
          for (std::size_t dx = 0; dx < window; ++dx) {
            m = std::max(m, input.at(c, oy * stride + dy, ox * stride + dx));
          }
        }
        out.at(c, oy, ox) = m;
      }
    }
  }
  return out;
}

Tensor dense(const Tensor& input, const Tensor& weights, const Tensor& bias) {
  const auto out_shape = dense_output_shape(input.shape(), weights.shape(), bias.shape());
  const std::size_t M = out_shape[0], N = input.dim(0);
  Tensor out(out_shape);
  const double* x = input.data().data();
  const double* w = weights.data().data();
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < M; ++i) {
    double acc = bias[i];
    const double* wrow = w + i * N;
    for (std::size_t j = 0; j < N; ++j) acc += wrow[j] * x[j];
    out[i] = acc;
  }
  return out;
}

Tensor relu(const Tensor& input) {
  Tensor out = input;
  for (double& v : out.data()) v = v > 0.0 ? v : 0.0;
  return out;
}

Tensor softmax(const Tensor& logits) {
  if (logits.rank() != 1 || logits.size() == 0) {
    throw NnError(ErrorCode::ShapeMismatch, "softmax expects a non-empty vector, got " +
                                                shape_str(logits.shape()));
  }
  const double mx = *std::max_element(logits.values().begin(), logits.values().end());
  Tensor out(logits.shape());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - mx);
    sum += out[i];
  }
  for (double& v : out.data()) v /= sum;
  return out;
}

Tensor global_avg_pool(const Tensor& input) {
  if (input.rank() != 3) {
    throw NnError(ErrorCode::ShapeMismatch,
                  "globalavgpool expects [C,H,W], got " + shape_str(input.shape()));
  }
  const std::size_t C = input.dim(0), plane = input.dim(1) * input.dim(2);
  Tensor out({C});
  const double* src = input.data().data();
#pragma omp parallel for schedule(static)
  for (std::size_t c = 0; c < C; ++c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < plane; ++i) acc += src[c * plane + i];
    out[c] = acc / static_cast<double>(plane);
  }
  return out;
}

Tensor flatten(const Tensor& input) { return input.reshaped({input.size()}); }

namespace reference {

Tensor conv2d(const Tensor& input, const Tensor& kernel, const Tensor& bias, ConvParams p) {
  const auto out_shape = conv2d_output_shape(input.shape(), kernel.shape(), bias.shape(), p);
  const std::size_t C = input.dim(0), H = input.dim(1), W = input.dim(2);
  const std::size_t KH = kernel.dim(2), KW = kernel.dim(3);
  Tensor out(out_shape);
  for (std::size_t o = 0; o < out_shape[0]; ++o) {
    for (std::size_t oy = 0; oy < out_shape[1]; ++oy) {
      for (std::size_t ox = 0; ox < out_shape[2]; ++ox) {
        double acc = bias[o];
        for (std::size_t c = 0; c < C; ++c) {
          for (std::size_t ky = 0; ky < KH; ++ky) {
            for (std::size_t kx = 0; kx < KW; ++kx) {
              const auto iy = static_cast<std::ptrdiff_t>(oy * p.stride + ky) -
                              static_cast<std::ptrdiff_t>(p.pad);
              const auto ix = static_cast<std::ptrdiff_t>(ox * p.stride + kx) -
                              static_cast<std::ptrdiff_t>(p.pad);
              if (iy < 0 || ix < 0 || iy >= static_cast<std::ptrdiff_t>(H) ||
                  ix >= static_cast<std::ptrdiff_t>(W)) {
                continue;
              }
              acc += kernel[((o * C + c) * KH + ky) * KW + kx] *
                     input.at(c, static_cast<std::size_t>(iy), static_cast<std::size_t>(ix));
            }
          }
        }
        out.at(o, oy, ox) = acc;
      }
    }
  }
  return out;
}

Tensor maxpool2d(const Tensor& input, std::size_t window, std::size_t stride) {
  const auto out_shape = maxpool2d_output_shape(input.shape(), window, stride);
  Tensor out(out_shape);
  for (std::size_t c = 0; c < out_shape[0]; ++c) {
    for (std::size_t oy = 0; oy < out_shape[1]; ++oy) {
      for (std::size_t ox = 0; ox < out_shape[2]; ++ox) {
        double m = input.at(c, oy * stride, ox * stride);
        for (std::size_t dy = 0; dy < window; ++dy) {
          for (std::size_t dx = 0; dx < window; ++dx) {
            m = std::max(m, input.at(c, oy * stride + dy, ox * stride + dx));
          }
        }
        out.at(c, oy, ox) = m;
      }
    }
  }
  return out;
}

Tensor dense(const Tensor& input, const Tensor& weights, const Tensor& bias) {
  const auto out_shape = dense_output_shape(input.shape(), weights.shape(), bias.shape());
  Tensor out(out_shape);
  const std::size_t N = input.dim(0);
  for (std::size_t i = 0; i < out_shape[0]; ++i) {
    double acc = bias[i];
    for (std::size_t j = 0; j < N; ++j) acc += weights[i * N + j] * input[j];
    out[i] = acc;
  }
  return out;
}

Tensor global_avg_pool(const Tensor& input) {
  if (input.rank() != 3) {
    throw NnError(ErrorCode::ShapeMismatch,
                  "globalavgpool expects [C,H,W], got " + shape_str(input.shape()));
  }
  Tensor out({input.dim(0)});
  for (std::size_t c = 0; c < input.dim(0); ++c) {
    double acc = 0.0;
    for (std::size_t y = 0; y < input.dim(1); ++y) {
      for (std::size_t x = 0; x < input.dim(2); ++x) acc += input.at(c, y, x);
    }
    out[c] = acc / static_cast<double>(input.dim(1) * input.dim(2));
  }
  return out;
}

}  // namespace reference

}  // namespace cxr::nn
