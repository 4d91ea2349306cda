#include "cxr/augment/transforms.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cxr/common/io.hpp"

namespace cxr::augment {

namespace {

std::uint16_t clamp_round(double v, std::uint32_t maxv) {
  const double r = std::round(v);
  if (r <= 0.0) return 0;
  if (r >= maxv) return static_cast<std::uint16_t>(maxv);
  return static_cast<std::uint16_t>(r);
}

ImageGrid like(const ImageGrid& img) {
  ImageGrid out = img;
  std::fill(out.samples.begin(), out.samples.end(), 0);
  return out;
}

// Bilinear sample at (sy, sx); the caller guarantees the point lies in
// [0, rows-1] x [0, cols-1].
double bilinear(const ImageGrid& img, double sy, double sx) {
  const auto y0 = std::min(static_cast<std::uint32_t>(sy), img.rows - 1);
  const auto x0 = std::min(static_cast<std::uint32_t>(sx), img.cols - 1);
  const auto y1 = std::min(y0 + 1, img.rows - 1);
  const auto x1 = std::min(x0 + 1, img.cols - 1);
  const double fy = sy - y0, fx = sx - x0;
  const double top = (1.0 - fx) * img.at(y0, x0) + fx * img.at(y0, x1);
  const double bot = (1.0 - fx) * img.at(y1, x0) + fx * img.at(y1, x1);
  return (1.0 - fy) * top + fy * bot;
}

// Standard JPEG luminance quantization table (ITU-T T.81 Annex K).
constexpr std::array<int, 64> kLuminanceQuant = {
    16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
    14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
    18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};

struct DctBasis {
  // basis[u][x] = C(u)/2 * cos((2x+1) u pi / 16)
  double basis[8][8];
  DctBasis() {
    for (int u = 0; u < 8; ++u) {
      const double cu = u == 0 ? 1.0 / std::numbers::sqrt2 : 1.0;
      for (int x = 0; x < 8; ++x) {
        basis[u][x] = 0.5 * cu * std::cos((2 * x + 1) * u * std::numbers::pi / 16.0);
      }
    }
  }
};

const DctBasis& dct_basis() {
  static const DctBasis b;
  return b;
}

}  // namespace

ImageGrid vflip(const ImageGrid& img) {
  ImageGrid out = img;
  for (std::uint32_t r = 0; r < img.rows; ++r) {
    std::copy_n(img.samples.begin() + static_cast<std::ptrdiff_t>(r) * img.cols, img.cols,
                out.samples.begin() + static_cast<std::ptrdiff_t>(img.rows - 1 - r) * img.cols);
  }
  return out;
}

ImageGrid rotate(const ImageGrid& img, double degrees) {
  if (!(std::abs(degrees) <= 45.0)) throw std::invalid_argument("rotation beyond +/-45 degrees");
  ImageGrid out = like(img);
  const double theta = degrees * std::numbers::pi / 180.0;
  const double c = std::cos(theta), s = std::sin(theta);
  const double cy = (img.rows - 1) / 2.0, cx = (img.cols - 1) / 2.0;
  const double ymax = img.rows - 1, xmax = img.cols - 1;
  constexpr double eps = 1e-9;
  const auto maxv = img.max_value();
  const auto rows = static_cast<std::ptrdiff_t>(img.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t yi = 0; yi < rows; ++yi) {
    const auto y = static_cast<std::uint32_t>(yi);
    for (std::uint32_t x = 0; x < img.cols; ++x) {
      const double dx = x - cx, dy = y - cy;
      double sx = cx + c * dx + s * dy;
      double sy = cy - s * dx + c * dy;
      if (sx < -eps || sy < -eps || sx > xmax + eps || sy > ymax + eps) continue;
      sx = std::clamp(sx, 0.0, xmax);
      sy = std::clamp(sy, 0.0, ymax);
      out.samples[static_cast<std::size_t>(y) * img.cols + x] =
          clamp_round(bilinear(img, sy, sx), maxv);
    }
  }
  return out;
}

ImageGrid brightness(const ImageGrid& img, double gain) {
  ImageGrid out = img;
  const auto maxv = img.max_value();
  for (auto& v : out.samples) v = clamp_round(v * gain, maxv);
  return out;
}

ImageGrid zoom(const ImageGrid& img, double scale) {
  if (!(scale >= 1.0)) throw std::invalid_argument("zoom scale must be >= 1");
  ImageGrid out = like(img);
  const double cy = (img.rows - 1) / 2.0, cx = (img.cols - 1) / 2.0;
  const auto maxv = img.max_value();
  const auto rows = static_cast<std::ptrdiff_t>(img.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t yi = 0; yi < rows; ++yi) {
    const auto y = static_cast<std::uint32_t>(yi);
    const double sy = cy + (y - cy) / scale;
    for (std::uint32_t x = 0; x < img.cols; ++x) {
      const double sx = cx + (x - cx) / scale;
      out.samples[static_cast<std::size_t>(y) * img.cols + x] =
          clamp_round(bilinear(img, sy, sx), maxv);
    }
  }
  return out;
}

ImageGrid saturation(const ImageGrid& img, double factor) {
  ImageGrid out = img;
  if (img.samples.empty()) return out;
  double sum = 0.0;
  for (auto v : img.samples) sum += v;
  const double mean = sum / static_cast<double>(img.samples.size());
  const auto maxv = img.max_value();
  for (auto& v : out.samples) v = clamp_round(mean + factor * (v - mean), maxv);
  return out;
}

std::array<int, 64> jpeg_quant_table(int quality) {
  quality = std::clamp(quality, 1, 100);
  const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  std::array<int, 64> t{};
  for (int i = 0; i < 64; ++i) t[i] = std::clamp((kLuminanceQuant[i] * scale + 50) / 100, 1, 255);
  return t;
}

ImageGrid jpeg_noise(const ImageGrid& img, int quality) {
  if (quality < 30 || quality > 90) throw std::invalid_argument("jpeg quality outside [30,90]");
  const auto table = jpeg_quant_table(quality);
  // 16-bit data is quantized on the same relative scale as 8-bit.
  const double unit = (img.max_value() + 1.0) / 256.0;
  const double shift = (img.max_value() + 1.0) / 2.0;
  const auto& B = dct_basis().basis;
  const auto maxv = img.max_value();
  ImageGrid out = img;
  const std::ptrdiff_t block_rows = (img.rows + 7) / 8;
  const std::uint32_t block_cols = (img.cols + 7) / 8;

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t by = 0; by < block_rows; ++by) {
    for (std::uint32_t bx = 0; bx < block_cols; ++bx) {
      double f[8][8], tmp[8][8], coef[8][8];
      // Edge blocks are padded by replicating the last row/column.
      for (int y = 0; y < 8; ++y) {
        const auto sy = std::min<std::uint32_t>(static_cast<std::uint32_t>(by * 8 + y), img.rows - 1);
        for (int x = 0; x < 8; ++x) {
          const auto sx = std::min<std::uint32_t>(bx * 8 + x, img.cols - 1);
          f[y][x] = img.at(sy, sx) - shift;
        }
      }
      // Separable forward DCT: rows then columns.
      for (int y = 0; y < 8; ++y) {
        for (int u = 0; u < 8; ++u) {
          double acc = 0.0;
          for (int x = 0; x < 8; ++x) acc += B[u][x] * f[y][x];
          tmp[y][u] = acc;
        }
      }
      for (int v = 0; v < 8; ++v) {
        for (int u = 0; u < 8; ++u) {
          double acc = 0.0;
          for (int y = 0; y < 8; ++y) acc += B[v][y] * tmp[y][u];
          const double q = table[v * 8 + u] * unit;
          coef[v][u] = std::round(acc / q) * q;
        }
      }
      // Inverse: columns then rows.
      for (int y = 0; y < 8; ++y) {
        for (int u = 0; u < 8; ++u) {
          double acc = 0.0;
          for (int v = 0; v < 8; ++v) acc += B[v][y] * coef[v][u];
          tmp[y][u] = acc;
        }
      }
      for (int y = 0; y < 8; ++y) {
        const std::uint32_t oy = static_cast<std::uint32_t>(by * 8 + y);
        if (oy >= img.rows) break;
        for (int x = 0; x < 8; ++x) {
          const std::uint32_t ox = bx * 8 + x;
          if (ox >= img.cols) break;
          double acc = 0.0;
          for (int u = 0; u < 8; ++u) acc += B[u][x] * tmp[y][u];
          out.samples[static_cast<std::size_t>(oy) * img.cols + ox] = clamp_round(acc + shift, maxv);
        }
      }
    }
  }
  return out;
}

std::string_view augment_kind_name(AugmentKind kind) {
  switch (kind) {
    case AugmentKind::VFlip: return "vflip";
    case AugmentKind::Rotate: return "rotate";
    case AugmentKind::Brightness: return "brightness";
    case AugmentKind::Zoom: return "zoom";
    case AugmentKind::Saturation: return "saturation";
    case AugmentKind::JpegNoise: return "jpeg_noise";
  }
  return "?";
}

AugmentKind parse_augment_kind(std::string_view name) {
  for (int i = 0; i < kAugmentKindCount; ++i) {
    const auto k = static_cast<AugmentKind>(i);
    if (augment_kind_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown augment op '" + std::string(name) + "'");
}

namespace {

std::string_view param_key(AugmentKind kind) {
  switch (kind) {
    case AugmentKind::VFlip: return "";
    case AugmentKind::Rotate: return "degrees";
    case AugmentKind::Brightness: return "gain";
    case AugmentKind::Zoom: return "scale";
    case AugmentKind::Saturation: return "factor";
    case AugmentKind::JpegNoise: return "quality";
  }
  return "";
}

}  // namespace

std::string AugmentOp::params() const {
  const auto key = param_key(kind);
  if (key.empty()) return "";
  if (kind == AugmentKind::JpegNoise) {
    return std::string(key) + "=" + std::to_string(static_cast<int>(value));
  }
  return std::string(key) + "=" + format_double(value);
}

AugmentOp AugmentOp::parse(std::string_view kind, std::string_view params) {
  AugmentOp op;
  op.kind = parse_augment_kind(kind);
  const auto key = param_key(op.kind);
  if (key.empty()) {
    if (!params.empty()) throw std::invalid_argument("vflip takes no parameters");
    return op;
  }
  const auto eq = params.find('=');
  if (eq == std::string_view::npos || params.substr(0, eq) != key) {
    throw std::invalid_argument("expected '" + std::string(key) + "=<value>' for " +
                                std::string(kind));
  }
  const std::string text(params.substr(eq + 1));
  char* end = nullptr;
  op.value = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw std::invalid_argument("bad parameter value '" + text + "'");
  }
  return op;
}

AugmentOp sample_op(XorShift64Star& rng, const AugmentRanges& r) {
  AugmentOp op;
  op.kind = static_cast<AugmentKind>(rng.below(kAugmentKindCount));
  switch (op.kind) {
    case AugmentKind::VFlip: break;
    case AugmentKind::Rotate: op.value = rng.uniform(r.rotate_min, r.rotate_max); break;
    case AugmentKind::Brightness: op.value = rng.uniform(r.gain_min, r.gain_max); break;
    case AugmentKind::Zoom: op.value = rng.uniform(r.zoom_min, r.zoom_max); break;
    case AugmentKind::Saturation:
      op.value = rng.uniform(r.saturation_min, r.saturation_max);
      break;
    case AugmentKind::JpegNoise:
      op.value = static_cast<double>(
          r.quality_min +
          static_cast<int>(rng.below(static_cast<std::uint64_t>(r.quality_max - r.quality_min + 1))));
      break;
  }
  return op;
}

void check_in_range(const AugmentOp& op, const AugmentRanges& r) {
  auto within = [&](double lo, double hi) {
    if (!(op.value >= lo && op.value <= hi)) {
      throw std::invalid_argument(std::string(augment_kind_name(op.kind)) + " parameter " +
                                  format_double(op.value) + " outside [" + format_double(lo) +
                                  ", " + format_double(hi) + "]");
    }
  };
  switch (op.kind) {
    case AugmentKind::VFlip: break;
    case AugmentKind::Rotate: within(r.rotate_min, r.rotate_max); break;
    case AugmentKind::Brightness: within(r.gain_min, r.gain_max); break;
    case AugmentKind::Zoom: within(r.zoom_min, r.zoom_max); break;
    case AugmentKind::Saturation: within(r.saturation_min, r.saturation_max); break;
    case AugmentKind::JpegNoise:
      within(r.quality_min, r.quality_max);
      if (op.value != std::floor(op.value)) throw std::invalid_argument("quality must be integral");
      break;
  }
}

ImageGrid apply(const AugmentOp& op, const ImageGrid& img) {
  switch (op.kind) {
    case AugmentKind::VFlip: return vflip(img);
    case AugmentKind::Rotate: return rotate(img, op.value);
    case AugmentKind::Brightness: return brightness(img, op.value);
    case AugmentKind::Zoom: return zoom(img, op.value);
    case AugmentKind::Saturation: return saturation(img, op.value);
    case AugmentKind::JpegNoise: return jpeg_noise(img, static_cast<int>(op.value));
  }
  return img;
}

}  // namespace cxr::augment
