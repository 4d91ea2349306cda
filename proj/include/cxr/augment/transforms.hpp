#pragma once

#include <array>
#include <string>
#include <string_view>

#include "cxr/common/rng.hpp"
#include "cxr/dicom/pixels.hpp"

namespace cxr::augment {

using dicom::ImageGrid;

/// Reverses row order.
ImageGrid vflip(const ImageGrid& img);

/// Rotation about the image center with bilinear sampling; pixels mapping
/// outside the source are 0. |degrees| <= 45.
ImageGrid rotate(const ImageGrid& img, double degrees);

/// v -> clamp(round(v * gain)).
ImageGrid brightness(const ImageGrid& img, double gain);

/// Center crop to 1/scale of each side, resized back bilinearly. scale >= 1.
ImageGrid zoom(const ImageGrid& img, double scale);

/// Grayscale "saturation": contrast about the image mean,
/// v -> clamp(round(mean + factor * (v - mean))).
ImageGrid saturation(const ImageGrid& img, double factor);

/// JPEG's lossy step without entropy coding: per 8x8 block DCT-II,
/// quantization with the standard luminance table scaled for `quality`,
/// dequantization, inverse DCT, clamp. quality in [30, 90].
ImageGrid jpeg_noise(const ImageGrid& img, int quality);

/// libjpeg quality -> scaled luminance quantization table (row-major 8x8).
std::array<int, 64> jpeg_quant_table(int quality);

enum class AugmentKind { VFlip, Rotate, Brightness, Zoom, Saturation, JpegNoise };

inline constexpr int kAugmentKindCount = 6;

std::string_view augment_kind_name(AugmentKind kind);
AugmentKind parse_augment_kind(std::string_view name);

/// Sampling ranges. Defaults are conservative for chest radiographs.
struct AugmentRanges {
  double rotate_min = -15.0, rotate_max = 15.0;
  double gain_min = 0.7, gain_max = 1.3;
  double zoom_min = 1.0, zoom_max = 1.2;
  double saturation_min = 0.5, saturation_max = 1.5;
  int quality_min = 30, quality_max = 90;
};

/// One transform with its parameter (unused for vflip; an integer quality
/// for jpeg_noise).
struct AugmentOp {
  AugmentKind kind = AugmentKind::VFlip;
  double value = 0.0;

  bool operator==(const AugmentOp&) const = default;

  /// "degrees=3.25", "gain=1.1", "scale=1.05", "factor=0.8", "quality=47"
  /// or "" for vflip. Values use round-trip precision.
  std::string params() const;
  static AugmentOp parse(std::string_view kind, std::string_view params);
};

/// Uniform transform kind, then a uniform parameter from its range.
AugmentOp sample_op(XorShift64Star& rng, const AugmentRanges& ranges = {});

/// Throws std::invalid_argument when a parameter lies outside its range.
void check_in_range(const AugmentOp& op, const AugmentRanges& ranges);

ImageGrid apply(const AugmentOp& op, const ImageGrid& img);

}  // namespace cxr::augment
