#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "orbitmap/group_actions.hpp"

namespace orbitmap {

/// Row-major H x W x C raster of doubles, C in {1, 3}.
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int height, int width, int channels = 1, double fill = 0.0);

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  bool empty() const { return pixels_.empty(); }

  double& at(int row, int col, int channel = 0) {
    return pixels_[(static_cast<std::size_t>(row) * width_ + col) * channels_ + channel];
  }
  double at(int row, int col, int channel = 0) const {
    return pixels_[(static_cast<std::size_t>(row) * width_ + col) * channels_ + channel];
  }

  std::span<double> pixels() { return pixels_; }
  std::span<const double> pixels() const { return pixels_; }

  // max - min over all pixels and channels
  double dynamic_range() const;

  bool operator==(const RasterImage&) const = default;

 private:
  int height_ = 0;
  int width_ = 0;
  int channels_ = 1;
  std::vector<double> pixels_;
};

enum class Interpolation { nearest, bilinear, bicubic };

std::string_view to_string(Interpolation mode);
Interpolation parse_interpolation(std::string_view name);

// Half-sample symmetric reflection of an index into [0, n).
int reflect_index(int i, int n);

/// Truncated (radius ceil(3 sigma)) Gaussian taps, normalized to sum 1.
std::vector<double> gaussian_kernel_1d(double sigma);

/**
 * Separable Gaussian blur with reflect padding.
 *
 * Each output is accumulated as center + sum w_k (u_k - center), which is the
 * usual weighted sum rearranged so constant images come back bit-identical.
 */
RasterImage gaussian_blur(const RasterImage& img, double sigma);

/**
 * Rotates about the image center by inverse warping:
 * out(z) = in(c + r(angle) (z - c)). Samples that fall outside the raster read
 * as 0. Bicubic uses the Catmull-Rom kernel (a = -0.5).
 */
RasterImage rotate_image(const RasterImage& img, const Rotation2D& angle, Interpolation mode);

// 1D Catmull-Rom weight, a = -0.5.
double cubic_weight(double t);

/// Exact quarter-turn rotation of the pixel grid (no interpolation).
RasterImage rotate_quarter_turns(const RasterImage& img, int quarter_turns);

/// PSNR in dB of `test` against `reference`, over pixels at least `margin`
/// from the border, for signals with peak value `peak`.
double psnr(const RasterImage& reference, const RasterImage& test, int margin = 0,
            double peak = 1.0);

}  // namespace orbitmap
