#include "orbitmap/image.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace orbitmap {

RasterImage::RasterImage(int height, int width, int channels, double fill)
    : height_(height), width_(width), channels_(channels) {
  if (height < 1 || width < 1) {
    throw OrbitError(ErrorKind::invalid_input, "image dimensions must be positive");
  }
  if (channels != 1 && channels != 3) {
    throw OrbitError(ErrorKind::invalid_input, "images must have 1 or 3 channels");
  }
  pixels_.assign(static_cast<std::size_t>(height) * width * channels, fill);
}

double RasterImage::dynamic_range() const {
  if (pixels_.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(pixels_.begin(), pixels_.end());
  return *hi - *lo;
}

std::string_view to_string(Interpolation mode) {
  switch (mode) {
    case Interpolation::nearest: return "nearest";
    case Interpolation::bilinear: return "bilinear";
    case Interpolation::bicubic: return "bicubic";
  }
  return "unknown";
}

Interpolation parse_interpolation(std::string_view name) {
  if (name == "nearest") return Interpolation::nearest;
  if (name == "bilinear") return Interpolation::bilinear;
  if (name == "bicubic") return Interpolation::bicubic;
  throw OrbitError(ErrorKind::invalid_input, "unknown interpolation mode '" + std::string(name) + "'");
}

int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * n;
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

std::vector<double> gaussian_kernel_1d(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw OrbitError(ErrorKind::invalid_input, "blur sigma must be positive");
  }
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(2 * radius + 1);
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    taps[k + radius] = std::exp(-0.5 * (k * k) / (sigma * sigma));
    sum += taps[k + radius];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

namespace {

// One separable pass along rows (horizontal) or columns.
RasterImage blur_pass(const RasterImage& src, std::span<const double> taps, bool horizontal) {
  const int radius = static_cast<int>(taps.size() / 2);
  const int h = src.height();
  const int w = src.width();
  const int c = src.channels();
  RasterImage out(h, w, c);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      for (int ch = 0; ch < c; ++ch) {
        const double center = src.at(i, j, ch);
        double acc = 0.0;
        for (int k = -radius; k <= radius; ++k) {
          const double v = horizontal ? src.at(i, reflect_index(j + k, w), ch)
                                      : src.at(reflect_index(i + k, h), j, ch);
          acc += taps[k + radius] * (v - center);
        }
        out.at(i, j, ch) = center + acc;
      }
    }
  }
  return out;
}

double sample_nearest(const RasterImage& img, double sx, double sy, int ch) {
  const double fx = std::floor(sx + 0.5);
  const double fy = std::floor(sy + 0.5);
  if (fx < 0.0 || fy < 0.0 || fx > img.width() - 1 || fy > img.height() - 1) return 0.0;
  return img.at(static_cast<int>(fy), static_cast<int>(fx), ch);
}

double tap(const RasterImage& img, int row, int col, int ch) {
  if (row < 0 || col < 0 || row >= img.height() || col >= img.width()) return 0.0;
  return img.at(row, col, ch);
}

double sample_bilinear(const RasterImage& img, double sx, double sy, int ch) {
  if (sx <= -1.0 || sy <= -1.0 || sx >= img.width() || sy >= img.height()) return 0.0;
  const double x0 = std::floor(sx);
  const double y0 = std::floor(sy);
  const double fx = sx - x0;
  const double fy = sy - y0;
  const int c0 = static_cast<int>(x0);
  const int r0 = static_cast<int>(y0);
  return (1.0 - fy) * ((1.0 - fx) * tap(img, r0, c0, ch) + fx * tap(img, r0, c0 + 1, ch)) +
         fy * ((1.0 - fx) * tap(img, r0 + 1, c0, ch) + fx * tap(img, r0 + 1, c0 + 1, ch));
}

double sample_bicubic(const RasterImage& img, double sx, double sy, int ch) {
  if (sx <= -2.0 || sy <= -2.0 || sx >= img.width() + 1.0 || sy >= img.height() + 1.0) return 0.0;
  const double x0 = std::floor(sx);
  const double y0 = std::floor(sy);
  const double fx = sx - x0;
  const double fy = sy - y0;
  const int c0 = static_cast<int>(x0);
  const int r0 = static_cast<int>(y0);
  double wx[4];
  double wy[4];
  for (int k = 0; k < 4; ++k) {
    wx[k] = cubic_weight(fx - (k - 1));
    wy[k] = cubic_weight(fy - (k - 1));
  }
  double acc = 0.0;
  for (int a = 0; a < 4; ++a) {
    double row = 0.0;
    for (int b = 0; b < 4; ++b) row += wx[b] * tap(img, r0 - 1 + a, c0 - 1 + b, ch);
    acc += wy[a] * row;
  }
  return acc;
}

}  // namespace

RasterImage gaussian_blur(const RasterImage& img, double sigma) {
  const auto taps = gaussian_kernel_1d(sigma);
  return blur_pass(blur_pass(img, taps, true), taps, false);
}

double cubic_weight(double t) {
  constexpr double a = -0.5;
  const double x = std::abs(t);
  if (x <= 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
  if (x < 2.0) return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
  return 0.0;
}

RasterImage rotate_image(const RasterImage& img, const Rotation2D& angle, Interpolation mode) {
  if (angle.radians() == 0.0) return img;
  const int h = img.height();
  const int w = img.width();
  const Eigen::Matrix2d r = angle.matrix();
  const double cx = 0.5 * w;
  const double cy = 0.5 * h;
  RasterImage out(h, w, img.channels());
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      const Eigen::Vector2d p(j + 0.5 - cx, i + 0.5 - cy);
      const Eigen::Vector2d q = r * p;
      const double sx = q.x() + cx - 0.5;
      const double sy = q.y() + cy - 0.5;
      for (int ch = 0; ch < img.channels(); ++ch) {
        switch (mode) {
          case Interpolation::nearest: out.at(i, j, ch) = sample_nearest(img, sx, sy, ch); break;
          case Interpolation::bilinear: out.at(i, j, ch) = sample_bilinear(img, sx, sy, ch); break;
          case Interpolation::bicubic: out.at(i, j, ch) = sample_bicubic(img, sx, sy, ch); break;
        }
      }
    }
  }
  return out;
}

RasterImage rotate_quarter_turns(const RasterImage& img, int quarter_turns) {
  const int q = ((quarter_turns % 4) + 4) % 4;
  if (q == 0) return img;
  const int h = img.height();
  const int w = img.width();
  const bool swap = (q % 2) == 1;
  RasterImage out(swap ? w : h, swap ? h : w, img.channels());
  // Same convention as rotate_image: out(p) = in(r(q * 90deg) p) about the center.
  for (int i = 0; i < out.height(); ++i) {
    for (int j = 0; j < out.width(); ++j) {
      int si = i;
      int sj = j;
      switch (q) {
        case 1: si = j; sj = w - 1 - i; break;
        case 2: si = h - 1 - i; sj = w - 1 - j; break;
        case 3: si = h - 1 - j; sj = i; break;
      }
      for (int ch = 0; ch < img.channels(); ++ch) out.at(i, j, ch) = img.at(si, sj, ch);
    }
  }
  return out;
}

double psnr(const RasterImage& reference, const RasterImage& test, int margin, double peak) {
  if (reference.height() != test.height() || reference.width() != test.width() ||
      reference.channels() != test.channels()) {
    throw OrbitError(ErrorKind::invalid_input, "psnr needs images of equal shape");
  }
  double sse = 0.0;
  std::size_t count = 0;
  for (int i = margin; i < reference.height() - margin; ++i) {
    for (int j = margin; j < reference.width() - margin; ++j) {
      for (int ch = 0; ch < reference.channels(); ++ch) {
        const double d = reference.at(i, j, ch) - test.at(i, j, ch);
        sse += d * d;
        ++count;
      }
    }
  }
  if (count == 0) throw OrbitError(ErrorKind::invalid_input, "psnr margin leaves no pixels");
  const double mse = sse / static_cast<double>(count);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

}  // namespace orbitmap
