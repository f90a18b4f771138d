#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "orbitmap/group_actions.hpp"
#include "orbitmap/image.hpp"

namespace orbitmap {

inline constexpr double kDefaultBlurSigma = 1.5;
inline constexpr int kDefaultSamplesPerCircle = 64;
// Degeneracy threshold on |integral|, relative to the image dynamic range.
inline constexpr double kOrientationEpsilon = 1e-6;

/**
 * Images as functions on the plane.
 *
 * The raster is blurred once, then extended to a continuous function by
 * bilinear interpolation between pixel centers. Domain coordinates z = (x, y)
 * put x along columns and y along rows; the shorter image side has length 1
 * and the image center sits at (0.5, 0.5). Within the outer half-pixel border
 * the interpolant is clamped to the edge values.
 */
class ContinuousImage {
 public:
  // blur_sigma == 0 keeps the raster as is.
  ContinuousImage(const RasterImage& raster, double blur_sigma);

  const RasterImage& blurred() const { return blurred_; }
  double blur_sigma() const { return blur_sigma_; }
  int channels() const { return blurred_.channels(); }
  // Pixels per unit domain length.
  double unit_length() const { return unit_; }

  bool contains(const Eigen::Vector2d& z) const;
  // Continuous index coordinates (col, row) of a domain point.
  Eigen::Vector2d to_index(const Eigen::Vector2d& z) const;
  Eigen::Vector2d pixel_center(int row, int col) const;

  std::vector<double> value(const Eigen::Vector2d& z) const;
  /// Exact gradient of the bilinear interpolant in domain units, per channel.
  std::vector<Eigen::Vector2d> gradient(const Eigen::Vector2d& z) const;

 private:
  RasterImage blurred_;
  double blur_sigma_;
  double unit_;
};

/// Concentric sample circles about the domain center.
struct SampleCircleSet {
  std::vector<double> radii{0.05, 0.4};
  int samples_per_circle = kDefaultSamplesPerCircle;

  void validate() const;
  // Points and arc-length weights 2*pi*r/m.
  std::vector<Eigen::Vector2d> points() const;
  std::vector<double> weights() const;
};

struct GradientIntegral {
  Eigen::Vector2d vector = Eigen::Vector2d::Zero();
  double magnitude = 0.0;
};

/// How the gradient is obtained at circle samples.
enum class GradientEstimator {
  exact,    // derivative of the bilinear interpolant at the sample itself
  central,  // central differences at the pixel nearest to the sample
  forward,  // forward differences at the pixel nearest to the sample
};

std::string_view to_string(GradientEstimator estimator);
GradientEstimator parse_estimator(std::string_view name);

GradientIntegral gradient_integral(const ContinuousImage& image, const SampleCircleSet& circles,
                                   GradientEstimator estimator = GradientEstimator::exact);

struct OrientationEstimate {
  Rotation2D rotation;
  Eigen::Vector2d integral = Eigen::Vector2d::Zero();
  double magnitude = 0.0;
};

// Closed-form maximizer of <(1,0), r(a)^T v>: the angle of v.
Rotation2D angle_of(const Eigen::Vector2d& v);
// <(1,0), r(a)^T v>
double alignment_objective(double angle, const Eigen::Vector2d& v);

/**
 * Canonical angle of an image: the direction of its mean gradient over the
 * sample circles. Rotating the image by the returned angle turns that mean
 * gradient onto +x. Throws degenerate_orientation when the integral is not
 * above kOrientationEpsilon times the dynamic range.
 */
OrientationEstimate canonical_angle(const ContinuousImage& image, const SampleCircleSet& circles,
                                    GradientEstimator estimator = GradientEstimator::exact,
                                    double epsilon = kOrientationEpsilon);

struct ImageOrbitOptions {
  Interpolation mode = Interpolation::bilinear;
  SampleCircleSet circles;
  double blur_sigma = kDefaultBlurSigma;
};

/// Rotates `img` (unblurred) by its canonical angle.
CanonicalResult<RasterImage, Rotation2D> orbit_map_image(const RasterImage& img,
                                                         const ImageOrbitOptions& options = {});

using Scene = std::function<double(const Eigen::Vector2d&)>;

/**
 * Samples scene o r(rotation) at pixel centers, with the rotation about the
 * domain center. Rendering a rotated scene directly avoids any resampling.
 */
RasterImage render_synthetic(const Scene& scene, const Rotation2D& rotation, int height,
                             int width);

}  // namespace orbitmap
