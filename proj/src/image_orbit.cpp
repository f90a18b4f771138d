#include "orbitmap/image_orbit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace orbitmap {

namespace {

// Cell lookup along one axis of the clamped bilinear interpolant. `active`
// is false inside the outer half-pixel border where the function is flat.
struct AxisCell {
  int index;
  double frac;
  bool active;
};

AxisCell locate(double s, int n) {
  if (n == 1) return {0, 0.0, false};
  if (s <= 0.0) return {0, 0.0, s == 0.0};
  if (s >= n - 1) return {n - 2, 1.0, s == n - 1};
  int i = static_cast<int>(std::floor(s));
  if (i > n - 2) i = n - 2;
  return {i, s - i, true};
}

}  // namespace

ContinuousImage::ContinuousImage(const RasterImage& raster, double blur_sigma)
    : blur_sigma_(blur_sigma) {
  if (raster.height() < 4 || raster.width() < 4) {
    throw OrbitError(ErrorKind::invalid_input, "continuous image needs at least 4x4 pixels");
  }
  if (blur_sigma < 0.0 || !std::isfinite(blur_sigma)) {
    throw OrbitError(ErrorKind::invalid_input, "blur sigma must be non-negative");
  }
  blurred_ = blur_sigma > 0.0 ? gaussian_blur(raster, blur_sigma) : raster;
  unit_ = static_cast<double>(std::min(raster.height(), raster.width()));
}

Eigen::Vector2d ContinuousImage::to_index(const Eigen::Vector2d& z) const {
  return {(z.x() - 0.5) * unit_ + 0.5 * blurred_.width() - 0.5,
          (z.y() - 0.5) * unit_ + 0.5 * blurred_.height() - 0.5};
}

Eigen::Vector2d ContinuousImage::pixel_center(int row, int col) const {
  return {(col + 0.5 - 0.5 * blurred_.width()) / unit_ + 0.5,
          (row + 0.5 - 0.5 * blurred_.height()) / unit_ + 0.5};
}

bool ContinuousImage::contains(const Eigen::Vector2d& z) const {
  const Eigen::Vector2d s = to_index(z);
  return s.x() > -0.5 && s.y() > -0.5 && s.x() < blurred_.width() - 0.5 &&
         s.y() < blurred_.height() - 0.5;
}

std::vector<double> ContinuousImage::value(const Eigen::Vector2d& z) const {
  if (!contains(z)) throw OrbitError(ErrorKind::invalid_input, "evaluation point outside domain");
  const Eigen::Vector2d s = to_index(z);
  const AxisCell cx = locate(s.x(), blurred_.width());
  const AxisCell cy = locate(s.y(), blurred_.height());
  const int c1 = std::min(cx.index + 1, blurred_.width() - 1);
  const int r1 = std::min(cy.index + 1, blurred_.height() - 1);
  std::vector<double> out(channels());
  for (int ch = 0; ch < channels(); ++ch) {
    const double v00 = blurred_.at(cy.index, cx.index, ch);
    const double v01 = blurred_.at(cy.index, c1, ch);
    const double v10 = blurred_.at(r1, cx.index, ch);
    const double v11 = blurred_.at(r1, c1, ch);
    out[ch] = (1.0 - cy.frac) * ((1.0 - cx.frac) * v00 + cx.frac * v01) +
              cy.frac * ((1.0 - cx.frac) * v10 + cx.frac * v11);
  }
  return out;
}

std::vector<Eigen::Vector2d> ContinuousImage::gradient(const Eigen::Vector2d& z) const {
  if (!contains(z)) throw OrbitError(ErrorKind::invalid_input, "evaluation point outside domain");
  const Eigen::Vector2d s = to_index(z);
  const AxisCell cx = locate(s.x(), blurred_.width());
  const AxisCell cy = locate(s.y(), blurred_.height());
  const int c1 = std::min(cx.index + 1, blurred_.width() - 1);
  const int r1 = std::min(cy.index + 1, blurred_.height() - 1);
  std::vector<Eigen::Vector2d> out(channels(), Eigen::Vector2d::Zero());
  for (int ch = 0; ch < channels(); ++ch) {
    const double v00 = blurred_.at(cy.index, cx.index, ch);
    const double v01 = blurred_.at(cy.index, c1, ch);
    const double v10 = blurred_.at(r1, cx.index, ch);
    const double v11 = blurred_.at(r1, c1, ch);
    if (cx.active) {
      out[ch].x() = ((1.0 - cy.frac) * (v01 - v00) + cy.frac * (v11 - v10)) * unit_;
    }
    if (cy.active) {
      out[ch].y() = ((1.0 - cx.frac) * (v10 - v00) + cx.frac * (v11 - v01)) * unit_;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

void SampleCircleSet::validate() const {
  if (radii.empty()) throw OrbitError(ErrorKind::invalid_input, "no sample circles");
  if (samples_per_circle < 1) {
    throw OrbitError(ErrorKind::invalid_input, "samples_per_circle must be positive");
  }
  for (double r : radii) {
    if (!(r > 0.0) || !(r < 0.5)) {
      std::ostringstream msg;
      msg << "circle radius " << r << " exits the domain (need 0 < r < 0.5)";
      throw OrbitError(ErrorKind::invalid_input, msg.str());
    }
  }
}

std::vector<Eigen::Vector2d> SampleCircleSet::points() const {
  validate();
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(radii.size() * samples_per_circle);
  for (double r : radii) {
    for (int k = 0; k < samples_per_circle; ++k) {
      const auto [c, s] = cos_sin_fraction(k, samples_per_circle);
      pts.emplace_back(0.5 + r * c, 0.5 + r * s);
    }
  }
  return pts;
}

std::vector<double> SampleCircleSet::weights() const {
  validate();
  std::vector<double> w;
  w.reserve(radii.size() * samples_per_circle);
  for (double r : radii) {
    w.insert(w.end(), samples_per_circle, kTwoPi * r / samples_per_circle);
  }
  return w;
}

std::string_view to_string(GradientEstimator estimator) {
  switch (estimator) {
    case GradientEstimator::exact: return "exact";
    case GradientEstimator::central: return "central";
    case GradientEstimator::forward: return "forward";
  }
  return "unknown";
}

GradientEstimator parse_estimator(std::string_view name) {
  if (name == "exact") return GradientEstimator::exact;
  if (name == "central") return GradientEstimator::central;
  if (name == "forward") return GradientEstimator::forward;
  throw OrbitError(ErrorKind::invalid_input, "unknown gradient estimator '" + std::string(name) + "'");
}

namespace {

Eigen::Vector2d finite_difference_at_nearest_pixel(const ContinuousImage& image,
                                                   const Eigen::Vector2d& z,
                                                   GradientEstimator estimator) {
  const RasterImage& u = image.blurred();
  const Eigen::Vector2d s = image.to_index(z);
  const int w = u.width();
  const int h = u.height();
  const int col = std::clamp(static_cast<int>(std::floor(s.x() + 0.5)), 0, w - 1);
  const int row = std::clamp(static_cast<int>(std::floor(s.y() + 0.5)), 0, h - 1);
  Eigen::Vector2d g = Eigen::Vector2d::Zero();
  for (int ch = 0; ch < u.channels(); ++ch) {
    if (estimator == GradientEstimator::central) {
      g.x() += 0.5 * (u.at(row, reflect_index(col + 1, w), ch) -
                      u.at(row, reflect_index(col - 1, w), ch));
      g.y() += 0.5 * (u.at(reflect_index(row + 1, h), col, ch) -
                      u.at(reflect_index(row - 1, h), col, ch));
    } else {
      g.x() += u.at(row, reflect_index(col + 1, w), ch) - u.at(row, col, ch);
      g.y() += u.at(reflect_index(row + 1, h), col, ch) - u.at(row, col, ch);
    }
  }
  return g * image.unit_length();
}

}  // namespace

GradientIntegral gradient_integral(const ContinuousImage& image, const SampleCircleSet& circles,
                                   GradientEstimator estimator) {
  const auto pts = circles.points();
  const auto wts = circles.weights();
  GradientIntegral out;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (!image.contains(pts[k])) {
      throw OrbitError(ErrorKind::invalid_input, "sample circle exits the image domain");
    }
    if (estimator == GradientEstimator::exact) {
      for (const auto& g : image.gradient(pts[k])) out.vector += wts[k] * g;
    } else {
      out.vector += wts[k] * finite_difference_at_nearest_pixel(image, pts[k], estimator);
    }
  }
  out.magnitude = out.vector.norm();
  return out;
}

Rotation2D angle_of(const Eigen::Vector2d& v) {
  return Rotation2D::from_radians(std::atan2(v.y(), v.x()));
}

double alignment_objective(double angle, const Eigen::Vector2d& v) {
  return std::cos(angle) * v.x() + std::sin(angle) * v.y();
}

OrientationEstimate canonical_angle(const ContinuousImage& image, const SampleCircleSet& circles,
                                    GradientEstimator estimator, double epsilon) {
  const GradientIntegral integral = gradient_integral(image, circles, estimator);
  const double range = image.blurred().dynamic_range();
  if (range <= 0.0 || integral.magnitude <= epsilon * range) {
    std::ostringstream msg;
    msg << "degenerate orientation: gradient integral magnitude " << integral.magnitude
        << " at dynamic range " << range;
    throw OrbitError(ErrorKind::degenerate_orientation, msg.str());
  }
  return {angle_of(integral.vector), integral.vector, integral.magnitude};
}

CanonicalResult<RasterImage, Rotation2D> orbit_map_image(const RasterImage& img,
                                                         const ImageOrbitOptions& options) {
  const ContinuousImage cimg(img, options.blur_sigma);
  const OrientationEstimate est = canonical_angle(cimg, options.circles);
  return {rotate_image(img, est.rotation, options.mode), est.rotation};
}

RasterImage render_synthetic(const Scene& scene, const Rotation2D& rotation, int height,
                             int width) {
  RasterImage out(height, width, 1);
  const Eigen::Matrix2d r = rotation.matrix();
  const double unit = static_cast<double>(std::min(height, width));
  const Eigen::Vector2d center(0.5, 0.5);
  for (int i = 0; i < height; ++i) {
    for (int j = 0; j < width; ++j) {
      const Eigen::Vector2d z((j + 0.5 - 0.5 * width) / unit + 0.5,
                              (i + 0.5 - 0.5 * height) / unit + 0.5);
      out.at(i, j) = scene(center + r * (z - center));
    }
  }
  return out;
}

}  // namespace orbitmap
