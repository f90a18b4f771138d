#include "orbitmap/kernel_invariance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace orbitmap {

KernelPair::KernelPair(Eigen::MatrixXd k1, Eigen::MatrixXd k2)
    : first(std::move(k1)), second(std::move(k2)) {
  if (first.rows() != first.cols() || first.rows() < 1) {
    throw OrbitError(ErrorKind::invalid_input, "kernels must be square and non-empty");
  }
  if (first.rows() != second.rows() || first.cols() != second.cols()) {
    throw OrbitError(ErrorKind::invalid_input, "kernel pair shapes differ");
  }
  if (!first.allFinite() || !second.allFinite()) {
    throw OrbitError(ErrorKind::invalid_input, "kernel entries must be finite");
  }
}

Eigen::MatrixXd rotate_kernel_90(const Eigen::MatrixXd& k, int quarter_turns) {
  if (k.rows() != k.cols()) throw OrbitError(ErrorKind::invalid_input, "kernel must be square");
  const int q = ((quarter_turns % 4) + 4) % 4;
  const Eigen::Index n = k.rows();
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      switch (q) {
        case 0: out(i, j) = k(i, j); break;
        case 1: out(i, j) = k(j, n - 1 - i); break;
        case 2: out(i, j) = k(n - 1 - i, n - 1 - j); break;
        default: out(i, j) = k(n - 1 - j, i); break;
      }
    }
  }
  return out;
}

ConditionCheck check_condition(const KernelPair& pair, int quarter_turns) {
  const auto [c, s] = cos_sin_fraction(quarter_turns, 4);
  const Eigen::MatrixXd lhs1 = rotate_kernel_90(pair.first, -quarter_turns);
  const Eigen::MatrixXd lhs2 = rotate_kernel_90(pair.second, -quarter_turns);
  const Eigen::MatrixXd rhs1 = c * pair.first + s * pair.second;
  const Eigen::MatrixXd rhs2 = -s * pair.first + c * pair.second;
  const double violation = std::max((lhs1 - rhs1).cwiseAbs().maxCoeff(),
                                    (lhs2 - rhs2).cwiseAbs().maxCoeff());
  return {violation <= kConditionTolerance, violation};
}

KernelPair make_family_pair(int n, std::span<const double> params) {
  Eigen::MatrixXd k1;
  if (n == 2) {
    if (params.size() != 2) {
      throw OrbitError(ErrorKind::invalid_input, "N=2 family takes 2 parameters (a, b)");
    }
    const double a = params[0];
    const double b = params[1];
    k1.resize(2, 2);
    // 0.0 - x keeps zero parameters from producing -0.0 entries.
    k1 << a, b, 0.0 - b, 0.0 - a;
  } else if (n == 3) {
    if (params.size() != 4) {
      throw OrbitError(ErrorKind::invalid_input, "N=3 family takes 4 parameters (a, b, c, d)");
    }
    const double a = params[0];
    const double b = params[1];
    const double c = params[2];
    const double d = params[3];
    k1.resize(3, 3);
    k1 << a, b, c, d, 0.0, 0.0 - d, 0.0 - c, 0.0 - b, 0.0 - a;
  } else {
    throw OrbitError(ErrorKind::invalid_input, "kernel families exist only for N = 2 and N = 3");
  }
  Eigen::MatrixXd k2 = rotate_kernel_90(k1, -1);
  return KernelPair(std::move(k1), std::move(k2));
}

KernelPair central_difference_pair() {
  const double params[] = {0.0, 1.0, 0.0, 0.0};
  return make_family_pair(3, params);
}

KernelPair forward_difference_pair() {
  Eigen::MatrixXd k1(2, 2);
  k1 << -1.0, 0.0, 1.0, 0.0;
  Eigen::MatrixXd k2 = rotate_kernel_90(k1, -1);
  return KernelPair(std::move(k1), std::move(k2));
}

double KernelResponse::sample(double sx, double sy, int channel) const {
  const int w = values.width();
  const int h = values.height();
  const double gx = std::clamp(sx - grid_offset, 0.0, static_cast<double>(w - 1));
  const double gy = std::clamp(sy - grid_offset, 0.0, static_cast<double>(h - 1));
  const int c0 = std::min(static_cast<int>(std::floor(gx)), std::max(w - 2, 0));
  const int r0 = std::min(static_cast<int>(std::floor(gy)), std::max(h - 2, 0));
  const int c1 = std::min(c0 + 1, w - 1);
  const int r1 = std::min(r0 + 1, h - 1);
  const double fx = gx - c0;
  const double fy = gy - r0;
  return (1.0 - fy) * ((1.0 - fx) * values.at(r0, c0, channel) + fx * values.at(r0, c1, channel)) +
         fy * ((1.0 - fx) * values.at(r1, c0, channel) + fx * values.at(r1, c1, channel));
}

KernelResponse convolve(const RasterImage& img, const Eigen::MatrixXd& k) {
  if (k.rows() != k.cols() || k.rows() < 1) {
    throw OrbitError(ErrorKind::invalid_input, "kernel must be square and non-empty");
  }
  const int n = static_cast<int>(k.rows());
  const bool even = n % 2 == 0;
  const int shift = (n - 1) / 2;
  const int h = img.height() + (even ? 1 : 0);
  const int w = img.width() + (even ? 1 : 0);
  KernelResponse out{RasterImage(h, w, img.channels()), even ? -0.5 : 0.0};
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      for (int ch = 0; ch < img.channels(); ++ch) {
        double acc = 0.0;
        for (int a = 0; a < n; ++a) {
          const int row = reflect_index(i - a + shift, img.height());
          for (int b = 0; b < n; ++b) {
            acc += k(a, b) * img.at(row, reflect_index(j - b + shift, img.width()), ch);
          }
        }
        out.values.at(i, j, ch) = acc;
      }
    }
  }
  return out;
}

Eigen::Vector2d ramp_response(const KernelPair& pair) {
  const double c = 0.5 * (pair.size() - 1);
  Eigen::Vector2d r = Eigen::Vector2d::Zero();
  for (int a = 0; a < pair.size(); ++a) {
    for (int b = 0; b < pair.size(); ++b) {
      r.x() -= pair.first(a, b) * (b - c);
      r.y() -= pair.second(a, b) * (b - c);
    }
  }
  return r;
}

OrientationEstimate kernel_canonical_angle(const ContinuousImage& image, const KernelPair& pair,
                                           const SampleCircleSet& circles, double epsilon) {
  const KernelResponse r1 = convolve(image.blurred(), pair.first);
  const KernelResponse r2 = convolve(image.blurred(), pair.second);
  const auto pts = circles.points();
  const auto wts = circles.weights();
  Eigen::Vector2d integral = Eigen::Vector2d::Zero();
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (!image.contains(pts[k])) {
      throw OrbitError(ErrorKind::invalid_input, "sample circle exits the image domain");
    }
    const Eigen::Vector2d s = image.to_index(pts[k]);
    for (int ch = 0; ch < image.channels(); ++ch) {
      integral.x() += wts[k] * r1.sample(s.x(), s.y(), ch);
      integral.y() += wts[k] * r2.sample(s.x(), s.y(), ch);
    }
  }
  integral *= image.unit_length();
  const double magnitude = integral.norm();
  const double range = image.blurred().dynamic_range();
  const double kernel_scale =
      std::max(pair.first.cwiseAbs().sum(), pair.second.cwiseAbs().sum());
  if (range <= 0.0 || magnitude <= epsilon * range * kernel_scale) {
    std::ostringstream msg;
    msg << "degenerate orientation: kernel response integral magnitude " << magnitude;
    throw OrbitError(ErrorKind::degenerate_orientation, msg.str());
  }
  const Eigen::Vector2d ref = ramp_response(pair);
  const double ref_angle = ref.norm() > 0.0 ? std::atan2(ref.y(), ref.x()) : 0.0;
  return {Rotation2D::from_radians(std::atan2(integral.y(), integral.x()) - ref_angle), integral,
          magnitude};
}

}  // namespace orbitmap
