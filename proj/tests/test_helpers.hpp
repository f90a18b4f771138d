#pragma once

// Independent oracles and fixtures shared by the unit and acceptance tests.
// Nothing here calls into the code under test except to build inputs.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "orbitmap/pointcloud.hpp"

namespace testing {

inline double angle_gap_deg(double a, double b) {
  const double d = std::fmod(std::fabs(a - b), 360.0);
  return std::min(d, 360.0 - d);
}

// Uniform random rotation from a normalized Gaussian quaternion.
inline Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  q.normalize();
  return q.toRotationMatrix();
}

// Gaussian cloud with well separated axis spreads 3 : 2 : 1, then rotated and
// shifted so it is not axis aligned.
inline orbitmap::PointCloud random_anisotropic_cloud(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  orbitmap::PointMatrix m(n, 3);
  for (int i = 0; i < n; ++i) {
    m(i, 0) = 3.0 * g(rng);
    m(i, 1) = 2.0 * g(rng);
    m(i, 2) = 1.0 * g(rng);
  }
  const Eigen::Matrix3d r = random_rotation(rng);
  const Eigen::RowVector3d shift(g(rng), g(rng), g(rng));
  orbitmap::PointMatrix out = (m * r.transpose()).rowwise() + shift;
  return orbitmap::PointCloud(std::move(out));
}

// Cyclic Jacobi eigen-decomposition of a symmetric 3x3 matrix. Returns
// eigenvalues in descending order and the matching unit eigenvectors as
// columns.
inline std::pair<std::array<double, 3>, Eigen::Matrix3d> jacobi_eigen(Eigen::Matrix3d a) {
  Eigen::Matrix3d v = Eigen::Matrix3d::Identity();
  for (int sweep = 0; sweep < 100; ++sweep) {
    const double off = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    if (off < 1e-30) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = 0.5 * (a(q, q) - a(p, p)) / a(p, q);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        Eigen::Matrix3d j = Eigen::Matrix3d::Identity();
        j(p, p) = c;
        j(q, q) = c;
        j(p, q) = s;
        j(q, p) = -s;
        a = j.transpose() * a * j;
        v = v * j;
      }
    }
  }
  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int x, int y) { return a(x, x) > a(y, y); });
  std::array<double, 3> values{};
  Eigen::Matrix3d vectors;
  for (int k = 0; k < 3; ++k) {
    values[k] = a(order[k], order[k]);
    vectors.col(k) = v.col(order[k]);
  }
  return {values, vectors};
}

// Truncated, normalized 1-D Gaussian taps on [-ceil(3 sigma), ceil(3 sigma)].
inline std::vector<double> gaussian_taps(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> w;
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    w.push_back(std::exp(-0.5 * i * i / (sigma * sigma)));
    sum += w.back();
  }
  for (double& x : w) x /= sum;
  return w;
}

}  // namespace testing
