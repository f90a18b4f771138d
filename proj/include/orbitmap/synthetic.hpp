#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "orbitmap/image_orbit.hpp"

namespace orbitmap {

/// Anisotropic Gaussian bump in domain coordinates.
struct GaussianBump {
  Eigen::Vector2d center{0.5, 0.5};
  double amplitude = 1.0;
  double sigma_major = 0.1;
  double sigma_minor = 0.1;
  double orientation = 0.0;  // radians, direction of the major axis

  double operator()(const Eigen::Vector2d& z) const;
};

/// Sum of bumps on a constant background; smooth at the pixel scale.
struct BumpScene {
  double background = 0.0;
  std::vector<GaussianBump> bumps;

  double operator()(const Eigen::Vector2d& z) const;
};

/**
 * Random smooth scene of 3 to 8 bumps: one broad bump (width >= 0.45) centered
 * 0.4 to 0.55 from the image center, plus weaker detail bumps of width >= 0.12
 * within radius 0.32 of the center.
 *
 * The exact bilinear gradient jumps at cell edges, so circle quadrature only
 * converges quickly when curvature is small against the integrated gradient.
 * These widths keep doubling samples_per_circle below 0.1 degrees of change
 * at 64 px.
 */
BumpScene random_bump_scene(std::mt19937_64& rng);

/// Renders `count` unrotated random scenes of size `size` x `size`.
std::vector<RasterImage> synthetic_corpus(std::uint64_t seed, int count, int size);

/// u(z) = offset + <slope, z>
struct LinearRamp {
  Eigen::Vector2d slope{1.0, 0.0};
  double offset = 0.0;

  double operator()(const Eigen::Vector2d& z) const { return offset + slope.dot(z); }
};

/// Isotropic bump centered on the domain center.
struct RadialScene {
  double sigma = 0.15;

  double operator()(const Eigen::Vector2d& z) const;
};

}  // namespace orbitmap
