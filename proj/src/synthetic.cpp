#include "orbitmap/synthetic.hpp"

#include <cmath>

namespace orbitmap {

double GaussianBump::operator()(const Eigen::Vector2d& z) const {
  const Eigen::Vector2d d = z - center;
  const double c = std::cos(orientation);
  const double s = std::sin(orientation);
  const double along = c * d.x() + s * d.y();
  const double across = -s * d.x() + c * d.y();
  return amplitude * std::exp(-0.5 * (along * along / (sigma_major * sigma_major) +
                                      across * across / (sigma_minor * sigma_minor)));
}

double BumpScene::operator()(const Eigen::Vector2d& z) const {
  double v = background;
  for (const auto& b : bumps) v += b(z);
  return v;
}

double RadialScene::operator()(const Eigen::Vector2d& z) const {
  return std::exp(-0.5 * (z - Eigen::Vector2d(0.5, 0.5)).squaredNorm() / (sigma * sigma));
}

BumpScene random_bump_scene(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(2, 7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  BumpScene scene;
  scene.background = 0.2 + 0.2 * unit(rng);

  // A broad off-center bump sets a dominant gradient direction, so the
  // gradient integral is well away from zero.
  GaussianBump base;
  const double base_phi = kTwoPi * unit(rng);
  const double base_dist = 0.4 + 0.15 * unit(rng);
  base.center = Eigen::Vector2d(0.5 + base_dist * std::cos(base_phi),
                                0.5 + base_dist * std::sin(base_phi));
  base.amplitude = 0.6 + 0.4 * unit(rng);
  base.sigma_major = 0.45 + 0.15 * unit(rng);
  base.sigma_minor = 0.45;
  base.orientation = kPi * unit(rng);
  scene.bumps.push_back(base);

  const int n = count(rng);
  for (int k = 0; k < n; ++k) {
    GaussianBump b;
    const double radius = 0.32 * std::sqrt(unit(rng));
    const double phi = kTwoPi * unit(rng);
    b.center = Eigen::Vector2d(0.5 + radius * std::cos(phi), 0.5 + radius * std::sin(phi));
    b.amplitude = (unit(rng) < 0.5 ? -1.0 : 1.0) * (0.05 + 0.1 * unit(rng));
    b.sigma_major = 0.15 + 0.15 * unit(rng);
    b.sigma_minor = 0.12 + 0.5 * (b.sigma_major - 0.12) * unit(rng);
    b.orientation = kPi * unit(rng);
    scene.bumps.push_back(b);
  }
  return scene;
}

std::vector<RasterImage> synthetic_corpus(std::uint64_t seed, int count, int size) {
  std::mt19937_64 rng(seed);
  std::vector<RasterImage> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    out.push_back(render_synthetic(random_bump_scene(rng), Rotation2D(), size, size));
  }
  return out;
}

}  // namespace orbitmap
