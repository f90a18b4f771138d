#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "orbitmap/image_orbit.hpp"

namespace orbitmap {

inline constexpr double kHistogramBinDegrees = 2.0;
// Reported dispersion when the mean resultant length vanishes.
inline constexpr double kCircularStdCapDegrees = 180.0;

/**
 * Circular standard deviation sqrt(-2 ln R) of angles given in degrees, R the
 * mean resultant length. Result in degrees, capped at 180.
 */
double circular_std(std::span<const double> degrees);

struct StabilityOptions {
  SampleCircleSet circles;
  double blur_sigma = kDefaultBlurSigma;
  // Variance of additive Gaussian pixel noise applied after each rotation.
  double noise_variance = 0.0;
  std::uint64_t seed = 0;
};

/**
 * Residuals (canonical angle of the image rotated by g + g) mod 360 for
 * g = 0, step, 2 step, ... < 360, in degrees. Rotations whose orientation is
 * degenerate give nullopt.
 */
std::vector<std::optional<double>> angle_residuals(const RasterImage& img, double step_deg,
                                                   Interpolation interpolation,
                                                   GradientEstimator estimator,
                                                   const StabilityOptions& options = {});

struct Histogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;
};

struct StabilityReport {
  // nullopt for items that were degenerate at every rotation
  std::vector<std::optional<double>> per_item_circular_std;
  double mean_std = 0.0;  // over scored items
  Histogram histogram;    // 2 degree bins on [0, 180]
  GradientEstimator estimator = GradientEstimator::exact;
  Interpolation interpolation = Interpolation::bilinear;
  std::size_t degenerate_items = 0;
};

StabilityReport stability_report(std::span<const RasterImage> images, double step_deg,
                                 Interpolation interpolation, GradientEstimator estimator,
                                 const StabilityOptions& options = {});

// ---------------------------------------------------------------------------
// Orbit sweeps

struct OrbitSweepReport {
  double clean = 0.0;
  double average = 0.0;
  double worst = 0.0;
  std::vector<std::pair<std::string, double>> per_transform;
};

template <typename Item>
struct NamedTransform {
  std::string name;
  std::function<Item(const Item&)> apply;
};

/**
 * Clean accuracy on the untransformed items, average accuracy over all
 * (item, transform) pairs, and worst-case accuracy: the fraction of items
 * predicted correctly under every transform. Accuracies are ratios of
 * integer counts, so equal counts give bit-equal fractions.
 */
template <typename Item, typename Predict>
OrbitSweepReport orbit_sweep(Predict&& predict, std::span<const Item> items,
                             std::span<const int> labels,
                             std::span<const NamedTransform<Item>> transforms) {
  if (items.size() != labels.size()) {
    throw OrbitError(ErrorKind::invalid_input, "items and labels differ in length");
  }
  if (items.empty() || transforms.empty()) {
    throw OrbitError(ErrorKind::invalid_input, "orbit sweep needs items and transforms");
  }
  std::size_t clean = 0;
  std::size_t worst = 0;
  std::size_t total = 0;
  std::vector<std::size_t> per_transform(transforms.size(), 0);
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (predict(items[i]) == labels[i]) ++clean;
    bool all_correct = true;
    for (std::size_t t = 0; t < transforms.size(); ++t) {
      if (predict(transforms[t].apply(items[i])) == labels[i]) {
        ++per_transform[t];
        ++total;
      } else {
        all_correct = false;
      }
    }
    if (all_correct) ++worst;
  }
  const double n = static_cast<double>(items.size());
  OrbitSweepReport report;
  report.clean = static_cast<double>(clean) / n;
  report.average = static_cast<double>(total) / (n * static_cast<double>(transforms.size()));
  report.worst = static_cast<double>(worst) / n;
  report.per_transform.reserve(transforms.size());
  for (std::size_t t = 0; t < transforms.size(); ++t) {
    report.per_transform.emplace_back(transforms[t].name,
                                      static_cast<double>(per_transform[t]) / n);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Toy point-cloud benchmark

struct ToyBenchOptions {
  std::uint64_t seed = 0;
  int train_per_class = 50;
  int test_per_class = 20;
  int points = 512;
  int grid_a = 16;
  int grid_b = 16;
  double noise = 0.02;
};

struct ToyBenchReport {
  OrbitSweepReport with_orbit_map;
  OrbitSweepReport without_orbit_map;
};

/**
 * Four synthetic shape classes (sphere shell, cube surface, two-plane cross,
 * torus) classified by nearest centroid on 4x4x4 occupancy features over the
 * bounding cube. The sweep covers every rotation-grid x scale x translation
 * combination; the translation offset is added to all three coordinates.
 */
ToyBenchReport toy_shape_bench(const ToyBenchOptions& options);

}  // namespace orbitmap
