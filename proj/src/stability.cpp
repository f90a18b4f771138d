#include "orbitmap/stability.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "orbitmap/pointcloud.hpp"

namespace orbitmap {

double circular_std(std::span<const double> degrees) {
  if (degrees.empty()) throw OrbitError(ErrorKind::invalid_input, "circular_std of empty list");
  double c = 0.0;
  double s = 0.0;
  for (double d : degrees) {
    c += std::cos(deg_to_rad(d));
    s += std::sin(deg_to_rad(d));
  }
  const double n = static_cast<double>(degrees.size());
  const double resultant = std::min(1.0, std::hypot(c, s) / n);
  if (resultant <= 0.0) return kCircularStdCapDegrees;
  return std::min(kCircularStdCapDegrees, rad_to_deg(std::sqrt(std::max(0.0, -2.0 * std::log(resultant)))));
}

namespace {

int steps_per_turn(double step_deg) {
  if (!(step_deg > 0.0) || !(step_deg <= 360.0)) {
    throw OrbitError(ErrorKind::invalid_input, "rotation step must be in (0, 360]");
  }
  const double steps = 360.0 / step_deg;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9 * steps) {
    throw OrbitError(ErrorKind::invalid_input, "rotation step must divide 360");
  }
  return static_cast<int>(rounded);
}

void add_noise(RasterImage& img, double variance, std::mt19937_64& rng) {
  if (variance <= 0.0) return;
  std::normal_distribution<double> noise(0.0, std::sqrt(variance));
  for (double& v : img.pixels()) v += noise(rng);
}

}  // namespace

std::vector<std::optional<double>> angle_residuals(const RasterImage& img, double step_deg,
                                                   Interpolation interpolation,
                                                   GradientEstimator estimator,
                                                   const StabilityOptions& options) {
  const int steps = steps_per_turn(step_deg);
  std::mt19937_64 rng(options.seed);
  std::vector<std::optional<double>> residuals;
  residuals.reserve(steps);
  for (int k = 0; k < steps; ++k) {
    const double gamma_deg = 360.0 * k / steps;
    RasterImage rotated = rotate_image(img, Rotation2D::from_degrees(gamma_deg), interpolation);
    add_noise(rotated, options.noise_variance, rng);
    try {
      const ContinuousImage cimg(rotated, options.blur_sigma);
      const OrientationEstimate est = canonical_angle(cimg, options.circles, estimator);
      residuals.emplace_back(std::fmod(est.rotation.degrees() + gamma_deg, 360.0));
    } catch (const OrbitError& e) {
      if (e.kind() != ErrorKind::degenerate_orientation) throw;
      residuals.emplace_back(std::nullopt);
    }
  }
  return residuals;
}

StabilityReport stability_report(std::span<const RasterImage> images, double step_deg,
                                 Interpolation interpolation, GradientEstimator estimator,
                                 const StabilityOptions& options) {
  if (images.empty()) throw OrbitError(ErrorKind::invalid_input, "empty image corpus");
  StabilityReport report;
  report.estimator = estimator;
  report.interpolation = interpolation;
  const int bins = static_cast<int>(kCircularStdCapDegrees / kHistogramBinDegrees);
  for (int b = 0; b <= bins; ++b) report.histogram.edges.push_back(b * kHistogramBinDegrees);
  report.histogram.counts.assign(bins, 0);

  double sum = 0.0;
  std::size_t scored = 0;
  for (std::size_t i = 0; i < images.size(); ++i) {
    StabilityOptions item_options = options;
    std::seed_seq seq{static_cast<std::uint64_t>(options.seed), static_cast<std::uint64_t>(i)};
    std::mt19937_64 seeder(seq);
    item_options.seed = seeder();
    const auto residuals =
        angle_residuals(images[i], step_deg, interpolation, estimator, item_options);
    std::vector<double> valid;
    for (const auto& r : residuals) {
      if (r) valid.push_back(*r);
    }
    if (valid.empty()) {
      report.per_item_circular_std.emplace_back(std::nullopt);
      ++report.degenerate_items;
      continue;
    }
    const double sd = circular_std(valid);
    report.per_item_circular_std.emplace_back(sd);
    sum += sd;
    ++scored;
    const int bin = std::min(bins - 1, static_cast<int>(sd / kHistogramBinDegrees));
    ++report.histogram.counts[bin];
  }
  report.mean_std = scored > 0 ? sum / static_cast<double>(scored)
                               : std::numeric_limits<double>::quiet_NaN();
  return report;
}

// ---------------------------------------------------------------------------
// Toy benchmark

namespace {

constexpr int kShapeClasses = 4;
constexpr int kGrid = 4;
constexpr int kFeatureSize = kGrid * kGrid * kGrid;

using Feature = std::array<double, kFeatureSize>;

PointCloud sample_shape(int shape, int n, double noise, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::uniform_int_distribution<int> pick(0, 5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  PointMatrix m(n, 3);
  for (int i = 0; i < n; ++i) {
    Eigen::Vector3d p;
    switch (shape) {
      case 0: {  // sphere shell
        p = Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng)).normalized();
        break;
      }
      case 1: {  // cube surface
        const int face = pick(rng);
        p = Eigen::Vector3d(sym(rng), sym(rng), sym(rng));
        p(face % 3) = face < 3 ? -1.0 : 1.0;
        break;
      }
      case 2: {  // two orthogonal planar slabs, shorter along z
        if (pick(rng) % 2 == 0) {
          p = Eigen::Vector3d(0.0, sym(rng), 0.6 * sym(rng));
        } else {
          p = Eigen::Vector3d(sym(rng), 0.0, 0.6 * sym(rng));
        }
        break;
      }
      default: {  // torus, major radius 1, minor radius 0.35
        const double u = angle(rng);
        const double v = angle(rng);
        const double ring = 1.0 + 0.35 * std::cos(v);
        p = Eigen::Vector3d(ring * std::cos(u), ring * std::sin(u), 0.35 * std::sin(v));
        break;
      }
    }
    for (int k = 0; k < 3; ++k) m(i, k) = p(k) + noise * gauss(rng);
  }
  return PointCloud(std::move(m));
}

// Normalized 4x4x4 occupancy over the axis-aligned bounding cube.
Feature occupancy(const PointCloud& x) {
  const PointMatrix& p = x.points();
  const Eigen::RowVector3d lo = p.colwise().minCoeff();
  const Eigen::RowVector3d hi = p.colwise().maxCoeff();
  const Eigen::RowVector3d mid = 0.5 * (lo + hi);
  double side = (hi - lo).maxCoeff();
  if (!(side > 0.0)) side = 1.0;
  const Eigen::RowVector3d origin = mid.array() - 0.5 * side;
  Feature f{};
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    int idx[3];
    for (int k = 0; k < 3; ++k) {
      const int cell = static_cast<int>(std::floor((p(i, k) - origin(k)) / side * kGrid));
      idx[k] = std::clamp(cell, 0, kGrid - 1);
    }
    f[(idx[0] * kGrid + idx[1]) * kGrid + idx[2]] += 1.0;
  }
  for (double& v : f) v /= static_cast<double>(p.rows());
  return f;
}

class NearestCentroid {
 public:
  void fit(const std::vector<Feature>& features, const std::vector<int>& labels) {
    centroids_.assign(kShapeClasses, Feature{});
    std::array<int, kShapeClasses> counts{};
    for (std::size_t i = 0; i < features.size(); ++i) {
      for (int k = 0; k < kFeatureSize; ++k) centroids_[labels[i]][k] += features[i][k];
      ++counts[labels[i]];
    }
    for (int c = 0; c < kShapeClasses; ++c) {
      if (counts[c] == 0) continue;
      for (double& v : centroids_[c]) v /= counts[c];
    }
  }

  int predict(const Feature& f) const {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int c = 0; c < kShapeClasses; ++c) {
      double d = 0.0;
      for (int k = 0; k < kFeatureSize; ++k) {
        const double e = f[k] - centroids_[c][k];
        d += e * e;
      }
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    return best;
  }

 private:
  std::vector<Feature> centroids_;
};

std::string format_transform(int i, int j, double scale, double offset) {
  std::ostringstream name;
  name << "rot(" << i << "," << j << ")/scale=" << scale << "/trans=" << offset;
  return name.str();
}

}  // namespace

ToyBenchReport toy_shape_bench(const ToyBenchOptions& options) {
  if (options.train_per_class < 1 || options.test_per_class < 1 || options.points < 4) {
    throw OrbitError(ErrorKind::invalid_input, "toy bench needs samples and >= 4 points");
  }
  std::mt19937_64 rng(options.seed);
  std::vector<PointCloud> train;
  std::vector<int> train_labels;
  std::vector<PointCloud> test;
  std::vector<int> test_labels;
  for (int c = 0; c < kShapeClasses; ++c) {
    for (int k = 0; k < options.train_per_class; ++k) {
      train.push_back(sample_shape(c, options.points, options.noise, rng));
      train_labels.push_back(c);
    }
    for (int k = 0; k < options.test_per_class; ++k) {
      test.push_back(sample_shape(c, options.points, options.noise, rng));
      test_labels.push_back(c);
    }
  }

  std::vector<NamedTransform<PointCloud>> transforms;
  const auto grid = rotation_grid(options.grid_a, options.grid_b);
  for (int i = 0; i < options.grid_a; ++i) {
    for (int j = 0; j < options.grid_b; ++j) {
      const Eigen::Matrix3d& r = grid[static_cast<std::size_t>(i) * options.grid_b + j];
      for (double s : kBenchScales) {
        for (double t : kBenchTranslations) {
          const RigidSimilarity3D g(r, Eigen::Vector3d::Constant(t), s);
          transforms.push_back({format_transform(i, j, s, t),
                                [g](const PointCloud& x) { return apply(g, x); }});
        }
      }
    }
  }

  // Without the orbit map: features straight from the raw cloud.
  NearestCentroid raw_model;
  {
    std::vector<Feature> feats;
    for (const auto& x : train) feats.push_back(occupancy(x));
    raw_model.fit(feats, train_labels);
  }
  const auto predict_raw = [&](const PointCloud& x) { return raw_model.predict(occupancy(x)); };

  // With the orbit map applied before featurization, at train and test time.
  NearestCentroid om_model;
  {
    std::vector<Feature> feats;
    std::vector<int> labels;
    for (std::size_t i = 0; i < train.size(); ++i) {
      try {
        feats.push_back(occupancy(orbit_map_similarity(train[i]).canonical));
        labels.push_back(train_labels[i]);
      } catch (const OrbitError& e) {
        if (!is_degeneracy(e.kind())) throw;
      }
    }
    om_model.fit(feats, labels);
  }
  const auto predict_om = [&](const PointCloud& x) {
    try {
      return om_model.predict(occupancy(orbit_map_similarity(x).canonical));
    } catch (const OrbitError& e) {
      if (!is_degeneracy(e.kind())) throw;
      return -1;
    }
  };

  const std::span<const PointCloud> items(test);
  const std::span<const int> labels(test_labels);
  const std::span<const NamedTransform<PointCloud>> sweep(transforms);
  ToyBenchReport report;
  report.with_orbit_map = orbit_sweep(predict_om, items, labels, sweep);
  report.without_orbit_map = orbit_sweep(predict_raw, items, labels, sweep);
  return report;
}

}  // namespace orbitmap
