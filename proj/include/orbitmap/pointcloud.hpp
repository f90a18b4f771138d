#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "orbitmap/group_actions.hpp"

namespace orbitmap {

using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;

/// N x 3 finite coordinates, one point per row.
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(PointMatrix points);
  static PointCloud from_rows(const std::vector<std::array<double, 3>>& rows);

  const PointMatrix& points() const { return points_; }
  Eigen::Index size() const { return points_.rows(); }
  double max_abs() const { return points_.size() == 0 ? 0.0 : points_.cwiseAbs().maxCoeff(); }
  Eigen::Vector3d centroid() const;

 private:
  PointMatrix points_;
};

PointCloud apply(const RigidSimilarity3D& g, const PointCloud& x);

/// x -> x - centroid
struct CentroidShift {
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
};
PointCloud apply(const CentroidShift& g, const PointCloud& x);
inline CentroidShift inverse(const CentroidShift& g) { return {-g.centroid}; }

/// x -> x / divisor
struct ScaleDivisor {
  double divisor = 1.0;
};
PointCloud apply(const ScaleDivisor& g, const PointCloud& x);
inline ScaleDivisor inverse(const ScaleDivisor& g) { return {1.0 / g.divisor}; }

CanonicalResult<PointCloud, CentroidShift> center(const PointCloud& x);

/// Divides by the mean distance of the points to the origin.
CanonicalResult<PointCloud, ScaleDivisor> scale_normalize(const PointCloud& x);

enum class SignRule {
  // Sign of the first point's coordinate along each principal axis. When that
  // coordinate is negligible the next point decides; an axis with no
  // non-negligible coordinate at all (the normal of a planar cloud) is fixed
  // by the right-hand rule.
  first_row_with_fallback,
  // First point only; a negligible coordinate is an ambiguous_sign error.
  first_row_strict,
};

struct PcaOptions {
  double gap_tolerance = 1e-6;
  double sign_tolerance = 1e-9;
  SignRule sign_rule = SignRule::first_row_with_fallback;
  // Flip the last axis when V*D is a reflection.
  bool proper_rotation = false;
};

struct SpectrumInfo {
  std::array<double, 3> singular_values{};
  std::array<double, 2> relative_gaps{};  // (s_i - s_{i+1}) / s_0
};

struct PcaDiagnostics {
  std::array<double, 3> singular_values{};
  std::array<double, 2> relative_gaps{};
  std::array<int, 3> sign_vector{1, 1, 1};
  double determinant = 1.0;
};

struct PcaAlignment {
  PointCloud canonical;
  RigidSimilarity3D element;
  PcaDiagnostics diagnostics;
};

/// Singular values of the centered cloud; never throws on degenerate input.
SpectrumInfo analyze_spectrum(const PointCloud& x);

/**
 * PCA pose normalization.
 *
 * Centers X, takes the SVD X_c = U S V^T and returns X_c V D with
 * D = diag(sign(U_00), sign(U_01), sign(U_02)). The covariance of the result
 * is diagonal and nonincreasing. Inputs with a relative singular-value gap at
 * or below `gap_tolerance` have no unique principal frame and raise
 * degenerate_spectrum.
 */
PcaAlignment pca_align(const PointCloud& x, const PcaOptions& options = {});

/// center -> pca_align -> scale_normalize, with the composite transform.
PcaAlignment orbit_map_similarity(const PointCloud& x, const PcaOptions& options = {});

/// r_xy(2 pi i / n_a) * r_yz(2 pi j / n_b) for all i, j.
std::vector<Eigen::Matrix3d> rotation_grid(int n_a, int n_b);

// Rotation in the xy plane (about z) and in the yz plane (about x).
Eigen::Matrix3d rotation_xy(long long k, long long n);
Eigen::Matrix3d rotation_yz(long long k, long long n);

inline const std::array<double, 9> kBenchScales{0.001, 0.01, 0.1, 0.5, 1.0, 5.0, 10.0, 100.0, 1000.0};
inline const std::array<double, 8> kBenchTranslations{-10.0, -1.0, -0.5, -0.1, 0.1, 0.5, 1.0, 10.0};

}  // namespace orbitmap
