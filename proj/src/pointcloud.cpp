#include "orbitmap/pointcloud.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SVD>

namespace orbitmap {

PointCloud::PointCloud(PointMatrix points) : points_(std::move(points)) {
  if (points_.rows() < 1) throw OrbitError(ErrorKind::invalid_input, "point cloud is empty");
  if (!points_.allFinite()) {
    throw OrbitError(ErrorKind::invalid_input, "point cloud has non-finite coordinates");
  }
}

PointCloud PointCloud::from_rows(const std::vector<std::array<double, 3>>& rows) {
  PointMatrix m(static_cast<Eigen::Index>(rows.size()), 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int k = 0; k < 3; ++k) m(static_cast<Eigen::Index>(i), k) = rows[i][k];
  }
  return PointCloud(std::move(m));
}

Eigen::Vector3d PointCloud::centroid() const { return points_.colwise().mean().transpose(); }

PointCloud apply(const RigidSimilarity3D& g, const PointCloud& x) {
  PointMatrix out = (x.points() * g.rotation().transpose()) * g.scale();
  out.rowwise() += g.translation().transpose();
  return PointCloud(std::move(out));
}

PointCloud apply(const CentroidShift& g, const PointCloud& x) {
  PointMatrix out = x.points();
  out.rowwise() -= g.centroid.transpose();
  return PointCloud(std::move(out));
}

PointCloud apply(const ScaleDivisor& g, const PointCloud& x) {
  return PointCloud(x.points() / g.divisor);
}

CanonicalResult<PointCloud, CentroidShift> center(const PointCloud& x) {
  CentroidShift shift{x.centroid()};
  return {apply(shift, x), shift};
}

CanonicalResult<PointCloud, ScaleDivisor> scale_normalize(const PointCloud& x) {
  const double mean_radius = x.points().rowwise().norm().mean();
  if (!(mean_radius > std::numeric_limits<double>::min())) {
    throw OrbitError(ErrorKind::degenerate_scale, "degenerate scale: all points at the origin");
  }
  ScaleDivisor divisor{mean_radius};
  return {apply(divisor, x), divisor};
}

namespace {

struct Decomposition {
  PointMatrix centered;
  Eigen::Vector3d centroid;
  Eigen::Matrix3d v;
  Eigen::Vector3d sigma;
};

Decomposition decompose(const PointCloud& x) {
  Decomposition d;
  d.centroid = x.centroid();
  d.centered = x.points();
  d.centered.rowwise() -= d.centroid.transpose();
  Eigen::JacobiSVD<PointMatrix> svd(d.centered, Eigen::ComputeFullV);
  d.v = svd.matrixV();
  d.sigma = svd.singularValues();
  return d;
}

SpectrumInfo spectrum_of(const Eigen::Vector3d& sigma) {
  SpectrumInfo info;
  for (int k = 0; k < 3; ++k) info.singular_values[k] = sigma(k);
  if (sigma(0) > 0.0) {
    info.relative_gaps = {(sigma(0) - sigma(1)) / sigma(0), (sigma(1) - sigma(2)) / sigma(0)};
  }
  return info;
}

}  // namespace

SpectrumInfo analyze_spectrum(const PointCloud& x) { return spectrum_of(decompose(x).sigma); }

PcaAlignment pca_align(const PointCloud& x, const PcaOptions& options) {
  if (x.size() < 4) throw OrbitError(ErrorKind::invalid_input, "pca_align needs at least 4 points");
  const Decomposition d = decompose(x);
  const SpectrumInfo spectrum = spectrum_of(d.sigma);

  PcaDiagnostics diag;
  diag.singular_values = spectrum.singular_values;
  diag.relative_gaps = spectrum.relative_gaps;

  const double s0 = d.sigma(0);
  if (!(s0 > 0.0) || spectrum.relative_gaps[0] <= options.gap_tolerance ||
      spectrum.relative_gaps[1] <= options.gap_tolerance) {
    std::ostringstream msg;
    msg << "degenerate spectrum: singular values (" << d.sigma(0) << ", " << d.sigma(1) << ", "
        << d.sigma(2) << "), relative gaps (" << spectrum.relative_gaps[0] << ", "
        << spectrum.relative_gaps[1] << ")";
    throw OrbitError(ErrorKind::degenerate_spectrum, msg.str());
  }

  // Point i's coordinate along axis k is U_ik * s_k = (x_i - c) . v_k.
  const double threshold = options.sign_tolerance * s0;
  const Eigen::Index rows = options.sign_rule == SignRule::first_row_strict ? 1 : x.size();
  Eigen::Matrix3d vd = d.v;
  bool right_handed_last_axis = false;
  for (int k = 0; k < 3; ++k) {
    int sign = 0;
    for (Eigen::Index i = 0; i < rows && sign == 0; ++i) {
      const double p = d.centered.row(i).dot(d.v.col(k));
      if (std::abs(p) > threshold) sign = p > 0.0 ? 1 : -1;
    }
    if (sign == 0) {
      if (options.sign_rule == SignRule::first_row_strict || k != 2) {
        std::ostringstream msg;
        msg << "ambiguous sign: the first point has a negligible coordinate along principal axis "
            << k;
        throw OrbitError(ErrorKind::ambiguous_sign, msg.str());
      }
      right_handed_last_axis = true;
      continue;
    }
    diag.sign_vector[k] = sign;
    vd.col(k) *= sign;
  }
  if (right_handed_last_axis) {
    const Eigen::Vector3d normal = vd.col(0).cross(vd.col(1));
    diag.sign_vector[2] = normal.dot(d.v.col(2)) >= 0.0 ? 1 : -1;
    vd.col(2) = d.v.col(2) * diag.sign_vector[2];
  }
  double det = vd.determinant();
  if (options.proper_rotation && det < 0.0) {
    vd.col(2) *= -1.0;
    diag.sign_vector[2] *= -1;
    det = vd.determinant();
  }
  diag.determinant = det < 0.0 ? -1.0 : 1.0;

  PointMatrix canonical = d.centered * vd;
  const Eigen::Matrix3d q = vd.transpose();
  RigidSimilarity3D element(q, -(q * d.centroid), 1.0);
  return {PointCloud(std::move(canonical)), element, diag};
}

PcaAlignment orbit_map_similarity(const PointCloud& x, const PcaOptions& options) {
  const auto centered = center(x);
  PcaAlignment aligned = pca_align(centered.canonical, options);
  const auto scaled = scale_normalize(aligned.canonical);
  const RigidSimilarity3D composite =
      RigidSimilarity3D::scaling(1.0 / scaled.element.divisor)
          .compose(aligned.element)
          .compose(RigidSimilarity3D::translation_only(-centered.element.centroid));
  return {scaled.canonical, composite, aligned.diagnostics};
}

Eigen::Matrix3d rotation_xy(long long k, long long n) {
  const auto [c, s] = cos_sin_fraction(k, n);
  Eigen::Matrix3d r;
  r << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
  return r;
}

Eigen::Matrix3d rotation_yz(long long k, long long n) {
  const auto [c, s] = cos_sin_fraction(k, n);
  Eigen::Matrix3d r;
  r << 1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c;
  return r;
}

std::vector<Eigen::Matrix3d> rotation_grid(int n_a, int n_b) {
  if (n_a < 1 || n_b < 1) throw OrbitError(ErrorKind::invalid_input, "grid sizes must be >= 1");
  std::vector<Eigen::Matrix3d> out;
  out.reserve(static_cast<std::size_t>(n_a) * n_b);
  for (int i = 0; i < n_a; ++i) {
    for (int j = 0; j < n_b; ++j) out.push_back(rotation_xy(i, n_a) * rotation_yz(j, n_b));
  }
  return out;
}

}  // namespace orbitmap
