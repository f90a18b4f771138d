#include "orbitmap/group_actions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace orbitmap {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid input";
    case ErrorKind::parse_error: return "parse error";
    case ErrorKind::io_error: return "io error";
    case ErrorKind::degenerate_orientation: return "degenerate orientation";
    case ErrorKind::degenerate_scale: return "degenerate scale";
    case ErrorKind::degenerate_spectrum: return "degenerate spectrum";
    case ErrorKind::ambiguous_sign: return "ambiguous sign";
  }
  return "unknown";
}

std::pair<double, double> cos_sin_fraction(long long k, long long n) {
  if (n <= 0) throw OrbitError(ErrorKind::invalid_input, "fraction denominator must be positive");
  long long r = k % n;
  if (r < 0) r += n;
  if ((4 * r) % n == 0) {
    switch ((4 * r) / n) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double a = kTwoPi * static_cast<double>(r) / static_cast<double>(n);
  return {std::cos(a), std::sin(a)};
}

// ---------------------------------------------------------------------------
// Rotation2D

Rotation2D Rotation2D::from_radians(double radians) {
  if (!std::isfinite(radians)) throw OrbitError(ErrorKind::invalid_input, "non-finite angle");
  double a = std::fmod(radians, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  // a + (2pi - a) lands within an ulp or two of 2pi; snap it to the identity.
  if (a >= kTwoPi - 4.0 * std::numeric_limits<double>::epsilon() * kTwoPi) a = 0.0;
  if (a == 0.0) a = 0.0;  // drops -0.0
  return Rotation2D(a);
}

Rotation2D Rotation2D::compose(const Rotation2D& other) const {
  return from_radians(angle_ + other.angle_);
}

Rotation2D Rotation2D::inverse() const {
  return angle_ == 0.0 ? Rotation2D() : Rotation2D(kTwoPi - angle_);
}

Eigen::Matrix2d Rotation2D::matrix() const {
  const double c = std::cos(angle_);
  const double s = std::sin(angle_);
  Eigen::Matrix2d m;
  m << c, -s, s, c;
  return m;
}

// ---------------------------------------------------------------------------
// Permutation

Permutation::Permutation(std::vector<std::size_t> mapping) : mapping_(std::move(mapping)) {
  std::vector<bool> seen(mapping_.size(), false);
  for (std::size_t m : mapping_) {
    if (m >= mapping_.size() || seen[m]) {
      throw OrbitError(ErrorKind::invalid_input, "permutation mapping is not a bijection");
    }
    seen[m] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> m(n);
  std::iota(m.begin(), m.end(), std::size_t{0});
  return Permutation(std::move(m));
}

std::vector<double> Permutation::apply(std::span<const double> v) const {
  if (v.size() != mapping_.size()) {
    throw OrbitError(ErrorKind::invalid_input, "permutation size does not match vector length");
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[mapping_[i]];
  return out;
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> inv(mapping_.size());
  for (std::size_t i = 0; i < mapping_.size(); ++i) inv[mapping_[i]] = i;
  return Permutation(std::move(inv));
}

Permutation Permutation::compose(const Permutation& other) const {
  if (other.size() != size()) {
    throw OrbitError(ErrorKind::invalid_input, "cannot compose permutations of different sizes");
  }
  std::vector<std::size_t> c(size());
  for (std::size_t i = 0; i < size(); ++i) c[i] = other.mapping_[mapping_[i]];
  return Permutation(std::move(c));
}

// ---------------------------------------------------------------------------
// RigidSimilarity3D

RigidSimilarity3D::RigidSimilarity3D()
    : rotation_(Eigen::Matrix3d::Identity()), translation_(Eigen::Vector3d::Zero()), scale_(1.0) {}

RigidSimilarity3D::RigidSimilarity3D(const Eigen::Matrix3d& rotation,
                                     const Eigen::Vector3d& translation, double scale)
    : rotation_(rotation), translation_(translation), scale_(scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw OrbitError(ErrorKind::invalid_input, "similarity scale must be positive and finite");
  }
  if (!rotation.allFinite() || !translation.allFinite()) {
    throw OrbitError(ErrorKind::invalid_input, "similarity has non-finite entries");
  }
  const double defect =
      (rotation * rotation.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  if (defect > 1e-12) {
    throw OrbitError(ErrorKind::invalid_input, "similarity rotation is not orthogonal");
  }
}

RigidSimilarity3D RigidSimilarity3D::translation_only(const Eigen::Vector3d& t) {
  return RigidSimilarity3D(Eigen::Matrix3d::Identity(), t, 1.0);
}

RigidSimilarity3D RigidSimilarity3D::scaling(double s) {
  return RigidSimilarity3D(Eigen::Matrix3d::Identity(), Eigen::Vector3d::Zero(), s);
}

RigidSimilarity3D RigidSimilarity3D::rotation_only(const Eigen::Matrix3d& r) {
  return RigidSimilarity3D(r, Eigen::Vector3d::Zero(), 1.0);
}

RigidSimilarity3D RigidSimilarity3D::compose(const RigidSimilarity3D& other) const {
  return RigidSimilarity3D(Unchecked{}, rotation_ * other.rotation_,
                           scale_ * (rotation_ * other.translation_) + translation_,
                           scale_ * other.scale_);
}

RigidSimilarity3D RigidSimilarity3D::inverse() const {
  const Eigen::Matrix3d rt = rotation_.transpose();
  return RigidSimilarity3D(Unchecked{}, rt, -(rt * translation_) / scale_, 1.0 / scale_);
}

// ---------------------------------------------------------------------------
// Orbit maps on vectors

std::vector<double> apply(const MeanShift& g, std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x -= g.offset;
  return out;
}

CanonicalResult<std::vector<double>, MeanShift> mean_subtract(std::span<const double> v) {
  if (v.empty()) throw OrbitError(ErrorKind::invalid_input, "empty input");
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  MeanShift shift{mean};
  return {orbitmap::apply(shift, v), shift};
}

CanonicalResult<std::vector<double>, Permutation> sort_orbit_map(std::span<const double> v) {
  if (v.empty()) throw OrbitError(ErrorKind::invalid_input, "empty input");
  for (double x : v) {
    if (std::isnan(x)) throw OrbitError(ErrorKind::invalid_input, "NaN entry cannot be ordered");
  }
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ma = std::abs(v[a]);
    const double mb = std::abs(v[b]);
    if (ma != mb) return ma < mb;
    if (v[a] != v[b]) return v[a] < v[b];
    return a < b;
  });
  Permutation perm(std::move(order));
  return {perm.apply(v), perm};
}

}  // namespace orbitmap
