#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/LU>

#include "orbitmap/error.hpp"

namespace orbitmap {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

inline double deg_to_rad(double degrees) { return degrees * (kPi / 180.0); }
inline double rad_to_deg(double radians) { return radians * (180.0 / kPi); }

// cos/sin of 2*pi*k/n, exact at quarter turns so grid rotations stay exact.
std::pair<double, double> cos_sin_fraction(long long k, long long n);

/**
 * Planar rotation r(a) = [cos a, -sin a; sin a, cos a].
 *
 * The angle is stored in radians, normalized to [0, 2*pi). Composition is
 * angle addition; a rotation composed with its inverse is exactly the
 * identity.
 */
class Rotation2D {
 public:
  Rotation2D() = default;

  static Rotation2D from_radians(double radians);
  static Rotation2D from_degrees(double degrees) { return from_radians(deg_to_rad(degrees)); }

  double radians() const { return angle_; }
  double degrees() const { return rad_to_deg(angle_); }

  Rotation2D compose(const Rotation2D& other) const;
  Rotation2D inverse() const;

  Eigen::Matrix2d matrix() const;
  Eigen::Vector2d apply(const Eigen::Vector2d& z) const { return matrix() * z; }

 private:
  explicit Rotation2D(double angle) : angle_(angle) {}
  double angle_ = 0.0;
};

/// Index bijection; apply(v)[i] = v[mapping[i]].
class Permutation {
 public:
  explicit Permutation(std::vector<std::size_t> mapping);

  static Permutation identity(std::size_t n);

  const std::vector<std::size_t>& mapping() const { return mapping_; }
  std::size_t size() const { return mapping_.size(); }

  std::vector<double> apply(std::span<const double> v) const;
  Permutation inverse() const;
  // (this o other)(v) == this(other(v))
  Permutation compose(const Permutation& other) const;

  bool operator==(const Permutation&) const = default;

 private:
  std::vector<std::size_t> mapping_;
};

/// Translation of a vector along the all-ones direction: v -> v - offset.
struct MeanShift {
  double offset = 0.0;
};

/**
 * Similarity transform x -> scale * rotation * x + translation in R^3.
 *
 * `rotation` is orthogonal but may be improper (det -1), since the PCA
 * alignment applies V*D literally.
 */
class RigidSimilarity3D {
 public:
  RigidSimilarity3D();
  RigidSimilarity3D(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation,
                    double scale);

  static RigidSimilarity3D translation_only(const Eigen::Vector3d& t);
  static RigidSimilarity3D scaling(double s);
  static RigidSimilarity3D rotation_only(const Eigen::Matrix3d& r);

  const Eigen::Matrix3d& rotation() const { return rotation_; }
  const Eigen::Vector3d& translation() const { return translation_; }
  double scale() const { return scale_; }
  double determinant() const { return rotation_.determinant(); }

  Eigen::Vector3d apply(const Eigen::Vector3d& x) const {
    return scale_ * (rotation_ * x) + translation_;
  }
  // (this o other)(x) == this(other(x))
  RigidSimilarity3D compose(const RigidSimilarity3D& other) const;
  RigidSimilarity3D inverse() const;

 private:
  struct Unchecked {};
  RigidSimilarity3D(Unchecked, const Eigen::Matrix3d& r, const Eigen::Vector3d& t, double s)
      : rotation_(r), translation_(t), scale_(s) {}

  Eigen::Matrix3d rotation_;
  Eigen::Vector3d translation_;
  double scale_;
};

/// The selected orbit element together with the group element that maps the
/// input onto it.
template <typename X, typename G>
struct CanonicalResult {
  X canonical;
  G element;
};

// Group actions on plain vectors, found by ADL from the generic helpers. The
// std::vector overloads keep std::apply from winning overload resolution.
std::vector<double> apply(const MeanShift& g, std::span<const double> v);
inline std::vector<double> apply(const MeanShift& g, const std::vector<double>& v) {
  return apply(g, std::span<const double>(v));
}
inline MeanShift inverse(const MeanShift& g) { return MeanShift{-g.offset}; }
inline std::vector<double> apply(const Permutation& g, std::span<const double> v) {
  return g.apply(v);
}
inline std::vector<double> apply(const Permutation& g, const std::vector<double>& v) {
  return g.apply(v);
}
inline Permutation inverse(const Permutation& g) { return g.inverse(); }
inline Rotation2D inverse(const Rotation2D& g) { return g.inverse(); }
inline RigidSimilarity3D inverse(const RigidSimilarity3D& g) { return g.inverse(); }

/// Removes the mean: v -> v - mean(v) * 1.
CanonicalResult<std::vector<double>, MeanShift> mean_subtract(std::span<const double> v);

/**
 * Sorts entries by magnitude, ascending.
 *
 * Equal magnitudes are ordered by signed value (negative first), then by
 * original index. The index tie only ever separates equal values, so the
 * canonical vector is the same for every permutation of the input.
 */
CanonicalResult<std::vector<double>, Permutation> sort_orbit_map(std::span<const double> v);

/**
 * Builds an equivariant map from an arbitrary one: g^-1(inner(g(x))) with
 * g the element chosen by `orbit_map`. `act(element, x)` applies a group
 * element; by default the ADL-visible `apply` is used.
 */
template <typename OrbitMap, typename Inner, typename X, typename Act>
X equivariant_wrap(OrbitMap&& orbit_map, Inner&& inner, const X& x, Act&& act) {
  auto result = std::invoke(std::forward<OrbitMap>(orbit_map), x);
  auto transformed = std::invoke(std::forward<Inner>(inner), result.canonical);
  return std::invoke(std::forward<Act>(act), inverse(result.element), transformed);
}

template <typename OrbitMap, typename Inner, typename X>
X equivariant_wrap(OrbitMap&& orbit_map, Inner&& inner, const X& x) {
  return equivariant_wrap(std::forward<OrbitMap>(orbit_map), std::forward<Inner>(inner), x,
                          [](const auto& g, const auto& y) { return apply(g, y); });
}

}  // namespace orbitmap
