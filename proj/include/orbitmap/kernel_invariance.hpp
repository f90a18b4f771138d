#pragma once

#include <span>

#include <Eigen/Core>

#include "orbitmap/image_orbit.hpp"

namespace orbitmap {

/**
 * Two square filters whose responses form a 2-vector field.
 *
 * Kernel entry [i][j] sits at offset (j - c, i - c), c = (N - 1) / 2, in the
 * same (x = column, y = row) frame as images.
 */
struct KernelPair {
  Eigen::MatrixXd first;
  Eigen::MatrixXd second;

  KernelPair() = default;
  KernelPair(Eigen::MatrixXd k1, Eigen::MatrixXd k2);

  int size() const { return static_cast<int>(first.rows()); }
};

/// k o r(quarter_turns * 90deg), exact on the grid. quarter_turns = -1 maps
/// [i][j] to k[N-1-j][i].
Eigen::MatrixXd rotate_kernel_90(const Eigen::MatrixXd& k, int quarter_turns);

struct ConditionCheck {
  bool holds = false;
  double max_violation = 0.0;
};

inline constexpr double kConditionTolerance = 1e-12;

/**
 * Tests (k1, k2)(r(a)^T phi) == r(a)^T (k1, k2)(phi) at every grid offset
 * phi for a = quarter_turns * 90deg. Only quarter turns are grid-exact.
 */
ConditionCheck check_condition(const KernelPair& pair, int quarter_turns);

/**
 * Parametric pairs that satisfy the condition by construction.
 *   N = 2, (a, b):       k1 = [a b; -b -a]
 *   N = 3, (a, b, c, d): k1 = [a b c; d 0 -d; -c -b -a]
 * with k2 = k1 o r(-90deg) in both cases.
 */
KernelPair make_family_pair(int n, std::span<const double> params);

/// N = 3 family at (0, 1, 0, 0): vertical and horizontal central differences.
KernelPair central_difference_pair();
/// One-sided differences embedded in 2 x 2; violates the condition.
KernelPair forward_difference_pair();

/**
 * Discrete convolution (k * u)(p) = sum_phi k(phi) u(p - phi) with reflect
 * padding. Odd kernels land on the pixel grid; even kernels land on the
 * (H+1) x (W+1) grid of pixel corners.
 */
struct KernelResponse {
  RasterImage values;
  double grid_offset = 0.0;  // index position of values(0, 0)

  // Clamped bilinear interpolation at continuous index coordinates.
  double sample(double sx, double sy, int channel) const;
};

KernelResponse convolve(const RasterImage& img, const Eigen::MatrixXd& k);

/**
 * Response of the pair to the unit ramp u(x, y) = x, ignoring any constant
 * term. For a condition-satisfying pair this is the reference direction that
 * the response to a +x gradient points along.
 */
Eigen::Vector2d ramp_response(const KernelPair& pair);

/**
 * Kernel-based canonical angle: direction of the circle integral of
 * (k1 * u, k2 * u), measured from the pair's ramp response so that a
 * gradient pair reproduces canonical_angle.
 */
OrientationEstimate kernel_canonical_angle(const ContinuousImage& image, const KernelPair& pair,
                                           const SampleCircleSet& circles,
                                           double epsilon = kOrientationEpsilon);

}  // namespace orbitmap
