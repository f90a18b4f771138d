#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "orbitmap/kernel_invariance.hpp"
#include "orbitmap/synthetic.hpp"
#include "test_helpers.hpp"

using namespace orbitmap;
using Eigen::MatrixXd;

namespace {

// Geometric oracle for k o r(-90 deg): entry (i, j) sits at offset
// (x, y) = (j - c, i - c); r(-90 deg) maps (x, y) to (y, -x).
MatrixXd rotate_minus_quarter_by_offsets(const MatrixXd& k) {
  const Eigen::Index n = k.rows();
  const double c = 0.5 * (n - 1);
  MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double x = j - c;
      const double y = i - c;
      const double sx = y;
      const double sy = -x;
      out(i, j) = k(static_cast<Eigen::Index>(std::lround(sy + c)),
                    static_cast<Eigen::Index>(std::lround(sx + c)));
    }
  }
  return out;
}

MatrixXd m3(std::initializer_list<double> v) {
  MatrixXd m(3, 3);
  auto it = v.begin();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m(i, j) = *it++;
  }
  return m;
}

}  // namespace

TEST_SUITE("kernel_invariance") {

TEST_CASE("kernel pair validation") {
  CHECK_THROWS_AS(KernelPair(MatrixXd(2, 3), MatrixXd(2, 3)), OrbitError);
  CHECK_THROWS_AS(KernelPair(MatrixXd::Zero(2, 2), MatrixXd::Zero(3, 3)), OrbitError);
  MatrixXd bad = MatrixXd::Zero(2, 2);
  bad(0, 0) = NAN;
  CHECK_THROWS_AS(KernelPair(bad, MatrixXd::Zero(2, 2)), OrbitError);
}

TEST_CASE("quarter-turn rotation of kernels") {
  std::mt19937_64 rng(30);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n : {1, 2, 3, 4, 5}) {
    MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < k.size(); ++i) k.data()[i] = u(rng);
    CHECK(rotate_kernel_90(k, 0) == k);
    CHECK(rotate_kernel_90(k, 4) == k);
    CHECK(rotate_kernel_90(k, -1) == rotate_minus_quarter_by_offsets(k));
    CHECK(rotate_kernel_90(rotate_kernel_90(k, 1), -1) == k);
    CHECK(rotate_kernel_90(rotate_kernel_90(k, 1), 1) == rotate_kernel_90(k, 2));
  }
  const MatrixXd vertical = m3({0, 1, 0, 0, 0, 0, 0, -1, 0});
  CHECK(rotate_kernel_90(vertical, -1) == m3({0, 0, 0, -1, 0, 1, 0, 0, 0}));
}

TEST_CASE("family pairs as printed") {
  const double n2[] = {1.0, 0.0};
  const KernelPair p2 = make_family_pair(2, n2);
  MatrixXd k1(2, 2), k2(2, 2);
  k1 << 1, 0, 0, -1;
  k2 << 0, 1, -1, 0;
  CHECK(p2.first == k1);
  CHECK(p2.second == k2);

  const double n3[] = {0.0, 1.0, 0.0, 0.0};
  const KernelPair p3 = make_family_pair(3, n3);
  const KernelPair central = central_difference_pair();
  CHECK(p3.first == central.first);
  CHECK(p3.second == central.second);
  CHECK(central.first == m3({0, 1, 0, 0, 0, 0, 0, -1, 0}));
  CHECK(central.second == m3({0, 0, 0, -1, 0, 1, 0, 0, 0}));
  for (double v : central.first.reshaped()) CHECK_FALSE((std::signbit(v) && v == 0.0));

  // General N=3 member: k2 = ((-c, d, a), (-b, 0, b), (-a, -d, c)).
  const double g[] = {1.0, 2.0, 3.0, 4.0};
  const KernelPair p = make_family_pair(3, g);
  CHECK(p.first == m3({1, 2, 3, 4, 0, -4, -3, -2, -1}));
  CHECK(p.second == m3({-3, 4, 1, -2, 0, 2, -1, -4, 3}));

  CHECK_THROWS_AS(make_family_pair(4, g), OrbitError);
  CHECK_THROWS_AS(make_family_pair(3, n2), OrbitError);
}

TEST_CASE("central differences satisfy the rotation condition, forward differences do not") {
  for (int q = 1; q <= 3; ++q) {
    const ConditionCheck c = check_condition(central_difference_pair(), q);
    CHECK(c.holds);
    CHECK(c.max_violation == 0.0);
  }
  const KernelPair fwd = forward_difference_pair();
  MatrixXd k1(2, 2), k2(2, 2);
  k1 << -1, 0, 1, 0;
  k2 << 1, -1, 0, 0;
  CHECK(fwd.first == k1);
  CHECK(fwd.second == k2);
  for (int q = 1; q <= 3; ++q) {
    const ConditionCheck c = check_condition(fwd, q);
    CHECK_FALSE(c.holds);
    CHECK(c.max_violation > 0.0);
  }
  // q = 1: rot(k1, -1) = ((1, -1), (0, 0)) against k2, and rot(k2, -1) =
  // ((0, 1), (0, -1)) against -k1 = ((1, 0), (-1, 0)): worst entry differs by 1.
  CHECK(check_condition(fwd, 1).max_violation == 1.0);
}

TEST_CASE("random family members satisfy the condition") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<double> p2{u(rng), u(rng)};
    const std::vector<double> p3{u(rng), u(rng), u(rng), u(rng)};
    for (const KernelPair& pair : {make_family_pair(2, p2), make_family_pair(3, p3)}) {
      for (int q = 1; q <= 3; ++q) {
        const ConditionCheck c = check_condition(pair, q);
        CHECK(c.holds);
        CHECK(c.max_violation <= 1e-12);
      }
    }
  }
  const double zeros[] = {0.0, 0.0, 0.0, 0.0};
  const KernelPair z = make_family_pair(3, zeros);
  CHECK(z.first.isZero(0.0));
  CHECK(check_condition(z, 1).holds);
}

TEST_CASE("convolution is a true convolution with reflect padding") {
  RasterImage impulse(7, 7);
  impulse.at(3, 3) = 1.0;
  const MatrixXd k = m3({1, 2, 3, 4, 5, 6, 7, 8, 9});
  const KernelResponse r = convolve(impulse, k);
  CHECK(r.grid_offset == 0.0);
  // An impulse reproduces the kernel itself around the impulse.
  for (int a = -1; a <= 1; ++a) {
    for (int b = -1; b <= 1; ++b) CHECK(r.values.at(3 + a, 3 + b) == k(1 + a, 1 + b));
  }
  const RasterImage flat(6, 6, 1, 0.5);
  const KernelResponse rf = convolve(flat, k);
  for (double v : rf.values.pixels()) CHECK(v == doctest::Approx(0.5 * 45.0));

  const KernelResponse even = convolve(flat, forward_difference_pair().first);
  CHECK(even.values.height() == 7);
  CHECK(even.grid_offset == -0.5);
  for (double v : even.values.pixels()) CHECK(v == 0.0);
}

TEST_CASE("ramp response of the builtin pairs") {
  const Eigen::Vector2d c = ramp_response(central_difference_pair());
  CHECK(c.x() == 0.0);
  CHECK(c.y() == -2.0);
  const Eigen::Vector2d f = ramp_response(forward_difference_pair());
  CHECK(f.norm() > 0.0);
}

TEST_CASE("central-difference pair recovers the gradient direction of a ramp") {
  for (double deg : {0.0, 30.0, 135.0, 250.0}) {
    const Eigen::Vector2d slope(std::cos(deg_to_rad(deg)), std::sin(deg_to_rad(deg)));
    const RasterImage ramp = render_synthetic(LinearRamp{slope, 0.5}, Rotation2D(), 96, 96);
    const ContinuousImage img(ramp, 1.5);
    const OrientationEstimate e = kernel_canonical_angle(img, central_difference_pair(), SampleCircleSet{});
    CHECK(testing::angle_gap_deg(e.rotation.degrees(), deg) <= rad_to_deg(1e-6));
  }
}

TEST_CASE("constant image is degenerate for kernel pairs") {
  const ContinuousImage flat(RasterImage(32, 32, 1, 0.2), 1.5);
  try {
    kernel_canonical_angle(flat, central_difference_pair(), SampleCircleSet{});
    FAIL("expected degenerate orientation");
  } catch (const OrbitError& e) {
    CHECK(e.kind() == ErrorKind::degenerate_orientation);
  }
}

TEST_CASE("central-difference and exact estimators agree on smooth scenes") {
  std::mt19937_64 rng(32);
  for (int s = 0; s < 20; ++s) {
    const ContinuousImage img(render_synthetic(random_bump_scene(rng), Rotation2D(), 64, 64), 1.5);
    const double exact = canonical_angle(img, SampleCircleSet{}).rotation.degrees();
    const double central =
        kernel_canonical_angle(img, central_difference_pair(), SampleCircleSet{}).rotation.degrees();
    CHECK(testing::angle_gap_deg(exact, central) <= 1.0);
  }
}

}  // TEST_SUITE
