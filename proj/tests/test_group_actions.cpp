#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "orbitmap/group_actions.hpp"
#include "orbitmap/pointcloud.hpp"
#include "test_helpers.hpp"

using namespace orbitmap;

TEST_SUITE("group_actions") {

TEST_CASE("rotation angles normalize into [0, 2pi)") {
  CHECK(Rotation2D::from_degrees(0.0).radians() == 0.0);
  CHECK(Rotation2D::from_degrees(360.0).radians() == 0.0);
  CHECK(Rotation2D::from_degrees(-90.0).degrees() == doctest::Approx(270.0));
  CHECK(Rotation2D::from_degrees(450.0).degrees() == doctest::Approx(90.0));
  CHECK_FALSE(std::signbit(Rotation2D::from_radians(-0.0).radians()));
  CHECK_THROWS_AS(Rotation2D::from_radians(NAN), OrbitError);
  CHECK_THROWS_AS(Rotation2D::from_radians(INFINITY), OrbitError);
}

TEST_CASE("rotation group laws") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-720.0, 720.0);
  for (int i = 0; i < 100; ++i) {
    const Rotation2D a = Rotation2D::from_degrees(u(rng));
    const Rotation2D b = Rotation2D::from_degrees(u(rng));
    const Rotation2D c = Rotation2D::from_degrees(u(rng));
    CHECK(testing::angle_gap_deg(a.compose(a.inverse()).degrees(), 0.0) < 1e-12);
    CHECK(testing::angle_gap_deg(a.compose(b).compose(c).degrees(),
                                 a.compose(b.compose(c)).degrees()) < 1e-10);
    const Eigen::Matrix2d ab = a.compose(b).matrix();
    CHECK((ab - a.matrix() * b.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK(Rotation2D().inverse().radians() == 0.0);
}

TEST_CASE("cos_sin_fraction is exact at quarter turns") {
  for (long long k = -8; k <= 8; ++k) {
    const auto [c, s] = cos_sin_fraction(k, 4);
    const long long r = ((k % 4) + 4) % 4;
    const double ec[] = {1.0, 0.0, -1.0, 0.0};
    const double es[] = {0.0, 1.0, 0.0, -1.0};
    CHECK(c == ec[r]);
    CHECK(s == es[r]);
  }
  const auto [c, s] = cos_sin_fraction(1, 8);
  CHECK(c == doctest::Approx(std::sqrt(0.5)));
  CHECK(s == doctest::Approx(std::sqrt(0.5)));
  CHECK_THROWS_AS(cos_sin_fraction(1, 0), OrbitError);
}

TEST_CASE("permutations validate, invert and compose") {
  CHECK_THROWS_AS(Permutation({0, 0, 1}), OrbitError);
  CHECK_THROWS_AS(Permutation({0, 3, 1}), OrbitError);
  const Permutation p({2, 0, 1});
  const std::vector<double> v{10.0, 20.0, 30.0};
  CHECK(p.apply(v) == std::vector<double>{30.0, 10.0, 20.0});
  CHECK(p.inverse().apply(p.apply(v)) == v);
  CHECK(p.compose(p.inverse()) == Permutation::identity(3));
  const Permutation q({1, 2, 0});
  // compose(other) applies `other` first: (p . q)(v) = p(q(v))
  CHECK(orbitmap::apply(p, orbitmap::apply(q, v)) == p.compose(q).apply(v));
  CHECK_THROWS_AS(p.apply(std::vector<double>{1.0, 2.0}), OrbitError);
}

TEST_CASE("similarities validate, compose and invert") {
  CHECK_THROWS_AS(RigidSimilarity3D(Eigen::Matrix3d::Identity(), Eigen::Vector3d::Zero(), 0.0),
                  OrbitError);
  CHECK_THROWS_AS(RigidSimilarity3D(2.0 * Eigen::Matrix3d::Identity(), Eigen::Vector3d::Zero(), 1.0),
                  OrbitError);
  std::mt19937_64 rng(2);
  const RigidSimilarity3D g(testing::random_rotation(rng), Eigen::Vector3d(1, -2, 3), 2.5);
  const RigidSimilarity3D h(testing::random_rotation(rng), Eigen::Vector3d(0.5, 0, -1), 0.1);
  const Eigen::Vector3d x(0.3, -0.7, 1.1);
  CHECK((g.compose(h).apply(x) - g.apply(h.apply(x))).norm() < 1e-12);
  CHECK((g.inverse().apply(g.apply(x)) - x).norm() < 1e-12);
  CHECK(g.determinant() == doctest::Approx(1.0));
}

TEST_CASE("mean_subtract examples") {
  const auto r = mean_subtract(std::vector<double>{1.0, 2.0, 3.0});
  CHECK(r.canonical == std::vector<double>{-1.0, 0.0, 1.0});
  CHECK(r.element.offset == 2.0);

  const auto c = mean_subtract(std::vector<double>{5.0, 5.0, 5.0});
  CHECK(c.canonical == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(c.element.offset == 5.0);

  const std::vector<double> v{0.25, -1.5, 4.0, 2.0};
  std::vector<double> shifted = v;
  for (double& x : shifted) x += 7.0;
  const auto a = mean_subtract(v).canonical;
  const auto b = mean_subtract(shifted).canonical;
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-14));

  CHECK_THROWS_AS(mean_subtract(std::vector<double>{}), OrbitError);
}

TEST_CASE("sort orbit map examples") {
  const auto r = sort_orbit_map(std::vector<double>{-3.0, 1.0, 2.0});
  CHECK(r.canonical == std::vector<double>{1.0, 2.0, -3.0});
  CHECK(r.element.apply(std::vector<double>{-3.0, 1.0, 2.0}) == r.canonical);
  CHECK_THROWS_AS(sort_orbit_map(std::vector<double>{}), OrbitError);
  CHECK_THROWS_AS(sort_orbit_map(std::vector<double>{1.0, NAN}), OrbitError);
}

TEST_CASE("sort orbit map is invariant on every permutation") {
  // Oracle: enumerate the whole orbit and require a single fixed output.
  for (const std::vector<double>& base :
       {std::vector<double>{-3.0, 1.0, 2.0}, std::vector<double>{2.0, -2.0, 1.0},
        std::vector<double>{1.0, -1.0, 1.0, -1.0}, std::vector<double>{0.0, -0.5, 0.5, 3.0}}) {
    std::vector<double> p = base;
    std::sort(p.begin(), p.end());
    const auto reference = sort_orbit_map(p).canonical;
    do {
      const auto r = sort_orbit_map(p);
      CHECK(r.canonical == reference);
      CHECK(orbitmap::apply(r.element, p) == r.canonical);
    } while (std::next_permutation(p.begin(), p.end()));
  }
}

TEST_CASE("sort ties order equal magnitudes by signed value") {
  // (2, -2, 1): magnitude 1 first, then -2 before 2.
  CHECK(sort_orbit_map(std::vector<double>{2.0, -2.0, 1.0}).canonical ==
        std::vector<double>{1.0, -2.0, 2.0});
  // All magnitudes equal: negatives first, stable by index among equal values.
  const auto r = sort_orbit_map(std::vector<double>{1.0, -1.0, 1.0, -1.0});
  CHECK(r.canonical == std::vector<double>{-1.0, -1.0, 1.0, 1.0});
  CHECK(r.element.mapping() == std::vector<std::size_t>{1, 3, 0, 2});
}

TEST_CASE("equivariant wrap on vectors") {
  const std::vector<double> x{4.0, -1.0, 2.5};
  const auto identity = [](const std::vector<double>& v) { return v; };
  const auto back = equivariant_wrap(mean_subtract, identity, x);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-15));

  const auto sorted = [](std::span<const double> v) { return sort_orbit_map(v); };
  const auto id_sorted = equivariant_wrap(sorted, identity, x);
  CHECK(id_sorted == x);

  // A non-equivariant inner map becomes permutation-equivariant.
  const auto ramp = [](const std::vector<double>& v) {
    std::vector<double> out(v);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += static_cast<double>(i);
    return out;
  };
  const Permutation p({2, 0, 1});
  const auto lhs = equivariant_wrap(sorted, ramp, p.apply(x));
  const auto rhs = p.apply(equivariant_wrap(sorted, ramp, x));
  CHECK(lhs == rhs);
}

}  // TEST_SUITE
