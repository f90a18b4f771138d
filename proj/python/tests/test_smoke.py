import math

import numpy as np
import pytest

import orbitmap as om


def random_rotation(rng):
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def anisotropic_cloud(rng, n=200):
    return rng.normal(size=(n, 3)) * np.array([3.0, 2.0, 1.0]) + rng.normal(size=3)


def test_similarity_orbit_map_is_invariant():
    rng = np.random.default_rng(0)
    x = anisotropic_cloud(rng)
    base = om.orbit_map_similarity(x)["canonical"]
    for _ in range(10):
        r = random_rotation(rng)
        s = 10.0 ** rng.uniform(-2, 2)
        t = rng.normal(size=3) * 5
        moved = om.orbit_map_similarity(s * x @ r.T + t)["canonical"]
        np.testing.assert_allclose(moved, base, atol=1e-9)


def test_pca_output_has_diagonal_covariance():
    rng = np.random.default_rng(1)
    y = om.pca_align(anisotropic_cloud(rng))["canonical"]
    cov = np.cov(y.T)
    assert np.all(np.abs(cov - np.diag(np.diag(cov))) < 1e-9 * cov.max())
    assert cov[0, 0] >= cov[1, 1] >= cov[2, 2]


def test_degenerate_cloud_raises():
    octahedron = np.vstack([np.eye(3), -np.eye(3)])
    with pytest.raises(om.OrbitError) as info:
        om.pca_align(octahedron)
    assert info.value.args[0] == "degenerate spectrum"


def test_sort_tie_rule():
    canonical, mapping = om.sort_orbit_map([1.0, -1.0, 1.0, -1.0])
    assert canonical == [-1.0, -1.0, 1.0, 1.0]
    assert mapping == [1, 3, 0, 2]
    assert om.mean_subtract([1.0, 2.0, 3.0]) == [-1.0, 0.0, 1.0]


def test_canonical_angle_follows_rotation():
    base = om.canonical_angle(om.render_scene(3, 0, 64))["angle_deg"]
    for gamma in (30.0, 135.0, 290.0):
        a = om.canonical_angle(om.render_scene(3, 0, 64, gamma))["angle_deg"]
        gap = (a + gamma - base) % 360.0
        assert min(gap, 360.0 - gap) <= 1.0


def test_constant_image_is_degenerate():
    with pytest.raises(om.OrbitError):
        om.canonical_angle(np.full((32, 32), 0.4))


def test_orbit_map_image_shapes():
    img = om.render_scene(4, 1, 32)
    canonical, angle = om.orbit_map_image(img)
    assert canonical.shape == img.shape
    assert -180.0 < angle <= 180.0
    color = np.stack([img, img, img], axis=-1)
    assert om.rotate_image(color, 90.0, "nearest").shape == color.shape


def test_kernel_pairs():
    assert om.check_condition(*om.central_difference_pair(), 1) == (True, 0.0)
    holds, violation = om.check_condition(*om.forward_difference_pair(), 1)
    assert not holds and violation > 0
    k1, k2 = om.family_pair(2, [1.0, 0.0])
    np.testing.assert_array_equal(k1, [[1, 0], [0, -1]])
    np.testing.assert_array_equal(k2, [[0, 1], [-1, 0]])


def test_circular_std_and_report():
    assert om.circular_std([0.0, 10.0]) == pytest.approx(5.003178546614001, rel=1e-12)
    images = [om.render_scene(5, i, 32) for i in range(2)]
    report = om.stability_report(images, step_deg=45.0)
    assert len(report["per_item"]) == 2
    assert report["degenerate_items"] == 0
    assert math.isfinite(report["mean_std"])
