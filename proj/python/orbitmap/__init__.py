"""Orbit-mapping canonicalization for images and point clouds."""

from ._orbitmap import (
    OrbitError,
    canonical_angle,
    center,
    central_difference_pair,
    check_condition,
    circular_std,
    family_pair,
    forward_difference_pair,
    mean_subtract,
    orbit_map_image,
    orbit_map_similarity,
    pca_align,
    render_scene,
    rotate_image,
    scale_normalize,
    sort_orbit_map,
    stability_report,
)

__all__ = [
    "OrbitError",
    "canonical_angle",
    "center",
    "central_difference_pair",
    "check_condition",
    "circular_std",
    "family_pair",
    "forward_difference_pair",
    "mean_subtract",
    "orbit_map_image",
    "orbit_map_similarity",
    "pca_align",
    "render_scene",
    "rotate_image",
    "scale_normalize",
    "sort_orbit_map",
    "stability_report",
]
