#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "orbitmap/group_actions.hpp"
#include "orbitmap/image.hpp"
#include "orbitmap/image_orbit.hpp"
#include "orbitmap/kernel_invariance.hpp"
#include "orbitmap/pointcloud.hpp"
#include "orbitmap/stability.hpp"
#include "orbitmap/synthetic.hpp"

namespace py = pybind11;
using namespace orbitmap;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// (H, W) arrays are grey; (H, W, C) needs C in {1, 3}.
RasterImage to_raster(const Array& a) {
  if (a.ndim() != 2 && a.ndim() != 3) throw py::value_error("image must be (H, W) or (H, W, C)");
  const int h = static_cast<int>(a.shape(0));
  const int w = static_cast<int>(a.shape(1));
  const int c = a.ndim() == 3 ? static_cast<int>(a.shape(2)) : 1;
  if (c != 1 && c != 3) throw py::value_error("image must have 1 or 3 channels");
  RasterImage img(h, w, c);
  std::copy(a.data(), a.data() + a.size(), img.pixels().begin());
  return img;
}

Array to_array(const RasterImage& img) {
  std::vector<py::ssize_t> shape{img.height(), img.width()};
  if (img.channels() > 1) shape.push_back(img.channels());
  Array out(shape);
  std::copy(img.pixels().begin(), img.pixels().end(), out.mutable_data());
  return out;
}

PointCloud to_cloud(const Array& a) {
  if (a.ndim() != 2 || a.shape(1) != 3) throw py::value_error("points must be an (N, 3) array");
  PointMatrix m(a.shape(0), 3);
  std::copy(a.data(), a.data() + a.size(), m.data());
  return PointCloud(std::move(m));
}

SampleCircleSet circles_of(const std::vector<double>& radii, int samples) {
  SampleCircleSet c;
  c.radii = radii;
  c.samples_per_circle = samples;
  return c;
}

py::dict similarity_dict(const RigidSimilarity3D& g) {
  py::dict d;
  d["rotation"] = Eigen::Matrix3d(g.rotation());
  d["translation"] = Eigen::Vector3d(g.translation());
  d["scale"] = g.scale();
  return d;
}

py::dict alignment_dict(const PcaAlignment& r) {
  py::dict d = similarity_dict(r.element);
  d["canonical"] = PointMatrix(r.canonical.points());
  d["singular_values"] = r.diagnostics.singular_values;
  d["sign_vector"] = r.diagnostics.sign_vector;
  return d;
}

PcaOptions pca_options(bool proper_rotation, bool strict_sign) {
  PcaOptions o;
  o.proper_rotation = proper_rotation;
  o.sign_rule = strict_sign ? SignRule::first_row_strict : SignRule::first_row_with_fallback;
  return o;
}

}  // namespace

PYBIND11_MODULE(_orbitmap, m) {
  m.doc() = "Orbit-mapping canonicalization for images and point clouds";

  static py::exception<OrbitError> error(m, "OrbitError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const OrbitError& e) {
      py::object exc = py::handle(error.ptr())(py::str(to_string(e.kind())), py::str(e.what()));
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  const std::vector<double> default_radii{0.05, 0.4};

  m.def("canonical_angle",
        [](const Array& image, double sigma, const std::vector<double>& radii, int samples,
           const std::string& estimator) {
          const ContinuousImage img(to_raster(image), sigma);
          const OrientationEstimate e =
              canonical_angle(img, circles_of(radii, samples), parse_estimator(estimator));
          py::dict d;
          d["angle_deg"] = e.rotation.degrees();
          d["integral"] = e.integral;
          d["magnitude"] = e.magnitude;
          return d;
        },
        py::arg("image"), py::arg("sigma") = kDefaultBlurSigma, py::arg("radii") = default_radii,
        py::arg("samples") = kDefaultSamplesPerCircle, py::arg("estimator") = "exact");

  m.def("rotate_image",
        [](const Array& image, double degrees, const std::string& interp) {
          return to_array(
              rotate_image(to_raster(image), Rotation2D::from_degrees(degrees), parse_interpolation(interp)));
        },
        py::arg("image"), py::arg("degrees"), py::arg("interp") = "bilinear");

  m.def("orbit_map_image",
        [](const Array& image, double sigma, const std::string& interp) {
          ImageOrbitOptions o;
          o.blur_sigma = sigma;
          o.mode = parse_interpolation(interp);
          const auto r = orbit_map_image(to_raster(image), o);
          return py::make_tuple(to_array(r.canonical), r.element.degrees());
        },
        py::arg("image"), py::arg("sigma") = kDefaultBlurSigma, py::arg("interp") = "bilinear");

  m.def("render_scene", [](std::uint64_t seed, int index, int size, double degrees) {
    std::mt19937_64 rng(seed);
    BumpScene scene;
    for (int i = 0; i <= index; ++i) scene = random_bump_scene(rng);
    return to_array(render_synthetic(scene, Rotation2D::from_degrees(degrees), size, size));
  }, py::arg("seed"), py::arg("index"), py::arg("size"), py::arg("degrees") = 0.0);

  m.def("center", [](const Array& points) {
    return PointMatrix(center(to_cloud(points)).canonical.points());
  });
  m.def("scale_normalize", [](const Array& points) {
    return PointMatrix(scale_normalize(to_cloud(points)).canonical.points());
  });
  m.def("pca_align",
        [](const Array& points, bool proper_rotation, bool strict_sign) {
          return alignment_dict(pca_align(to_cloud(points), pca_options(proper_rotation, strict_sign)));
        },
        py::arg("points"), py::arg("proper_rotation") = false, py::arg("strict_sign") = false);
  m.def("orbit_map_similarity",
        [](const Array& points, bool proper_rotation, bool strict_sign) {
          return alignment_dict(
              orbit_map_similarity(to_cloud(points), pca_options(proper_rotation, strict_sign)));
        },
        py::arg("points"), py::arg("proper_rotation") = false, py::arg("strict_sign") = false);

  m.def("sort_orbit_map", [](const std::vector<double>& v) {
    const auto r = sort_orbit_map(v);
    return py::make_tuple(r.canonical, r.element.mapping());
  });
  m.def("mean_subtract", [](const std::vector<double>& v) { return mean_subtract(v).canonical; });

  m.def("check_condition",
        [](const Eigen::MatrixXd& k1, const Eigen::MatrixXd& k2, int quarter_turns) {
          const ConditionCheck c = check_condition(KernelPair(k1, k2), quarter_turns);
          return py::make_tuple(c.holds, c.max_violation);
        },
        py::arg("k1"), py::arg("k2"), py::arg("quarter_turns") = 1);
  m.def("family_pair", [](int n, const std::vector<double>& params) {
    const KernelPair p = make_family_pair(n, params);
    return py::make_tuple(p.first, p.second);
  });
  m.def("central_difference_pair", [] {
    const KernelPair p = central_difference_pair();
    return py::make_tuple(p.first, p.second);
  });
  m.def("forward_difference_pair", [] {
    const KernelPair p = forward_difference_pair();
    return py::make_tuple(p.first, p.second);
  });

  m.def("circular_std", [](const std::vector<double>& degrees) { return circular_std(degrees); });
  m.def("stability_report",
        [](const std::vector<Array>& images, double step_deg, const std::string& interp,
           const std::string& estimator, double noise_variance, std::uint64_t seed) {
          std::vector<RasterImage> rasters;
          for (const auto& a : images) rasters.push_back(to_raster(a));
          StabilityOptions o;
          o.noise_variance = noise_variance;
          o.seed = seed;
          const StabilityReport r = stability_report(rasters, step_deg, parse_interpolation(interp),
                                                     parse_estimator(estimator), o);
          py::dict d;
          d["per_item"] = r.per_item_circular_std;
          d["mean_std"] = r.mean_std;
          d["degenerate_items"] = r.degenerate_items;
          d["histogram_counts"] = r.histogram.counts;
          return d;
        },
        py::arg("images"), py::arg("step_deg") = 1.0, py::arg("interp") = "bilinear",
        py::arg("estimator") = "exact", py::arg("noise_variance") = 0.0, py::arg("seed") = 0);
}
