// Command-line front end: canonicalize images and point clouds, run the
// stability and orbit-sweep studies, and check kernel pairs.
//
// Exit codes: 0 success, 2 input error, 3 degenerate input, 4 failed --assert.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "orbitmap/image_orbit.hpp"
#include "orbitmap/io.hpp"
#include "orbitmap/kernel_invariance.hpp"
#include "orbitmap/pointcloud.hpp"
#include "orbitmap/stability.hpp"
#include "orbitmap/synthetic.hpp"

namespace {

using nlohmann::json;
using namespace orbitmap;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitAssert = 4;

void emit(const json& report, const std::string& path) {
  const std::string text = report.dump(2) + "\n";
  if (path.empty()) {
    std::cout << text;
  } else {
    io::write_file_atomic(path, text);
  }
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw OrbitError(ErrorKind::parse_error, "kernel must be a matrix");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != cols) {
      throw OrbitError(ErrorKind::parse_error, "kernel rows differ in length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
  }
  return m;
}

SampleCircleSet make_circles(const std::vector<double>& radii, int samples) {
  SampleCircleSet circles{radii, samples};
  circles.validate();
  return circles;
}

// ---------------------------------------------------------------------------

struct ImageArgs {
  std::string input;
  std::string output;
  std::string report;
  std::string interp = "bilinear";
  double sigma = kDefaultBlurSigma;
  std::vector<double> radii{0.05, 0.4};
  int samples = kDefaultSamplesPerCircle;
};

int run_canonicalize_image(const ImageArgs& args) {
  const io::PnmImage in = io::read_pnm(args.input);
  const Interpolation mode = parse_interpolation(args.interp);
  const SampleCircleSet circles = make_circles(args.radii, args.samples);
  const ContinuousImage cimg(in.image, args.sigma);

  json report{{"interpolation", args.interp},
              {"sigma", args.sigma},
              {"radii", args.radii},
              {"samples_per_circle", args.samples}};
  try {
    const OrientationEstimate est = canonical_angle(cimg, circles);
    report["angle_deg"] = est.rotation.degrees();
    report["integral_magnitude"] = est.magnitude;
    report["degenerate"] = false;
    if (!args.output.empty()) {
      io::write_pnm(args.output, rotate_image(in.image, est.rotation, mode), in.format);
    }
    emit(report, args.report);
    return kExitOk;
  } catch (const OrbitError& e) {
    if (e.kind() != ErrorKind::degenerate_orientation) throw;
    report["angle_deg"] = nullptr;
    report["integral_magnitude"] = gradient_integral(cimg, circles).magnitude;
    report["degenerate"] = true;
    report["error"] = e.what();
    emit(report, args.report);
    return kExitDegenerate;
  }
}

// ---------------------------------------------------------------------------

struct CloudArgs {
  std::string input;
  std::string output;
  std::string report;
  std::string mode = "similarity";
  bool proper_rotation = false;
  bool strict_sign = false;
};

json transform_json(const RigidSimilarity3D& g) {
  json rotation = json::array();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) rotation.push_back(g.rotation()(i, j));
  }
  return {{"translation", {g.translation()(0), g.translation()(1), g.translation()(2)}},
          {"scale", g.scale()},
          {"rotation", rotation},
          {"determinant", g.determinant() < 0.0 ? -1.0 : 1.0}};
}

void add_spectrum(json& report, const std::array<double, 3>& sv, const std::array<double, 2>& gaps) {
  report["singular_values"] = sv;
  report["gaps"] = gaps;
}

int run_canonicalize_cloud(const CloudArgs& args) {
  const PointCloud cloud = io::read_point_cloud(args.input);
  PcaOptions options;
  options.proper_rotation = args.proper_rotation;
  options.sign_rule = args.strict_sign ? SignRule::first_row_strict : SignRule::first_row_with_fallback;

  json report{{"mode", args.mode}, {"points", cloud.size()}};
  PointCloud canonical;
  try {
    if (args.mode == "center") {
      const auto r = center(cloud);
      canonical = r.canonical;
      report.update(transform_json(RigidSimilarity3D::translation_only(-r.element.centroid)));
      const SpectrumInfo s = analyze_spectrum(cloud);
      add_spectrum(report, s.singular_values, s.relative_gaps);
    } else if (args.mode == "scale") {
      const auto r = scale_normalize(cloud);
      canonical = r.canonical;
      report.update(transform_json(RigidSimilarity3D::scaling(1.0 / r.element.divisor)));
      const SpectrumInfo s = analyze_spectrum(cloud);
      add_spectrum(report, s.singular_values, s.relative_gaps);
    } else if (args.mode == "pca" || args.mode == "similarity") {
      const PcaAlignment r =
          args.mode == "pca" ? pca_align(cloud, options) : orbit_map_similarity(cloud, options);
      canonical = r.canonical;
      report.update(transform_json(r.element));
      add_spectrum(report, r.diagnostics.singular_values, r.diagnostics.relative_gaps);
      report["sign_vector"] = r.diagnostics.sign_vector;
    } else {
      throw OrbitError(ErrorKind::invalid_input, "unknown mode '" + args.mode + "'");
    }
  } catch (const OrbitError& e) {
    if (!is_degeneracy(e.kind())) throw;
    report["error"] = e.what();
    report["kind"] = to_string(e.kind());
    const SpectrumInfo s = analyze_spectrum(cloud);
    add_spectrum(report, s.singular_values, s.relative_gaps);
    emit(report, args.report);
    return kExitDegenerate;
  }
  if (!args.output.empty()) io::write_point_cloud(args.output, canonical);
  emit(report, args.report);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct StabilityArgs {
  std::vector<std::string> inputs;
  int synthetic = 0;
  int size = 32;
  std::uint64_t seed = 0;
  double step_deg = 1.0;
  std::string interp = "bilinear";
  std::string estimator = "exact";
  double sigma = kDefaultBlurSigma;
  std::vector<double> radii{0.05, 0.4};
  int samples = kDefaultSamplesPerCircle;
  double noise_var = 0.0;
  std::string output;
};

int run_stability(const StabilityArgs& args) {
  std::vector<RasterImage> images;
  for (const auto& path : args.inputs) images.push_back(io::read_pnm(path).image);
  if (args.synthetic > 0) {
    auto corpus = synthetic_corpus(args.seed, args.synthetic, args.size);
    images.insert(images.end(), corpus.begin(), corpus.end());
  }
  if (images.empty()) {
    throw OrbitError(ErrorKind::invalid_input, "no images: pass files or --synthetic N");
  }
  StabilityOptions options;
  options.circles = make_circles(args.radii, args.samples);
  options.blur_sigma = args.sigma;
  options.noise_variance = args.noise_var;
  options.seed = args.seed;
  const StabilityReport r =
      stability_report(images, args.step_deg, parse_interpolation(args.interp),
                       parse_estimator(args.estimator), options);
  json per_item = json::array();
  for (const auto& v : r.per_item_circular_std) {
    per_item.push_back(v ? json(*v) : json(nullptr));
  }
  const json report{{"estimator", to_string(r.estimator)},
                    {"interpolation", to_string(r.interpolation)},
                    {"mean_std_deg", r.mean_std},
                    {"histogram", {{"edges", r.histogram.edges}, {"counts", r.histogram.counts}}},
                    {"per_item", per_item},
                    {"degenerate_items", r.degenerate_items},
                    {"step_deg", args.step_deg},
                    {"noise_variance", args.noise_var}};
  emit(report, args.output);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct KernelArgs {
  std::string builtin;
  std::string pair_file;
  int family = 0;
  std::vector<double> params;
  std::vector<int> quarter_turns{1, 2, 3};
  std::string output;
};

int run_kernel_check(const KernelArgs& args) {
  KernelPair pair;
  const int sources = (!args.builtin.empty()) + (!args.pair_file.empty()) + (args.family != 0);
  if (sources != 1) {
    throw OrbitError(ErrorKind::invalid_input, "give exactly one of --builtin, --pair, --family");
  }
  if (args.builtin == "central") {
    pair = central_difference_pair();
  } else if (args.builtin == "forward") {
    pair = forward_difference_pair();
  } else if (!args.builtin.empty()) {
    throw OrbitError(ErrorKind::invalid_input, "unknown builtin pair '" + args.builtin + "'");
  } else if (!args.pair_file.empty()) {
    json j;
    try {
      j = json::parse(io::read_file(args.pair_file));
    } catch (const json::exception& e) {
      throw OrbitError(ErrorKind::parse_error, e.what());
    }
    if (!j.contains("k1") || !j.contains("k2")) {
      throw OrbitError(ErrorKind::parse_error, "pair file needs \"k1\" and \"k2\"");
    }
    pair = KernelPair(matrix_from_json(j["k1"]), matrix_from_json(j["k2"]));
  } else {
    pair = make_family_pair(args.family, args.params);
  }

  bool holds = true;
  double worst = 0.0;
  json checks = json::array();
  for (int q : args.quarter_turns) {
    if (q < 1 || q > 3) throw OrbitError(ErrorKind::invalid_input, "quarter turns must be 1, 2 or 3");
    const ConditionCheck c = check_condition(pair, q);
    holds = holds && c.holds;
    worst = std::max(worst, c.max_violation);
    checks.push_back({{"quarter_turns", q}, {"holds", c.holds}, {"max_violation", c.max_violation}});
  }
  const json report{{"k1", matrix_json(pair.first)},
                    {"k2", matrix_json(pair.second)},
                    {"holds", holds},
                    {"max_violation", worst},
                    {"checks", checks}};
  emit(report, args.output);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  ToyBenchOptions options;
  bool assert_invariance = false;
  std::string output;
};

json sweep_json(const OrbitSweepReport& r) {
  json per = json::object();
  for (const auto& [name, acc] : r.per_transform) per[name] = acc;
  return {{"clean", r.clean}, {"average", r.average}, {"worst", r.worst}, {"per_transform", per}};
}

int run_orbit_bench(const BenchArgs& args) {
  const ToyBenchReport r = toy_shape_bench(args.options);
  const json report{{"seed", args.options.seed},
                    {"with_om", sweep_json(r.with_orbit_map)},
                    {"without_om", sweep_json(r.without_orbit_map)}};
  emit(report, args.output);
  if (args.assert_invariance) {
    const auto& om = r.with_orbit_map;
    const auto& raw = r.without_orbit_map;
    const bool invariant = om.clean == om.average && om.average == om.worst;
    const bool gap = raw.worst < raw.clean;
    if (!invariant || !gap) {
      std::cerr << "orbit-bench assertion failed:"
                << (invariant ? "" : " with-OM clean/average/worst differ;")
                << (gap ? "" : " without-OM worst is not below clean;") << "\n";
      return kExitAssert;
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orbit-mapping canonicalization for images and point clouds"};
  app.require_subcommand(1);

  ImageArgs image_args;
  auto* image_cmd = app.add_subcommand("canonicalize-image", "Rotate an image to its canonical pose");
  image_cmd->add_option("input", image_args.input, "PGM/PPM input")->required();
  image_cmd->add_option("-o,--out", image_args.output, "canonical image output");
  image_cmd->add_option("-r,--report", image_args.report, "JSON report path (default stdout)");
  image_cmd->add_option("--interp", image_args.interp, "nearest|bilinear|bicubic")
      ->check(CLI::IsMember({"nearest", "bilinear", "bicubic"}));
  image_cmd->add_option("--sigma", image_args.sigma, "Gaussian blur sigma in pixels");
  image_cmd->add_option("--radii", image_args.radii, "sample circle radii")->delimiter(',');
  image_cmd->add_option("--samples", image_args.samples, "samples per circle");

  CloudArgs cloud_args;
  auto* cloud_cmd = app.add_subcommand("canonicalize-cloud", "Canonicalize an XYZ/PLY point cloud");
  cloud_cmd->add_option("input", cloud_args.input, "XYZ or ASCII PLY input")->required();
  cloud_cmd->add_option("-o,--out", cloud_args.output, "canonical cloud output (.xyz or .ply)");
  cloud_cmd->add_option("-r,--report", cloud_args.report, "JSON report path (default stdout)");
  cloud_cmd->add_option("--mode", cloud_args.mode, "center|scale|pca|similarity")
      ->check(CLI::IsMember({"center", "scale", "pca", "similarity"}));
  cloud_cmd->add_flag("--proper-rotation", cloud_args.proper_rotation,
                      "flip the last axis when the alignment is a reflection");
  cloud_cmd->add_flag("--strict-sign", cloud_args.strict_sign,
                      "use only the first point for sign disambiguation");

  StabilityArgs stab_args;
  auto* stab_cmd = app.add_subcommand("stability-report", "Canonical-angle dispersion under rotation");
  stab_cmd->add_option("inputs", stab_args.inputs, "PGM/PPM images");
  stab_cmd->add_option("--synthetic", stab_args.synthetic, "add N synthetic bump images");
  stab_cmd->add_option("--size", stab_args.size, "synthetic image side length");
  stab_cmd->add_option("--seed", stab_args.seed, "corpus and noise seed");
  stab_cmd->add_option("--step-deg", stab_args.step_deg, "rotation step in degrees");
  stab_cmd->add_option("--interp", stab_args.interp, "nearest|bilinear|bicubic")
      ->check(CLI::IsMember({"nearest", "bilinear", "bicubic"}));
  stab_cmd->add_option("--estimator", stab_args.estimator, "exact|central|forward")
      ->check(CLI::IsMember({"exact", "central", "forward"}));
  stab_cmd->add_option("--sigma", stab_args.sigma, "Gaussian blur sigma in pixels");
  stab_cmd->add_option("--radii", stab_args.radii, "sample circle radii")->delimiter(',');
  stab_cmd->add_option("--samples", stab_args.samples, "samples per circle");
  stab_cmd->add_option("--noise-var", stab_args.noise_var, "additive Gaussian noise variance");
  stab_cmd->add_option("-o,--out", stab_args.output, "JSON report path (default stdout)");

  KernelArgs kernel_args;
  auto* kernel_cmd = app.add_subcommand("kernel-check", "Check the kernel-pair rotation condition");
  kernel_cmd->add_option("--builtin", kernel_args.builtin, "central|forward");
  kernel_cmd->add_option("--pair", kernel_args.pair_file, "JSON file {\"k1\": [[...]], \"k2\": [[...]]}");
  kernel_cmd->add_option("--family", kernel_args.family, "parametric family size (2 or 3)");
  kernel_cmd->add_option("--params", kernel_args.params, "family parameters")->delimiter(',');
  kernel_cmd->add_option("--quarter-turns", kernel_args.quarter_turns, "quarter turns to test")
      ->delimiter(',');
  kernel_cmd->add_option("-o,--out", kernel_args.output, "JSON report path (default stdout)");

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("orbit-bench", "Toy point-cloud orbit sweep with and without OM");
  bench_cmd->add_option("--seed", bench_args.options.seed, "data seed");
  bench_cmd->add_option("--train-per-class", bench_args.options.train_per_class);
  bench_cmd->add_option("--test-per-class", bench_args.options.test_per_class);
  bench_cmd->add_option("--points", bench_args.options.points, "points per cloud");
  bench_cmd->add_option("--grid-a", bench_args.options.grid_a, "xy rotation steps");
  bench_cmd->add_option("--grid-b", bench_args.options.grid_b, "yz rotation steps");
  bench_cmd->add_flag("--assert", bench_args.assert_invariance,
                      "exit 4 unless with-OM clean = average = worst and without-OM worst < clean");
  bench_cmd->add_option("-o,--out", bench_args.output, "JSON report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*image_cmd) return run_canonicalize_image(image_args);
    if (*cloud_cmd) return run_canonicalize_cloud(cloud_args);
    if (*stab_cmd) return run_stability(stab_args);
    if (*kernel_cmd) return run_kernel_check(kernel_args);
    if (*bench_cmd) return run_orbit_bench(bench_args);
  } catch (const OrbitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_degeneracy(e.kind()) ? kExitDegenerate : kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
