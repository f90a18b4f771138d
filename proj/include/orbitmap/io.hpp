#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "orbitmap/image.hpp"
#include "orbitmap/pointcloud.hpp"

namespace orbitmap::io {

/// Netpbm flavor: P2/P5 are grayscale, P3/P6 color; P2/P3 are ASCII.
struct PnmFormat {
  char magic = '5';
  int maxval = 255;

  bool binary() const { return magic == '5' || magic == '6'; }
  int channels() const { return (magic == '3' || magic == '6') ? 3 : 1; }
};

struct PnmImage {
  RasterImage image;  // samples divided by maxval
  PnmFormat format;
};

PnmImage parse_pnm(std::string_view bytes);
PnmImage read_pnm(const std::filesystem::path& path);

/// Clamps to [0, 1] and quantizes to `format.maxval`. The format's channel
/// count must match the image.
std::string encode_pnm(const RasterImage& image, const PnmFormat& format);
void write_pnm(const std::filesystem::path& path, const RasterImage& image,
               const PnmFormat& format);

// "x y z" per line; blank lines and '#' comments are skipped.
PointCloud parse_xyz(std::string_view text);
std::string encode_xyz(const PointCloud& cloud);

// ASCII PLY; only the vertex element's x, y, z properties are used.
PointCloud parse_ply(std::string_view text);
std::string encode_ply(const PointCloud& cloud);

/// Dispatches on the .ply extension; anything else is read as XYZ.
PointCloud read_point_cloud(const std::filesystem::path& path);
void write_point_cloud(const std::filesystem::path& path, const PointCloud& cloud);

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// %.17g, enough digits to round-trip a double.
std::string format_double(double v);

}  // namespace orbitmap::io
