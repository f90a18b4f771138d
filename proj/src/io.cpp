#include "orbitmap/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace orbitmap::io {

namespace {

[[noreturn]] void parse_fail(const std::string& what) {
  throw OrbitError(ErrorKind::parse_error, what);
}

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  // Skips whitespace and '#' comments between header tokens.
  void skip_header_space() {
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long long integer() {
    skip_header_space();
    long long v = 0;
    const auto [end, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc() || end == s_.data() + pos_) parse_fail("expected an integer");
    pos_ = static_cast<std::size_t>(end - s_.data());
    return v;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }
  std::size_t remaining() const { return s_.size() - pos_; }
  unsigned char byte_at(std::size_t offset) const {
    return static_cast<unsigned char>(s_[pos_ + offset]);
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

double parse_real(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || end != token.data() + token.size()) {
    parse_fail("expected a number, got '" + std::string(token) + "'");
  }
  return v;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw OrbitError(ErrorKind::io_error, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw OrbitError(ErrorKind::io_error, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw OrbitError(ErrorKind::io_error, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw OrbitError(ErrorKind::io_error, "cannot move output into place at " + path.string());
  }
}

// ---------------------------------------------------------------------------
// Netpbm

PnmImage parse_pnm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') parse_fail("not a netpbm file");
  PnmFormat format;
  format.magic = bytes[1];
  if (format.magic != '2' && format.magic != '3' && format.magic != '5' && format.magic != '6') {
    parse_fail(std::string("unsupported netpbm type P") + format.magic);
  }
  Cursor cur(bytes);
  cur.advance(2);
  const long long width = cur.integer();
  const long long height = cur.integer();
  const long long maxval = cur.integer();
  if (width < 1 || height < 1 || width > (1 << 20) || height > (1 << 20)) {
    parse_fail("bad image dimensions");
  }
  if (maxval < 1 || maxval > 65535) parse_fail("maxval must be in [1, 65535]");
  format.maxval = static_cast<int>(maxval);
  const int channels = format.channels();
  RasterImage img(static_cast<int>(height), static_cast<int>(width), channels);
  auto px = img.pixels();
  const double denom = static_cast<double>(maxval);

  if (format.binary()) {
    if (cur.at_end() || !std::isspace(static_cast<unsigned char>(cur.peek()))) {
      parse_fail("missing whitespace before raster");
    }
    cur.advance(1);
    const std::size_t bytes_per = maxval > 255 ? 2 : 1;
    if (cur.remaining() < px.size() * bytes_per) parse_fail("truncated raster");
    for (std::size_t k = 0; k < px.size(); ++k) {
      unsigned v = cur.byte_at(k * bytes_per);
      if (bytes_per == 2) v = (v << 8) | cur.byte_at(k * bytes_per + 1);
      if (v > static_cast<unsigned>(maxval)) parse_fail("sample exceeds maxval");
      px[k] = v / denom;
    }
  } else {
    for (double& p : px) {
      const long long v = cur.integer();
      if (v < 0 || v > maxval) parse_fail("sample exceeds maxval");
      p = static_cast<double>(v) / denom;
    }
  }
  return {std::move(img), format};
}

PnmImage read_pnm(const std::filesystem::path& path) { return parse_pnm(read_file(path)); }

std::string encode_pnm(const RasterImage& image, const PnmFormat& format) {
  if (format.channels() != image.channels()) {
    throw OrbitError(ErrorKind::invalid_input, "netpbm type does not match channel count");
  }
  if (format.maxval < 1 || format.maxval > 65535) {
    throw OrbitError(ErrorKind::invalid_input, "maxval must be in [1, 65535]");
  }
  std::ostringstream out;
  out << 'P' << format.magic << '\n' << image.width() << ' ' << image.height() << '\n'
      << format.maxval << '\n';
  const auto quantize = [&](double v) {
    const double c = std::clamp(v, 0.0, 1.0);
    return static_cast<unsigned>(std::lround(c * format.maxval));
  };
  const auto px = image.pixels();
  if (format.binary()) {
    std::string raster;
    raster.reserve(px.size() * 2);
    for (double v : px) {
      const unsigned q = quantize(v);
      if (format.maxval > 255) raster.push_back(static_cast<char>(q >> 8));
      raster.push_back(static_cast<char>(q & 0xff));
    }
    out << raster;
  } else {
    const std::size_t row = static_cast<std::size_t>(image.width()) * image.channels();
    for (std::size_t k = 0; k < px.size(); ++k) {
      out << quantize(px[k]) << ((k + 1) % row == 0 ? '\n' : ' ');
    }
  }
  return out.str();
}

void write_pnm(const std::filesystem::path& path, const RasterImage& image,
               const PnmFormat& format) {
  write_file_atomic(path, encode_pnm(image, format));
}

// ---------------------------------------------------------------------------
// Point clouds

PointCloud parse_xyz(std::string_view text) {
  std::vector<std::array<double, 3>> rows;
  int line_no = 0;
  for (std::string_view line : split_lines(text)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() != 3) {
      parse_fail("xyz line " + std::to_string(line_no) + ": expected 3 coordinates");
    }
    rows.push_back({parse_real(tok[0]), parse_real(tok[1]), parse_real(tok[2])});
  }
  if (rows.empty()) parse_fail("xyz file has no points");
  return PointCloud::from_rows(rows);
}

std::string encode_xyz(const PointCloud& cloud) {
  std::string out;
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    out += format_double(cloud.points()(i, 0)) + ' ' + format_double(cloud.points()(i, 1)) +
           ' ' + format_double(cloud.points()(i, 2)) + '\n';
  }
  return out;
}

PointCloud parse_ply(std::string_view text) {
  const auto lines = split_lines(text);
  std::size_t k = 0;
  if (lines.empty() || split_ws(lines[0]) != std::vector<std::string_view>{"ply"}) {
    parse_fail("missing ply magic");
  }
  ++k;

  struct Element {
    std::string name;
    long long count = 0;
    std::vector<std::string> properties;
  };
  std::vector<Element> elements;
  bool ascii = false;
  for (; k < lines.size(); ++k) {
    const auto tok = split_ws(lines[k]);
    if (tok.empty()) continue;
    if (tok[0] == "end_header") {
      ++k;
      break;
    }
    if (tok[0] == "comment" || tok[0] == "obj_info") continue;
    if (tok[0] == "format") {
      if (tok.size() < 2 || tok[1] != "ascii") parse_fail("only ASCII ply is supported");
      ascii = true;
    } else if (tok[0] == "element") {
      if (tok.size() != 3) parse_fail("malformed element line");
      Element e;
      e.name = std::string(tok[1]);
      e.count = static_cast<long long>(parse_real(tok[2]));
      if (e.count < 0) parse_fail("negative element count");
      elements.push_back(std::move(e));
    } else if (tok[0] == "property") {
      if (elements.empty()) parse_fail("property before any element");
      if (tok.size() >= 2 && tok[1] == "list") {
        if (elements.back().name == "vertex") parse_fail("list properties on vertices");
        elements.back().properties.push_back("list");
      } else {
        if (tok.size() != 3) parse_fail("malformed property line");
        elements.back().properties.push_back(std::string(tok[2]));
      }
    } else {
      parse_fail("unknown ply header keyword '" + std::string(tok[0]) + "'");
    }
  }
  if (!ascii) parse_fail("ply format line missing");

  std::vector<std::array<double, 3>> rows;
  bool found_vertex = false;
  for (const auto& e : elements) {
    if (e.name != "vertex") {
      // Other elements are skipped line by line.
      for (long long n = 0; n < e.count; ++n, ++k) {
        if (k >= lines.size()) parse_fail("truncated ply body");
      }
      continue;
    }
    found_vertex = true;
    std::array<int, 3> col{-1, -1, -1};
    for (std::size_t p = 0; p < e.properties.size(); ++p) {
      if (e.properties[p] == "x") col[0] = static_cast<int>(p);
      if (e.properties[p] == "y") col[1] = static_cast<int>(p);
      if (e.properties[p] == "z") col[2] = static_cast<int>(p);
    }
    if (std::find(col.begin(), col.end(), -1) != col.end()) {
      parse_fail("vertex element lacks x, y or z");
    }
    for (long long n = 0; n < e.count; ++n, ++k) {
      if (k >= lines.size()) parse_fail("truncated ply body");
      const auto tok = split_ws(lines[k]);
      if (tok.size() != e.properties.size()) parse_fail("vertex row has wrong field count");
      rows.push_back({parse_real(tok[col[0]]), parse_real(tok[col[1]]), parse_real(tok[col[2]])});
    }
  }
  if (!found_vertex || rows.empty()) parse_fail("ply has no vertices");
  return PointCloud::from_rows(rows);
}

std::string encode_ply(const PointCloud& cloud) {
  std::string out = "ply\nformat ascii 1.0\nelement vertex " + std::to_string(cloud.size()) +
                    "\nproperty double x\nproperty double y\nproperty double z\nend_header\n";
  return out + encode_xyz(cloud);
}

PointCloud read_point_cloud(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  return path.extension() == ".ply" ? parse_ply(text) : parse_xyz(text);
}

void write_point_cloud(const std::filesystem::path& path, const PointCloud& cloud) {
  write_file_atomic(path, path.extension() == ".ply" ? encode_ply(cloud) : encode_xyz(cloud));
}

}  // namespace orbitmap::io
