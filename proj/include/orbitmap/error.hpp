#pragma once

#include <stdexcept>
#include <string>

namespace orbitmap {

enum class ErrorKind {
  invalid_input,
  parse_error,
  io_error,
  degenerate_orientation,
  degenerate_scale,
  degenerate_spectrum,
  ambiguous_sign,
};

const char* to_string(ErrorKind kind);

// The degenerate kinds mean the orbit map has no unique selection on this
// input; everything else is a usage or I/O failure.
inline bool is_degeneracy(ErrorKind kind) {
  return kind == ErrorKind::degenerate_orientation || kind == ErrorKind::degenerate_scale ||
         kind == ErrorKind::degenerate_spectrum || kind == ErrorKind::ambiguous_sign;
}

class OrbitError : public std::runtime_error {
 public:
  OrbitError(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace orbitmap
