#pragma once

#include <stdexcept>
#include <string>

namespace wl1 {

enum class ErrorKind {
  Domain,          // argument outside the mathematical domain
  Dimension,       // size mismatch or empty block
  DegenerateGrid,  // duplicate nodes, zero separation
  Empty,           // empty input
  Unsupported,     // option not implemented (e.g. derivative order)
  Numerical,       // decomposition or iteration failed to converge
  Data,            // NaN or malformed data
  Io,              // file could not be read or written
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::DegenerateGrid: return "degenerate-grid";
    case ErrorKind::Empty: return "empty";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::Data: return "data";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace wl1
