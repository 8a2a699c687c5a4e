#include "odopt/csv.hpp"

#include <charconv>
#include <cmath>

#include "odopt/error.hpp"

namespace odopt {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::validation: return "validation";
    case ErrorKind::structure: return "structure";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::generation: return "generation";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::assembly: return "assembly";
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::rank: return "rank";
    case ErrorKind::config: return "config";
    case ErrorKind::runtime: return "runtime";
  }
  return "unknown";
}

}  // namespace odopt
