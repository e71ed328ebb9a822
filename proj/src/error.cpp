#include "copulaband/error.hpp"

namespace copulaband {

std::string_view category_name(ErrorCategory c) noexcept {
  switch (c) {
    case ErrorCategory::invalid_argument: return "invalid_argument";
    case ErrorCategory::config: return "config";
    case ErrorCategory::input: return "input";
    case ErrorCategory::io: return "io";
    case ErrorCategory::numeric: return "numeric";
  }
  return "unknown";
}

}  // namespace copulaband
