#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace copulaband {

/// Broad failure classes. The CLI maps each one to a distinct exit status.
enum class ErrorCategory {
  invalid_argument,  // precondition or parameter-domain violation
  config,            // inconsistent run configuration
  input,             // malformed user data
  io,                // file system failures
  numeric,           // non-convergence or degenerate numerics
};

std::string_view category_name(ErrorCategory c) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] inline void fail(ErrorCategory c, const std::string& what) { throw Error(c, what); }

inline void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCategory::invalid_argument, what);
}

}  // namespace copulaband
