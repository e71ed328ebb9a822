#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "copulaband/error.hpp"
#include "copulaband/families.hpp"
#include "copulaband/io.hpp"
#include "copulaband/margins.hpp"

namespace copulaband {

struct RunConfig {
  std::string command;  // sample | estimate | bands | fit | plot | reproduce
  std::optional<Family> family;
  std::optional<double> theta;
  std::vector<double> thetas;  // reproduce; empty selects the family's default list
  std::size_t n = 500;
  std::uint64_t seed = 1;
  std::size_t grid_size = 101;
  double alpha = 0.5;
  std::optional<double> h_n;  // overrides 1/log n
  double a_c = 3.0;
  double epsilon = 0.0;
  Transform transform = Transform::rank;
  bool clip = false;
  std::string in;
  std::string out;
  std::vector<std::string> overlays;  // "family:theta", at most 3
  std::string fit_from;               // plot: overlay the families fitted to this pairs file

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Every problem with `cfg`, in a stable order; empty when the run can start.
std::vector<std::string> validation_errors(const RunConfig& cfg);
/// Throws Error(config) listing all of validation_errors().
void validate(const RunConfig& cfg);

/// "config.*" keys that from_metadata() turns back into the same RunConfig.
Metadata to_metadata(const RunConfig& cfg);
/// Throws Error(input) on a missing or malformed key.
RunConfig from_metadata(const Metadata& meta);

/// Default theta lists for `reproduce`.
std::vector<double> reproduce_thetas(Family family);

/// Process exit status for each error category; 0 is success, 1 an
/// unexpected failure, 2 a command-line usage error.
int exit_code(ErrorCategory c) noexcept;

/// Runs one subcommand. args excludes the program name. Errors are written to
/// `err` as "error[<category>]: <message>".
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace copulaband
