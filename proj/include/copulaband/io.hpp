#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "copulaband/bands.hpp"
#include "copulaband/margins.hpp"

namespace copulaband {

/// Ordered key/value block written as trailing "# key=value" lines.
using Metadata = std::map<std::string, std::string>;

/// "# key=value" lines, one per entry, each ending in '\n'.
std::string format_metadata(const Metadata& meta);

/// Shortest text that parses back to the same double.
std::string format_double(double x);
/// Strict parse of a whole field (surrounding blanks allowed).
std::optional<double> parse_double(std::string_view text) noexcept;

struct PairsCsv {
  RawSample sample;
  bool had_header = false;
  std::size_t blank_lines = 0;    // skipped
  std::size_t comment_lines = 0;  // '#' lines, skipped
  Metadata metadata;              // parsed from "# key=value" comments
};

/// Two numeric comma-separated columns, optional header on the first
/// non-comment line. Throws Error(io) for a missing file, Error(input) with
/// the line number for a bad cell, and Error(input) for fewer than 2 rows.
PairsCsv read_pairs_csv(const std::filesystem::path& path);
PairsCsv read_pairs_csv(std::istream& in, std::string_view source_name);

/// Header "u,v", one row per pair, then the metadata block.
void write_pairs_csv(const std::filesystem::path& path, const PseudoSample& sample, const Metadata& meta);

struct GridFile {
  BandGrid grid;
  Metadata metadata;
};

/// Header "u,v,estimate,lower,upper", rows in u-major order, then metadata
/// (which always carries the half-width). Numbers round-trip exactly.
void write_grid_csv(const std::filesystem::path& path, const BandGrid& grid, const Metadata& meta);
std::string format_grid_csv(const BandGrid& grid, const Metadata& meta);
GridFile read_grid_csv(const std::filesystem::path& path);
GridFile parse_grid_csv(std::istream& in, std::string_view source_name);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace copulaband
