#include "copulaband/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

#include "copulaband/error.hpp"

namespace copulaband {
namespace {

std::string_view trim(std::string_view s) noexcept {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// "# key=value" -> (key, value); false for plain comments.
bool parse_meta_line(std::string_view line, Metadata& meta) {
  std::string_view body = trim(line.substr(1));
  const auto eq = body.find('=');
  if (eq == std::string_view::npos) return false;
  meta[std::string(trim(body.substr(0, eq)))] = std::string(trim(body.substr(eq + 1)));
  return true;
}

std::string where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line);
}

void append_metadata(std::string& out, const Metadata& meta) {
  for (const auto& [k, v] : meta) {
    out += "# ";
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCategory::io, "cannot open " + path.string());
  return in;
}

}  // namespace

std::string format_metadata(const Metadata& meta) {
  std::string out;
  append_metadata(out, meta);
  return out;
}

std::string format_double(double x) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

std::optional<double> parse_double(std::string_view text) noexcept {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

PairsCsv read_pairs_csv(std::istream& in, std::string_view source_name) {
  std::vector<Point> rows;
  bool header = false;
  bool seen_content = false;
  std::size_t blank = 0;
  std::size_t comments = 0;
  Metadata meta;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) {
      ++blank;
      continue;
    }
    if (line.front() == '#') {
      ++comments;
      parse_meta_line(line, meta);
      continue;
    }
    const auto cells = split_commas(line);
    if (cells.size() != 2) {
      fail(ErrorCategory::input, where(source_name, line_no) + ": expected 2 columns, found " +
                                     std::to_string(cells.size()));
    }
    const auto x = parse_double(cells[0]);
    const auto y = parse_double(cells[1]);
    if (!x || !y) {
      if (!seen_content) {
        header = true;
        seen_content = true;
        continue;
      }
      fail(ErrorCategory::input, where(source_name, line_no) + ": non-numeric cell '" +
                                     std::string(!x ? cells[0] : cells[1]) + "'");
    }
    seen_content = true;
    rows.push_back(Point{*x, *y});
  }
  if (rows.size() < 2) {
    fail(ErrorCategory::input, std::string(source_name) + ": need at least 2 data rows, found " +
                                   std::to_string(rows.size()));
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!std::isfinite(rows[i].x) || !std::isfinite(rows[i].y)) {
      fail(ErrorCategory::input, std::string(source_name) + ": non-finite value in data row " + std::to_string(i + 1));
    }
  }
  return PairsCsv{RawSample(std::move(rows)), header, blank, comments, std::move(meta)};
}

PairsCsv read_pairs_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_pairs_csv(in, path.string());
}

void write_pairs_csv(const std::filesystem::path& path, const PseudoSample& sample, const Metadata& meta) {
  std::string out = "u,v\n";
  const auto us = sample.u();
  const auto vs = sample.v();
  for (std::size_t i = 0; i < us.size(); ++i) {
    out += format_double(us[i]);
    out += ',';
    out += format_double(vs[i]);
    out += '\n';
  }
  append_metadata(out, meta);
  write_file_atomic(path, out);
}

std::string format_grid_csv(const BandGrid& grid, const Metadata& meta) {
  std::string out = "u,v,estimate,lower,upper\n";
  for (std::size_t i = 0; i < grid.grid_u.size(); ++i) {
    for (std::size_t j = 0; j < grid.grid_v.size(); ++j) {
      const std::size_t k = grid.index(i, j);
      out += format_double(grid.grid_u[i]) + ',' + format_double(grid.grid_v[j]) + ',' +
             format_double(grid.estimate[k]) + ',' + format_double(grid.lower[k]) + ',' +
             format_double(grid.upper[k]) + '\n';
    }
  }
  Metadata full = meta;
  full["halfwidth"] = format_double(grid.halfwidth);
  append_metadata(out, full);
  return out;
}

void write_grid_csv(const std::filesystem::path& path, const BandGrid& grid, const Metadata& meta) {
  write_file_atomic(path, format_grid_csv(grid, meta));
}

GridFile parse_grid_csv(std::istream& in, std::string_view source_name) {
  GridFile file;
  BandGrid& g = file.grid;
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<double> us;
  std::vector<double> vs;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (!parse_meta_line(line, file.metadata)) {
        fail(ErrorCategory::input, where(source_name, line_no) + ": malformed metadata line");
      }
      continue;
    }
    if (!header_seen) {
      if (line != "u,v,estimate,lower,upper") {
        fail(ErrorCategory::input, where(source_name, line_no) + ": expected header u,v,estimate,lower,upper");
      }
      header_seen = true;
      continue;
    }
    const auto cells = split_commas(line);
    if (cells.size() != 5) fail(ErrorCategory::input, where(source_name, line_no) + ": expected 5 columns");
    double vals[5];
    for (int c = 0; c < 5; ++c) {
      const auto x = parse_double(cells[c]);
      if (!x) fail(ErrorCategory::input, where(source_name, line_no) + ": non-numeric cell");
      vals[c] = *x;
    }
    us.push_back(vals[0]);
    vs.push_back(vals[1]);
    g.estimate.push_back(vals[2]);
    g.lower.push_back(vals[3]);
    g.upper.push_back(vals[4]);
  }
  if (!header_seen || us.empty()) fail(ErrorCategory::input, std::string(source_name) + ": no grid rows");

  // u-major: the first block of equal u fixes grid_v.
  std::size_t nv = 1;
  while (nv < us.size() && us[nv] == us[0]) ++nv;
  if (us.size() % nv != 0) fail(ErrorCategory::input, std::string(source_name) + ": grid is not rectangular");
  const std::size_t nu = us.size() / nv;
  g.grid_v.assign(vs.begin(), vs.begin() + static_cast<std::ptrdiff_t>(nv));
  for (std::size_t i = 0; i < nu; ++i) {
    g.grid_u.push_back(us[i * nv]);
    for (std::size_t j = 0; j < nv; ++j) {
      if (us[i * nv + j] != g.grid_u[i] || vs[i * nv + j] != g.grid_v[j]) {
        fail(ErrorCategory::input, std::string(source_name) + ": rows are not in u-major grid order");
      }
    }
  }
  const auto hw = file.metadata.find("halfwidth");
  if (hw == file.metadata.end()) fail(ErrorCategory::input, std::string(source_name) + ": missing halfwidth metadata");
  const auto parsed = parse_double(hw->second);
  if (!parsed) fail(ErrorCategory::input, std::string(source_name) + ": malformed halfwidth metadata");
  g.halfwidth = *parsed;
  return file;
}

GridFile read_grid_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return parse_grid_csv(in, path.string());
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCategory::io, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) fail(ErrorCategory::io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    fail(ErrorCategory::io, "cannot move output into place at " + path.string());
  }
}

}  // namespace copulaband
