#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

#include "copulaband/families.hpp"
#include "copulaband/margins.hpp"

namespace copulaband {

/// Reproducible uniform stream.
///
/// Algorithm: std::mt19937_64 seeded with the 64-bit seed (its output
/// sequence is fixed by the C++ standard), each draw mapped to
/// ((x >> 12) + 0.5) * 2^-52, which lies strictly inside (0,1). No
/// std::*_distribution is involved, so sequences are identical across
/// standard libraries and platforms.
///
/// A stream is single-consumer. Parallel work takes independent streams
/// from split(index), whose seed is derive_seed(seed(), index).
class SeededStream {
 public:
  static constexpr std::string_view algorithm_tag = "mt19937_64/open52";

  explicit SeededStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  double uniform() noexcept { return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1.0p-52; }

  SeededStream split(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer applied to master ^ splitmix(index + 1).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Conditional sampling: per pair draw u then w, set v = C_2^{-1}(w | u).
/// Returns a PseudoSample tagged Transform::identity. A failed inversion is
/// rethrown as Error(numeric) naming the offending index.
PseudoSample sample_copula(const CopulaModel& model, std::size_t n, SeededStream& stream);

}  // namespace copulaband
