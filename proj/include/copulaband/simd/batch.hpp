#pragma once

#include <span>
#include <string_view>

#include "copulaband/kernel.hpp"

// Data-parallel inner loops of the estimator. Every entry point has a scalar
// reference implementation and, on x86-64, an AVX2+FMA variant selected at
// runtime. Both variants are tested for agreement in tests/test_simd.cpp.
namespace copulaband::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// Best instruction set supported by both the build and the running CPU.
Isa detected_isa() noexcept;

/// Variant used by the dispatching entry points. Starts at detected_isa()
/// unless the COPULABAND_ISA environment variable names "scalar".
Isa active_isa() noexcept;

/// Throws Error(invalid_argument) if `isa` is not supported here.
void set_active_isa(Isa isa);

class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa) : previous_(active_isa()) { set_active_isa(isa); }
  ~ScopedIsa() { set_active_isa(previous_); }
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  Isa previous_;
};

/// out[i] = F((center - samples[i]) * inv_h) for the kernel CDF polynomial F.
void cdf_batch(const CdfPolynomial& poly, double center, double inv_h,
               std::span<const double> samples, std::span<double> out);

/// sum_i F((center - samples[i]) * inv_h)
double cdf_sum(const CdfPolynomial& poly, double center, double inv_h,
               std::span<const double> samples);

double dot(std::span<const double> a, std::span<const double> b);

namespace scalar {
double cdf_one(const CdfPolynomial& poly, double x) noexcept;
void cdf_batch(const CdfPolynomial& poly, double center, double inv_h,
               std::span<const double> samples, std::span<double> out) noexcept;
double cdf_sum(const CdfPolynomial& poly, double center, double inv_h,
               std::span<const double> samples) noexcept;
double dot(std::span<const double> a, std::span<const double> b) noexcept;
}  // namespace scalar

#if defined(COPULABAND_HAVE_AVX2)
namespace avx2 {
void cdf_batch(const CdfPolynomial& poly, double center, double inv_h,
               std::span<const double> samples, std::span<double> out) noexcept;
double cdf_sum(const CdfPolynomial& poly, double center, double inv_h,
               std::span<const double> samples) noexcept;
double dot(std::span<const double> a, std::span<const double> b) noexcept;
}  // namespace avx2
#endif

}  // namespace copulaband::simd
