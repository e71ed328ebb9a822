#include <atomic>
#include <cstdlib>
#include <string>

#include "copulaband/error.hpp"
#include "copulaband/simd/batch.hpp"

namespace copulaband::simd {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(COPULABAND_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() noexcept {
  const Isa best = detected_isa();
  if (const char* env = std::getenv("COPULABAND_ISA"); env != nullptr && std::string(env) == "scalar") {
    return Isa::scalar;
  }
  return best;
}

std::atomic<Isa>& active() noexcept {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

Isa detected_isa() noexcept {
  static const bool avx2 = cpu_has_avx2();
  return avx2 ? Isa::avx2 : Isa::scalar;
}

Isa active_isa() noexcept { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (isa == Isa::avx2 && detected_isa() != Isa::avx2) {
    fail(ErrorCategory::invalid_argument, "AVX2 kernels are not available on this machine");
  }
  active().store(isa, std::memory_order_relaxed);
}

void cdf_batch(const CdfPolynomial& poly, double center, double inv_h,
               std::span<const double> samples, std::span<double> out) {
  require(out.size() >= samples.size(), "cdf_batch: output span too short");
#if defined(COPULABAND_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::cdf_batch(poly, center, inv_h, samples, out);
#endif
  scalar::cdf_batch(poly, center, inv_h, samples, out);
}

double cdf_sum(const CdfPolynomial& poly, double center, double inv_h,
               std::span<const double> samples) {
#if defined(COPULABAND_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::cdf_sum(poly, center, inv_h, samples);
#endif
  return scalar::cdf_sum(poly, center, inv_h, samples);
}

double dot(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "dot: length mismatch");
#if defined(COPULABAND_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::dot(a, b);
#endif
  return scalar::dot(a, b);
}

}  // namespace copulaband::simd
