#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "copulaband/error.hpp"
#include "copulaband/kernel.hpp"
#include "copulaband/simd/batch.hpp"
#include "oracle.hpp"

using namespace copulaband;
namespace simd = copulaband::simd;

namespace {

std::vector<CdfPolynomial> polys() {
  std::vector<CdfPolynomial> out{epanechnikov_cdf_polynomial()};
  for (double u : {0.0, 0.01, 0.07, 0.3, 0.5, 0.93, 1.0}) {
    for (double h : {0.02, 0.15, 0.6, 1.0}) out.push_back(LocalKernel(u, h).polynomial());
  }
  return out;
}

// Samples that hit the support endpoints exactly as well as generic values.
std::vector<double> samples(std::size_t n, std::uint64_t seed, const CdfPolynomial& p, double center, double h) {
  std::vector<double> s = oracle::uniforms(n, seed, -0.2, 1.2);
  if (n > 3) {
    s[0] = center - p.lo * h;
    s[1] = center - p.hi * h;
    s[2] = center;
  }
  return s;
}

}  // namespace

TEST_CASE("isa names and detection") {
  CHECK(simd::isa_name(simd::Isa::scalar) == "scalar");
  CHECK(simd::isa_name(simd::Isa::avx2) == "avx2");
  const simd::Isa d = simd::detected_isa();
  {
    simd::ScopedIsa guard(simd::Isa::scalar);
    CHECK(simd::active_isa() == simd::Isa::scalar);
  }
  if (d == simd::Isa::scalar) {
    CHECK_THROWS_AS(simd::set_active_isa(simd::Isa::avx2), Error);
  } else {
    simd::ScopedIsa guard(simd::Isa::avx2);
    CHECK(simd::active_isa() == simd::Isa::avx2);
  }
}

TEST_CASE("scalar cdf_one matches the polynomial's own evaluation") {
  for (const CdfPolynomial& p : polys()) {
    for (double x = -1.5; x <= 1.5; x += 0.003) CHECK(simd::scalar::cdf_one(p, x) == p(x));
  }
}

TEST_CASE("scalar batch entry points against a direct loop") {
  const auto ps = polys();
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const double center = 0.37, h = 0.11;
    const auto s = samples(53, k, ps[k], center, h);
    std::vector<double> out(s.size());
    simd::scalar::cdf_batch(ps[k], center, 1.0 / h, s, out);
    double sum = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double ref = ps[k]((center - s[i]) * (1.0 / h));
      CHECK(out[i] == ref);
      sum += ref;
    }
    CHECK(simd::scalar::cdf_sum(ps[k], center, 1.0 / h, s) == doctest::Approx(sum).epsilon(1e-14));
  }
  const auto a = oracle::uniforms(101, 1), b = oracle::uniforms(101, 2);
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] * b[i];
  CHECK(simd::scalar::dot(a, b) == doctest::Approx(d).epsilon(1e-14));
}

#if defined(COPULABAND_HAVE_AVX2)
TEST_CASE("avx2 variants agree with the scalar reference") {
  if (simd::detected_isa() != simd::Isa::avx2) {
    MESSAGE("CPU lacks AVX2+FMA; equivalence not exercised");
    return;
  }
  const auto ps = polys();
  for (std::size_t k = 0; k < ps.size(); ++k) {
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 15u, 16u, 17u, 33u, 1000u}) {
      const double center = 0.5 * (k % 3), h = 0.05 + 0.1 * (k % 4);
      const auto s = samples(n, 100 * k + n, ps[k], center, h);
      std::vector<double> ref(n), got(n);
      simd::scalar::cdf_batch(ps[k], center, 1.0 / h, s, ref);
      simd::avx2::cdf_batch(ps[k], center, 1.0 / h, s, got);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(got[i] - ref[i]) <= 1e-14);
      const double rs = simd::scalar::cdf_sum(ps[k], center, 1.0 / h, s);
      const double gs = simd::avx2::cdf_sum(ps[k], center, 1.0 / h, s);
      CHECK(std::abs(gs - rs) <= 1e-13 * std::max<double>(1.0, n));
    }
  }
  for (std::size_t n : {0u, 1u, 5u, 9u, 16u, 17u, 63u, 1001u}) {
    const auto a = oracle::uniforms(n, 7 + n, -1, 1), b = oracle::uniforms(n, 8 + n, -1, 1);
    CHECK(std::abs(simd::avx2::dot(a, b) - simd::scalar::dot(a, b)) <= 1e-13 * std::max<double>(1.0, n));
  }
}

TEST_CASE("avx2 saturates exactly outside the support") {
  if (simd::detected_isa() != simd::Isa::avx2) return;
  for (const CdfPolynomial& p : polys()) {
    std::vector<double> s = {p.hi + 0.5, p.hi + 1e-12, p.lo - 1e-12, p.lo - 3.0, p.hi, p.lo, 10.0, -10.0};
    for (double& x : s) x = -x;  // center 0, inv_h 1: argument is -s
    std::vector<double> got(s.size());
    simd::avx2::cdf_batch(p, 0.0, 1.0, s, got);
    CHECK(got[0] == 1.0);
    CHECK(got[1] == 1.0);
    CHECK(got[2] == 0.0);
    CHECK(got[3] == 0.0);
    CHECK(got[4] == 1.0);
    CHECK(got[5] == 0.0);
    CHECK(got[6] == 1.0);
    CHECK(got[7] == 0.0);
  }
}
#endif

TEST_CASE("dispatching entry points follow the active isa") {
  const auto p = LocalKernel(0.02, 0.2).polynomial();
  const auto s = oracle::uniforms(257, 42);
  std::vector<double> a(s.size()), b(s.size());
  {
    simd::ScopedIsa guard(simd::Isa::scalar);
    simd::cdf_batch(p, 0.02, 5.0, s, a);
    CHECK(simd::cdf_sum(p, 0.02, 5.0, s) == simd::scalar::cdf_sum(p, 0.02, 5.0, s));
  }
  simd::cdf_batch(p, 0.02, 5.0, s, b);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-14);
}
