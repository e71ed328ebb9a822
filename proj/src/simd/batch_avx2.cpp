// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "copulaband/simd/batch.hpp"

namespace copulaband::simd::avx2 {
namespace {

struct PolyRegs {
  __m256d lo, hi, c0, c1, c2, c3, c4;

  explicit PolyRegs(const CdfPolynomial& p)
      : lo(_mm256_set1_pd(p.lo)),
        hi(_mm256_set1_pd(p.hi)),
        c0(_mm256_set1_pd(p.coeff[0])),
        c1(_mm256_set1_pd(p.coeff[1])),
        c2(_mm256_set1_pd(p.coeff[2])),
        c3(_mm256_set1_pd(p.coeff[3])),
        c4(_mm256_set1_pd(p.coeff[4])) {}
};

inline __m256d eval4(const PolyRegs& r, __m256d x) {
  __m256d y = _mm256_fmadd_pd(x, r.c4, r.c3);
  y = _mm256_fmadd_pd(x, y, r.c2);
  y = _mm256_fmadd_pd(x, y, r.c1);
  y = _mm256_fmadd_pd(x, y, r.c0);
  const __m256d below = _mm256_cmp_pd(x, r.lo, _CMP_LE_OQ);
  const __m256d above = _mm256_cmp_pd(x, r.hi, _CMP_GE_OQ);
  y = _mm256_blendv_pd(y, _mm256_setzero_pd(), below);
  return _mm256_blendv_pd(y, _mm256_set1_pd(1.0), above);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void cdf_batch(const CdfPolynomial& poly, double center, double inv_h,
               std::span<const double> samples, std::span<double> out) noexcept {
  const PolyRegs regs(poly);
  const __m256d c = _mm256_set1_pd(center);
  const __m256d s = _mm256_set1_pd(inv_h);
  const std::size_t n = samples.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_mul_pd(_mm256_sub_pd(c, _mm256_loadu_pd(samples.data() + i)), s);
    _mm256_storeu_pd(out.data() + i, eval4(regs, x));
  }
  for (; i < n; ++i) out[i] = scalar::cdf_one(poly, (center - samples[i]) * inv_h);
}

double cdf_sum(const CdfPolynomial& poly, double center, double inv_h,
               std::span<const double> samples) noexcept {
  const PolyRegs regs(poly);
  const __m256d c = _mm256_set1_pd(center);
  const __m256d s = _mm256_set1_pd(inv_h);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  const std::size_t n = samples.size();
  const double* p = samples.data();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d x0 = _mm256_mul_pd(_mm256_sub_pd(c, _mm256_loadu_pd(p + i)), s);
    const __m256d x1 = _mm256_mul_pd(_mm256_sub_pd(c, _mm256_loadu_pd(p + i + 4)), s);
    acc0 = _mm256_add_pd(acc0, eval4(regs, x0));
    acc1 = _mm256_add_pd(acc1, eval4(regs, x1));
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_mul_pd(_mm256_sub_pd(c, _mm256_loadu_pd(p + i)), s);
    acc0 = _mm256_add_pd(acc0, eval4(regs, x));
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += scalar::cdf_one(poly, (center - p[i]) * inv_h);
  return acc;
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  const std::size_t n = a.size();
  const double* pa = a.data();
  const double* pb = b.data();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i + 4), _mm256_loadu_pd(pb + i + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i + 8), _mm256_loadu_pd(pb + i + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i + 12), _mm256_loadu_pd(pb + i + 12), acc3);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
  for (; i < n; ++i) acc += pa[i] * pb[i];
  return acc;
}

}  // namespace copulaband::simd::avx2
