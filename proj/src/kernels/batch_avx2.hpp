#pragma once

#include <immintrin.h>

#include <cstddef>
#include <cstdint>

namespace scloss::kernels::avx2 {

struct Mask {
  __m256d m;
};

struct Batch {
  static constexpr std::size_t lanes = 4;
  __m256d v;

  Batch() : v(_mm256_setzero_pd()) {}
  explicit Batch(double x) : v(_mm256_set1_pd(x)) {}
  explicit Batch(__m256d x) : v(x) {}

  static Batch load(const double* p) { return Batch(_mm256_loadu_pd(p)); }
  static Batch load_partial(const double* p, std::size_t count, double fill) {
    alignas(32) double tmp[4] = {fill, fill, fill, fill};
    for (std::size_t i = 0; i < count; ++i) tmp[i] = p[i];
    return Batch(_mm256_load_pd(tmp));
  }
  void store(double* p) const { _mm256_storeu_pd(p, v); }
  void store_partial(double* p, std::size_t count) const {
    alignas(32) double tmp[4];
    _mm256_store_pd(tmp, v);
    for (std::size_t i = 0; i < count; ++i) p[i] = tmp[i];
  }
};

inline Batch operator+(Batch a, Batch b) { return Batch(_mm256_add_pd(a.v, b.v)); }
inline Batch operator-(Batch a, Batch b) { return Batch(_mm256_sub_pd(a.v, b.v)); }
inline Batch operator*(Batch a, Batch b) { return Batch(_mm256_mul_pd(a.v, b.v)); }
inline Batch operator/(Batch a, Batch b) { return Batch(_mm256_div_pd(a.v, b.v)); }

inline Batch vmin(Batch a, Batch b) { return Batch(_mm256_min_pd(a.v, b.v)); }
inline Batch vmax(Batch a, Batch b) { return Batch(_mm256_max_pd(a.v, b.v)); }
inline Batch vabs(Batch a) {
  return Batch(_mm256_and_pd(a.v, _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFLL))));
}
inline Batch round_nearest(Batch a) { return Batch(_mm256_round_pd(a.v, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC)); }

inline Mask cmp_gt(Batch a, Batch b) { return {_mm256_cmp_pd(a.v, b.v, _CMP_GT_OQ)}; }
inline Mask cmp_eq(Batch a, Batch b) { return {_mm256_cmp_pd(a.v, b.v, _CMP_EQ_OQ)}; }
inline Batch blend(Mask mask, Batch if_true, Batch if_false) { return Batch(_mm256_blendv_pd(if_false.v, if_true.v, mask.m)); }

inline Batch split_exponent(Batch x, Batch& e) {
  const __m256i bits = _mm256_castpd_si256(x.v);
  const __m256i biased_bits = _mm256_or_si256(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(0x4330000000000000LL));
  const __m256d biased = _mm256_sub_pd(_mm256_castsi256_pd(biased_bits), _mm256_set1_pd(4503599627370496.0));
  e = Batch(_mm256_sub_pd(biased, _mm256_set1_pd(1023.0)));
  const __m256i mant = _mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
                                       _mm256_set1_epi64x(0x3FF0000000000000LL));
  return Batch(_mm256_castsi256_pd(mant));
}

inline Batch pow2i(Batch n) {
  const __m256i n64 = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(n.v));
  const __m256i biased = _mm256_add_epi64(n64, _mm256_set1_epi64x(1023));
  return Batch(_mm256_castsi256_pd(_mm256_slli_epi64(biased, 52)));
}

}  // namespace scloss::kernels::avx2
