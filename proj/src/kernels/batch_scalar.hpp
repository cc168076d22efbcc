#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>

namespace scloss::kernels::scalar {

struct Batch {
  static constexpr std::size_t lanes = 1;
  double v = 0.0;

  Batch() = default;
  explicit Batch(double x) : v(x) {}

  static Batch load(const double* p) { return Batch(*p); }
  static Batch load_partial(const double* p, std::size_t, double) { return Batch(*p); }
  void store(double* p) const { *p = v; }
  void store_partial(double* p, std::size_t) const { *p = v; }
};

inline Batch operator+(Batch a, Batch b) { return Batch(a.v + b.v); }
inline Batch operator-(Batch a, Batch b) { return Batch(a.v - b.v); }
inline Batch operator*(Batch a, Batch b) { return Batch(a.v * b.v); }
inline Batch operator/(Batch a, Batch b) { return Batch(a.v / b.v); }

// Semantics match the x86 min/max instructions for non-NaN inputs.
inline Batch vmin(Batch a, Batch b) { return Batch(a.v < b.v ? a.v : b.v); }
inline Batch vmax(Batch a, Batch b) { return Batch(a.v > b.v ? a.v : b.v); }
inline Batch vabs(Batch a) { return Batch(std::bit_cast<double>(std::bit_cast<std::uint64_t>(a.v) & 0x7FFFFFFFFFFFFFFFULL)); }
inline Batch round_nearest(Batch a) { return Batch(std::nearbyint(a.v)); }

inline bool cmp_gt(Batch a, Batch b) { return a.v > b.v; }
inline bool cmp_eq(Batch a, Batch b) { return a.v == b.v; }
inline Batch blend(bool mask, Batch if_true, Batch if_false) { return mask ? if_true : if_false; }

// x = m * 2^e with m in [1,2); x must be positive and normal.
inline Batch split_exponent(Batch x, Batch& e) {
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(x.v);
  const double biased = std::bit_cast<double>((bits >> 52) | 0x4330000000000000ULL) - 4503599627370496.0;
  e = Batch(biased - 1023.0);
  return Batch(std::bit_cast<double>((bits & 0x000FFFFFFFFFFFFFULL) | 0x3FF0000000000000ULL));
}

// 2^n for integral n in the normal exponent range.
inline Batch pow2i(Batch n) {
  const auto biased = static_cast<std::uint64_t>(static_cast<std::int64_t>(n.v) + 1023);
  return Batch(std::bit_cast<double>(biased << 52));
}

}  // namespace scloss::kernels::scalar
