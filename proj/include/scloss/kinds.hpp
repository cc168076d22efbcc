#pragma once

// Term selectors shared by the public API and the SIMD kernel translation
// units. Kept free of standard-library includes so the AVX2 unit can include
// it without pulling in inline library code compiled for a wider ISA.

namespace scloss {

enum class SingleResponse : int { bce = 0, mse = 1, l1 = 2, cross_entropy = 3 };

enum class Regularizer : int { gaussian = 0, distance = 1, constant = 2 };

enum class Reduction : int { mean = 0, sum = 1 };

// How the pair indicator m is derived from two per-pixel class codes.
//   product:  m = n_i * n_j            (binary labels)
//   equality: m = [y_i == y_j]         (multi-class labels)
enum class PairRule : int { product = 0, equality = 1 };

}  // namespace scloss
