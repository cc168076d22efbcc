#pragma once

// ISA-independent kernel bodies, written once against a batch type B that
// provides lane-wise arithmetic. Instantiated by kernels_scalar.cpp with a
// one-lane batch and by kernels_avx2.cpp with a four-lane batch.
//
// Only <cstddef> and the kernel interface may be included here: this header is
// compiled with -mavx2 in the vector unit.

#include <cstddef>

#include "scloss/kernels.hpp"

namespace scloss::kernels::detail {

inline constexpr double kLn2Hi = 6.93147180369123816490e-01;  // low 21 bits zero
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;
inline constexpr double kLog2e = 1.44269504088896338700e+00;
inline constexpr double kSqrt2 = 1.41421356237309514547e+00;

// 1/k! for k = 0..13
inline constexpr double kInvFactorial[14] = {
    1.0,
    1.0,
    1.0 / 2.0,
    1.0 / 6.0,
    1.0 / 24.0,
    1.0 / 120.0,
    1.0 / 720.0,
    1.0 / 5040.0,
    1.0 / 40320.0,
    1.0 / 362880.0,
    1.0 / 3628800.0,
    1.0 / 39916800.0,
    1.0 / 479001600.0,
    1.0 / 6227020800.0,
};

// e^x for |x| <= 700: x = n ln2 + r, |r| <= ln2/2, degree-13 Taylor in r.
template <class B>
inline B exp_b(B x) {
  x = vmin(vmax(x, B(-700.0)), B(700.0));
  const B n = round_nearest(x * B(kLog2e));
  const B r = (x - n * B(kLn2Hi)) - n * B(kLn2Lo);
  B p(kInvFactorial[13]);
  for (int k = 12; k >= 0; --k) p = p * r + B(kInvFactorial[k]);
  return p * pow2i(n);
}

// ln x for positive normal x: x = m 2^e with m in [sqrt(1/2), sqrt(2)],
// ln m = 2 atanh(s), s = (m-1)/(m+1), series through s^23.
template <class B>
inline B log_b(B x) {
  B e;
  B m = split_exponent(x, e);
  const auto big = cmp_gt(m, B(kSqrt2));
  m = blend(big, m * B(0.5), m);
  e = blend(big, e + B(1.0), e);
  const B s = (m - B(1.0)) / (m + B(1.0));
  const B z = s * s;
  B p(1.0 / 23.0);
  for (int d = 21; d >= 3; d -= 2) p = p * z + B(1.0 / static_cast<double>(d));
  const B tail = s * z * p;
  return e * B(kLn2Hi) + ((s + tail) * B(2.0) + e * B(kLn2Lo));
}

// Applies body(offset, count) over [0, n) in lane-sized chunks; the final
// chunk may be partial.
template <class B, class Body>
inline void for_chunks(std::size_t n, Body&& body) {
  std::size_t i = 0;
  for (; i + B::lanes <= n; i += B::lanes) body(i, B::lanes);
  if (i < n) body(i, n - i);
}

template <class B>
inline B load_n(const double* p, std::size_t count, double fill) {
  return count == B::lanes ? B::load(p) : B::load_partial(p, count, fill);
}

template <class B>
inline void store_n(double* p, B v, std::size_t count) {
  if (count == B::lanes) {
    v.store(p);
  } else {
    v.store_partial(p, count);
  }
}

template <class B>
void log_span(const double* x, std::size_t n, double* out) {
  for_chunks<B>(n, [&](std::size_t i, std::size_t c) { store_n(out + i, log_b(load_n<B>(x + i, c, 1.0)), c); });
}

template <class B>
void exp_span(const double* x, std::size_t n, double* out) {
  for_chunks<B>(n, [&](std::size_t i, std::size_t c) { store_n(out + i, exp_b(load_n<B>(x + i, c, 0.0)), c); });
}

template <class B>
inline void single_terms(SingleResponse kind, B p, B y, B& s, B& ds) {
  switch (kind) {
    case SingleResponse::bce:
    case SingleResponse::cross_entropy: {
      const auto positive = cmp_gt(y, B(0.5));
      const B arg = blend(positive, p, B(1.0) - p);
      s = B(0.0) - log_b(arg);
      const B r = B(1.0) / arg;
      ds = blend(positive, B(0.0) - r, r);
      break;
    }
    case SingleResponse::mse: {
      const B d = p - y;
      s = d * d;
      ds = d * B(2.0);
      break;
    }
    case SingleResponse::l1: {
      const B d = p - y;
      s = vabs(d);
      ds = blend(cmp_gt(d, B(0.0)), B(1.0), blend(cmp_gt(B(0.0), d), B(-1.0), B(0.0)));
      break;
    }
  }
}

template <class B>
void single_response_span(const double* p, const double* label, std::size_t n, SingleResponse kind, double* value,
                          double* deriv) {
  for_chunks<B>(n, [&](std::size_t i, std::size_t c) {
    B s, ds;
    single_terms(kind, load_n<B>(p + i, c, 0.5), load_n<B>(label + i, c, 1.0), s, ds);
    store_n(value + i, s, c);
    if (deriv != nullptr) store_n(deriv + i, ds, c);
  });
}

template <class B>
inline auto same_class(B ci, B cj, PairRule rule) {
  return rule == PairRule::product ? cmp_gt(ci * cj, B(0.5)) : cmp_eq(ci, cj);
}

// Denominator D = mutual + alpha f, and optionally its partials in p_i, p_j.
template <class B, Regularizer R, bool kWithGrad>
inline B pair_denominator(B pi, B pj, B ci, B cj, PairRule rule, B alpha, B* d_di, B* d_dj) {
  const auto same = same_class(ci, cj, rule);
  const B q = pi * pj;
  const B arg = blend(same, q, B(1.0) - q);
  const B mutual = B(0.0) - log_b(arg);

  B f(1.0), df_di(0.0), df_dj(0.0);
  if constexpr (R == Regularizer::gaussian) {
    f = exp_b(B(0.0) - q);
    if constexpr (kWithGrad) {
      df_di = B(0.0) - f * pj;
      df_dj = B(0.0) - f * pi;
    }
  } else if constexpr (R == Regularizer::distance) {
    const B diff = pi - pj;
    f = exp_b(diff * diff);
    if constexpr (kWithGrad) {
      df_di = B(2.0) * diff * f;
      df_dj = B(0.0) - df_di;
    }
  }

  if constexpr (kWithGrad) {
    const B r = B(1.0) / arg;
    const B dmutual_dq = blend(same, B(0.0) - r, r);
    *d_di = dmutual_dq * pj + alpha * df_di;
    *d_dj = dmutual_dq * pi + alpha * df_dj;
  }
  return mutual + alpha * f;
}

template <class B, Regularizer R>
void pair_inv_span(const double* pi, const double* pj, const double* ci, const double* cj, std::size_t n,
                   const PairParams& prm, double* out) {
  const B alpha(prm.alpha);
  for_chunks<B>(n, [&](std::size_t i, std::size_t c) {
    const B d = pair_denominator<B, R, false>(load_n<B>(pi + i, c, 0.5), load_n<B>(pj + i, c, 0.5),
                                              load_n<B>(ci + i, c, 0.0), load_n<B>(cj + i, c, 0.0), prm.rule, alpha,
                                              nullptr, nullptr);
    store_n(out + i, B(1.0) / d, c);
  });
}

template <class B, Regularizer R>
void pair_gradient_span(const PairGradientArgs& a, const PairParams& prm) {
  const B alpha(prm.alpha);
  for_chunks<B>(a.n, [&](std::size_t i, std::size_t c) {
    const B pi = load_n<B>(a.p_i + i, c, 0.5);
    const B pj = load_n<B>(a.p_j + i, c, 0.5);
    B d_di, d_dj;
    const B d = pair_denominator<B, R, true>(pi, pj, load_n<B>(a.code_i + i, c, 0.0), load_n<B>(a.code_j + i, c, 0.0),
                                             prm.rule, alpha, &d_di, &d_dj);
    const B inv = B(1.0) / d;
    const B t = (load_n<B>(a.a_i + i, c, 0.0) + load_n<B>(a.a_j + i, c, 0.0)) * inv * inv;
    store_n(a.g_i + i, load_n<B>(a.b_i + i, c, 0.0) * inv - t * d_di, c);
    store_n(a.g_j + i, load_n<B>(a.b_j + i, c, 0.0) * inv - t * d_dj, c);
  });
}

template <class B>
void pair_inv_dispatch(const double* pi, const double* pj, const double* ci, const double* cj, std::size_t n,
                       const PairParams& prm, double* out) {
  switch (prm.regularizer) {
    case Regularizer::gaussian: pair_inv_span<B, Regularizer::gaussian>(pi, pj, ci, cj, n, prm, out); break;
    case Regularizer::distance: pair_inv_span<B, Regularizer::distance>(pi, pj, ci, cj, n, prm, out); break;
    case Regularizer::constant: pair_inv_span<B, Regularizer::constant>(pi, pj, ci, cj, n, prm, out); break;
  }
}

template <class B>
void pair_gradient_dispatch(const PairGradientArgs& a, const PairParams& prm) {
  switch (prm.regularizer) {
    case Regularizer::gaussian: pair_gradient_span<B, Regularizer::gaussian>(a, prm); break;
    case Regularizer::distance: pair_gradient_span<B, Regularizer::distance>(a, prm); break;
    case Regularizer::constant: pair_gradient_span<B, Regularizer::constant>(a, prm); break;
  }
}

template <class B>
constexpr KernelTable make_table(Isa isa, const char* name) {
  return KernelTable{isa,
                     name,
                     B::lanes,
                     &log_span<B>,
                     &exp_span<B>,
                     &single_response_span<B>,
                     &pair_inv_dispatch<B>,
                     &pair_gradient_dispatch<B>};
}

}  // namespace scloss::kernels::detail
