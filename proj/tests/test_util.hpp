#pragma once

#include <random>

#include <sl2/mat2.hpp>

namespace sl2::testutil {

inline Elem q_of(long long n, long long d = 1) {
  return make_rational(rationals(), mpq_class(static_cast<long>(n), static_cast<long>(d)));
}

inline Mat2 qmat(long long a, long long b, long long c, long long d) {
  return Mat2::make(q_of(a), q_of(b), q_of(c), q_of(d));
}

// Random SL2 element as a short product of elementary and torus factors.
inline Mat2 random_sl2(const FieldRef& f, std::mt19937_64& rng, int factors = 3) {
  std::uniform_int_distribution<long long> small(-4, 4);
  std::uniform_int_distribution<long long> denom(1, 3);
  std::uniform_int_distribution<int> kind(0, 2);
  auto rnd_elem = [&]() {
    if (is_finite_field(f)) {
      std::uniform_int_distribution<unsigned long long> idx(0, field_size(f) - 1);
      return elem_from_index(f, idx(rng));
    }
    return make_rational(f, mpq_class(static_cast<long>(small(rng)), static_cast<long>(denom(rng))));
  };
  Mat2 g = Mat2::identity(f);
  for (int i = 0; i < factors; ++i) {
    switch (kind(rng)) {
      case 0:
        g = g * Mat2::unipotent(rnd_elem());
        break;
      case 1: {
        Elem x = rnd_elem();
        g = g * Mat2::make(elem_one(f), elem_zero(f), x, elem_one(f));
        break;
      }
      default: {
        Elem t = rnd_elem();
        if (is_zero_at_precision(t)) t = elem_one(f);
        g = g * Mat2::diag(t, inv(t));
        break;
      }
    }
  }
  return g;
}

// Coerces a rational matrix into another field entrywise; keeps entries exact.
inline Mat2 coerce_mat(const FieldRef& f, const Mat2& g) {
  auto conv = [&](const Elem& e) { return make_rational(f, e.rat()); };
  return Mat2::make(conv(g.e11), conv(g.e12), conv(g.e21), conv(g.e22));
}

// Random SL2 over a p-adic field with exact entries: built over Q, coerced.
inline Mat2 random_sl2_padic(const FieldRef& f, std::mt19937_64& rng, int factors = 3) {
  return coerce_mat(f, random_sl2(rationals(), rng, factors));
}

}  // namespace sl2::testutil
