#pragma once

#include <cstdlib>
#include <functional>
#include <unordered_set>
#include <vector>

#include "mat2.hpp"

namespace sl2 {

inline unsigned long long enum_guard_limit() {
  if (const char* env = std::getenv("SL2_MAX_ENUM")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 10000000ull;
}

inline void check_enum_size(const FieldRef& f) {
  unsigned long long q = field_size(f);
  require(q * q * q <= enum_guard_limit(), Err::TooLarge,
          "group too large to enumerate (override with SL2_MAX_ENUM)");
}

// Streams SL2(F_q) in a deterministic order: the a = 0 sheet first, then the
// a != 0 sheets with d solved from the determinant.
inline void enumerate_sl2(const FieldRef& f, const std::function<void(const Mat2&)>& fn) {
  check_enum_size(f);
  unsigned long long q = field_size(f);
  std::vector<Elem> elems = field_elements(f);
  const Elem one = elem_one(f);
  for (unsigned long long ib = 1; ib < q; ++ib) {
    Elem c = neg(inv(elems[ib]));
    for (unsigned long long id = 0; id < q; ++id) {
      fn(Mat2::make(elems[0], elems[ib], c, elems[id]));
    }
  }
  for (unsigned long long ia = 1; ia < q; ++ia) {
    Elem ainv = inv(elems[ia]);
    for (unsigned long long ib = 0; ib < q; ++ib) {
      for (unsigned long long ic = 0; ic < q; ++ic) {
        Elem d = mul(add(one, mul(elems[ib], elems[ic])), ainv);
        fn(Mat2::make(elems[ia], elems[ib], elems[ic], d));
      }
    }
  }
}

inline std::vector<Mat2> sl2_elements(const FieldRef& f) {
  std::vector<Mat2> out;
  enumerate_sl2(f, [&](const Mat2& g) { out.push_back(g); });
  return out;
}

// Packs a matrix over a finite field into a q-ary integer key.
inline unsigned long long mat_key(const Mat2& m) {
  unsigned long long q = field_size(m.field());
  return ((elem_index(m.e11) * q + elem_index(m.e12)) * q + elem_index(m.e21)) * q + elem_index(m.e22);
}

using MatKeySet = std::unordered_set<unsigned long long>;

inline MatKeySet keys_of(const std::vector<Mat2>& v) {
  MatKeySet s;
  s.reserve(v.size() * 2);
  for (const Mat2& m : v) s.insert(mat_key(m));
  return s;
}

// Product set {a*b} with a memory guard.
inline MatKeySet product_set(const std::vector<Mat2>& A, const std::vector<Mat2>& B) {
  MatKeySet s;
  require(A.size() * B.size() <= 4ull * enum_guard_limit(), Err::TooLarge, "product set too large");
  for (const Mat2& a : A) {
    for (const Mat2& b : B) {
      s.insert(mat_key(a * b));
      require(s.size() <= enum_guard_limit(), Err::TooLarge, "product set exceeds the memory guard");
    }
  }
  return s;
}

}  // namespace sl2
