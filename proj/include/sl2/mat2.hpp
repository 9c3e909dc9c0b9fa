#pragma once

#include <string>

#include "field.hpp"

namespace sl2 {

// 2x2 matrix over a fixed field with a cached determinant.
struct Mat2 {
  Elem e11, e12, e21, e22;
  Elem det;

  const FieldRef& field() const { return e11.field(); }

  static Mat2 make(Elem a, Elem b, Elem c, Elem d) {
    require(field_equal(a.field(), b.field()) && field_equal(a.field(), c.field()) &&
                field_equal(a.field(), d.field()),
            Err::FieldMismatch, "matrix entries in different fields");
    Elem det = sub(mul(a, d), mul(b, c));
    return Mat2{std::move(a), std::move(b), std::move(c), std::move(d), std::move(det)};
  }

  static Mat2 identity(const FieldRef& f) {
    return make(elem_one(f), elem_zero(f), elem_zero(f), elem_one(f));
  }

  // The nontrivial Weyl representative [[0,1],[-1,0]].
  static Mat2 weyl(const FieldRef& f) {
    return make(elem_zero(f), elem_one(f), elem_int(f, -1), elem_zero(f));
  }

  static Mat2 diag(Elem a, Elem d) {
    FieldRef f = a.field();
    return make(std::move(a), elem_zero(f), elem_zero(f), std::move(d));
  }

  static Mat2 unipotent(Elem u1) {
    FieldRef f = u1.field();
    return make(elem_one(f), std::move(u1), elem_zero(f), elem_one(f));
  }
};

inline Mat2 operator*(const Mat2& a, const Mat2& b) {
  return Mat2::make(add(mul(a.e11, b.e11), mul(a.e12, b.e21)), add(mul(a.e11, b.e12), mul(a.e12, b.e22)),
                    add(mul(a.e21, b.e11), mul(a.e22, b.e21)), add(mul(a.e21, b.e12), mul(a.e22, b.e22)));
}

inline Mat2 operator-(const Mat2& a) { return Mat2::make(neg(a.e11), neg(a.e12), neg(a.e21), neg(a.e22)); }

inline Mat2 scalar_mul(const Elem& s, const Mat2& a) {
  return Mat2::make(mul(s, a.e11), mul(s, a.e12), mul(s, a.e21), mul(s, a.e22));
}

inline Mat2 transpose(const Mat2& a) { return Mat2::make(a.e11, a.e21, a.e12, a.e22); }

inline Mat2 inverse(const Mat2& a) {
  require(!is_zero_at_precision(a.det), Err::SingularMatrix, "inverse of singular matrix");
  Elem dinv = inv(a.det);
  return Mat2::make(mul(a.e22, dinv), mul(neg(a.e12), dinv), mul(neg(a.e21), dinv), mul(a.e11, dinv));
}

inline bool operator==(const Mat2& a, const Mat2& b) {
  return a.e11 == b.e11 && a.e12 == b.e12 && a.e21 == b.e21 && a.e22 == b.e22;
}
inline bool operator!=(const Mat2& a, const Mat2& b) { return !(a == b); }

inline EqFlag mat_eq_flagged(const Mat2& a, const Mat2& b) {
  EqFlag out{true, true};
  const Elem* lhs[4] = {&a.e11, &a.e12, &a.e21, &a.e22};
  const Elem* rhs[4] = {&b.e11, &b.e12, &b.e21, &b.e22};
  for (int i = 0; i < 4; ++i) {
    EqFlag e = eq_flagged(*lhs[i], *rhs[i]);
    out.equal = out.equal && e.equal;
    out.exact = out.exact && e.exact;
  }
  return out;
}

inline bool is_gl2(const Mat2& a) { return !is_zero_at_precision(a.det); }
inline bool is_sl2(const Mat2& a) { return a.det == elem_one(a.field()); }

inline void require_sl2(const Mat2& a) { require(is_sl2(a), Err::NotSL2, "determinant must be 1"); }

inline Elem trace(const Mat2& a) { return add(a.e11, a.e22); }

// Discriminant of the characteristic polynomial: trace^2 - 4 det.
inline Elem char_poly_disc(const Mat2& a) {
  Elem t = trace(a);
  return sub(mul(t, t), mul(elem_int(a.field(), 4), a.det));
}

inline bool is_scalar(const Mat2& a) {
  return a.e12.is_zero() && a.e21.is_zero() && a.e11 == a.e22;
}

// Diagonalizability over the algebraic closure.  In SL2 away from
// characteristic 2 this is: distinct eigenvalues (trace^2 != 4) or +-Id;
// in characteristic 2 the center is trivial and the condition is trace != 0
// or the identity.
inline bool is_semisimple(const Mat2& g) {
  require_sl2(g);
  const FieldRef& f = g.field();
  if (characteristic(f) == 2) {
    if (!trace(g).is_zero()) return true;
    return g == Mat2::identity(f);
  }
  Elem t = trace(g);
  if (sub(mul(t, t), elem_int(f, 4)) != elem_zero(f)) return true;
  return is_scalar(g);
}

// Bruhat data: either upper triangular (torus * unipotent), or a big-cell
// factorization u_a * w * u_b with the left torus parameter gauged to 1.
struct BruhatForm {
  bool borel = false;
  Elem borel_t, borel_u1;        // g = diag(t, 1/t) * [[1,u1],[0,1]]
  Elem a, alpha, b, beta;        // g = [[a,alpha],[0,1/a]] * w * [[b,beta],[0,1/b]]
};

inline BruhatForm bruhat_factor(const Mat2& g) {
  require_sl2(g);
  const FieldRef& f = g.field();
  BruhatForm out;
  if (g.e21.is_zero()) {
    out.borel = true;
    out.borel_t = g.e11;
    out.borel_u1 = div(g.e12, g.e11);
    out.a = out.alpha = out.b = out.beta = elem_zero(f);
    return out;
  }
  out.borel = false;
  out.a = elem_one(f);
  out.alpha = div(g.e11, g.e21);
  out.b = neg(g.e21);
  out.beta = neg(g.e22);
  out.borel_t = out.borel_u1 = elem_zero(f);
  return out;
}

inline Mat2 bruhat_reassemble(const BruhatForm& bf, const FieldRef& f) {
  if (bf.borel) {
    return Mat2::diag(bf.borel_t, inv(bf.borel_t)) * Mat2::unipotent(bf.borel_u1);
  }
  Mat2 left = Mat2::make(bf.a, bf.alpha, elem_zero(f), inv(bf.a));
  Mat2 right = Mat2::make(bf.b, bf.beta, elem_zero(f), inv(bf.b));
  return left * Mat2::weyl(f) * right;
}

inline std::string mat_to_string(const Mat2& m) {
  return elem_to_string(m.e11) + "," + elem_to_string(m.e12) + ";" + elem_to_string(m.e21) + "," +
         elem_to_string(m.e22);
}

}  // namespace sl2
