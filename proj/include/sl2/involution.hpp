#pragma once

#include <optional>
#include <string>

#include "mat2.hpp"

namespace sl2 {

enum class InvKind { TauM, TauZeroChar2 };

// An inner involution of SL2: conjugation by [[0,1],[m,0]] away from
// characteristic 2, or by [[1,1],[0,1]] over finite char-2 fields.
struct InvolutionSpec {
  FieldRef field;
  InvKind kind;
  Elem m;                 // TauM only
  Mat2 defining;          // the conjugating matrix
  std::optional<SquareClassRep> cls;  // square class of m, TauM only
};

inline InvolutionSpec make_involution(const FieldRef& f, const Elem& m) {
  require(field_equal(m.field(), f), Err::FieldMismatch, "m must live in the involution's field");
  require(!m.is_zero(), Err::ZeroM, "m must be nonzero");
  if (characteristic(f) == 2) {
    require(f->kind == FieldKind::RationalFunctionField, Err::CharTwoUnsupported,
            "finite char-2 fields carry a single involution class; use tau0");
  }
  // 2-adic fields keep their arithmetic and Hilbert symbols but stay out of
  // the involution and decomposition paths (residue characteristic 2).
  require(f->kind != FieldKind::PAdic || f->p != 2, Err::Unsupported,
          "2-adic fields are excluded from involution paths");
  Mat2 def = Mat2::make(elem_zero(f), elem_one(f), m, elem_zero(f));
  return InvolutionSpec{f, InvKind::TauM, m, std::move(def), square_class(m)};
}

inline InvolutionSpec make_tau0(const FieldRef& f) {
  require(characteristic(f) == 2, Err::KindMismatch, "tau0 requires characteristic 2");
  require(is_finite_field(f), Err::CharTwoUnsupported, "tau0 is defined over finite char-2 fields");
  Mat2 def = Mat2::make(elem_one(f), elem_one(f), elem_zero(f), elem_one(f));
  return InvolutionSpec{f, InvKind::TauZeroChar2, elem_zero(f), std::move(def), std::nullopt};
}

inline std::string involution_to_string(const InvolutionSpec& inv) {
  if (inv.kind == InvKind::TauZeroChar2) return "tau0";
  return "tau(" + elem_to_string(inv.m) + ")";
}

// Conjugation by the defining matrix.
inline Mat2 apply(const InvolutionSpec& inv, const Mat2& g) {
  require(field_equal(inv.field, g.field()), Err::FieldMismatch, "element in a different field");
  return inv.defining * g * inverse(inv.defining);
}

inline bool is_isomorphic(const InvolutionSpec& a, const InvolutionSpec& b) {
  require(field_equal(a.field, b.field), Err::FieldMismatch, "involutions over different fields");
  require(a.kind == b.kind, Err::KindMismatch, "involutions of different kinds");
  if (a.kind == InvKind::TauZeroChar2) return true;
  return same_square_class(a.m, b.m);
}

// ---------------------------------------------------------------------------
// Membership predicates

// Fixed group of tau_m: [[a,b],[m b, a]] with a^2 - m b^2 = 1.
// Fixed group of tau0:  [[a,b],[0,a]] with a^2 = 1.
inline bool in_fixed_group(const InvolutionSpec& inv, const Mat2& g) {
  require_sl2(g);
  if (inv.kind == InvKind::TauZeroChar2) {
    Elem sq = mul(g.e11, g.e11);
    return g.e21.is_zero() && g.e11 == g.e22 && sq == elem_one(inv.field);
  }
  return g.e11 == g.e22 && g.e21 == mul(inv.m, g.e12);
}

// Extended symmetric space of tau_m: [[a,b],[-m b, c]] with det 1; this
// pattern is equivalent to tau(g) = g^{-1}.  In characteristic 2 the tau0
// pattern is e22 = e11 + e21 with det 1.
inline bool in_extended_symmetric(const InvolutionSpec& inv, const Mat2& g) {
  require_sl2(g);
  if (inv.kind == InvKind::TauZeroChar2) return g.e22 == add(g.e11, g.e21);
  return g.e21 == neg(mul(inv.m, g.e12));
}

inline bool in_unipotent(const Mat2& g) {
  require_sl2(g);
  const FieldRef& f = g.field();
  return g.e21.is_zero() && g.e11 == elem_one(f) && g.e22 == elem_one(f);
}

inline bool in_torus(const Mat2& g) {
  require_sl2(g);
  return g.e12.is_zero() && g.e21.is_zero();
}

// ---------------------------------------------------------------------------
// Normal form of an arbitrary inner involution

struct InvolutionFromMatrix {
  InvolutionSpec spec;
  Mat2 conjugator;  // chi with chi * A * chi^{-1} = [[0,1],[m,0]]
};

// Inn(A) of order two forces A traceless up to scalars (Cayley-Hamilton), so
// m = -det(A) and a rational-canonical-form basis conjugates A to the normal
// form exactly: with w1 = A w2, the pair (w1, w2) satisfies A w1 = m w2,
// A w2 = w1.
inline InvolutionFromMatrix involution_from_matrix(const Mat2& A) {
  const FieldRef& f = A.field();
  require(is_gl2(A), Err::NotAnInvolution, "defining matrix must be invertible");
  require(!is_scalar(A), Err::NotAnInvolution, "scalar matrices induce the identity");
  Mat2 A2 = A * A;
  require(is_scalar(A2) && !A2.e11.is_zero(), Err::NotAnInvolution, "square must be a nonzero scalar");
  Elem m = neg(A.det);

  // Find w2 with {w2, A w2} independent.
  const Elem one = elem_one(f), zero = elem_zero(f);
  std::pair<Elem, Elem> candidates[3] = {{one, zero}, {zero, one}, {one, one}};
  for (auto& [x, y] : candidates) {
    Elem ax = add(mul(A.e11, x), mul(A.e12, y));
    Elem ay = add(mul(A.e21, x), mul(A.e22, y));
    Elem indep = sub(mul(ax, y), mul(ay, x));
    if (is_zero_at_precision(indep)) continue;
    Mat2 chi_inv = Mat2::make(ax, x, ay, y);  // columns w1 = A w2, w2
    Mat2 chi = inverse(chi_inv);
    Mat2 normal = chi * A * chi_inv;
    Mat2 expected = Mat2::make(zero, one, m, zero);
    require(normal == expected, Err::PostconditionViolation, "normal form conjugation failed");
    return InvolutionFromMatrix{make_involution(f, m), chi};
  }
  fail(Err::NotAnInvolution, "no independent vector found");
}

// ---------------------------------------------------------------------------
// Fixed points

// A fixed-group element with nonzero off-diagonal parameter, found through the
// conic parametrization a = (1+m t^2)/(1-m t^2), b = 2t/(1-m t^2) scanned over
// t = 1, 2, ...; finite fields fall back to exhaustive search.  skip > 0 asks
// for later parametrization points.
inline Mat2 nontrivial_fixed_point(const InvolutionSpec& inv, int skip = 0) {
  require(inv.kind == InvKind::TauM, Err::KindMismatch, "fixed points of tau_m only");
  const FieldRef& f = inv.field;
  const Elem one = elem_one(f);
  auto build = [&](const Elem& a, const Elem& b) {
    return Mat2::make(a, b, mul(inv.m, b), a);
  };
  if (is_finite_field(f)) {
    int found = 0;
    unsigned long long q = field_size(f);
    for (unsigned long long ia = 0; ia < q; ++ia) {
      for (unsigned long long ib = 1; ib < q; ++ib) {
        Elem a = elem_from_index(f, ia), b = elem_from_index(f, ib);
        if (sub(mul(a, a), mul(inv.m, mul(b, b))) == one) {
          if (found++ == skip) return build(a, b);
        }
      }
    }
    fail(Err::OnlyCentralFixedPoints, "fixed group is central");
  }
  int emitted = 0;
  for (long long t = 1; t <= 200; ++t) {
    Elem te = elem_int(f, t);
    Elem denom = sub(one, mul(inv.m, mul(te, te)));
    if (is_zero_at_precision(denom)) continue;
    Elem a = div(add(one, mul(inv.m, mul(te, te))), denom);
    Elem b = div(add(te, te), denom);
    if (is_zero_at_precision(b)) continue;
    if (emitted++ == skip) return build(a, b);
  }
  fail(Err::BudgetExhausted, "conic parametrization scan exhausted");
}

}  // namespace sl2
