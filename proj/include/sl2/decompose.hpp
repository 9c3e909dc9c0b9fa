#pragma once

#include <optional>
#include <string>

#include "involution.hpp"

namespace sl2 {

enum class FactorOrder { HQU, HUQ, QHU, QUH, UHQ, UQH, HWQ };

enum class Branch {
  BorelCase,
  BigCellAlphaNonzero,
  BigCellAlphaZero,
  F3Degenerate,
  Char2Finite,
  Char2Infinite,
  Reordered,
};

inline const char* order_name(FactorOrder o) {
  switch (o) {
    case FactorOrder::HQU: return "HQU";
    case FactorOrder::HUQ: return "HUQ";
    case FactorOrder::QHU: return "QHU";
    case FactorOrder::QUH: return "QUH";
    case FactorOrder::UHQ: return "UHQ";
    case FactorOrder::UQH: return "UQH";
    case FactorOrder::HWQ: return "HWQ";
  }
  return "?";
}

inline const char* branch_name(Branch b) {
  switch (b) {
    case Branch::BorelCase: return "BorelCase";
    case Branch::BigCellAlphaNonzero: return "BigCellAlphaNonzero";
    case Branch::BigCellAlphaZero: return "BigCellAlphaZero";
    case Branch::F3Degenerate: return "F3Degenerate";
    case Branch::Char2Finite: return "Char2Finite";
    case Branch::Char2Infinite: return "Char2Infinite";
    case Branch::Reordered: return "Reordered";
  }
  return "?";
}

// Factor tuple by role; `order` fixes the product order.  w is the identity
// except in the char-2 finite form h * w * q.
struct DecompResult {
  Mat2 h, w, q, u;
  FactorOrder order;
  Branch branch;
};

inline Mat2 recompose(const DecompResult& r) {
  switch (r.order) {
    case FactorOrder::HQU: return r.h * r.q * r.u;
    case FactorOrder::HUQ: return r.h * r.u * r.q;
    case FactorOrder::QHU: return r.q * r.h * r.u;
    case FactorOrder::QUH: return r.q * r.u * r.h;
    case FactorOrder::UHQ: return r.u * r.h * r.q;
    case FactorOrder::UQH: return r.u * r.q * r.h;
    case FactorOrder::HWQ: return r.h * r.w * r.q;
  }
  fail(Err::BadParameter, "bad factor order");
}

// Hard check of memberships and the product; wrong output is never returned
// silently.
inline void validate_decomposition(const DecompResult& r, const Mat2& g, const InvolutionSpec& inv) {
  const FieldRef& f = inv.field;
  require(in_fixed_group(inv, r.h), Err::PostconditionViolation, "h factor not in the fixed group");
  require(in_extended_symmetric(inv, r.q), Err::PostconditionViolation,
          "q factor not in the extended symmetric space");
  require(in_unipotent(r.u), Err::PostconditionViolation, "u factor not unipotent");
  if (r.order == FactorOrder::HWQ) {
    Mat2 w_char2 = Mat2::make(elem_zero(f), elem_one(f), elem_one(f), elem_zero(f));
    require(r.w == Mat2::identity(f) || r.w == w_char2, Err::PostconditionViolation,
            "w factor not a Weyl representative");
  } else {
    require(r.w == Mat2::identity(f), Err::PostconditionViolation, "unexpected w factor");
  }
  require(mat_eq_flagged(recompose(r), g).equal, Err::PostconditionViolation,
          "factor product differs from the input");
}

// ---------------------------------------------------------------------------
// Membership verdicts

struct MembershipVerdict {
  enum Kind { Yes, No, Undecided } kind;
  std::optional<Mat2> witness_h;
  std::optional<Mat2> witness_u;
  std::string certificate;
  std::optional<Elem> cert_value;

  static MembershipVerdict yes(Mat2 h) { return {Yes, std::move(h), std::nullopt, "", std::nullopt}; }
  static MembershipVerdict yes(Mat2 h, Mat2 u) { return {Yes, std::move(h), std::move(u), "", std::nullopt}; }
  static MembershipVerdict no(std::string cert, std::optional<Elem> v = std::nullopt) {
    return {No, std::nullopt, std::nullopt, std::move(cert), std::move(v)};
  }
  static MembershipVerdict undecided(std::string reason) {
    return {Undecided, std::nullopt, std::nullopt, std::move(reason), std::nullopt};
  }
};

// ---------------------------------------------------------------------------
// The main factorization g = h q u

namespace detail {

inline void require_tau_m_odd(const InvolutionSpec& inv) {
  require(inv.kind == InvKind::TauM, Err::KindMismatch, "needs an involution tau_m");
  require(characteristic(inv.field) != 2, Err::CharTwoUnsupported,
          "characteristic-2 fields use the dedicated routines");
}

inline bool exactly_zero(const Elem& e) { return e.is_zero(); }

}  // namespace detail

inline DecompResult decompose_hqu(const Mat2& g, const InvolutionSpec& inv) {
  detail::require_tau_m_odd(inv);
  require(field_equal(g.field(), inv.field), Err::FieldMismatch, "element in a different field");
  require_sl2(g);
  const FieldRef& f = inv.field;
  const Elem& m = inv.m;
  const Mat2 id = Mat2::identity(f);

  if (detail::exactly_zero(g.e21)) {
    // Triangular case: g = t * u with the torus tau-split.
    DecompResult r{id, id, Mat2::diag(g.e11, g.e22), Mat2::unipotent(div(g.e12, g.e11)),
                   FactorOrder::HQU, Branch::BorelCase};
    validate_decomposition(r, g, inv);
    return r;
  }

  if (f->kind == FieldKind::PAdic) {
    require(g.e11.pad().zkind != PadicElem::ZeroToPrec && g.e21.pad().zkind != PadicElem::ZeroToPrec,
            Err::PrecisionExhausted, "cannot select a factorization branch at this precision");
  }

  // Big-cell gauge with the left torus parameter fixed to 1.
  Elem b = neg(g.e21);
  Elem beta = neg(g.e22);

  if (!detail::exactly_zero(g.e11)) {
    Elem alpha = div(g.e11, g.e21);
    Elem b2 = mul(b, b);
    Elem num = sub(sub(m, b2), mul(mul(m, alpha), mul(beta, b)));
    Elem den = mul(mul(m, alpha), b2);
    Elem u1 = div(num, den);
    Mat2 u0 = Mat2::unipotent(u1);
    Mat2 q = g * u0;
    DecompResult r{id, id, q, Mat2::unipotent(neg(u1)), FactorOrder::HQU, Branch::BigCellAlphaNonzero};
    validate_decomposition(r, g, inv);
    return r;
  }

  // Left column starts with an exact zero: correct with a fixed-group element;
  // retry later parametrization points if a candidate fails validation.
  for (int attempt = 0; attempt < 8; ++attempt) {
    Mat2 h0;
    try {
      h0 = nontrivial_fixed_point(inv, attempt);
    } catch (const Sl2Error& e) {
      if (e.code() != Err::OnlyCentralFixedPoints) throw;
      // Central fixed group: only over F3 with m a square, where the whole
      // big cell with vanishing corner already lies in the extended symmetric
      // space.
      DecompResult r{id, id, g, id, FactorOrder::HQU, Branch::F3Degenerate};
      validate_decomposition(r, g, inv);
      return r;
    }
    const Elem& a1 = h0.e11;
    const Elem& b1 = h0.e12;
    Elem b2 = mul(b, b);
    Elem num = sub(sub(mul(m, a1), mul(b2, a1)), mul(mul(m, b1), mul(beta, b)));
    Elem den = mul(mul(m, b2), b1);
    if (is_zero_at_precision(den)) continue;
    Elem u1 = div(num, den);
    Mat2 u0 = Mat2::unipotent(u1);
    Mat2 q = h0 * g * u0;
    if (!in_extended_symmetric(inv, q)) continue;
    DecompResult r{inverse(h0), id, q, Mat2::unipotent(neg(u1)), FactorOrder::HQU,
                   Branch::BigCellAlphaZero};
    validate_decomposition(r, g, inv);
    return r;
  }
  fail(Err::PostconditionViolation, "no valid corrector found for the vanishing-corner case");
}

// ---------------------------------------------------------------------------
// Does g lie in H * Qtilde (no unipotent factor needed)?
//
// The condition h^{-1} g in Qtilde is linear in the fixed-group parameters
// (a, b): A a + B b = 0 with A = e21 + m e12 and B = -m tr(g); intersecting
// with the conic a^2 - m b^2 = 1 leaves the discriminant B^2 - m A^2, whose
// square class decides membership.
inline MembershipVerdict requires_unipotent(const Mat2& g, const InvolutionSpec& inv) {
  detail::require_tau_m_odd(inv);
  require_sl2(g);
  const FieldRef& f = inv.field;
  const Elem& m = inv.m;
  if (in_extended_symmetric(inv, g)) {
    // members of the extended space need no factors at all
    return MembershipVerdict::yes(Mat2::identity(f));
  }
  Elem A = add(g.e21, mul(m, g.e12));
  Elem B = neg(mul(m, trace(g)));
  if (f->kind == FieldKind::PAdic) {
    if (!A.is_zero() && A.pad().zkind == PadicElem::ZeroToPrec)
      return MembershipVerdict::undecided("linear coefficient has no known digits");
    if (!B.is_zero() && B.pad().zkind == PadicElem::ZeroToPrec)
      return MembershipVerdict::undecided("linear coefficient has no known digits");
  }
  Elem D = sub(mul(B, B), mul(m, mul(A, A)));
  if (is_zero_at_precision(D)) {
    return MembershipVerdict::no("constraint line is tangent to the fixed-group conic (discriminant 0)", D);
  }
  bool square;
  try {
    square = is_square(D);
  } catch (const Sl2Error& e) {
    if (e.code() == Err::PrecisionExhausted) return MembershipVerdict::undecided("discriminant precision exhausted");
    throw;
  }
  if (!square) {
    return MembershipVerdict::no("discriminant is a non-square, the line misses the conic", D);
  }
  Elem t = inv_elem(*sqrt_in_field(D));
  Mat2 h = Mat2::make(mul(t, B), neg(mul(t, A)), neg(mul(m, mul(t, A))), mul(t, B));
  require(in_fixed_group(inv, h), Err::PostconditionViolation, "candidate h not in the fixed group");
  require(in_extended_symmetric(inv, inverse(h) * g), Err::PostconditionViolation,
          "h^{-1} g not in the extended symmetric space");
  return MembershipVerdict::yes(h);
}

// ---------------------------------------------------------------------------
// g = h u membership (the Iwasawa-style product without the symmetric factor)

inline MembershipVerdict decompose_hu(const Mat2& g, const InvolutionSpec& inv) {
  require(inv.kind == InvKind::TauM, Err::KindMismatch, "needs an involution tau_m");
  require_sl2(g);
  const FieldRef& f = inv.field;
  const Elem& m = inv.m;
  // h is forced entrywise: a = e11, m b = e21.
  Elem a = g.e11;
  Elem b = div(g.e21, m);
  Elem conic = sub(mul(a, a), mul(m, mul(b, b)));
  if (conic != elem_one(f)) {
    return MembershipVerdict::no("forced fixed-group entries violate a^2 - m b^2 = 1", conic);
  }
  Mat2 h = Mat2::make(a, b, g.e21, a);
  Mat2 u = inverse(h) * g;
  if (!in_unipotent(u)) {
    return MembershipVerdict::no("residual factor is not upper unipotent");
  }
  return MembershipVerdict::yes(h, u);
}

// g in H * w * U with w = [[0,1],[-1,0]]: the forced parameters are
// a = -e21, b = -e11, and the conic condition reads e21^2 - m e11^2 = 1.
inline MembershipVerdict member_hwu(const Mat2& g, const InvolutionSpec& inv) {
  require(inv.kind == InvKind::TauM, Err::KindMismatch, "needs an involution tau_m");
  require_sl2(g);
  const FieldRef& f = inv.field;
  const Elem& m = inv.m;
  if (f->kind == FieldKind::PAdic &&
      (g.e11.pad().zkind == PadicElem::ZeroToPrec || g.e21.pad().zkind == PadicElem::ZeroToPrec))
    return MembershipVerdict::undecided("forced entries have no known digits");
  Elem a = neg(g.e21);
  Elem b = neg(g.e11);
  Elem conic = sub(mul(a, a), mul(m, mul(b, b)));
  if (conic != elem_one(f)) {
    return MembershipVerdict::no("forced fixed-group entries violate a^2 - m b^2 = 1", conic);
  }
  Mat2 h = Mat2::make(a, b, mul(m, b), a);
  Elem u1 = b.is_zero() ? neg(div(g.e22, a)) : div(sub(a, g.e12), b);
  Mat2 u = Mat2::unipotent(u1);
  Mat2 prod = h * Mat2::weyl(f) * u;
  require(prod == g, Err::PostconditionViolation, "h w u product mismatch");
  return MembershipVerdict::yes(h, u);
}

// ---------------------------------------------------------------------------
// Reorderings of the three factors

namespace detail {

// g = q u h with the fixed-group correction applied on the right.
inline DecompResult decompose_quh(const Mat2& g, const InvolutionSpec& inv) {
  require_tau_m_odd(inv);
  require_sl2(g);
  const FieldRef& f = inv.field;
  const Elem& m = inv.m;
  const Mat2 id = Mat2::identity(f);
  if (f->kind == FieldKind::PAdic) {
    require(g.e11.pad().zkind != PadicElem::ZeroToPrec && g.e21.pad().zkind != PadicElem::ZeroToPrec,
            Err::PrecisionExhausted, "cannot select a factorization branch at this precision");
  }
  Mat2 h_right = id;
  if (exactly_zero(g.e11)) {
    try {
      h_right = nontrivial_fixed_point(inv);
    } catch (const Sl2Error& e) {
      if (e.code() != Err::OnlyCentralFixedPoints) throw;
      h_right = id;  // central case: the pattern check below closes the gap
    }
  }
  Mat2 X = g * h_right;
  Elem y = neg(div(X.e21, m));
  if (!exactly_zero(X.e11)) {
    Elem u1 = div(sub(X.e12, y), X.e11);
    Elem z = add(X.e22, mul(m, mul(y, u1)));
    Mat2 q = Mat2::make(X.e11, y, X.e21, z);
    DecompResult r{inverse(h_right), id, q, Mat2::unipotent(u1), FactorOrder::QUH, Branch::Reordered};
    validate_decomposition(r, g, inv);
    return r;
  }
  require(X.e21 == neg(mul(m, X.e12)), Err::PostconditionViolation,
          "vanishing-corner product not in the extended symmetric space");
  DecompResult r{inverse(h_right), id, X, id, FactorOrder::QUH, Branch::Reordered};
  validate_decomposition(r, g, inv);
  return r;
}

}  // namespace detail

// All six factor orders.  H and Qtilde commute as sets through conjugation;
// the remaining orders come from factoring g^{-1} and inverting.
inline DecompResult decompose_reordered(const Mat2& g, const InvolutionSpec& inv, FactorOrder order) {
  const FieldRef& f = inv.field;
  const Mat2 id = Mat2::identity(f);
  switch (order) {
    case FactorOrder::HQU:
      return decompose_hqu(g, inv);
    case FactorOrder::QHU: {
      DecompResult base = decompose_hqu(g, inv);
      Mat2 q2 = base.h * base.q * inverse(base.h);
      DecompResult r{base.h, id, q2, base.u, FactorOrder::QHU, Branch::Reordered};
      validate_decomposition(r, g, inv);
      return r;
    }
    case FactorOrder::UQH: {
      DecompResult base = decompose_hqu(inverse(g), inv);
      DecompResult r{inverse(base.h), id, inverse(base.q), inverse(base.u), FactorOrder::UQH,
                     Branch::Reordered};
      validate_decomposition(r, g, inv);
      return r;
    }
    case FactorOrder::UHQ: {
      DecompResult base = decompose_reordered(inverse(g), inv, FactorOrder::QHU);
      DecompResult r{inverse(base.h), id, inverse(base.q), inverse(base.u), FactorOrder::UHQ,
                     Branch::Reordered};
      validate_decomposition(r, g, inv);
      return r;
    }
    case FactorOrder::QUH:
      return detail::decompose_quh(g, inv);
    case FactorOrder::HUQ: {
      DecompResult base = detail::decompose_quh(inverse(g), inv);
      DecompResult r{inverse(base.h), id, inverse(base.q), inverse(base.u), FactorOrder::HUQ,
                     Branch::Reordered};
      validate_decomposition(r, g, inv);
      return r;
    }
    case FactorOrder::HWQ:
      fail(Err::BadParameter, "h w q is the characteristic-2 finite form");
  }
  fail(Err::BadParameter, "bad factor order");
}

// ---------------------------------------------------------------------------
// Characteristic 2

// Finite char-2 form g = h q or g = h w q with w = [[0,1],[1,0]].
inline DecompResult decompose_char2_finite(const Mat2& g, const InvolutionSpec& inv) {
  require(inv.kind == InvKind::TauZeroChar2, Err::KindMismatch, "needs the char-2 involution");
  require(characteristic(inv.field) == 2, Err::NotChar2, "field must have characteristic 2");
  require_sl2(g);
  const FieldRef& f = inv.field;
  const Mat2 id = Mat2::identity(f);
  const Elem &a = g.e11, &b = g.e12, &c = g.e21, &d = g.e22;
  if (!c.is_zero()) {
    Mat2 h = Mat2::unipotent(div(add(add(a, c), d), c));
    Elem q12 = div(add(add(elem_one(f), mul(c, d)), mul(d, d)), c);
    Mat2 q = Mat2::make(add(c, d), q12, c, d);
    DecompResult r{h, id, q, id, FactorOrder::HWQ, Branch::Char2Finite};
    validate_decomposition(r, g, inv);
    return r;
  }
  Mat2 h = Mat2::unipotent(add(mul(a, a), mul(a, b)));
  Mat2 w = Mat2::make(elem_zero(f), elem_one(f), elem_one(f), elem_zero(f));
  Mat2 q = Mat2::make(elem_zero(f), inv_elem(a), a, a);
  DecompResult r{h, w, q, id, FactorOrder::HWQ, Branch::Char2Finite};
  validate_decomposition(r, g, inv);
  return r;
}

struct Char2InfiniteResult {
  MembershipVerdict verdict;
  std::optional<DecompResult> decomp;
};

// Infinite char-2 form g = h q u over a rational function field.  The stated
// corner recipe needs a fixed-group element [[0,b],[m b,0]], which exists only
// for square m; otherwise a bounded search over low-height fixed-group
// elements runs and exhaustion is reported, never guessed.
inline Char2InfiniteResult decompose_char2_infinite(const Mat2& g, const InvolutionSpec& inv,
                                                    int degree_budget = 3) {
  require(inv.kind == InvKind::TauM, Err::NotChar2Infinite, "needs tau_m over an infinite char-2 field");
  require(characteristic(inv.field) == 2 && !is_finite_field(inv.field), Err::NotChar2Infinite,
          "needs an infinite field of characteristic 2");
  require_sl2(g);
  const FieldRef& f = inv.field;
  const Elem& m = inv.m;
  const Mat2 id = Mat2::identity(f);

  auto finish = [&](Mat2 h_left, Mat2 q, Mat2 u_right) -> Char2InfiniteResult {
    // q = h_left * g * u_right, so g = h_left^{-1} q u_right^{-1}
    DecompResult r{inverse(h_left), id, std::move(q), inverse(u_right), FactorOrder::HQU,
                   Branch::Char2Infinite};
    validate_decomposition(r, g, inv);
    MembershipVerdict v = MembershipVerdict::yes(r.h, r.u);
    return {std::move(v), std::move(r)};
  };

  if (g.e21.is_zero()) {
    Mat2 q = Mat2::diag(g.e11, g.e22);
    Mat2 u = Mat2::unipotent(div(g.e12, g.e11));
    DecompResult r{id, id, q, u, FactorOrder::HQU, Branch::Char2Infinite};
    validate_decomposition(r, g, inv);
    return {MembershipVerdict::yes(r.h, r.u), r};
  }

  Elem u1_stated = div(add(g.e11, g.e22), g.e21);
  if (is_square(m)) {
    Elem b = inv_elem(*sqrt_in_field(m));
    Mat2 h = Mat2::make(elem_zero(f), b, mul(m, b), elem_zero(f));
    Mat2 u = Mat2::unipotent(u1_stated);
    Mat2 q = h * g * u;
    return finish(h, q, u);
  }

  // Bounded search: h = Id first, then fixed-group elements with entries of
  // bounded degree; each candidate leaves a single linear condition on u.
  auto try_h = [&](const Mat2& hc) -> std::optional<Char2InfiniteResult> {
    Mat2 X = hc * g;
    if (!X.e11.is_zero()) {
      Elem u1 = div(add(X.e21, mul(m, X.e12)), mul(m, X.e11));
      Mat2 u = Mat2::unipotent(u1);
      Mat2 q = X * u;
      if (in_extended_symmetric(inv, q)) return finish(hc, q, u);
      return std::nullopt;
    }
    if (X.e21 == mul(m, X.e12)) return finish(hc, X, id);
    return std::nullopt;
  };
  if (auto r = try_h(id)) return *r;
  unsigned long long count = 1;
  for (int i = 0; i <= degree_budget; ++i) count *= 2;
  for (unsigned long long bi = 1; bi < count * count; ++bi) {
    Poly bnum = poly_from_index(bi % count, 2);
    Poly bden = poly_from_index(bi / count + 1, 2);
    if (poly_is_zero(bnum) || poly_is_zero(bden)) continue;
    Elem b = make_func(f, bnum, bden);
    Elem a2 = add(elem_one(f), mul(m, mul(b, b)));
    if (a2.is_zero() || !is_square(a2)) continue;
    Elem a = *sqrt_in_field(a2);
    Mat2 hc = Mat2::make(a, b, mul(m, b), a);
    if (!in_fixed_group(inv, hc)) continue;
    if (auto r = try_h(hc)) return *r;
  }
  return {MembershipVerdict::undecided("corner recipe needs a square m; bounded fixed-group search (degree <= " +
                                       std::to_string(degree_budget) + ") found no corrector"),
          std::nullopt};
}

}  // namespace sl2
