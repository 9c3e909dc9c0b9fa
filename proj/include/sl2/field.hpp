#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "numutil.hpp"
#include "polymod.hpp"

namespace sl2 {

class Elem;
struct FieldDesc;
using FieldRef = std::shared_ptr<const FieldDesc>;

enum class FieldKind {
  Rationals,
  PrimeField,
  GaloisField,
  PAdic,
  QuadExt,
  RationalFunctionField,
};

struct FieldDesc {
  FieldKind kind;
  long long p = 0;                  // residue characteristic where meaningful
  int degree = 1;                   // Galois extension degree
  std::vector<long long> modulus;   // Galois modulus, ascending, monic
  int precision = 0;                // p-adic working precision
  FieldRef base;                    // QuadExt base field
  std::shared_ptr<const Elem> ext_d;  // QuadExt radicand, a non-square in base
};

inline bool field_equal(const FieldRef& a, const FieldRef& b);

inline long long characteristic(const FieldRef& f) {
  switch (f->kind) {
    case FieldKind::Rationals:
    case FieldKind::PAdic:
    case FieldKind::QuadExt:
      return 0;
    case FieldKind::PrimeField:
    case FieldKind::GaloisField:
    case FieldKind::RationalFunctionField:
      return f->p;
  }
  return 0;
}

inline bool is_finite_field(const FieldRef& f) {
  return f->kind == FieldKind::PrimeField || f->kind == FieldKind::GaloisField;
}

inline unsigned long long field_size(const FieldRef& f) {
  require(is_finite_field(f), Err::BadParameter, "field_size of infinite field");
  unsigned long long q = 1;
  for (int i = 0; i < f->degree; ++i) q *= static_cast<unsigned long long>(f->p);
  return q;
}

// ---------------------------------------------------------------------------
// Element payloads

struct FiniteElem {
  Poly c;  // ascending coefficients, trimmed; PrimeField uses degree 0
  bool operator==(const FiniteElem& o) const { return c == o.c; }
};

// p-adic value p^val * unit known to `rel` significant digits, or an exact
// zero, or a value indistinguishable from zero below p^abs_prec.
struct PadicElem {
  enum Kind { ExactZero = 0, ZeroToPrec = 1, Unit = 2 };
  int zkind = ExactZero;
  long long val = 0;
  mpz_class unit = 0;
  int rel = 0;
  long long abs_prec = 0;
  bool operator==(const PadicElem& o) const {
    return zkind == o.zkind && val == o.val && unit == o.unit && rel == o.rel && abs_prec == o.abs_prec;
  }
};

struct QuadElem {
  std::shared_ptr<const Elem> x;  // x + y*sqrt(d)
  std::shared_ptr<const Elem> y;
  bool operator==(const QuadElem& o) const;
};

struct FuncElem {
  Poly num;
  Poly den;  // monic, coprime to num
  bool operator==(const FuncElem& o) const { return num == o.num && den == o.den; }
};

class Elem {
 public:
  using Payload = std::variant<mpq_class, FiniteElem, PadicElem, QuadElem, FuncElem>;

  Elem() = default;
  Elem(FieldRef f, Payload v) : f_(std::move(f)), v_(std::move(v)) {}

  const FieldRef& field() const { return f_; }
  const Payload& payload() const { return v_; }

  const mpq_class& rat() const { return std::get<mpq_class>(v_); }
  const FiniteElem& fin() const { return std::get<FiniteElem>(v_); }
  const PadicElem& pad() const { return std::get<PadicElem>(v_); }
  const QuadElem& quad() const { return std::get<QuadElem>(v_); }
  const FuncElem& func() const { return std::get<FuncElem>(v_); }

  bool is_zero() const;  // exact zero only

 private:
  FieldRef f_;
  Payload v_;
};

// ---------------------------------------------------------------------------
// Field constructors

inline FieldRef rationals() {
  static const FieldRef f = [] {
    auto d = std::make_shared<FieldDesc>();
    d->kind = FieldKind::Rationals;
    return d;
  }();
  return f;
}

inline FieldRef prime_field(long long p) {
  require(is_prime_ll(p), Err::BadParameter, "characteristic must be prime");
  auto d = std::make_shared<FieldDesc>();
  d->kind = FieldKind::PrimeField;
  d->p = p;
  d->degree = 1;
  return d;
}

inline FieldRef galois_field(long long p, std::vector<long long> modulus) {
  require(is_prime_ll(p), Err::BadParameter, "characteristic must be prime");
  Poly m = poly_norm(std::move(modulus), p);
  int r = poly_deg(m);
  require(r >= 2 && r <= 8, Err::BadParameter, "extension degree must be in [2,8]");
  require(m.back() == 1, Err::BadParameter, "modulus must be monic");
  require(poly_is_irreducible(m, p), Err::BadParameter, "modulus must be irreducible");
  auto d = std::make_shared<FieldDesc>();
  d->kind = FieldKind::GaloisField;
  d->p = p;
  d->degree = r;
  d->modulus = std::move(m);
  return d;
}

inline FieldRef galois_field_default(long long p, int degree) {
  return galois_field(p, default_modulus(p, degree));
}

inline FieldRef padic_field(long long p, int precision = 20) {
  require(is_prime_ll(p), Err::BadParameter, "p must be prime");
  require(precision >= 4, Err::BadParameter, "p-adic precision must be >= 4");
  auto d = std::make_shared<FieldDesc>();
  d->kind = FieldKind::PAdic;
  d->p = p;
  d->precision = precision;
  return d;
}

inline FieldRef rational_function_field(long long p) {
  require(is_prime_ll(p), Err::BadParameter, "characteristic must be prime");
  auto d = std::make_shared<FieldDesc>();
  d->kind = FieldKind::RationalFunctionField;
  d->p = p;
  return d;
}

inline FieldRef quad_ext(const FieldRef& base, const Elem& d);  // defined after is_square

// ---------------------------------------------------------------------------
// Element constructors and coercion

inline mpz_class mpz_pow_ll(long long base, long long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(e));
  return r;
}

// Normalizes a p-adic unit candidate; strips p-divisibility into val.
inline PadicElem padic_normalize(long long p, long long val, mpz_class unit, long long rel) {
  long long abs_target = val + rel;
  if (rel <= 0) return PadicElem{PadicElem::ZeroToPrec, 0, 0, 0, abs_target};
  mpz_class pk = mpz_pow_ll(p, rel);
  mpz_mod(unit.get_mpz_t(), unit.get_mpz_t(), pk.get_mpz_t());
  if (unit == 0) return PadicElem{PadicElem::ZeroToPrec, 0, 0, 0, abs_target};
  long long s = padic_val_mpz(unit, p);
  if (s > 0) {
    val += s;
    rel -= s;
    if (rel <= 0) return PadicElem{PadicElem::ZeroToPrec, 0, 0, 0, abs_target};
    mpz_class ps = mpz_pow_ll(p, s);
    mpz_divexact(unit.get_mpz_t(), unit.get_mpz_t(), ps.get_mpz_t());
    mpz_class pr = mpz_pow_ll(p, rel);
    mpz_mod(unit.get_mpz_t(), unit.get_mpz_t(), pr.get_mpz_t());
  }
  return PadicElem{PadicElem::Unit, val, unit, static_cast<int>(rel), 0};
}

inline Elem make_rational(const FieldRef& f, mpq_class q);

inline Elem elem_zero(const FieldRef& f) {
  switch (f->kind) {
    case FieldKind::Rationals: return Elem(f, mpq_class(0));
    case FieldKind::PrimeField:
    case FieldKind::GaloisField: return Elem(f, FiniteElem{{}});
    case FieldKind::PAdic: return Elem(f, PadicElem{PadicElem::ExactZero, 0, 0, 0, 0});
    case FieldKind::QuadExt:
      return Elem(f, QuadElem{std::make_shared<Elem>(elem_zero(f->base)),
                              std::make_shared<Elem>(elem_zero(f->base))});
    case FieldKind::RationalFunctionField: return Elem(f, FuncElem{{}, {1}});
  }
  fail(Err::BadParameter, "bad field kind");
}

inline long long mpz_mod_ll(const mpz_class& n, long long p) {
  return static_cast<long long>(mpz_fdiv_ui(n.get_mpz_t(), static_cast<unsigned long>(p)));
}

inline Elem make_rational(const FieldRef& f, mpq_class q) {
  q.canonicalize();
  switch (f->kind) {
    case FieldKind::Rationals:
      return Elem(f, std::move(q));
    case FieldKind::PrimeField:
    case FieldKind::GaloisField: {
      long long p = f->p;
      long long dn = mpz_mod_ll(q.get_den(), p);
      require(dn != 0, Err::DivisionByZero, "denominator not invertible in residue field");
      long long v = mulmod(mpz_mod_ll(q.get_num(), p), invmod(dn, p), p);
      return Elem(f, FiniteElem{poly_norm({v}, p)});
    }
    case FieldKind::PAdic: {
      if (q == 0) return elem_zero(f);
      long long p = f->p;
      mpz_class num = q.get_num(), den = q.get_den();
      long long vn = padic_val_mpz(num, p);
      long long vd = padic_val_mpz(den, p);
      mpz_class un = num / mpz_pow_ll(p, vn);
      mpz_class ud = den / mpz_pow_ll(p, vd);
      mpz_class pk = mpz_pow_ll(p, f->precision);
      mpz_class udinv;
      mpz_invert(udinv.get_mpz_t(), ud.get_mpz_t(), pk.get_mpz_t());
      mpz_class u = un * udinv % pk;
      if (u < 0) u += pk;
      return Elem(f, padic_normalize(p, vn - vd, u, f->precision));
    }
    case FieldKind::QuadExt:
      return Elem(f, QuadElem{std::make_shared<Elem>(make_rational(f->base, std::move(q))),
                              std::make_shared<Elem>(elem_zero(f->base))});
    case FieldKind::RationalFunctionField: {
      long long p = f->p;
      long long dn = mpz_mod_ll(q.get_den(), p);
      require(dn != 0, Err::DivisionByZero, "denominator not invertible in characteristic p");
      long long v = mulmod(mpz_mod_ll(q.get_num(), p), invmod(dn, p), p);
      return Elem(f, FuncElem{poly_norm({v}, p), {1}});
    }
  }
  fail(Err::BadParameter, "bad field kind");
}

inline Elem elem_int(const FieldRef& f, long long n) {
  return make_rational(f, mpq_class(static_cast<long>(n)));
}
inline Elem elem_one(const FieldRef& f) { return elem_int(f, 1); }

inline Elem make_finite(const FieldRef& f, Poly c) {
  require(is_finite_field(f), Err::BadParameter, "finite payload in non-finite field");
  c = poly_norm(std::move(c), f->p);
  if (f->kind == FieldKind::GaloisField) c = poly_mod(c, f->modulus, f->p);
  else require(poly_deg(c) <= 0, Err::BadParameter, "degree overflow in prime field");
  return Elem(f, FiniteElem{std::move(c)});
}

inline Elem make_padic(const FieldRef& f, long long val, mpz_class unit, int rel) {
  require(f->kind == FieldKind::PAdic, Err::BadParameter, "p-adic payload in non-p-adic field");
  return Elem(f, padic_normalize(f->p, val, std::move(unit), std::min<long long>(rel, f->precision)));
}

inline Elem make_quad(const FieldRef& f, Elem x, Elem y) {
  require(f->kind == FieldKind::QuadExt, Err::BadParameter, "quadratic payload in non-extension field");
  require(field_equal(x.field(), f->base) && field_equal(y.field(), f->base), Err::FieldMismatch,
          "components must live in the base field");
  return Elem(f, QuadElem{std::make_shared<Elem>(std::move(x)), std::make_shared<Elem>(std::move(y))});
}

inline Elem make_func(const FieldRef& f, Poly num, Poly den) {
  require(f->kind == FieldKind::RationalFunctionField, Err::BadParameter, "function payload mismatch");
  long long p = f->p;
  num = poly_norm(std::move(num), p);
  den = poly_norm(std::move(den), p);
  require(!poly_is_zero(den), Err::DivisionByZero, "zero denominator");
  Poly g = poly_gcd(num, den, p);
  if (poly_deg(g) > 0) {
    num = poly_divmod(num, g, p).first;
    den = poly_divmod(den, g, p).first;
  }
  if (den.back() != 1) {
    long long s = invmod(den.back(), p);
    num = poly_scale(num, s, p);
    den = poly_scale(den, s, p);
  }
  if (poly_is_zero(num)) den = {1};
  return Elem(f, FuncElem{std::move(num), std::move(den)});
}

// ---------------------------------------------------------------------------
// Structural equality

inline bool elem_struct_equal(const Elem& a, const Elem& b);

inline bool field_equal(const FieldRef& a, const FieldRef& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case FieldKind::Rationals: return true;
    case FieldKind::PrimeField: return a->p == b->p;
    case FieldKind::GaloisField: return a->p == b->p && a->modulus == b->modulus;
    case FieldKind::PAdic: return a->p == b->p && a->precision == b->precision;
    case FieldKind::RationalFunctionField: return a->p == b->p;
    case FieldKind::QuadExt:
      return field_equal(a->base, b->base) && elem_struct_equal(*a->ext_d, *b->ext_d);
  }
  return false;
}

inline bool elem_struct_equal(const Elem& a, const Elem& b) {
  if (!field_equal(a.field(), b.field())) return false;
  return a.payload() == b.payload();
}

inline bool QuadElem::operator==(const QuadElem& o) const {
  return elem_struct_equal(*x, *o.x) && elem_struct_equal(*y, *o.y);
}

inline bool Elem::is_zero() const {
  switch (f_->kind) {
    case FieldKind::Rationals: return rat() == 0;
    case FieldKind::PrimeField:
    case FieldKind::GaloisField: return fin().c.empty();
    case FieldKind::PAdic: return pad().zkind == PadicElem::ExactZero;
    case FieldKind::QuadExt: return quad().x->is_zero() && quad().y->is_zero();
    case FieldKind::RationalFunctionField: return func().num.empty();
  }
  return false;
}

// Zero at stored precision: exact zero or a p-adic O(p^a) tail.
inline bool is_zero_at_precision(const Elem& a) {
  if (a.field()->kind == FieldKind::PAdic) return a.pad().zkind != PadicElem::Unit;
  return a.is_zero();
}

// ---------------------------------------------------------------------------
// Arithmetic

inline void check_same_field(const Elem& a, const Elem& b) {
  require(field_equal(a.field(), b.field()), Err::FieldMismatch, "operands in different fields");
}

inline Elem add(const Elem& a, const Elem& b);
inline Elem sub(const Elem& a, const Elem& b);
inline Elem mul(const Elem& a, const Elem& b);
inline Elem neg(const Elem& a);
inline Elem inv(const Elem& a);
inline Elem div(const Elem& a, const Elem& b);

inline PadicElem padic_add(long long p, const PadicElem& a, const PadicElem& b) {
  using K = PadicElem;
  if (a.zkind == K::ExactZero) return b;
  if (b.zkind == K::ExactZero) return a;
  if (a.zkind == K::ZeroToPrec && b.zkind == K::ZeroToPrec)
    return PadicElem{K::ZeroToPrec, 0, 0, 0, std::min(a.abs_prec, b.abs_prec)};
  if (a.zkind == K::ZeroToPrec || b.zkind == K::ZeroToPrec) {
    const PadicElem& z = a.zkind == K::ZeroToPrec ? a : b;
    const PadicElem& u = a.zkind == K::ZeroToPrec ? b : a;
    long long abs_out = std::min(z.abs_prec, u.val + u.rel);
    if (u.val >= abs_out) return PadicElem{K::ZeroToPrec, 0, 0, 0, abs_out};
    return padic_normalize(p, u.val, u.unit, abs_out - u.val);
  }
  const PadicElem& lo = a.val <= b.val ? a : b;
  const PadicElem& hi = a.val <= b.val ? b : a;
  long long abs_out = std::min(a.val + a.rel, b.val + b.rel);
  if (lo.val >= abs_out) return PadicElem{K::ZeroToPrec, 0, 0, 0, abs_out};
  if (hi.val >= abs_out) return padic_normalize(p, lo.val, lo.unit, abs_out - lo.val);
  mpz_class u = lo.unit + hi.unit * mpz_pow_ll(p, hi.val - lo.val);
  return padic_normalize(p, lo.val, u, abs_out - lo.val);
}

inline PadicElem padic_neg(long long p, const PadicElem& a) {
  if (a.zkind != PadicElem::Unit) return a;
  mpz_class pk = mpz_pow_ll(p, a.rel);
  return PadicElem{PadicElem::Unit, a.val, (pk - a.unit) % pk, a.rel, 0};
}

inline PadicElem padic_mul(long long p, const PadicElem& a, const PadicElem& b) {
  using K = PadicElem;
  if (a.zkind == K::ExactZero || b.zkind == K::ExactZero) return PadicElem{K::ExactZero, 0, 0, 0, 0};
  if (a.zkind == K::ZeroToPrec || b.zkind == K::ZeroToPrec) {
    long long va = a.zkind == K::ZeroToPrec ? a.abs_prec : a.val;
    long long vb = b.zkind == K::ZeroToPrec ? b.abs_prec : b.val;
    return PadicElem{K::ZeroToPrec, 0, 0, 0, va + vb};
  }
  int rel = std::min(a.rel, b.rel);
  return padic_normalize(p, a.val + b.val, a.unit * b.unit, rel);
}

inline PadicElem padic_inv(long long p, const PadicElem& a) {
  require(a.zkind == PadicElem::Unit, Err::DivisionByZero, "p-adic divisor is zero at stored precision");
  mpz_class pk = mpz_pow_ll(p, a.rel);
  mpz_class r;
  mpz_invert(r.get_mpz_t(), a.unit.get_mpz_t(), pk.get_mpz_t());
  return PadicElem{PadicElem::Unit, -a.val, r, a.rel, 0};
}

inline Elem add(const Elem& a, const Elem& b) {
  check_same_field(a, b);
  const FieldRef& f = a.field();
  switch (f->kind) {
    case FieldKind::Rationals: return Elem(f, mpq_class(a.rat() + b.rat()));
    case FieldKind::PrimeField:
    case FieldKind::GaloisField: return Elem(f, FiniteElem{poly_add(a.fin().c, b.fin().c, f->p)});
    case FieldKind::PAdic: return Elem(f, padic_add(f->p, a.pad(), b.pad()));
    case FieldKind::QuadExt:
      return make_quad(f, add(*a.quad().x, *b.quad().x), add(*a.quad().y, *b.quad().y));
    case FieldKind::RationalFunctionField: {
      long long p = f->p;
      Poly num = poly_add(poly_mul(a.func().num, b.func().den, p), poly_mul(b.func().num, a.func().den, p), p);
      Poly den = poly_mul(a.func().den, b.func().den, p);
      return make_func(f, std::move(num), std::move(den));
    }
  }
  fail(Err::BadParameter, "bad field kind");
}

inline Elem neg(const Elem& a) {
  const FieldRef& f = a.field();
  switch (f->kind) {
    case FieldKind::Rationals: return Elem(f, mpq_class(-a.rat()));
    case FieldKind::PrimeField:
    case FieldKind::GaloisField: return Elem(f, FiniteElem{poly_sub({}, a.fin().c, f->p)});
    case FieldKind::PAdic: return Elem(f, padic_neg(f->p, a.pad()));
    case FieldKind::QuadExt: return make_quad(f, neg(*a.quad().x), neg(*a.quad().y));
    case FieldKind::RationalFunctionField:
      return Elem(f, FuncElem{poly_sub({}, a.func().num, f->p), a.func().den});
  }
  fail(Err::BadParameter, "bad field kind");
}

inline Elem sub(const Elem& a, const Elem& b) { return add(a, neg(b)); }

inline Elem mul(const Elem& a, const Elem& b) {
  check_same_field(a, b);
  const FieldRef& f = a.field();
  switch (f->kind) {
    case FieldKind::Rationals: return Elem(f, mpq_class(a.rat() * b.rat()));
    case FieldKind::PrimeField: return Elem(f, FiniteElem{poly_mul(a.fin().c, b.fin().c, f->p)});
    case FieldKind::GaloisField:
      return Elem(f, FiniteElem{poly_mod(poly_mul(a.fin().c, b.fin().c, f->p), f->modulus, f->p)});
    case FieldKind::PAdic: return Elem(f, padic_mul(f->p, a.pad(), b.pad()));
    case FieldKind::QuadExt: {
      // (x1 + y1 s)(x2 + y2 s) = x1 x2 + y1 y2 d + (x1 y2 + x2 y1) s
      const Elem& d = *f->ext_d;
      Elem x = add(mul(*a.quad().x, *b.quad().x), mul(mul(*a.quad().y, *b.quad().y), d));
      Elem y = add(mul(*a.quad().x, *b.quad().y), mul(*a.quad().y, *b.quad().x));
      return make_quad(f, std::move(x), std::move(y));
    }
    case FieldKind::RationalFunctionField:
      return make_func(f, poly_mul(a.func().num, b.func().num, f->p),
                       poly_mul(a.func().den, b.func().den, f->p));
  }
  fail(Err::BadParameter, "bad field kind");
}

inline Elem inv(const Elem& a) {
  const FieldRef& f = a.field();
  switch (f->kind) {
    case FieldKind::Rationals:
      require(a.rat() != 0, Err::DivisionByZero, "inverse of zero");
      return Elem(f, mpq_class(1 / a.rat()));
    case FieldKind::PrimeField:
      require(!a.fin().c.empty(), Err::DivisionByZero, "inverse of zero");
      return Elem(f, FiniteElem{{invmod(a.fin().c[0], f->p)}});
    case FieldKind::GaloisField:
      require(!a.fin().c.empty(), Err::DivisionByZero, "inverse of zero");
      return Elem(f, FiniteElem{poly_invmod(a.fin().c, f->modulus, f->p)});
    case FieldKind::PAdic:
      require(a.pad().zkind != PadicElem::ExactZero, Err::DivisionByZero, "inverse of zero");
      return Elem(f, padic_inv(f->p, a.pad()));
    case FieldKind::QuadExt: {
      // 1/(x + y s) = (x - y s)/(x^2 - y^2 d)
      const Elem& d = *f->ext_d;
      Elem n = sub(mul(*a.quad().x, *a.quad().x), mul(mul(*a.quad().y, *a.quad().y), d));
      require(!n.is_zero(), Err::DivisionByZero, "inverse of zero");
      Elem ninv = inv(n);
      return make_quad(f, mul(*a.quad().x, ninv), neg(mul(*a.quad().y, ninv)));
    }
    case FieldKind::RationalFunctionField:
      require(!a.func().num.empty(), Err::DivisionByZero, "inverse of zero");
      return make_func(f, a.func().den, a.func().num);
  }
  fail(Err::BadParameter, "bad field kind");
}

inline Elem div(const Elem& a, const Elem& b) { return mul(a, inv(b)); }

// Alias for call sites where a local named `inv` shadows the function.
inline Elem inv_elem(const Elem& a) { return inv(a); }

inline Elem operator+(const Elem& a, const Elem& b) { return add(a, b); }
inline Elem operator-(const Elem& a, const Elem& b) { return sub(a, b); }
inline Elem operator*(const Elem& a, const Elem& b) { return mul(a, b); }
inline Elem operator/(const Elem& a, const Elem& b) { return div(a, b); }
inline Elem operator-(const Elem& a) { return neg(a); }

// ---------------------------------------------------------------------------
// Equality with an exact / to-precision flag

struct EqFlag {
  bool equal;
  bool exact;  // false when the verdict only holds to stored p-adic precision
};

inline EqFlag eq_flagged(const Elem& a, const Elem& b) {
  check_same_field(a, b);
  if (a.field()->kind != FieldKind::PAdic) return {a.payload() == b.payload(), true};
  const PadicElem& x = a.pad();
  const PadicElem& y = b.pad();
  using K = PadicElem;
  if (x.zkind == K::ExactZero && y.zkind == K::ExactZero) return {true, true};
  PadicElem d = padic_add(a.field()->p, x, padic_neg(a.field()->p, y));
  if (d.zkind == K::ExactZero) return {true, true};
  if (d.zkind == K::ZeroToPrec) return {true, false};
  return {false, true};  // a known digit differs
}

inline bool operator==(const Elem& a, const Elem& b) { return eq_flagged(a, b).equal; }
inline bool operator!=(const Elem& a, const Elem& b) { return !(a == b); }

// Surviving relative precision; exact kinds report a large sentinel.
inline int surviving_precision(const Elem& a) {
  if (a.field()->kind != FieldKind::PAdic) return 1 << 20;
  const PadicElem& x = a.pad();
  if (x.zkind == PadicElem::ExactZero) return 1 << 20;
  if (x.zkind == PadicElem::ZeroToPrec) return 0;
  return x.rel;
}

// Digits to which `approx` agrees with `ref`, counted from ref's scale; exact
// agreement reports a large sentinel.
inline long long agreement_digits(const Elem& approx, const Elem& ref) {
  check_same_field(approx, ref);
  if (approx.field()->kind != FieldKind::PAdic) return approx == ref ? (1 << 20) : 0;
  long long scale = ref.pad().zkind == PadicElem::Unit ? ref.pad().val : 0;
  PadicElem d = padic_add(approx.field()->p, approx.pad(), padic_neg(approx.field()->p, ref.pad()));
  if (d.zkind == PadicElem::ExactZero) return 1 << 20;
  if (d.zkind == PadicElem::ZeroToPrec) return d.abs_prec - scale;
  return d.val - scale;
}

// ---------------------------------------------------------------------------
// Real embedding

inline bool real_embeddable(const FieldRef& f);
inline int sign_real(const Elem& a);

inline bool real_embeddable(const FieldRef& f) {
  if (f->kind == FieldKind::Rationals) return true;
  if (f->kind == FieldKind::QuadExt) return real_embeddable(f->base) && sign_real(*f->ext_d) > 0;
  return false;
}

// Sign of a under the real embedding sending each tower generator to the
// positive square root.
inline int sign_real(const Elem& a) {
  const FieldRef& f = a.field();
  if (f->kind == FieldKind::Rationals) return sgn(a.rat());
  require(f->kind == FieldKind::QuadExt, Err::NegativeUnderRealEmbedding,
          "field has no distinguished real embedding");
  const Elem& x = *a.quad().x;
  const Elem& y = *a.quad().y;
  int sx = x.is_zero() ? 0 : sign_real(x);
  int sy = y.is_zero() ? 0 : sign_real(y);
  require(sign_real(*f->ext_d) > 0, Err::NegativeUnderRealEmbedding, "tower radicand is negative");
  if (sy == 0) return sx;
  if (sx == 0) return sy;
  if (sx == sy) return sx;
  Elem cmp = sub(mul(x, x), mul(mul(y, y), *f->ext_d));
  int sc = cmp.is_zero() ? 0 : sign_real(cmp);
  if (sc == 0) return 0;
  return sc > 0 ? sx : sy;
}

// ---------------------------------------------------------------------------
// Finite-field enumeration (deterministic base-p counting order)

inline unsigned long long elem_index(const Elem& a) {
  const FieldRef& f = a.field();
  require(is_finite_field(f), Err::BadParameter, "index of non-finite element");
  unsigned long long idx = 0;
  const Poly& c = a.fin().c;
  for (int i = poly_deg(c); i >= 0; --i)
    idx = idx * static_cast<unsigned long long>(f->p) + static_cast<unsigned long long>(c[i]);
  return idx;
}

inline Elem elem_from_index(const FieldRef& f, unsigned long long idx) {
  require(is_finite_field(f), Err::BadParameter, "index into non-finite field");
  return make_finite(f, poly_from_index(idx, f->p));
}

inline std::vector<Elem> field_elements(const FieldRef& f) {
  unsigned long long q = field_size(f);
  require(q <= 10000000ull, Err::TooLarge, "field too large to enumerate");
  std::vector<Elem> out;
  out.reserve(q);
  for (unsigned long long i = 0; i < q; ++i) out.push_back(elem_from_index(f, i));
  return out;
}

// ---------------------------------------------------------------------------
// Squares and square roots

inline bool is_square(const Elem& a);
inline std::optional<Elem> sqrt_in_field(const Elem& a);

inline bool mpq_is_square(const mpq_class& q) {
  if (q < 0) return false;
  return mpz_perfect_square_p(q.get_num().get_mpz_t()) && mpz_perfect_square_p(q.get_den().get_mpz_t());
}

// Square root over a quadratic tower via the norm form:
// (u + v s)^2 = x + y s forces u^2 = (x +- sqrt(x^2 - d y^2)) / 2.
inline std::optional<Elem> quad_sqrt_impl(const Elem& a) {
  const FieldRef& f = a.field();
  const Elem& d = *f->ext_d;
  const Elem& x = *a.quad().x;
  const Elem& y = *a.quad().y;
  if (y.is_zero()) {
    if (auto r = sqrt_in_field(x)) return make_quad(f, *r, elem_zero(f->base));
    if (auto r = sqrt_in_field(div(x, d))) return make_quad(f, elem_zero(f->base), *r);
    return std::nullopt;
  }
  Elem norm = sub(mul(x, x), mul(mul(y, y), d));
  if (norm.is_zero()) return std::nullopt;  // a is not a square: it is d times one
  auto m = sqrt_in_field(norm);
  if (!m) return std::nullopt;
  Elem two = elem_int(f->base, 2);
  for (const Elem& s : {*m, neg(*m)}) {
    Elem t = div(add(x, s), two);
    if (t.is_zero()) continue;
    auto u = sqrt_in_field(t);
    if (!u) continue;
    Elem v = div(y, mul(two, *u));
    Elem cand = make_quad(f, *u, v);
    if (mul(cand, cand) == a) return cand;
  }
  return std::nullopt;
}

inline std::optional<Elem> padic_sqrt_impl(const Elem& a) {
  const FieldRef& f = a.field();
  long long p = f->p;
  const PadicElem& x = a.pad();
  require(x.zkind != PadicElem::ZeroToPrec, Err::PrecisionExhausted,
          "square root of value with no known digits");
  if (x.zkind == PadicElem::ExactZero) return a;
  if (x.val % 2 != 0) return std::nullopt;
  if (p != 2) {
    long long u0 = mpz_mod_ll(x.unit, p);
    long long r0 = sqrt_mod_prime(u0, p);
    if (r0 < 0) return std::nullopt;
    if (r0 > p - r0) r0 = p - r0;  // canonical branch: residue in [1, p/2]
    // Newton lifting r <- (r + u/r)/2 doubles the correct digits each step.
    mpz_class r(static_cast<long>(r0));
    int prec = 1;
    while (prec < x.rel) {
      prec = std::min(2 * prec, x.rel);
      mpz_class pk = mpz_pow_ll(p, prec);
      mpz_class rinv, two_inv, two(2);
      mpz_invert(rinv.get_mpz_t(), r.get_mpz_t(), pk.get_mpz_t());
      mpz_invert(two_inv.get_mpz_t(), two.get_mpz_t(), pk.get_mpz_t());
      r = (r + x.unit % pk * rinv) % pk * two_inv % pk;
      if (r < 0) r += pk;
    }
    return make_padic(f, x.val / 2, r, x.rel);
  }
  // p = 2: squares are the units congruent to 1 mod 8.
  require(x.rel >= 3, Err::PrecisionExhausted, "2-adic square test needs 3 digits");
  if (mpz_fdiv_ui(x.unit.get_mpz_t(), 8) != 1) return std::nullopt;
  mpz_class r(1);
  for (int j = 3; j < x.rel; ++j) {
    // maintain r^2 = unit mod 2^(j+1), adjusting bit j-1
    mpz_class mod = mpz_pow_ll(2, j + 1);
    mpz_class diff = (x.unit - r * r) % mod;
    if (diff < 0) diff += mod;
    if (diff != 0) r += mpz_pow_ll(2, j - 1);
  }
  int out_rel = x.rel - 1;
  mpz_class mod_out = mpz_pow_ll(2, out_rel);
  r %= mod_out;
  if (mpz_fdiv_ui(r.get_mpz_t(), 4) == 3) r = mod_out - r;  // canonical branch: root = 1 mod 4
  return make_padic(f, x.val / 2, r, out_rel);
}

inline std::optional<Elem> sqrt_in_field(const Elem& a) {
  const FieldRef& f = a.field();
  if (a.is_zero()) return a;
  switch (f->kind) {
    case FieldKind::Rationals: {
      if (!mpq_is_square(a.rat())) return std::nullopt;
      mpz_class n, d;
      mpz_sqrt(n.get_mpz_t(), a.rat().get_num().get_mpz_t());
      mpz_sqrt(d.get_mpz_t(), a.rat().get_den().get_mpz_t());
      return Elem(f, mpq_class(n) / mpq_class(d));
    }
    case FieldKind::PrimeField: {
      long long p = f->p;
      if (p == 2) return a;
      long long r = sqrt_mod_prime(a.fin().c[0], p);
      if (r < 0) return std::nullopt;
      if (r > p - r) r = p - r;  // canonical root in [0, p/2]
      return make_finite(f, {r});
    }
    case FieldKind::GaloisField: {
      if (f->p == 2) {
        // Frobenius: sqrt = a^(q/2)
        Elem r = a;
        for (int i = 0; i < f->degree - 1; ++i) r = mul(r, r);
        return r;
      }
      unsigned long long q = field_size(f);
      for (unsigned long long i = 0; i < q; ++i) {
        Elem cand = elem_from_index(f, i);
        if (mul(cand, cand) == a) return cand;  // first hit in counting order
      }
      return std::nullopt;
    }
    case FieldKind::PAdic:
      return padic_sqrt_impl(a);
    case FieldKind::QuadExt: {
      auto r = quad_sqrt_impl(a);
      if (!r) return std::nullopt;
      if (real_embeddable(f)) return sign_real(*r) < 0 ? neg(*r) : *r;
      // Deterministic branch: leading coordinate positive.
      const Elem* probe = &*r;
      while (probe->field()->kind == FieldKind::QuadExt)
        probe = probe->quad().x->is_zero() ? &*probe->quad().y : &*probe->quad().x;
      if (probe->field()->kind == FieldKind::Rationals && probe->rat() < 0) return neg(*r);
      return r;
    }
    case FieldKind::RationalFunctionField: {
      auto ns = poly_sqrt(a.func().num, f->p);
      auto ds = poly_sqrt(a.func().den, f->p);
      if (!ns || !ds) return std::nullopt;
      return make_func(f, *ns, *ds);
    }
  }
  fail(Err::BadParameter, "bad field kind");
}

inline bool is_square(const Elem& a) {
  require(!a.is_zero(), Err::ZeroArgument, "square test of zero");
  const FieldRef& f = a.field();
  switch (f->kind) {
    case FieldKind::Rationals:
      return mpq_is_square(a.rat());
    case FieldKind::PrimeField:
      if (f->p == 2) return true;
      return legendre(a.fin().c[0], f->p) == 1;
    case FieldKind::GaloisField: {
      if (f->p == 2) return true;
      mpz_class e = (mpz_class(static_cast<long>(field_size(f))) - 1) / 2;
      Poly r = poly_powmod(a.fin().c, e, f->modulus, f->p);
      return poly_deg(r) == 0 && r[0] == 1;
    }
    case FieldKind::PAdic: {
      const PadicElem& x = a.pad();
      require(x.zkind == PadicElem::Unit, Err::PrecisionExhausted,
              "square test of value with no known digits");
      if (x.val % 2 != 0) return false;
      if (f->p == 2) {
        require(x.rel >= 3, Err::PrecisionExhausted, "2-adic square test needs 3 digits");
        return mpz_fdiv_ui(x.unit.get_mpz_t(), 8) == 1;
      }
      return legendre(mpz_mod_ll(x.unit, f->p), f->p) == 1;
    }
    case FieldKind::QuadExt:
      return quad_sqrt_impl(a).has_value();
    case FieldKind::RationalFunctionField:
      return poly_sqrt(a.func().num, f->p).has_value() && poly_sqrt(a.func().den, f->p).has_value();
  }
  fail(Err::BadParameter, "bad field kind");
}

inline FieldRef quad_ext(const FieldRef& base, const Elem& d) {
  require(base->kind == FieldKind::Rationals || base->kind == FieldKind::QuadExt, Err::BadParameter,
          "quadratic extensions are built over the rationals");
  require(field_equal(d.field(), base), Err::FieldMismatch, "radicand must live in the base field");
  require(!d.is_zero(), Err::ZeroArgument, "radicand must be nonzero");
  require(!is_square(d), Err::BadParameter, "radicand must be a non-square in the base field");
  auto f = std::make_shared<FieldDesc>();
  f->kind = FieldKind::QuadExt;
  f->base = base;
  f->ext_d = std::make_shared<Elem>(d);
  return f;
}

// Lifts an element into a quadratic extension tower built over its field.
inline Elem lift_to(const FieldRef& ext, const Elem& a) {
  if (field_equal(ext, a.field())) return a;
  require(ext->kind == FieldKind::QuadExt, Err::FieldMismatch, "lift target must be an extension");
  return make_quad(ext, lift_to(ext->base, a), elem_zero(ext->base));
}

// Smallest tower containing a square root of x: the input field when x is a
// square there, else a quadratic extension by the squarefree kernel of x.
inline std::pair<FieldRef, Elem> sqrt_with_extension(const Elem& x, bool allow_negative = false) {
  const FieldRef& f = x.field();
  require(f->kind == FieldKind::Rationals || f->kind == FieldKind::QuadExt, Err::BadParameter,
          "sqrt_with_extension expects a rational or tower element");
  require(!x.is_zero(), Err::ZeroArgument, "square root of zero needs no extension");
  if (!allow_negative && real_embeddable(f)) {
    require(sign_real(x) > 0, Err::NegativeUnderRealEmbedding,
            "requested a real square root of a negative value");
  }
  if (is_square(x)) return {f, *sqrt_in_field(x)};
  if (f->kind == FieldKind::Rationals) {
    mpz_class core = squarefree_part(mpz_class(x.rat().get_num() * x.rat().get_den()));
    Elem d = Elem(f, mpq_class(core));
    FieldRef ext = quad_ext(f, d);
    Elem s = *sqrt_in_field(div(x, d));  // x = d * s^2 with s rational
    return {ext, make_quad(ext, elem_zero(f), s)};
  }
  FieldRef ext = quad_ext(f, x);
  return {ext, make_quad(ext, elem_zero(f), elem_one(f))};
}

// ---------------------------------------------------------------------------
// Square classes

struct SquareClassRep {
  FieldRef field;
  Elem rep;
  std::string label;  // "1", "p", "N_p", "pN_p", "-1", "squarefree-integer", ...
};

inline bool operator==(const SquareClassRep& a, const SquareClassRep& b) {
  return field_equal(a.field, b.field) && a.rep == b.rep;
}
inline bool operator!=(const SquareClassRep& a, const SquareClassRep& b) { return !(a == b); }

inline Elem least_nonresidue_elem(const FieldRef& f) {
  if (f->kind == FieldKind::PrimeField) return make_finite(f, {least_nonresidue(f->p)});
  unsigned long long q = field_size(f);
  for (unsigned long long i = 2; i < q; ++i) {
    Elem cand = elem_from_index(f, i);
    if (!cand.is_zero() && !is_square(cand)) return cand;
  }
  fail(Err::BadParameter, "no non-residue in field");
}

inline SquareClassRep square_class(const Elem& x) {
  require(!x.is_zero(), Err::ZeroArgument, "square class of zero");
  const FieldRef& f = x.field();
  switch (f->kind) {
    case FieldKind::Rationals: {
      mpz_class core = squarefree_part(mpz_class(x.rat().get_num() * x.rat().get_den()));
      return {f, Elem(f, mpq_class(core)), "squarefree-integer"};
    }
    case FieldKind::PrimeField:
    case FieldKind::GaloisField: {
      if (f->p == 2 || is_square(x)) return {f, elem_one(f), "1"};
      return {f, least_nonresidue_elem(f), "N_p"};
    }
    case FieldKind::PAdic: {
      long long p = f->p;
      require(p != 2, Err::Unsupported, "square classes implemented for odd residue characteristic");
      const PadicElem& v = x.pad();
      require(v.zkind == PadicElem::Unit, Err::PrecisionExhausted,
              "square class of value with no known digits");
      bool odd_val = mod_norm(v.val, 2) == 1;
      bool residue = legendre(mpz_mod_ll(v.unit, p), p) == 1;
      long long np = p % 4 == 3 ? -1 : least_nonresidue(p);
      if (!odd_val && residue) return {f, elem_one(f), "1"};
      if (!odd_val) return {f, elem_int(f, np), "N_p"};
      if (residue) return {f, elem_int(f, p), "p"};
      return {f, elem_int(f, p % 4 == 3 ? -p : p * np), "pN_p"};
    }
    case FieldKind::QuadExt: {
      // Real-emulation semantics: the tower stands in for the reals, whose
      // square classes are the two signs.
      if (real_embeddable(f)) {
        int s = sign_real(x);
        return {f, elem_int(f, s), s > 0 ? "1" : "-1"};
      }
      return {f, elem_one(f), "1"};  // closure emulation: one class
    }
    case FieldKind::RationalFunctionField: {
      long long p = f->p;
      Poly core = poly_mul(poly_squarefree_kernel(x.func().num, p), poly_squarefree_kernel(x.func().den, p), p);
      return {f, make_func(f, core, {1}), "squarefree-polynomial"};
    }
  }
  fail(Err::BadParameter, "bad field kind");
}

inline bool same_square_class(const Elem& a, const Elem& b) {
  require(!a.is_zero() && !b.is_zero(), Err::ZeroArgument, "square class of zero");
  if (a.field()->kind == FieldKind::QuadExt) return square_class(a) == square_class(b);
  return is_square(div(a, b));
}

struct SquareClassList {
  bool unbounded = false;
  std::vector<SquareClassRep> reps;
};

inline SquareClassList square_class_reps(const FieldRef& f) {
  switch (f->kind) {
    case FieldKind::PrimeField:
    case FieldKind::GaloisField: {
      if (f->p == 2) return {false, {{f, elem_one(f), "1"}}};
      return {false, {{f, elem_one(f), "1"}, {f, least_nonresidue_elem(f), "N_p"}}};
    }
    case FieldKind::PAdic: {
      long long p = f->p;
      require(p != 2, Err::Unsupported, "square classes implemented for odd residue characteristic");
      long long np = p % 4 == 3 ? -1 : least_nonresidue(p);
      return {false,
              {{f, elem_one(f), "1"},
               {f, elem_int(f, p), "p"},
               {f, elem_int(f, np), "N_p"},
               {f, elem_int(f, p % 4 == 3 ? -p : p * np), "pN_p"}}};
    }
    case FieldKind::QuadExt:
      if (real_embeddable(f)) return {false, {{f, elem_one(f), "1"}, {f, elem_int(f, -1), "-1"}}};
      return {false, {{f, elem_one(f), "1"}}};
    case FieldKind::Rationals:
    case FieldKind::RationalFunctionField:
      return {true, {}};
  }
  fail(Err::BadParameter, "bad field kind");
}

// ---------------------------------------------------------------------------
// Printing (canonical element syntax)

inline std::string elem_to_string(const Elem& a) {
  const FieldRef& f = a.field();
  switch (f->kind) {
    case FieldKind::Rationals: {
      if (a.rat().get_den() == 1) return a.rat().get_num().get_str();
      return a.rat().get_num().get_str() + "/" + a.rat().get_den().get_str();
    }
    case FieldKind::PrimeField: {
      long long v = a.fin().c.empty() ? 0 : a.fin().c[0];
      return std::to_string(v) + " (mod " + std::to_string(f->p) + ")";
    }
    case FieldKind::GaloisField: {
      std::string out = "[";
      for (int i = 0; i < f->degree; ++i) {
        if (i) out += ",";
        out += std::to_string(i <= poly_deg(a.fin().c) ? a.fin().c[i] : 0);
      }
      out += "] (mod " + std::to_string(f->p) + ", [";
      for (size_t i = 0; i < f->modulus.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(f->modulus[i]);
      }
      return out + "])";
    }
    case FieldKind::PAdic: {
      const PadicElem& x = a.pad();
      if (x.zkind == PadicElem::ExactZero) return "0";
      if (x.zkind == PadicElem::ZeroToPrec)
        return "O(" + std::to_string(f->p) + "^" + std::to_string(x.abs_prec) + ")";
      return std::to_string(f->p) + "^" + std::to_string(x.val) + " * " + x.unit.get_str() +
             " : prec " + std::to_string(x.rel);
    }
    case FieldKind::QuadExt: {
      auto wrap = [](const Elem& e) {
        std::string s = elem_to_string(e);
        return e.field()->kind == FieldKind::Rationals ? s : "(" + s + ")";
      };
      return wrap(*a.quad().x) + " + " + wrap(*a.quad().y) + "*sqrt(" + wrap(*f->ext_d) + ")";
    }
    case FieldKind::RationalFunctionField:
      return "(" + poly_to_string(a.func().num) + ")/(" + poly_to_string(a.func().den) + ") (mod " +
             std::to_string(f->p) + ")";
  }
  return "?";
}

inline std::string field_to_string(const FieldRef& f) {
  switch (f->kind) {
    case FieldKind::Rationals: return "Q";
    case FieldKind::PrimeField: return "F" + std::to_string(f->p);
    case FieldKind::GaloisField: {
      unsigned long long q = field_size(f);
      if (f->modulus == default_modulus(f->p, f->degree)) return "F" + std::to_string(q);
      std::string out = "GF(" + std::to_string(f->p) + ",[";
      for (size_t i = 0; i < f->modulus.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(f->modulus[i]);
      }
      return out + "])";
    }
    case FieldKind::PAdic: return "Qp" + std::to_string(f->p) + ":" + std::to_string(f->precision);
    case FieldKind::QuadExt:
      return field_to_string(f->base) + "(sqrt " + elem_to_string(*f->ext_d) + ")";
    case FieldKind::RationalFunctionField: return "F" + std::to_string(f->p) + "(t)";
  }
  return "?";
}

}  // namespace sl2
