#pragma once

#include <gmpxx.h>

#include <vector>

#include "field.hpp"
#include "numutil.hpp"

namespace sl2 {

// Place of Q: a finite prime or the real place.
struct Place {
  bool infinite = false;
  long long p = 0;
  static Place at_infinity() { return {true, 0}; }
  static Place at_prime(long long p) {
    require(is_prime_ll(p), Err::BadParameter, "place must be prime or infinity");
    return {false, p};
  }
};

namespace detail {

// (-1)^e
inline int pm(long long e) { return e % 2 == 0 ? 1 : -1; }

inline int hilbert_zz(mpz_class A, mpz_class B, const Place& v) {
  require(A != 0 && B != 0, Err::ZeroArgument, "hilbert symbol of zero");
  if (v.infinite) return (A < 0 && B < 0) ? -1 : 1;
  long long p = v.p;
  long long alpha = padic_val_mpz(A, p);
  long long beta = padic_val_mpz(B, p);
  mpz_class u = A / mpz_pow_ll(p, alpha);
  mpz_class w = B / mpz_pow_ll(p, beta);
  if (p != 2) {
    long long lu = mpz_mod_ll(u, p), lw = mpz_mod_ll(w, p);
    int s = 1;
    if (beta % 2 != 0) s *= legendre(lu, p);
    if (alpha % 2 != 0) s *= legendre(lw, p);
    if (alpha % 2 != 0 && beta % 2 != 0) s *= pm((p - 1) / 2);
    return s;
  }
  auto eps = [](const mpz_class& n) { return mpz_mod_ll(n, 8) % 4 == 1 ? 0 : 1; };   // (n-1)/2 mod 2
  auto omg = [](const mpz_class& n) {
    long long r = mpz_mod_ll(n, 8);
    return (r == 1 || r == 7) ? 0 : 1;  // (n^2-1)/8 mod 2
  };
  long long e = static_cast<long long>(eps(u)) * eps(w) + alpha * omg(w) + beta * omg(u);
  return pm(e);
}

}  // namespace detail

// Hilbert symbol (a,b)_v over Q: +1 iff a x^2 + b y^2 - z^2 is isotropic over
// the completion at v.
inline int hilbert_symbol(const mpq_class& a, const mpq_class& b, const Place& v) {
  require(a != 0 && b != 0, Err::ZeroArgument, "hilbert symbol of zero");
  // n/d and n*d lie in the same square class
  mpz_class A = a.get_num() * a.get_den();
  mpz_class B = b.get_num() * b.get_den();
  return detail::hilbert_zz(A, B, v);
}

// Local symbol for p-adic field elements, odd residue characteristic: only the
// valuation parity and the unit residue enter the formula.
inline int hilbert_local(const Elem& a, const Elem& b) {
  require(field_equal(a.field(), b.field()), Err::FieldMismatch, "operands in different fields");
  const FieldRef& f = a.field();
  require(f->kind == FieldKind::PAdic && f->p != 2, Err::Unsupported,
          "local symbol implemented for odd p-adic fields");
  const PadicElem& x = a.pad();
  const PadicElem& y = b.pad();
  require(x.zkind == PadicElem::Unit && y.zkind == PadicElem::Unit, Err::ZeroArgument,
          "hilbert symbol needs nonzero operands");
  long long p = f->p;
  int s = 1;
  if (mod_norm(y.val, 2) == 1) s *= legendre(mpz_mod_ll(x.unit, p), p);
  if (mod_norm(x.val, 2) == 1) s *= legendre(mpz_mod_ll(y.unit, p), p);
  if (mod_norm(x.val, 2) == 1 && mod_norm(y.val, 2) == 1) s *= detail::pm((p - 1) / 2);
  return s;
}

// Isotropy of a x^2 + b y^2 - z^2 over Q by the product of local conditions:
// the symbol is +1 automatically away from 2, infinity, and the support.
inline bool is_isotropic_ternary(const mpq_class& a, const mpq_class& b) {
  require(a != 0 && b != 0, Err::ZeroArgument, "isotropy of degenerate form");
  if (hilbert_symbol(a, b, Place::at_infinity()) != 1) return false;
  if (hilbert_symbol(a, b, Place::at_prime(2)) != 1) return false;
  std::vector<long long> support = odd_prime_support(a);
  for (long long p : odd_prime_support(b)) support.push_back(p);
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  for (long long p : support) {
    if (hilbert_symbol(a, b, Place::at_prime(p)) != 1) return false;
  }
  return true;
}

}  // namespace sl2
