#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "numutil.hpp"

namespace sl2 {

// Dense polynomials over F_p, coefficients ascending, no trailing zeros.
using Poly = std::vector<long long>;

inline void poly_trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int poly_deg(const Poly& a) { return static_cast<int>(a.size()) - 1; }

inline bool poly_is_zero(const Poly& a) { return a.empty(); }

inline Poly poly_norm(Poly a, long long p) {
  for (auto& c : a) c = mod_norm(c, p);
  poly_trim(a);
  return a;
}

inline Poly poly_add(const Poly& a, const Poly& b, long long p) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) {
    long long v = (i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0);
    r[i] = mod_norm(v, p);
  }
  poly_trim(r);
  return r;
}

inline Poly poly_sub(const Poly& a, const Poly& b, long long p) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) {
    long long v = (i < a.size() ? a[i] : 0) - (i < b.size() ? b[i] : 0);
    r[i] = mod_norm(v, p);
  }
  poly_trim(r);
  return r;
}

inline Poly poly_mul(const Poly& a, const Poly& b, long long p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) {
      r[i + j] = mod_norm(r[i + j] + mulmod(a[i], b[j], p), p);
    }
  }
  poly_trim(r);
  return r;
}

inline Poly poly_scale(const Poly& a, long long s, long long p) {
  Poly r = a;
  for (auto& c : r) c = mulmod(c, mod_norm(s, p), p);
  poly_trim(r);
  return r;
}

inline std::pair<Poly, Poly> poly_divmod(Poly a, const Poly& b, long long p) {
  require(!b.empty(), Err::DivisionByZero, "polynomial division by zero");
  Poly q;
  long long lead_inv = invmod(b.back(), p);
  if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, 0);
  while (a.size() >= b.size() && !a.empty()) {
    long long coef = mulmod(a.back(), lead_inv, p);
    size_t shift = a.size() - b.size();
    q[shift] = coef;
    for (size_t i = 0; i < b.size(); ++i) {
      a[shift + i] = mod_norm(a[shift + i] - mulmod(coef, b[i], p), p);
    }
    poly_trim(a);
  }
  poly_trim(q);
  return {q, a};
}

inline Poly poly_mod(const Poly& a, const Poly& b, long long p) { return poly_divmod(a, b, p).second; }

inline Poly poly_gcd(Poly a, Poly b, long long p) {
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = b;
    b = r;
  }
  if (!a.empty() && a.back() != 1) a = poly_scale(a, invmod(a.back(), p), p);
  return a;
}

inline Poly poly_powmod(Poly a, mpz_class e, const Poly& mod, long long p) {
  Poly r = {1};
  a = poly_mod(a, mod, p);
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = poly_mod(poly_mul(r, a, p), mod, p);
    a = poly_mod(poly_mul(a, a, p), mod, p);
    e >>= 1;
  }
  return r;
}

// Inverse of a modulo m in F_p[t]; requires gcd(a, m) = 1.
inline Poly poly_invmod(const Poly& a, const Poly& m, long long p) {
  Poly r0 = m, r1 = poly_mod(a, m, p);
  Poly t0 = {}, t1 = {1};
  while (!r1.empty()) {
    auto [q, r2] = poly_divmod(r0, r1, p);
    Poly t2 = poly_sub(t0, poly_mul(q, t1, p), p);
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  require(poly_deg(r0) == 0, Err::DivisionByZero, "inverse of non-unit polynomial");
  return poly_scale(t0, invmod(r0[0], p), p);
}

// Decodes the index-th polynomial over F_p in base-p counting order.
inline Poly poly_from_index(unsigned long long idx, long long p) {
  Poly out;
  while (idx > 0) {
    out.push_back(static_cast<long long>(idx % static_cast<unsigned long long>(p)));
    idx /= static_cast<unsigned long long>(p);
  }
  return out;
}

// Brute-force irreducibility over F_p: no monic divisor of degree 1..deg/2.
inline bool poly_is_irreducible(const Poly& f, long long p) {
  int n = poly_deg(f);
  if (n <= 0) return false;
  if (n == 1) return true;
  for (int d = 1; d <= n / 2; ++d) {
    unsigned long long count = 1;
    for (int i = 0; i < d; ++i) {
      count *= static_cast<unsigned long long>(p);
      require(count <= 10000000ull, Err::TooLarge, "irreducibility check budget");
    }
    for (unsigned long long idx = 0; idx < count; ++idx) {
      Poly g = poly_from_index(idx, p);
      g.resize(d + 1, 0);
      g[d] = 1;
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

// Lexicographically least monic irreducible of the given degree.
inline Poly default_modulus(long long p, int degree) {
  unsigned long long count = 1;
  for (int i = 0; i < degree; ++i) count *= static_cast<unsigned long long>(p);
  for (unsigned long long idx = 0; idx < count; ++idx) {
    Poly f = poly_from_index(idx, p);
    f.resize(degree + 1, 0);
    f[degree] = 1;
    if (poly_is_irreducible(f, p)) return f;
  }
  fail(Err::BadParameter, "no irreducible polynomial found");
}

// Exact polynomial square root, empty when none exists.
inline std::optional<Poly> poly_sqrt(const Poly& h, long long p) {
  if (h.empty()) return Poly{};
  int n = poly_deg(h);
  if (n % 2 != 0) return std::nullopt;
  if (p == 2) {
    // Squaring is the Frobenius: only even-degree terms survive.
    Poly g((n / 2) + 1, 0);
    for (int i = 0; i <= n; ++i) {
      long long c = i < static_cast<int>(h.size()) ? h[i] : 0;
      if (i % 2 == 1) {
        if (c != 0) return std::nullopt;
      } else {
        g[i / 2] = c;
      }
    }
    poly_trim(g);
    return g;
  }
  long long lead = sqrt_mod_prime(h.back(), p);
  if (lead < 0) return std::nullopt;
  int m = n / 2;
  Poly g(m + 1, 0);
  g[m] = lead;
  long long inv2lead = invmod(mulmod(2, lead, p), p);
  // Peel coefficients from the top: coefficient of t^(m+k) in g^2 is linear in g[k].
  for (int k = m - 1; k >= 0; --k) {
    long long acc = 0;
    int target = m + k;
    for (int i = k + 1; i <= m; ++i) {
      int j = target - i;
      if (j < 0 || j > m || j <= k) continue;
      acc = mod_norm(acc + mulmod(g[i], g[j], p), p);
    }
    long long want = target < static_cast<int>(h.size()) ? h[target] : 0;
    g[k] = mulmod(mod_norm(want - acc, p), inv2lead, p);
  }
  if (poly_mul(g, g, p) != h) return std::nullopt;
  // Canonical branch: leading coefficient in [1, p/2].
  if (g.back() > p - g.back()) g = poly_scale(g, p - 1, p);
  return g;
}

// Squarefree kernel by trial division with monic factors of ascending degree;
// a monic divisor of minimal degree is automatically irreducible.  The
// constant residue is reduced to its own square class.
inline Poly poly_squarefree_kernel(Poly a, long long p) {
  require(!poly_is_zero(a), Err::ZeroArgument, "kernel of zero polynomial");
  require(poly_deg(a) <= 24, Err::TooLarge, "squarefree kernel degree budget");
  Poly kernel = {1};
  for (int d = 1; d <= poly_deg(a); ++d) {
    unsigned long long count = 1;
    for (int i = 0; i < d; ++i) count *= static_cast<unsigned long long>(p);
    for (unsigned long long idx = 0; idx < count && d <= poly_deg(a); ++idx) {
      Poly g = poly_from_index(idx, p);
      g.resize(d + 1, 0);
      g[d] = 1;
      int e = 0;
      while (true) {
        auto [quo, rem] = poly_divmod(a, g, p);
        if (!rem.empty()) break;
        a = quo;
        ++e;
      }
      if (e % 2 == 1) kernel = poly_mul(kernel, g, p);
    }
  }
  long long c = a.empty() ? 1 : a[0];  // residual constant
  if (p > 2 && legendre(c, p) == -1) kernel = poly_scale(kernel, least_nonresidue(p), p);
  return kernel;
}

inline std::string poly_to_string(const Poly& a) {
  if (a.empty()) return "0";
  std::string out;
  bool first = true;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    if (!first) out += "+";
    first = false;
    if (i == 0) {
      out += std::to_string(a[i]);
    } else {
      if (a[i] != 1) out += std::to_string(a[i]) + "*";
      out += "t";
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out.empty() ? "0" : out;
}

}  // namespace sl2
