#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace sl2 {

inline long long mulmod(long long a, long long b, long long m) {
  return static_cast<long long>(static_cast<__int128>(a) * b % m);
}

inline long long powmod(long long a, long long e, long long m) {
  long long r = 1 % m;
  a %= m;
  if (a < 0) a += m;
  while (e > 0) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

inline long long mod_norm(long long a, long long m) {
  a %= m;
  return a < 0 ? a + m : a;
}

// Extended Euclid; requires gcd(a, m) = 1.
inline long long invmod(long long a, long long m) {
  long long t = 0, nt = 1, r = m, nr = mod_norm(a, m);
  while (nr != 0) {
    long long q = r / nr;
    long long tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  require(r == 1, Err::DivisionByZero, "inverse of non-unit");
  return mod_norm(t, m);
}

inline bool miller_rabin(unsigned long long n) {
  if (n < 2) return false;
  for (unsigned long long p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  unsigned long long d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  auto check = [&](unsigned long long a) {
    unsigned long long x = powmod(static_cast<long long>(a % n), static_cast<long long>(d), static_cast<long long>(n));
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(static_cast<long long>(x), static_cast<long long>(x), static_cast<long long>(n));
      if (x == n - 1) return true;
    }
    return false;
  };
  for (unsigned long long a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (!check(a)) return false;
  }
  return true;
}

inline bool is_prime_ll(long long n) { return n >= 2 && miller_rabin(static_cast<unsigned long long>(n)); }

// Legendre symbol (a/p) for odd prime p: +1, -1, or 0.
inline int legendre(long long a, long long p) {
  a = mod_norm(a, p);
  if (a == 0) return 0;
  long long r = powmod(a, (p - 1) / 2, p);
  return r == 1 ? 1 : -1;
}

// Tonelli-Shanks square root mod odd prime p; -1 when a is a non-residue.
inline long long sqrt_mod_prime(long long a, long long p) {
  a = mod_norm(a, p);
  if (a == 0) return 0;
  if (p == 2) return a;
  if (legendre(a, p) != 1) return -1;
  if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
  long long q = p - 1;
  int s = 0;
  while ((q & 1) == 0) q >>= 1, ++s;
  long long z = 2;
  while (legendre(z, p) != -1) ++z;
  long long m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
  while (t != 1) {
    long long tt = t;
    int i = 0;
    while (tt != 1) {
      tt = mulmod(tt, tt, p);
      ++i;
    }
    long long b = powmod(c, 1LL << (m - i - 1), p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  return r;
}

inline long long least_nonresidue(long long p) {
  for (long long n = 2; n < p; ++n) {
    if (legendre(n, p) == -1) return n;
  }
  fail(Err::BadParameter, "no non-residue found");
}

inline const std::vector<long long>& small_primes() {
  static const std::vector<long long> primes = [] {
    const long long limit = 1000000;
    std::vector<bool> sieve(limit + 1, true);
    std::vector<long long> out;
    for (long long i = 2; i <= limit; ++i) {
      if (sieve[i]) {
        out.push_back(i);
        for (long long j = i * i; j <= limit; j += i) sieve[j] = false;
      }
    }
    return out;
  }();
  return primes;
}

inline long long padic_val_ll(long long n, long long p) {
  require(n != 0, Err::ZeroArgument, "valuation of zero");
  long long v = 0;
  while (n % p == 0) n /= p, ++v;
  return v;
}

inline long long padic_val_mpz(const mpz_class& n, long long p) {
  require(n != 0, Err::ZeroArgument, "valuation of zero");
  mpz_class q = abs(n), r;
  long long v = 0;
  mpz_class pz(static_cast<long>(p));
  while (true) {
    mpz_class quo, rem;
    mpz_fdiv_qr(quo.get_mpz_t(), rem.get_mpz_t(), q.get_mpz_t(), pz.get_mpz_t());
    if (rem != 0) break;
    q = quo;
    ++v;
  }
  return v;
}

struct Factorization {
  std::vector<std::pair<long long, int>> factors;  // (prime, exponent), primes ascending
  int sign = 1;
};

// Trial division up to 10^6 plus a primality / perfect-square check on the
// cofactor.  Inputs with a larger unfactored composite core are rejected.
inline Factorization factor_mpz(mpz_class n) {
  require(n != 0, Err::ZeroArgument, "factor of zero");
  Factorization out;
  if (n < 0) {
    out.sign = -1;
    n = -n;
  }
  for (long long p : small_primes()) {
    if (mpz_class(static_cast<long>(p)) * static_cast<long>(p) > n) break;
    int e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p))) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(p));
      ++e;
    }
    if (e > 0) out.factors.emplace_back(p, e);
  }
  if (n > 1) {
    if (n.fits_slong_p() && is_prime_ll(n.get_si())) {
      out.factors.emplace_back(n.get_si(), 1);
    } else if (mpz_probab_prime_p(n.get_mpz_t(), 40) > 0) {
      require(n.fits_slong_p(), Err::FactorizationLimit, "prime cofactor exceeds 64 bits");
      out.factors.emplace_back(n.get_si(), 1);
    } else if (mpz_perfect_square_p(n.get_mpz_t())) {
      mpz_class r;
      mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
      Factorization inner = factor_mpz(r);
      for (auto& [p, e] : inner.factors) out.factors.emplace_back(p, 2 * e);
    } else {
      fail(Err::FactorizationLimit, "unfactored composite core: " + n.get_str());
    }
  }
  return out;
}

// Squarefree kernel of a nonzero integer, sign preserved.
inline mpz_class squarefree_part(const mpz_class& n) {
  Factorization f = factor_mpz(n);
  mpz_class out = f.sign;
  for (auto& [p, e] : f.factors) {
    if (e % 2 == 1) out *= static_cast<long>(p);
  }
  return out;
}

// Odd primes dividing numerator or denominator of a nonzero rational.
inline std::vector<long long> odd_prime_support(const mpq_class& q) {
  std::vector<long long> out;
  for (const mpz_class& part : {mpz_class(q.get_num()), mpz_class(q.get_den())}) {
    if (part == 0) continue;
    Factorization f = factor_mpz(part);
    for (auto& [p, e] : f.factors) {
      if (p != 2) out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace sl2
