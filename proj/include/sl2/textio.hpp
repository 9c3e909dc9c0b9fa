#pragma once

#include <string>
#include <vector>

#include "involution.hpp"

namespace sl2 {
namespace textio {

inline std::string strip(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

// Splits on a separator at bracket depth zero (tracking (), [], {}).
inline std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '(' || ch == '[' || ch == '{') ++depth;
    if (ch == ')' || ch == ']' || ch == '}') --depth;
    if (ch == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

inline bool parse_ll(const std::string& s, long long& out) {
  std::string t = strip(s);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtoll(t.c_str(), &end, 10);
  return end && *end == '\0';
}

inline mpq_class parse_mpq(const std::string& text) {
  std::string t = strip(text);
  require(!t.empty(), Err::ParseError, "empty rational literal");
  mpq_class q;
  if (q.set_str(t, 10) != 0) fail(Err::ParseError, "bad rational literal: " + t);
  q.canonicalize();
  return q;
}

inline Poly parse_poly(const std::string& text, long long p) {
  // Sums of c, t, t^k, c*t^k.
  std::string t = strip(text);
  if (!t.empty() && t.front() == '(' && t.back() == ')') t = t.substr(1, t.size() - 2);
  Poly out;
  for (std::string term : split_top(t, '+')) {
    term = strip(term);
    if (term.empty()) fail(Err::ParseError, "empty polynomial term");
    long long coeff = 1;
    long long deg = 0;
    size_t tpos = term.find('t');
    if (tpos == std::string::npos) {
      require(parse_ll(term, coeff), Err::ParseError, "bad coefficient: " + term);
      deg = 0;
    } else {
      std::string cpart = strip(term.substr(0, tpos));
      if (!cpart.empty() && cpart.back() == '*') cpart = strip(cpart.substr(0, cpart.size() - 1));
      if (!cpart.empty()) require(parse_ll(cpart, coeff), Err::ParseError, "bad coefficient: " + term);
      std::string dpart = strip(term.substr(tpos + 1));
      if (dpart.empty()) {
        deg = 1;
      } else {
        require(dpart[0] == '^', Err::ParseError, "bad power: " + term);
        require(parse_ll(dpart.substr(1), deg), Err::ParseError, "bad exponent: " + term);
      }
    }
    require(deg >= 0 && deg <= 64, Err::ParseError, "exponent out of range");
    if (static_cast<long long>(out.size()) <= deg) out.resize(deg + 1, 0);
    out[deg] = mod_norm(out[deg] + coeff, p);
  }
  poly_trim(out);
  return out;
}

inline std::vector<long long> parse_ll_list(const std::string& text) {
  std::string t = strip(text);
  require(t.size() >= 2 && t.front() == '[' && t.back() == ']', Err::ParseError,
          "expected a bracketed coefficient list");
  std::vector<long long> out;
  for (const std::string& part : split_top(t.substr(1, t.size() - 2), ',')) {
    long long v;
    require(parse_ll(part, v), Err::ParseError, "bad list entry: " + part);
    out.push_back(v);
  }
  return out;
}

inline FieldRef parse_field(const std::string& text) {
  std::string t = strip(text);
  require(!t.empty(), Err::ParseError, "empty field spec");
  if (t == "Q") return rationals();
  if (t.rfind("Qp", 0) == 0) {
    std::string rest = t.substr(2);
    int prec = 20;
    size_t colon = rest.find(':');
    if (colon != std::string::npos) {
      long long pr;
      require(parse_ll(rest.substr(colon + 1), pr), Err::ParseError, "bad precision");
      prec = static_cast<int>(pr);
      rest = rest.substr(0, colon);
    }
    long long p;
    require(parse_ll(rest, p), Err::ParseError, "bad p-adic prime");
    return padic_field(p, prec);
  }
  if (t.rfind("GF(", 0) == 0 && t.back() == ')') {
    std::vector<std::string> parts = split_top(t.substr(3, t.size() - 4), ',');
    require(parts.size() >= 2, Err::ParseError, "GF needs a prime and a modulus");
    long long p;
    require(parse_ll(parts[0], p), Err::ParseError, "bad prime");
    std::string rest;
    for (size_t i = 1; i < parts.size(); ++i) rest += (i > 1 ? "," : "") + parts[i];
    return galois_field(p, parse_ll_list(strip(rest)));
  }
  if (t.rfind("Q(", 0) == 0) {
    // Chained extensions Q(sqrt 5)(sqrt 2) with integer radicands.
    FieldRef f = rationals();
    size_t pos = 1;
    while (pos < t.size()) {
      require(t[pos] == '(', Err::ParseError, "bad tower spec");
      size_t close = t.find(')', pos);
      require(close != std::string::npos, Err::ParseError, "unterminated tower spec");
      std::string inner = strip(t.substr(pos + 1, close - pos - 1));
      require(inner.rfind("sqrt", 0) == 0, Err::ParseError, "tower steps look like (sqrt d)");
      Elem d = make_rational(f, parse_mpq(inner.substr(4)));
      f = quad_ext(f, d);
      pos = close + 1;
    }
    return f;
  }
  if (t.front() == 'F') {
    std::string rest = t.substr(1);
    bool func = false;
    if (rest.size() > 3 && rest.substr(rest.size() - 3) == "(t)") {
      func = true;
      rest = rest.substr(0, rest.size() - 3);
    }
    long long q;
    require(parse_ll(rest, q), Err::ParseError, "bad field size");
    if (func) return rational_function_field(q);
    if (is_prime_ll(q)) return prime_field(q);
    for (long long p = 2; p * p <= q; ++p) {
      if (!is_prime_ll(p)) continue;
      long long n = q;
      int r = 0;
      while (n % p == 0) n /= p, ++r;
      if (n == 1 && r >= 2) return galois_field_default(p, r);
    }
    fail(Err::ParseError, "field size must be a prime power: " + rest);
  }
  fail(Err::ParseError, "unrecognized field spec: " + t);
}

inline Elem parse_elem(const FieldRef& f, const std::string& text);

inline Elem parse_quad_elem(const FieldRef& f, const std::string& text) {
  std::string t = strip(text);
  auto unwrap = [](std::string s) {
    s = strip(s);
    if (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
      int depth = 0;
      for (size_t i = 0; i + 1 < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') --depth;
        if (depth == 0) return s;  // outer parens do not match
      }
      return strip(s.substr(1, s.size() - 2));
    }
    return s;
  };
  // Find the top-level " + " separating x from y*sqrt(d).
  int depth = 0;
  for (size_t i = 0; i + 2 < t.size(); ++i) {
    if (t[i] == '(' || t[i] == '[') ++depth;
    if (t[i] == ')' || t[i] == ']') --depth;
    if (depth == 0 && t[i] == ' ' && t[i + 1] == '+' && t[i + 2] == ' ') {
      std::string xs = t.substr(0, i);
      std::string rest = strip(t.substr(i + 3));
      size_t star = rest.rfind("*sqrt(");
      require(star != std::string::npos && rest.back() == ')', Err::ParseError,
              "expected y*sqrt(d) after +");
      std::string ys = rest.substr(0, star);
      std::string ds = rest.substr(star + 6, rest.size() - star - 7);
      Elem x = parse_elem(f->base, unwrap(xs));
      Elem y = parse_elem(f->base, unwrap(ys));
      Elem d = parse_elem(f->base, unwrap(ds));
      require(d == *f->ext_d, Err::ParseError, "radicand does not match the field");
      return make_quad(f, x, y);
    }
  }
  // Plain base-field literal, coerced.
  return make_quad(f, parse_elem(f->base, t), elem_zero(f->base));
}

inline Elem parse_elem(const FieldRef& f, const std::string& text) {
  std::string t = strip(text);
  require(!t.empty(), Err::ParseError, "empty element literal");
  switch (f->kind) {
    case FieldKind::Rationals:
      return Elem(f, parse_mpq(t));
    case FieldKind::PrimeField: {
      size_t mod = t.find("(mod");
      std::string value = t;
      if (mod != std::string::npos) {
        std::string inner = strip(t.substr(mod + 4));
        require(!inner.empty() && inner.back() == ')', Err::ParseError, "bad (mod p) suffix");
        long long p;
        require(parse_ll(inner.substr(0, inner.size() - 1), p), Err::ParseError, "bad modulus");
        require(p == f->p, Err::FieldMismatch, "literal modulus differs from the field");
        value = t.substr(0, mod);
      }
      return make_rational(f, parse_mpq(value));
    }
    case FieldKind::GaloisField: {
      if (t.front() == '[') {
        std::string list = t;
        size_t close = t.find(']');
        require(close != std::string::npos, Err::ParseError, "unterminated coefficient list");
        list = t.substr(0, close + 1);
        return make_finite(f, parse_ll_list(list));
      }
      return make_rational(f, parse_mpq(t));
    }
    case FieldKind::PAdic: {
      if (t.rfind("O(", 0) == 0) {
        size_t caret = t.find('^');
        require(caret != std::string::npos && t.back() == ')', Err::ParseError, "bad O(p^a) literal");
        long long a;
        require(parse_ll(t.substr(caret + 1, t.size() - caret - 2), a), Err::ParseError, "bad precision cap");
        return Elem(f, PadicElem{PadicElem::ZeroToPrec, 0, 0, 0, a});
      }
      size_t caret = t.find('^');
      size_t star = t.find('*');
      if (caret != std::string::npos && star != std::string::npos && caret < star) {
        long long base;
        require(parse_ll(t.substr(0, caret), base), Err::ParseError, "bad p-adic base");
        require(base == f->p, Err::FieldMismatch, "literal prime differs from the field");
        long long val;
        require(parse_ll(t.substr(caret + 1, star - caret - 1), val), Err::ParseError, "bad valuation");
        std::string unit_part = t.substr(star + 1);
        int prec = f->precision;
        size_t colon = unit_part.find(':');
        if (colon != std::string::npos) {
          std::string ptxt = strip(unit_part.substr(colon + 1));
          require(ptxt.rfind("prec", 0) == 0, Err::ParseError, "expected prec suffix");
          long long pr;
          require(parse_ll(ptxt.substr(4), pr), Err::ParseError, "bad precision");
          prec = static_cast<int>(pr);
          unit_part = unit_part.substr(0, colon);
        }
        mpz_class unit(strip(unit_part));
        return make_padic(f, val, unit, prec);
      }
      return make_rational(f, parse_mpq(t));  // rational literal, coerced
    }
    case FieldKind::QuadExt:
      return parse_quad_elem(f, t);
    case FieldKind::RationalFunctionField: {
      size_t mod = t.rfind("(mod");
      std::string body = t;
      if (mod != std::string::npos) {
        std::string inner = strip(t.substr(mod + 4));
        require(!inner.empty() && inner.back() == ')', Err::ParseError, "bad (mod p) suffix");
        long long p;
        require(parse_ll(inner.substr(0, inner.size() - 1), p), Err::ParseError, "bad modulus");
        require(p == f->p, Err::FieldMismatch, "literal characteristic differs from the field");
        body = strip(t.substr(0, mod));
      }
      std::vector<std::string> parts = split_top(body, '/');
      if (parts.size() == 1) return make_func(f, parse_poly(parts[0], f->p), {1});
      require(parts.size() == 2, Err::ParseError, "expected (num)/(den)");
      return make_func(f, parse_poly(parts[0], f->p), parse_poly(parts[1], f->p));
    }
  }
  fail(Err::ParseError, "bad field kind");
}

inline Mat2 parse_mat(const FieldRef& f, const std::string& text) {
  std::vector<std::string> rows = split_top(strip(text), ';');
  require(rows.size() == 2, Err::ParseError, "matrix literal needs two rows");
  std::vector<std::string> r1 = split_top(rows[0], ',');
  std::vector<std::string> r2 = split_top(rows[1], ',');
  require(r1.size() == 2 && r2.size() == 2, Err::ParseError, "matrix rows need two entries");
  return Mat2::make(parse_elem(f, r1[0]), parse_elem(f, r1[1]), parse_elem(f, r2[0]),
                    parse_elem(f, r2[1]));
}

inline InvolutionSpec parse_involution(const FieldRef& f, const std::string& text) {
  std::string t = strip(text);
  if (t == "tau0") return make_tau0(f);
  require(t.rfind("tau(", 0) == 0 && t.back() == ')', Err::ParseError,
          "involutions look like tau(m) or tau0");
  return make_involution(f, parse_elem(f, t.substr(4, t.size() - 5)));
}

}  // namespace textio
}  // namespace sl2
