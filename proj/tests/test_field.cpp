#include <doctest.h>

#include <random>
#include <set>

#include <sl2/field.hpp>

using namespace sl2;

namespace {

Elem q_of(long long n, long long d = 1) {
  return make_rational(rationals(), mpq_class(static_cast<long>(n), static_cast<long>(d)));
}

// Independent oracle: the set of nonzero squares of F_p by enumeration.
std::set<long long> squares_mod(long long p) {
  std::set<long long> s;
  for (long long x = 1; x < p; ++x) s.insert(x * x % p);
  return s;
}

}  // namespace

TEST_CASE("rational arithmetic in canonical form") {
  CHECK(q_of(2, 3) + q_of(1, 6) == q_of(5, 6));
  CHECK(q_of(1, 2) - q_of(1, 2) == q_of(0));
  CHECK(elem_to_string(q_of(-6, 8)) == "-3/4");
  CHECK(inv(q_of(-2, 7)) == q_of(-7, 2));
  CHECK_THROWS_AS(inv(q_of(0)), Sl2Error);
}

TEST_CASE("prime field arithmetic") {
  auto F5 = prime_field(5);
  CHECK(mul(elem_int(F5, 3), elem_int(F5, 4)) == elem_int(F5, 2));
  CHECK(inv(elem_int(F5, 3)) == elem_int(F5, 2));
  CHECK(add(elem_int(F5, 4), elem_int(F5, 3)) == elem_int(F5, 2));
  CHECK_THROWS_AS(div(elem_int(F5, 1), elem_int(F5, 0)), Sl2Error);
  auto F7 = prime_field(7);
  CHECK_THROWS_AS(add(elem_int(F5, 1), elem_int(F7, 1)), Sl2Error);
}

TEST_CASE("galois field arithmetic and size") {
  auto F9 = galois_field(3, {1, 0, 1});
  CHECK(field_size(F9) == 9);
  Elem gen = make_finite(F9, {0, 1});
  CHECK(mul(gen, gen) == elem_int(F9, -1));  // x^2 = -1 mod the modulus
  Elem e = elem_one(F9);
  for (int i = 0; i < 8; ++i) e = mul(e, gen);
  CHECK(e == elem_one(F9));  // generator order divides q-1
  CHECK(inv(gen) == neg(gen));
  CHECK_THROWS_AS(galois_field(3, {1, 0, 0, 1}), Sl2Error);  // x^3+1 reducible
}

TEST_CASE("p-adic arithmetic tracks valuation and precision") {
  auto Q3 = padic_field(3, 5);
  Elem three = elem_int(Q3, 3);
  Elem r = inv(three);
  CHECK(r.pad().val == -1);
  CHECK(r.pad().unit == 1);
  CHECK(mul(r, three) == elem_one(Q3));
  // exact-zero versus zero to precision
  Elem z = sub(elem_int(Q3, 7), elem_int(Q3, 7));
  CHECK(z.pad().zkind == PadicElem::ZeroToPrec);
  CHECK(!z.is_zero());
  CHECK(is_zero_at_precision(z));
  EqFlag e = eq_flagged(elem_int(Q3, 7), elem_int(Q3, 7));
  CHECK(e.equal);
  CHECK(!e.exact);  // p-adic equality is to stored precision
  CHECK_THROWS_AS(inv(z), Sl2Error);
  // addition aligns valuations
  Elem s = add(elem_int(Q3, 1), elem_int(Q3, 3));
  CHECK(s == elem_int(Q3, 4));
  Elem t = add(make_rational(Q3, mpq_class(1, 3)), elem_int(Q3, 1));
  CHECK(t == make_rational(Q3, mpq_class(4, 3)));
}

TEST_CASE("p-adic inverse is involutive and precision survives") {
  auto Q7 = padic_field(7, 20);
  for (long long n : {2, 5, 13, 49, 50}) {
    for (long long d : {1, 3, 7, 21}) {
      Elem x = make_rational(Q7, mpq_class(static_cast<long>(n), static_cast<long>(d)));
      CHECK(inv(inv(x)) == x);
      CHECK(surviving_precision(inv(inv(x))) == 20);
    }
  }
}

TEST_CASE("is_square across fields") {
  CHECK(is_square(q_of(4)));
  CHECK(is_square(q_of(8, 2)));
  CHECK(!is_square(q_of(8)));
  CHECK(!is_square(q_of(-4)));
  CHECK_THROWS_AS(is_square(q_of(0)), Sl2Error);

  // F_3: frozen from the enumeration oracle
  auto F3 = prime_field(3);
  auto sq3 = squares_mod(3);
  CHECK(sq3 == std::set<long long>{1});
  CHECK(!is_square(elem_int(F3, 2)));
  CHECK(is_square(elem_int(F3, 1)));

  // 6 in Q_3: odd valuation unit pair (v=1, u=2), class pN_p
  auto Q3 = padic_field(3);
  CHECK(!is_square(elem_int(Q3, 6)));
  CHECK(is_square(elem_int(Q3, 9)));
  CHECK(!is_square(elem_int(Q3, 3)));

  // Q_2: unit squares are 1 mod 8
  auto Q2 = padic_field(2);
  CHECK(is_square(elem_int(Q2, 17)));
  CHECK(!is_square(elem_int(Q2, 3)));
  CHECK(is_square(elem_int(Q2, 4)));
  CHECK(!is_square(elem_int(Q2, 2)));
}

TEST_CASE("is_square agrees with enumeration over finite fields") {
  for (long long p : {3, 5, 7, 11, 13}) {
    auto F = prime_field(p);
    auto sq = squares_mod(p);
    for (long long x = 1; x < p; ++x) {
      CHECK(is_square(elem_int(F, x)) == (sq.count(x) > 0));
    }
  }
  auto F9 = galois_field_default(3, 2);
  int count = 0;
  for (unsigned long long i = 1; i < 9; ++i) {
    if (is_square(elem_from_index(F9, i))) ++count;
  }
  CHECK(count == 4);  // (q-1)/2 nonzero squares
}

TEST_CASE("sqrt_in_field canonical branches") {
  CHECK(*sqrt_in_field(q_of(9, 4)) == q_of(3, 2));

  auto F5 = prime_field(5);
  auto sq5 = squares_mod(5);
  CHECK(sq5 == std::set<long long>{1, 4});
  CHECK(!sqrt_in_field(elem_int(F5, 2)).has_value());
  CHECK(*sqrt_in_field(elem_int(F5, 4)) == elem_int(F5, 2));  // root in [0, p/2]

  // Hensel lift in Q_7 at precision 6, canonical branch 3 mod 7
  auto Q7 = padic_field(7, 6);
  Elem two = elem_int(Q7, 2);
  auto r = sqrt_in_field(two);
  REQUIRE(r.has_value());
  CHECK(mpz_mod_ll(r->pad().unit, 7) == 3);
  CHECK(mul(*r, *r) == two);  // verified by squaring, to full precision
  CHECK(surviving_precision(mul(*r, *r)) == 6);

  // 2-adic square root
  auto Q2 = padic_field(2, 10);
  Elem x = elem_int(Q2, 17);
  auto r2 = sqrt_in_field(x);
  REQUIRE(r2.has_value());
  CHECK(eq_flagged(mul(*r2, *r2), x).equal);
}

TEST_CASE("sqrt_with_extension builds the smallest tower") {
  auto Q = rationals();
  auto [f1, r1] = sqrt_with_extension(q_of(4));
  CHECK(field_equal(f1, Q));
  CHECK(r1 == q_of(2));

  auto [f2, r2] = sqrt_with_extension(q_of(5));
  CHECK(f2->kind == FieldKind::QuadExt);
  CHECK(mul(r2, r2) == lift_to(f2, q_of(5)));
  CHECK(*f2->ext_d == q_of(5));

  // 18 = 2 * 3^2: the radicand is the squarefree kernel 2
  auto [f3, r3] = sqrt_with_extension(q_of(18));
  CHECK(*f3->ext_d == q_of(2));
  CHECK(mul(r3, r3) == lift_to(f3, q_of(18)));

  // 10 is a non-square in Q(sqrt 5) by the norm test; the tower grows
  Elem ten = lift_to(f2, q_of(10));
  CHECK(!is_square(ten));
  auto [f4, r4] = sqrt_with_extension(ten);
  CHECK(f4->kind == FieldKind::QuadExt);
  CHECK(field_equal(f4->base, f2));
  CHECK(mul(r4, r4) == lift_to(f4, ten));

  CHECK_THROWS_AS(sqrt_with_extension(q_of(-5)), Sl2Error);
  auto [f5, r5] = sqrt_with_extension(q_of(-5), true);
  CHECK(mul(r5, r5) == lift_to(f5, q_of(-5)));
}

TEST_CASE("square roots inside quadratic towers") {
  auto Q = rationals();
  auto f = quad_ext(Q, q_of(5));
  Elem phi = make_quad(f, q_of(3, 2), q_of(1, 2));  // (3 + sqrt 5)/2 = phi^2
  auto r = sqrt_in_field(phi);
  REQUIRE(r.has_value());
  CHECK(mul(*r, *r) == phi);
  CHECK(sign_real(*r) > 0);  // canonical positive branch
  Elem nine = lift_to(f, q_of(9));
  CHECK(*sqrt_in_field(nine) == lift_to(f, q_of(3)));
}

TEST_CASE("real embedding signs") {
  auto Q = rationals();
  auto f = quad_ext(Q, q_of(5));
  // sqrt(5) - 2 > 0, 2 - sqrt(5) < 0, sqrt(5) - 3 < 0
  CHECK(sign_real(make_quad(f, q_of(-2), q_of(1))) == 1);
  CHECK(sign_real(make_quad(f, q_of(2), q_of(-1))) == -1);
  CHECK(sign_real(make_quad(f, q_of(-3), q_of(1))) == -1);
  CHECK(sign_real(make_quad(f, q_of(0), q_of(0))) == 0);
  CHECK(real_embeddable(f));
  auto fneg = quad_ext(Q, q_of(-1));
  CHECK(!real_embeddable(fneg));
}

TEST_CASE("signs deep in a nested tower") {
  auto Q = rationals();
  auto f5 = quad_ext(Q, q_of(5));
  Elem ten = lift_to(f5, q_of(10));
  auto f510 = quad_ext(f5, ten);
  // -1 - sqrt(5) + sqrt(10) is approximately -0.074
  Elem x = make_quad(f510, make_quad(f5, q_of(-1), q_of(-1)), elem_one(f5));
  CHECK(sign_real(x) == -1);
  // +1 - sqrt(5) + sqrt(10) is approximately  1.926
  Elem y = make_quad(f510, make_quad(f5, q_of(1), q_of(-1)), elem_one(f5));
  CHECK(sign_real(y) == 1);
  CHECK(real_embeddable(f510));
  CHECK(sign_real(mul(x, x)) == 1);
  CHECK(sign_real(mul(x, y)) == -1);
}

TEST_CASE("square classes: rationals") {
  CHECK(square_class(q_of(18)).rep == q_of(2));
  CHECK(square_class(q_of(-50)).rep == q_of(-2));
  CHECK(square_class(q_of(49)).rep == q_of(1));
  CHECK(square_class(q_of(3, 4)).rep == q_of(3));
  CHECK(square_class_reps(rationals()).unbounded);
  // 1/3 and 3 share a class
  CHECK(same_square_class(q_of(1, 3), q_of(3)));
  CHECK(!same_square_class(q_of(2), q_of(3)));
}

TEST_CASE("square classes: finite fields") {
  auto F5 = prime_field(5);
  auto reps5 = square_class_reps(F5);
  REQUIRE(reps5.reps.size() == 2);
  CHECK(reps5.reps[0].rep == elem_int(F5, 1));
  CHECK(reps5.reps[1].rep == elem_int(F5, 2));  // least non-residue mod 5

  auto F7 = prime_field(7);
  CHECK(squares_mod(7) == std::set<long long>{1, 2, 4});
  CHECK(square_class(elem_int(F7, 3)).rep == elem_int(F7, 3));  // least non-residue mod 7
  CHECK(square_class(elem_int(F7, 2)).rep == elem_int(F7, 1));

  auto F4 = galois_field_default(2, 2);
  CHECK(square_class_reps(F4).reps.size() == 1);  // char 2: one class
}

TEST_CASE("square classes: p-adic, both residue patterns") {
  auto Q3 = padic_field(3);
  auto reps3 = square_class_reps(Q3);
  REQUIRE(reps3.reps.size() == 4);
  CHECK(reps3.reps[0].rep == elem_int(Q3, 1));
  CHECK(reps3.reps[1].rep == elem_int(Q3, 3));
  CHECK(reps3.reps[2].rep == elem_int(Q3, -1));  // N_p = -1 when p = 3 mod 4
  CHECK(reps3.reps[3].rep == elem_int(Q3, -3));
  SquareClassRep six = square_class(elem_int(Q3, 6));
  CHECK(six.label == "pN_p");
  CHECK(six.rep == elem_int(Q3, -3));

  auto Q5 = padic_field(5);
  auto reps5 = square_class_reps(Q5);
  REQUIRE(reps5.reps.size() == 4);
  CHECK(reps5.reps[2].rep == elem_int(Q5, 2));  // least positive non-residue mod 5
  CHECK(reps5.reps[3].rep == elem_int(Q5, 10));
  CHECK(square_class(elem_int(Q5, -1)).label == "1");  // -1 is a square mod 5
}

TEST_CASE("square class partition sizes over prime fields up to 97") {
  for (long long p : {3, 5, 13, 41, 97}) {
    auto F = prime_field(p);
    long long in_class_one = 0, in_other = 0;
    for (long long x = 1; x < p; ++x) {
      if (square_class(elem_int(F, x)).label == "1") ++in_class_one;
      else ++in_other;
    }
    CHECK(in_class_one == (p - 1) / 2);
    CHECK(in_other == (p - 1) / 2);
  }
}

TEST_CASE("square class is stable under multiplication by squares") {
  auto Q3 = padic_field(3);
  auto F7 = prime_field(7);
  for (long long x : {2, 3, 5, 6, 10, 12}) {
    for (long long y : {1, 2, 3, 4}) {
      CHECK(square_class(q_of(x * y * y)).rep == square_class(q_of(x)).rep);
      CHECK(is_square(q_of(x * x)));
      Elem xp = elem_int(Q3, x);
      CHECK(square_class(mul(xp, elem_int(Q3, y * y))).rep == square_class(xp).rep);
      if (x % 7 != 0 && y % 7 != 0) {
        Elem xf = elem_int(F7, x);
        CHECK(square_class(mul(xf, elem_int(F7, y * y))).rep == square_class(xf).rep);
      }
    }
  }
}

TEST_CASE("rational function field over F_2") {
  auto f = rational_function_field(2);
  Elem t = make_func(f, {0, 1}, {1});
  Elem one = elem_one(f);
  CHECK(add(t, t).is_zero());  // characteristic 2
  Elem r = div(add(t, one), t);  // (1+t)/t
  CHECK(mul(r, t) == add(t, one));
  CHECK(!is_square(t));
  CHECK(is_square(mul(t, t)));
  auto s = sqrt_in_field(mul(t, t));
  REQUIRE(s.has_value());
  CHECK(*s == t);
  CHECK(square_class(mul(t, mul(t, t))).rep == t);  // kernel of t^3 is t
  // 1 + t^2 = (1 + t)^2 in characteristic 2
  CHECK(is_square(make_func(f, {1, 0, 1}, {1})));
}

TEST_CASE("tower squares have square roots and non-squares stay non-squares") {
  std::mt19937_64 rng(321);
  std::uniform_int_distribution<long long> small(-5, 5);
  auto Q = rationals();
  struct Cfg {
    long long d;
    long long nonsq;  // a rational that stays a non-square in Q(sqrt d)
  };
  for (const Cfg& cfg : {Cfg{5, 2}, Cfg{2, 3}, Cfg{-1, 2}}) {
    auto f = quad_ext(Q, q_of(cfg.d));
    for (int i = 0; i < 60; ++i) {
      Elem y = make_quad(f, q_of(small(rng), 2), q_of(small(rng), 3));
      if (y.is_zero()) continue;
      Elem y2 = mul(y, y);
      CHECK(is_square(y2));
      Elem r = *sqrt_in_field(y2);
      CHECK(mul(r, r) == y2);
      // the adjoined radicand became a square...
      CHECK(is_square(mul(y2, lift_to(f, q_of(cfg.d)))));
      // ...while a suitable rational non-square did not
      CHECK(!is_square(mul(y2, lift_to(f, q_of(cfg.nonsq)))));
    }
  }
}

TEST_CASE("p-adic coercion is a ring homomorphism to precision") {
  std::mt19937_64 rng(654);
  std::uniform_int_distribution<long long> num(-40, 40);
  std::uniform_int_distribution<long long> den(1, 12);
  for (long long p : {3, 7}) {
    auto f = padic_field(p, 20);
    for (int i = 0; i < 120; ++i) {
      mpq_class a(static_cast<long>(num(rng)), static_cast<long>(den(rng)));
      mpq_class b(static_cast<long>(num(rng)), static_cast<long>(den(rng)));
      a.canonicalize();
      b.canonicalize();
      Elem ea = make_rational(f, a), eb = make_rational(f, b);
      CHECK(eq_flagged(add(ea, eb), make_rational(f, a + b)).equal);
      CHECK(eq_flagged(mul(ea, eb), make_rational(f, a * b)).equal);
      if (b != 0) CHECK(eq_flagged(div(ea, eb), make_rational(f, a / b)).equal);
    }
  }
}

TEST_CASE("polynomial square roots over odd characteristic") {
  std::mt19937_64 rng(987);
  std::uniform_int_distribution<long long> coef(0, 4);
  for (int i = 0; i < 80; ++i) {
    Poly g = {coef(rng), coef(rng), coef(rng), coef(rng)};
    poly_trim(g);
    if (poly_is_zero(g)) continue;
    Poly h = poly_mul(g, g, 5);
    auto r = poly_sqrt(h, 5);
    REQUIRE(r.has_value());
    CHECK(poly_mul(*r, *r, 5) == h);
    Poly not_square = poly_mul(h, {0, 1}, 5);  // odd t-degree
    CHECK(!poly_sqrt(not_square, 5).has_value());
  }
}

TEST_CASE("agreement digits diagnostics") {
  auto f = padic_field(3, 20);
  Elem x = make_rational(f, mpq_class(7, 9));
  CHECK(agreement_digits(x, x) >= 20);
  Elem y = add(x, make_padic(f, 10, 1, 5));  // differs at digit 10 above scale -2
  CHECK(agreement_digits(y, x) == 12);
  Elem z = sub(x, x);
  CHECK(agreement_digits(add(x, z), x) >= 18);
}

TEST_CASE("factorization guard rejects large composite cores") {
  // 2^89-1 and 2^107-1 are Mersenne primes; their product has no factor
  // below 10^6 and is not a perfect square.
  mpz_class m89 = (mpz_class(1) << 89) - 1;
  mpz_class m107 = (mpz_class(1) << 107) - 1;
  mpq_class big(m89 * m107);
  CHECK_THROWS_AS(square_class(make_rational(rationals(), big)), Sl2Error);
}
