#include <doctest.h>

#include <random>

#include <sl2/enumerate.hpp>

using namespace sl2;

namespace {

Elem q_of(long long n, long long d = 1) {
  return make_rational(rationals(), mpq_class(static_cast<long>(n), static_cast<long>(d)));
}

Mat2 qmat(long long a, long long b, long long c, long long d) {
  return Mat2::make(q_of(a), q_of(b), q_of(c), q_of(d));
}

// Embeds a prime-field matrix into the degree-2 extension.
Mat2 embed(const FieldRef& ext, const Mat2& g) {
  auto lift = [&](const Elem& e) {
    return make_finite(ext, e.fin().c);
  };
  return Mat2::make(lift(g.e11), lift(g.e12), lift(g.e21), lift(g.e22));
}

// Stated oracle: some s in SL2(F_{q^2}) conjugates g to a diagonal matrix.
bool diagonalizable_by_search(const FieldRef& ext, const Mat2& g) {
  Mat2 gh = embed(ext, g);
  bool found = false;
  enumerate_sl2(ext, [&](const Mat2& s) {
    if (found) return;
    Mat2 c = s * gh * inverse(s);
    if (c.e12.is_zero() && c.e21.is_zero()) found = true;
  });
  return found;
}

}  // namespace

TEST_CASE("matrix operations") {
  Mat2 u = qmat(1, 1, 0, 1);
  CHECK(inverse(u) == qmat(1, -1, 0, 1));
  Mat2 w = Mat2::weyl(rationals());
  CHECK(w * w == -Mat2::identity(rationals()));
  Mat2 t = Mat2::make(q_of(2), q_of(3), q_of(0), q_of(1, 2));
  CHECK(inverse(t) == Mat2::make(q_of(1, 2), q_of(-3), q_of(0), q_of(2)));
  CHECK(t * inverse(t) == Mat2::identity(rationals()));
  CHECK(transpose(qmat(1, 2, 3, 4)) == qmat(1, 3, 2, 4));
  CHECK_THROWS_AS(inverse(qmat(1, 2, 2, 4)), Sl2Error);
}

TEST_CASE("determinant is cached and multiplicative") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<long long> d(-9, 9);
  for (int i = 0; i < 100; ++i) {
    Mat2 a = qmat(d(rng), d(rng), d(rng), d(rng));
    Mat2 b = qmat(d(rng), d(rng), d(rng), d(rng));
    CHECK((a * b).det == mul(a.det, b.det));
    CHECK(a.det == sub(mul(a.e11, a.e22), mul(a.e12, a.e21)));
  }
}

TEST_CASE("bruhat factorization reference values") {
  Mat2 g1 = Mat2::make(q_of(2), q_of(3), q_of(0), q_of(1, 2));
  BruhatForm b1 = bruhat_factor(g1);
  CHECK(b1.borel);
  CHECK(b1.borel_t == q_of(2));
  CHECK(b1.borel_u1 == q_of(3, 2));

  Mat2 g2 = qmat(-1, 1, -1, 0);
  BruhatForm b2 = bruhat_factor(g2);
  CHECK(!b2.borel);
  CHECK(b2.a == q_of(1));
  CHECK(b2.alpha == q_of(1));
  CHECK(b2.b == q_of(1));
  CHECK(b2.beta == q_of(0));
  CHECK(bruhat_reassemble(b2, rationals()) == g2);

  BruhatForm b3 = bruhat_factor(Mat2::weyl(rationals()));
  CHECK(b3.a == q_of(1));
  CHECK(b3.alpha == q_of(0));
  CHECK(b3.b == q_of(1));
  CHECK(b3.beta == q_of(0));
}

TEST_CASE("bruhat round-trip is exact over exhaustive small groups") {
  for (long long q : {3, 5, 7, 9}) {
    FieldRef f = q == 9 ? galois_field_default(3, 2) : prime_field(q);
    long long count = 0;
    enumerate_sl2(f, [&](const Mat2& g) {
      BruhatForm bf = bruhat_factor(g);
      CHECK(bruhat_reassemble(bf, f) == g);
      ++count;
    });
    CHECK(count == q * q * q - q);
  }
}

TEST_CASE("trace and characteristic polynomial discriminant") {
  CHECK(char_poly_disc(Mat2::identity(rationals())) == q_of(0));
  Mat2 t = Mat2::diag(q_of(2), q_of(1, 2));
  CHECK(char_poly_disc(t) == q_of(9, 4));
  Mat2 e19 = qmat(3, 2, -2, -1);
  CHECK(trace(e19) == q_of(2));
  CHECK(char_poly_disc(e19) == q_of(0));
  CHECK(!is_semisimple(e19));
}

TEST_CASE("semisimplicity reference values") {
  CHECK(is_semisimple(Mat2::identity(rationals())));
  CHECK(is_semisimple(-Mat2::identity(rationals())));
  CHECK(!is_semisimple(qmat(1, 1, 0, 1)));
  CHECK(is_semisimple(qmat(0, 1, -1, 0)));
  CHECK(is_semisimple(Mat2::diag(q_of(2), q_of(1, 2))));
  auto F2 = prime_field(2);
  CHECK(!is_semisimple(Mat2::unipotent(elem_one(F2))));
  CHECK(is_semisimple(Mat2::make(elem_zero(F2), elem_one(F2), elem_one(F2), elem_one(F2))));
}

TEST_CASE("semisimplicity agrees with the conjugation search oracle") {
  struct Case {
    long long q;
    FieldRef ext;
  };
  for (const auto& [q, ext] : {Case{3, galois_field_default(3, 2)}, Case{5, galois_field_default(5, 2)}}) {
    FieldRef f = prime_field(q);
    enumerate_sl2(f, [&, ext = ext](const Mat2& g) {
      CHECK(is_semisimple(g) == diagonalizable_by_search(ext, g));
    });
  }
}
