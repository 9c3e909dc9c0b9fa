#include <doctest.h>

#include <sl2/enumerate.hpp>
#include <sl2/involution.hpp>

#include "test_util.hpp"

using namespace sl2;
using namespace sl2::testutil;

TEST_CASE("make_involution records the square class") {
  auto Q = rationals();
  InvolutionSpec t1 = make_involution(Q, q_of(-1));
  CHECK(t1.cls->rep == q_of(-1));

  auto F5 = prime_field(5);
  InvolutionSpec t4 = make_involution(F5, elem_int(F5, 4));
  CHECK(t4.cls->rep == elem_int(F5, 1));  // 4 = 2^2

  auto Q3 = padic_field(3);
  InvolutionSpec t6 = make_involution(Q3, elem_int(Q3, 6));
  CHECK(t6.cls->label == "pN_p");
  CHECK(t6.cls->rep == elem_int(Q3, -3));

  CHECK_THROWS_AS(make_involution(Q, q_of(0)), Sl2Error);
  auto F4 = galois_field_default(2, 2);
  CHECK_THROWS_AS(make_involution(F4, elem_one(F4)), Sl2Error);  // finite char 2 uses tau0
  CHECK_NOTHROW(make_tau0(F4));
  CHECK_THROWS_AS(make_tau0(prime_field(3)), Sl2Error);
  auto Q2 = padic_field(2);
  CHECK_THROWS_AS(make_involution(Q2, elem_int(Q2, 1)), Sl2Error);  // 2-adic excluded
}

TEST_CASE("apply conjugates by the defining matrix") {
  auto Q = rationals();
  InvolutionSpec t2 = make_involution(Q, q_of(2));
  Mat2 torus = Mat2::diag(q_of(3), q_of(1, 3));
  CHECK(apply(t2, torus) == Mat2::diag(q_of(1, 3), q_of(3)));  // torus elements invert

  InvolutionSpec t1 = make_involution(Q, q_of(1));
  CHECK(apply(t1, Mat2::weyl(Q)) == qmat(0, -1, 1, 0));

  auto F2 = prime_field(2);
  InvolutionSpec t0 = make_tau0(F2);
  Mat2 n = Mat2::unipotent(elem_one(F2));
  CHECK(apply(t0, n) == n);  // the defining unipotent is fixed
}

TEST_CASE("applying an involution twice is the identity map") {
  std::mt19937_64 rng(4242);
  struct Cfg {
    FieldRef f;
    Elem m;
  };
  std::vector<Cfg> cfgs;
  cfgs.push_back({rationals(), q_of(2)});
  cfgs.push_back({rationals(), q_of(-1)});
  auto F7 = prime_field(7);
  cfgs.push_back({F7, elem_int(F7, 3)});
  auto Q5 = padic_field(5);
  cfgs.push_back({Q5, elem_int(Q5, 5)});
  for (const Cfg& cfg : cfgs) {
    InvolutionSpec inv = make_involution(cfg.f, cfg.m);
    for (int i = 0; i < 1000; ++i) {
      Mat2 g = random_sl2(cfg.f, rng);
      CHECK(mat_eq_flagged(apply(inv, apply(inv, g)), g).equal);
    }
  }
}

TEST_CASE("isomorphy is square-class equality of the datum") {
  auto Q = rationals();
  CHECK(is_isomorphic(make_involution(Q, q_of(1)), make_involution(Q, q_of(4))));
  CHECK(!is_isomorphic(make_involution(Q, q_of(1)), make_involution(Q, q_of(-1))));
  auto Q3 = padic_field(3);
  CHECK(!is_isomorphic(make_involution(Q3, elem_int(Q3, 3)), make_involution(Q3, elem_int(Q3, -3))));
  CHECK(is_isomorphic(make_involution(Q3, elem_int(Q3, 3)), make_involution(Q3, elem_int(Q3, 12))));
  CHECK_THROWS_AS(is_isomorphic(make_involution(Q, q_of(1)), make_involution(Q3, elem_int(Q3, 1))),
                  Sl2Error);
}

TEST_CASE("normal form of an inner involution") {
  auto Q = rationals();
  // already in normal form
  Mat2 M2 = qmat(0, 1, 2, 0);
  InvolutionFromMatrix r1 = involution_from_matrix(M2);
  CHECK(r1.spec.m == q_of(2));
  CHECK(r1.conjugator * M2 * inverse(r1.conjugator) == M2);

  // diag(1,-1) conjugates to the m = 1 normal form
  Mat2 D = Mat2::diag(q_of(1), q_of(-1));
  InvolutionFromMatrix r2 = involution_from_matrix(D);
  CHECK(r2.spec.m == q_of(1));
  CHECK(r2.conjugator * D * inverse(r2.conjugator) == qmat(0, 1, 1, 0));

  CHECK_THROWS_AS(involution_from_matrix(Mat2::diag(q_of(2), q_of(2))), Sl2Error);  // scalar
  CHECK_THROWS_AS(involution_from_matrix(qmat(1, 1, 0, 1)), Sl2Error);              // square not scalar
}

TEST_CASE("normal form cross-checked by exhaustive conjugator search over GL2(F5)") {
  auto F5 = prime_field(5);
  Mat2 A = Mat2::make(elem_int(F5, 1), elem_int(F5, 2), elem_int(F5, 3), elem_int(F5, -1));
  Mat2 A2 = A * A;
  CHECK(is_scalar(A2));
  CHECK(A2.e11 == elem_int(F5, 2));
  InvolutionFromMatrix r = involution_from_matrix(A);
  CHECK(r.spec.m == elem_int(F5, 2));  // -det(A) = 7 = 2, the non-square class
  CHECK(!is_square(r.spec.m));

  // independent oracle: brute-force search for any conjugator into the
  // scalar multiples of the normal form
  bool found = false;
  std::vector<Elem> elems = field_elements(F5);
  for (const Elem& a : elems) {
    for (const Elem& b : elems) {
      for (const Elem& c : elems) {
        for (const Elem& d : elems) {
          Mat2 chi = Mat2::make(a, b, c, d);
          if (is_zero_at_precision(chi.det)) continue;
          Mat2 n = chi * A * inverse(chi);
          if (n.e11.is_zero() && n.e22.is_zero() && !n.e12.is_zero() &&
              n.e21 == mul(r.spec.m, n.e12)) {
            found = true;
            break;
          }
        }
        if (found) break;
      }
      if (found) break;
    }
    if (found) break;
  }
  CHECK(found);
  // and the constructive conjugator lands exactly on the normal form
  CHECK(r.conjugator * A * inverse(r.conjugator) ==
        Mat2::make(elem_zero(F5), elem_one(F5), elem_int(F5, 2), elem_zero(F5)));
}

TEST_CASE("membership reference values") {
  auto Q = rationals();
  InvolutionSpec t1 = make_involution(Q, q_of(1));
  InvolutionSpec t2 = make_involution(Q, q_of(2));

  CHECK(in_fixed_group(t1, Mat2::make(q_of(5, 4), q_of(3, 4), q_of(3, 4), q_of(5, 4))));
  CHECK(!in_fixed_group(t2, Mat2::make(q_of(5, 4), q_of(3, 4), q_of(3, 4), q_of(5, 4))));
  CHECK(in_extended_symmetric(t2, Mat2::make(q_of(-1), q_of(1, 2), q_of(-1), q_of(-1, 2))));
  CHECK(in_extended_symmetric(t1, Mat2::diag(q_of(2), q_of(1, 2))));
  CHECK(in_extended_symmetric(t2, Mat2::diag(q_of(2), q_of(1, 2))));
  CHECK(in_unipotent(Mat2::unipotent(q_of(7, 3))));
  CHECK(!in_unipotent(qmat(1, 0, 1, 1)));
  CHECK(in_torus(Mat2::diag(q_of(-5), q_of(-1, 5))));
}

TEST_CASE("extended symmetric pattern equals the inverse condition exhaustively") {
  for (long long q : {3, 5, 7}) {
    auto f = prime_field(q);
    for (const SquareClassRep& rep : square_class_reps(f).reps) {
      InvolutionSpec inv = make_involution(f, rep.rep);
      enumerate_sl2(f, [&](const Mat2& g) {
        bool pattern = in_extended_symmetric(inv, g);
        bool direct = apply(inv, g) * g == Mat2::identity(f);
        CHECK(pattern == direct);
        bool fixed_pattern = in_fixed_group(inv, g);
        bool fixed_direct = apply(inv, g) == g;
        CHECK(fixed_pattern == fixed_direct);
      });
    }
  }
}

TEST_CASE("char-2 membership patterns equal the direct conditions exhaustively") {
  for (long long q : {2LL, 4LL}) {
    FieldRef f = q == 2 ? prime_field(2) : galois_field_default(2, 2);
    InvolutionSpec t0 = make_tau0(f);
    enumerate_sl2(f, [&](const Mat2& g) {
      CHECK(in_extended_symmetric(t0, g) == (apply(t0, g) * g == Mat2::identity(f)));
      CHECK(in_fixed_group(t0, g) == (apply(t0, g) == g));
    });
  }
}

TEST_CASE("symmetric space lands inside the extended symmetric space") {
  std::mt19937_64 rng(515);
  auto Q = rationals();
  for (long long m : {1, -1, 2, 3}) {
    InvolutionSpec inv = make_involution(Q, q_of(m));
    for (int i = 0; i < 200; ++i) {
      Mat2 g = random_sl2(Q, rng);
      CHECK(in_extended_symmetric(inv, g * inverse(apply(inv, g))));
    }
  }
}

TEST_CASE("fixed-group conjugates of torus elements stay tau-split") {
  auto F5 = prime_field(5);
  for (const SquareClassRep& rep : square_class_reps(F5).reps) {
    InvolutionSpec inv = make_involution(F5, rep.rep);
    std::vector<Mat2> H, T;
    enumerate_sl2(F5, [&](const Mat2& g) {
      if (in_fixed_group(inv, g)) H.push_back(g);
      if (in_torus(g)) T.push_back(g);
    });
    for (const Mat2& h : H) {
      for (const Mat2& t : T) CHECK(in_extended_symmetric(inv, h * t * inverse(h)));
    }
  }
}

TEST_CASE("nontrivial fixed points") {
  auto Q = rationals();
  InvolutionSpec t1 = make_involution(Q, q_of(1));
  Mat2 h = nontrivial_fixed_point(t1);
  CHECK(h == Mat2::make(q_of(-5, 3), q_of(-4, 3), q_of(-4, 3), q_of(-5, 3)));
  CHECK(in_fixed_group(t1, h));

  auto F5 = prime_field(5);
  InvolutionSpec t2 = make_involution(F5, elem_int(F5, 2));
  Mat2 h5 = nontrivial_fixed_point(t2);
  CHECK(in_fixed_group(t2, h5));
  CHECK(!h5.e12.is_zero());

  auto F3 = prime_field(3);
  InvolutionSpec t13 = make_involution(F3, elem_int(F3, 1));
  CHECK_THROWS_AS(nontrivial_fixed_point(t13), Sl2Error);
  try {
    nontrivial_fixed_point(t13);
  } catch (const Sl2Error& e) {
    CHECK(e.code() == Err::OnlyCentralFixedPoints);
  }
  // m in the non-square class of F3 has a six-element fixed group
  InvolutionSpec t23 = make_involution(F3, elem_int(F3, 2));
  CHECK(in_fixed_group(t23, nontrivial_fixed_point(t23)));
}
