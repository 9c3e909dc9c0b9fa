#include <doctest.h>

#include <sl2/symspace.hpp>

#include "test_util.hpp"

using namespace sl2;
using namespace sl2::testutil;

namespace {

void check_yes_witness(const WitnessResult& w, const Mat2& q, const Elem& m) {
  REQUIRE(w.verdict == MembershipVerdict::Yes);
  REQUIRE(w.witness.has_value());
  InvolutionSpec inv_w = make_involution(w.witness_field, lift_to(w.witness_field, m));
  Mat2 lhs = *w.witness * inverse(apply(inv_w, *w.witness));
  Mat2 q_lift = Mat2::make(lift_to(w.witness_field, q.e11), lift_to(w.witness_field, q.e12),
                           lift_to(w.witness_field, q.e21), lift_to(w.witness_field, q.e22));
  CHECK(mat_eq_flagged(lhs, q_lift).equal);
}

}  // namespace

TEST_CASE("identity is its own witness") {
  auto Q = rationals();
  InvolutionSpec t1 = make_involution(Q, q_of(1));
  WitnessResult w = witness_in_Q(Mat2::identity(Q), t1);
  CHECK(w.verdict == MembershipVerdict::Yes);
  CHECK(*w.witness == Mat2::identity(Q));
}

TEST_CASE("real reading follows the sign-keyed rows") {
  auto Q = rationals();
  InvolutionSpec t1 = make_involution(Q, q_of(1));

  // positive upper-left entry, rational square root: no extension needed
  Mat2 q1 = Mat2::make(q_of(4), q_of(1), q_of(-1), q_of(0));
  WitnessResult w1 = witness_in_Q(q1, t1, EmulationMode::RealEmulated);
  REQUIRE(w1.verdict == MembershipVerdict::Yes);
  CHECK(field_equal(w1.witness_field, Q));
  CHECK(*w1.witness == Mat2::make(q_of(2), q_of(0), q_of(-1, 2), q_of(1, 2)));

  // positive non-square entry: the witness lives one tower step up
  Mat2 q2 = Mat2::make(q_of(5), q_of(2), q_of(-2), q_of(-3, 5));
  REQUIRE(is_sl2(q2));
  WitnessResult w2 = witness_in_Q(q2, t1, EmulationMode::RealEmulated);
  REQUIRE(w2.verdict == MembershipVerdict::Yes);
  CHECK(w2.witness_field->kind == FieldKind::QuadExt);
  check_yes_witness(w2, q2, q_of(1));

  // negative upper-left entry uses the sqrt(-a) row
  Mat2 q3 = Mat2::make(q_of(-2), q_of(1), q_of(-1), q_of(0));
  REQUIRE(is_sl2(q3));
  WitnessResult w3 = witness_in_Q(q3, t1, EmulationMode::RealEmulated);
  REQUIRE(w3.verdict == MembershipVerdict::Yes);
  check_yes_witness(w3, q3, q_of(1));

  // a = 0 rows with b = +-1
  for (long long b : {1LL, -1LL}) {
    Mat2 q4 = Mat2::make(q_of(0), q_of(b), q_of(-b), q_of(7));
    REQUIRE(is_sl2(q4));
    WitnessResult w4 = witness_in_Q(q4, t1, EmulationMode::RealEmulated);
    REQUIRE(w4.verdict == MembershipVerdict::Yes);
    check_yes_witness(w4, q4, q_of(1));
  }
}

TEST_CASE("real reading with a non-square datum climbs two tower steps") {
  auto Q = rationals();
  InvolutionSpec t2 = make_involution(Q, q_of(2));
  // negative upper-left entry forces the sqrt(-a) row after the datum
  // reduction, so the witness lives in Q(sqrt 2)(sqrt ...)
  Mat2 q = Mat2::make(q_of(-3), q_of(1), q_of(-2), q_of(1, 3));
  REQUIRE(is_sl2(q));
  REQUIRE(in_extended_symmetric(t2, q));
  WitnessResult w = witness_in_Q(q, t2, EmulationMode::RealEmulated);
  REQUIRE(w.verdict == MembershipVerdict::Yes);
  CHECK(w.witness_field->kind == FieldKind::QuadExt);
  check_yes_witness(w, q, q_of(2));
}

TEST_CASE("real reading decides the compact-type involution by positivity") {
  auto Q = rationals();
  InvolutionSpec tm1 = make_involution(Q, q_of(-1));
  // positive definite symmetric: witnessed
  Mat2 pos = Mat2::make(q_of(2), q_of(1), q_of(1), q_of(1));
  REQUIRE(in_extended_symmetric(tm1, pos));
  WitnessResult w = witness_in_Q(pos, tm1, EmulationMode::RealEmulated);
  REQUIRE(w.verdict == MembershipVerdict::Yes);
  check_yes_witness(w, pos, q_of(-1));
  // -Id is symmetric but not positive definite
  WitnessResult wneg = witness_in_Q(-Mat2::identity(Q), tm1, EmulationMode::RealEmulated);
  CHECK(wneg.verdict == MembershipVerdict::No);
  CHECK(wneg.certificate.find("positive definite") != std::string::npos);
}

TEST_CASE("closure reading always finds a witness") {
  auto Q = rationals();
  InvolutionSpec t1 = make_involution(Q, q_of(1));
  std::vector<Mat2> queries = {
      Mat2::make(q_of(0), q_of(1), q_of(-1), q_of(0)),      // c = 0, a = 0
      Mat2::make(q_of(-3), q_of(1), q_of(-1), q_of(0)),     // c = 0, a < 0
      Mat2::make(q_of(-1), q_of(2), q_of(-2), q_of(3)),     // c > 0
      Mat2::make(q_of(2), q_of(3), q_of(-3), q_of(-4)),     // c < 0: needs sqrt(-1)
  };
  for (const Mat2& q : queries) {
    REQUIRE(is_sl2(q));
    REQUIRE(in_extended_symmetric(t1, q));
    WitnessResult w = witness_in_Q(q, t1, EmulationMode::ClosureEmulated);
    check_yes_witness(w, q, q_of(1));
  }
  // a compact-type datum is also a square in the closure reading
  InvolutionSpec tm1 = make_involution(Q, q_of(-1));
  Mat2 negid = -Mat2::identity(Q);
  WitnessResult w = witness_in_Q(negid, tm1, EmulationMode::ClosureEmulated);
  check_yes_witness(w, negid, q_of(-1));
}

TEST_CASE("exact rational witnesses avoid extensions") {
  auto Q = rationals();
  InvolutionSpec t1 = make_involution(Q, q_of(1));
  std::mt19937_64 rng(606);
  std::uniform_int_distribution<long long> small(-6, 6);
  for (int i = 0; i < 120; ++i) {
    long long an = small(rng), bn = small(rng);
    if (an == 0) continue;
    Elem a = q_of(an, 2), b = q_of(bn, 3);
    Elem c = div(sub(q_of(1), mul(b, b)), a);
    Mat2 q = Mat2::make(a, b, neg(b), c);
    REQUIRE(is_sl2(q));
    WitnessResult w = witness_in_Q(q, t1, EmulationMode::Exact);
    REQUIRE(w.verdict == MembershipVerdict::Yes);
    CHECK(field_equal(w.witness_field, Q));  // no extension on the exact route
    check_yes_witness(w, q, q_of(1));
  }
  // m = 4: reduction by the rational square root of m
  InvolutionSpec t4 = make_involution(Q, q_of(4));
  Mat2 q = Mat2::make(q_of(3), q_of(1, 2), q_of(-2), q_of(0));
  REQUIRE(in_extended_symmetric(t4, q));
  WitnessResult w = witness_in_Q(q, t4, EmulationMode::Exact);
  REQUIRE(w.verdict == MembershipVerdict::Yes);
  check_yes_witness(w, q, q_of(4));
}

TEST_CASE("exact p-adic witnesses through the rational parameter scan") {
  for (long long p : {3LL, 5LL, 7LL}) {
    auto f = padic_field(p, 20);
    InvolutionSpec t1 = make_involution(f, elem_one(f));
    std::mt19937_64 rng(700 + p);
    std::uniform_int_distribution<long long> small(-6, 6);
    int done = 0;
    for (int i = 0; done < 40 && i < 400; ++i) {
      long long an = small(rng), bn = small(rng);
      if (an == 0) continue;
      ++done;
      mpq_class av(static_cast<long>(an)), bv(static_cast<long>(bn), 2);
      bv.canonicalize();
      mpq_class cv = (1 - bv * bv) / av;
      Mat2 q = Mat2::make(make_rational(f, av), make_rational(f, bv),
                          make_rational(f, -bv), make_rational(f, cv));
      WitnessResult w = witness_in_Q(q, t1, EmulationMode::Exact);
      REQUIRE(w.verdict == MembershipVerdict::Yes);
      Mat2 lhs = *w.witness * inverse(apply(t1, *w.witness));
      CHECK(mat_eq_flagged(lhs, q).equal);
    }
    CHECK(done == 40);
  }
}

TEST_CASE("p-adic diagonal family: the obstruction certificate") {
  auto Q3 = padic_field(3, 20);
  InvolutionSpec t3 = make_involution(Q3, elem_int(Q3, 3));
  Mat2 q = Mat2::diag(make_rational(Q3, mpq_class(1, 3)), elem_int(Q3, 3));
  REQUIRE(in_extended_symmetric(t3, q));
  WitnessResult w = witness_in_Q(q, t3, EmulationMode::Exact);
  CHECK(w.verdict == MembershipVerdict::No);
  CHECK(w.certificate.find("pN_p") != std::string::npos);
  CHECK(w.certificate.find("-3") != std::string::npos);
  // the certificate's square conditions re-check as non-squares
  CHECK(!is_square(q.e11));                                   // sqrt(lambda) truly missing
  CHECK(!is_square(add(q.e22, elem_int(Q3, 3))));             // 1/lambda + m = 6 truly non-square
  CHECK(hilbert_local(q.e22, elem_int(Q3, 3)) == -1);         // second family truly obstructed

  // a diagonal member with a square entry is witnessed by the diagonal family
  Mat2 q_sq = Mat2::diag(elem_int(Q3, 4), make_rational(Q3, mpq_class(1, 4)));
  WitnessResult w2 = witness_in_Q(q_sq, t3, EmulationMode::Exact);
  REQUIRE(w2.verdict == MembershipVerdict::Yes);
  CHECK(mat_eq_flagged(*w2.witness * inverse(apply(t3, *w2.witness)), q_sq).equal);

  // the second family fires when the local symbol allows it
  auto Q5 = padic_field(5, 20);
  InvolutionSpec t25 = make_involution(Q5, elem_int(Q5, 2));
  Mat2 q5 = Mat2::diag(elem_int(Q5, -1), elem_int(Q5, -1));
  REQUIRE(in_extended_symmetric(t25, q5));
  WitnessResult w5 = witness_in_Q(q5, t25, EmulationMode::Exact);
  CHECK(w5.verdict == MembershipVerdict::Yes);  // -1 is a square mod 5
  Mat2 q5b = Mat2::diag(elem_int(Q5, 2), make_rational(Q5, mpq_class(1, 2)));
  WitnessResult w5b = witness_in_Q(q5b, t25, EmulationMode::Exact);
  if (w5b.verdict == MembershipVerdict::Yes) {
    CHECK(mat_eq_flagged(*w5b.witness * inverse(apply(t25, *w5b.witness)), q5b).equal);
  } else {
    CHECK(w5b.verdict == MembershipVerdict::No);
  }
}

TEST_CASE("p-adic diagonal witnesses through the trivial-class table") {
  auto Q3 = padic_field(3, 20);
  InvolutionSpec t1 = make_involution(Q3, elem_one(Q3));
  Mat2 q = Mat2::diag(elem_int(Q3, 3), make_rational(Q3, mpq_class(1, 3)));
  WitnessResult w = witness_in_Q(q, t1, EmulationMode::Exact);
  REQUIRE(w.verdict == MembershipVerdict::Yes);
  CHECK(mat_eq_flagged(*w.witness * inverse(apply(t1, *w.witness)), q).equal);
}

TEST_CASE("finite fields: every extended-space element is witnessed") {
  for (long long q : {3LL, 5LL, 9LL}) {
    FieldRef f = q == 9 ? galois_field_default(3, 2) : prime_field(q);
    for (const SquareClassRep& rep : square_class_reps(f).reps) {
      InvolutionSpec inv = make_involution(f, rep.rep);
      enumerate_sl2(f, [&](const Mat2& g) {
        if (!in_extended_symmetric(inv, g)) return;
        WitnessResult w = witness_in_Q(g, inv);
        REQUIRE(w.verdict == MembershipVerdict::Yes);
        CHECK(*w.witness * inverse(apply(inv, *w.witness)) == g);
      });
    }
  }
}

TEST_CASE("function-field witness queries settle or report honestly") {
  auto f = rational_function_field(2);
  Elem t = make_func(f, {0, 1}, {1});
  InvolutionSpec tau_t = make_involution(f, t);
  // diagonal members are witnessed when the entry is a square
  Mat2 easy = Mat2::diag(mul(t, t), inv(mul(t, t)));
  REQUIRE(in_extended_symmetric(tau_t, easy));
  WitnessResult w1 = witness_in_Q(easy, tau_t);
  CHECK(w1.verdict == MembershipVerdict::Yes);
  // a hard query must come back No/Undecided with a reason, never crash
  Mat2 hard = Mat2::diag(t, inv(t));
  REQUIRE(in_extended_symmetric(tau_t, hard));
  WitnessResult w2 = witness_in_Q(hard, tau_t);
  CHECK(w2.verdict != MembershipVerdict::No);  // bounded search cannot prove absence
  if (w2.verdict == MembershipVerdict::Undecided) CHECK(!w2.certificate.empty());
}

TEST_CASE("q_equals_qtilde across scopes") {
  auto F5 = prime_field(5);
  InvolutionSpec t2 = make_involution(F5, elem_int(F5, 2));
  CHECK(q_equals_qtilde(F5, t2).verdict == Verdict::Confirmed);

  auto Q3 = padic_field(3, 20);
  InvolutionSpec t3 = make_involution(Q3, elem_int(Q3, 3));
  ClaimStatus ref = q_equals_qtilde(Q3, t3);
  CHECK(ref.verdict == Verdict::Refuted);
  REQUIRE(!ref.counterexample.empty());

  InvolutionSpec t13 = make_involution(Q3, elem_one(Q3));
  CHECK(q_equals_qtilde(Q3, t13, EmulationMode::Exact, 60).verdict == Verdict::Confirmed);

  auto Q = rationals();
  InvolutionSpec t1 = make_involution(Q, q_of(1));
  CHECK(q_equals_qtilde(Q, t1, EmulationMode::Exact, 60).verdict == Verdict::Confirmed);
  CHECK(q_equals_qtilde(Q, t1, EmulationMode::RealEmulated, 40).verdict == Verdict::Confirmed);
  CHECK(q_equals_qtilde(Q, t1, EmulationMode::ClosureEmulated, 40).verdict == Verdict::Confirmed);
  InvolutionSpec tm1 = make_involution(Q, q_of(-1));
  CHECK(q_equals_qtilde(Q, tm1, EmulationMode::RealEmulated, 40).verdict == Verdict::Refuted);
}

TEST_CASE("non-semisimple construction in the symmetric space") {
  auto Q = rationals();
  InvolutionSpec t1 = make_involution(Q, q_of(1));
  NonSemisimpleWitness n0 = construct_nonsemisimple_in_Q(t1, q_of(0));
  CHECK(n0.q == qmat(3, 2, -2, -1));
  NonSemisimpleWitness n2 = construct_nonsemisimple_in_Q(t1, q_of(2));
  CHECK(n2.q == qmat(7, 6, -6, -5));
  for (const NonSemisimpleWitness* n : {&n0, &n2}) {
    CHECK(trace(n->q) == q_of(2));
    CHECK(!is_semisimple(n->q));
    CHECK(in_extended_symmetric(t1, n->q));
    CHECK(n->g * inverse(apply(t1, n->g)) == n->q);
  }

  auto F5 = prime_field(5);
  InvolutionSpec t15 = make_involution(F5, elem_int(F5, 1));
  NonSemisimpleWitness n5 = construct_nonsemisimple_in_Q(t15, elem_int(F5, 1));
  CHECK(n5.q == Mat2::make(elem_int(F5, 0), elem_int(F5, 4), elem_int(F5, 1), elem_int(F5, 2)));
  CHECK(!is_semisimple(n5.q));

  // m = 4 works through the rational square root of m; m = 2 is rejected
  InvolutionSpec t4 = make_involution(Q, q_of(4));
  NonSemisimpleWitness n4 = construct_nonsemisimple_in_Q(t4, q_of(1));
  CHECK(!is_semisimple(n4.q));
  CHECK(in_extended_symmetric(t4, n4.q));
  CHECK(n4.g * inverse(apply(t4, n4.g)) == n4.q);
  CHECK_THROWS_AS(construct_nonsemisimple_in_Q(make_involution(Q, q_of(2)), q_of(0)), Sl2Error);
  CHECK_THROWS_AS(construct_nonsemisimple_in_Q(t1, q_of(-1)), Sl2Error);
}

TEST_CASE("semisimplified decomposition") {
  auto Q = rationals();
  InvolutionSpec t1 = make_involution(Q, q_of(1));

  // already-semisimple symmetric factor is untouched
  Mat2 d = Mat2::make(q_of(2), q_of(3), q_of(0), q_of(1, 2));
  DecompResult rd = semisimplify_decomposition(d, t1);
  CHECK(rd.q == Mat2::diag(q_of(2), q_of(1, 2)));

  // an element whose primary factorization has a unipotent symmetric factor
  NonSemisimpleWitness ns = construct_nonsemisimple_in_Q(t1, q_of(0));
  Mat2 g = ns.q;  // in Qt, so the primary split is (Id, q, Id)
  DecompResult base = decompose_hqu(g, t1);
  CHECK(!is_semisimple(base.q));
  DecompResult fixed = semisimplify_decomposition(g, t1);
  CHECK(is_semisimple(fixed.q));
  CHECK(in_fixed_group(t1, fixed.h));
  CHECK(in_extended_symmetric(t1, fixed.q));
  CHECK(in_unipotent(fixed.u));
  CHECK(mat_eq_flagged(recompose(fixed), g).equal);

  // trace -2 representatives go through the sign fold
  Mat2 gneg = -ns.q;
  DecompResult fneg = semisimplify_decomposition(gneg, t1);
  CHECK(is_semisimple(fneg.q));
  CHECK(mat_eq_flagged(recompose(fneg), gneg).equal);

  // Exhaustive over F3 and F5 with the square class datum, against the
  // product-set oracle: semisimplify succeeds exactly on H * Qt_ss * U.
  // Over these tiny fields a few elements lie outside that product set, so
  // the stated all-elements claim fails and the routine must say so loudly.
  for (long long qq : {3LL, 5LL}) {
    auto f = prime_field(qq);
    InvolutionSpec inv = make_involution(f, elem_int(f, 1));
    std::vector<Mat2> H, Qss, U;
    enumerate_sl2(f, [&](const Mat2& el) {
      if (in_fixed_group(inv, el)) H.push_back(el);
      if (in_extended_symmetric(inv, el) && is_semisimple(el)) Qss.push_back(el);
      if (in_unipotent(el)) U.push_back(el);
    });
    MatKeySet reachable;
    for (const Mat2& h : H)
      for (const Mat2& q : Qss)
        for (const Mat2& u : U) reachable.insert(mat_key(h * q * u));
    long long impossible = 0;
    enumerate_sl2(f, [&](const Mat2& el) {
      bool in_oracle = reachable.count(mat_key(el)) > 0;
      if (in_oracle) {
        DecompResult r = semisimplify_decomposition(el, inv);
        CHECK(is_semisimple(r.q));
        CHECK(mat_eq_flagged(recompose(r), el).equal);
      } else {
        ++impossible;
        CHECK_THROWS_AS(semisimplify_decomposition(el, inv), Sl2Error);
      }
    });
    // the oracle itself shows the gap is real on these fields
    CHECK(impossible > 0);
  }

  // for a non-square datum nothing ever needs fixing
  auto F7 = prime_field(7);
  InvolutionSpec t37 = make_involution(F7, elem_int(F7, 3));
  enumerate_sl2(F7, [&](const Mat2& el) {
    DecompResult r = semisimplify_decomposition(el, t37);
    CHECK(is_semisimple(r.q));
  });
}

TEST_CASE("non-square datum forces semisimple and central trace-2 members") {
  for (long long q : {3LL, 5LL, 7LL, 9LL}) {
    FieldRef f = q == 9 ? galois_field_default(3, 2) : prime_field(q);
    Elem m = square_class_reps(f).reps[1].rep;
    InvolutionSpec inv = make_involution(f, m);
    const Elem two = elem_int(f, 2);
    enumerate_sl2(f, [&](const Mat2& g) {
      if (!in_extended_symmetric(inv, g)) return;
      CHECK(is_semisimple(g));
      Elem t = trace(g);
      if (t == two || t == neg(two)) CHECK(is_scalar(g));
    });
  }
}
