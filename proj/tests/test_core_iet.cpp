#include <gtest/gtest.h>

#include "iet/exact.hpp"
#include "iet/transformation.hpp"

using namespace iet;
using namespace iet::letters;

namespace {

Rational q(long n, long d) { return make_rational(n, d); }

Iet two_rotation() { return Iet::make({q(3, 5), q(2, 5)}, PermutationPair::parse("AB/BA")); }

}  // namespace

TEST(Exact, RationalsAreCanonical) {
  EXPECT_EQ(make_rational(4, 8), q(1, 2));
  EXPECT_EQ(make_rational(-3, -6), q(1, 2));
  EXPECT_THROW(make_rational(1, 0), InvalidArgument);
}

TEST(Exact, BigIntHelpers) {
  EXPECT_EQ(ceil_div(7, 2), 4);
  EXPECT_EQ(floor_div(7, 2), 3);
  EXPECT_EQ(pow_big(4, 3), 64);
  EXPECT_EQ(to_u64(from_u64(18446744073709551615ull)), 18446744073709551615ull);
  EXPECT_THROW(to_u64(pow_big(2, 64)), InvalidArgument);
  EXPECT_THROW(to_u64(BigInt(-1)), InvalidArgument);
  EXPECT_EQ(parse_bigint("123456789012345678901234567890").get_str(), "123456789012345678901234567890");
  EXPECT_THROW(parse_bigint("12x"), ParseError);
  EXPECT_THROW(parse_bigint(""), ParseError);
}

TEST(Exact, IntervalSetNormalizesAndIntersects) {
  IntervalSet a({{q(0, 1), q(1, 2)}, {q(1, 2), q(3, 4)}, {q(7, 8), q(1, 1)}});
  ASSERT_EQ(a.pieces().size(), 2u);
  EXPECT_EQ(a.measure(), q(7, 8));
  EXPECT_TRUE(a.contains(q(1, 2)));
  EXPECT_FALSE(a.contains(q(3, 4)));
  IntervalSet b(RationalInterval{q(5, 8), q(15, 16)});
  const auto c = a.intersect(b);
  ASSERT_EQ(c.pieces().size(), 2u);
  EXPECT_EQ(c.measure(), q(1, 8) + q(1, 16));
  EXPECT_THROW(RationalInterval(q(1, 2), q(1, 2)), InvalidArgument);
}

TEST(Exact, SolveAndDeterminant) {
  RationalMatrix m{{2, 1}, {1, 1}};
  const auto x = solve_exact(m, {3, 2});
  EXPECT_EQ(x[0], 1);
  EXPECT_EQ(x[1], 1);
  EXPECT_EQ(determinant({{2, 1}, {1, 1}}), 1);
  EXPECT_EQ(determinant({{0, 1}, {1, 0}}), -1);
  EXPECT_EQ(determinant({{1, 2}, {2, 4}}), 0);
  EXPECT_THROW(solve_exact({{1, 2}, {2, 4}}, {1, 1}), DiagnosticError);
}

TEST(PermutationPair, ParseAndValidate) {
  const auto p = PermutationPair::parse("ABCDEF/FEDCBA");
  EXPECT_EQ(p, PermutationPair::symmetric(6));
  EXPECT_EQ(p.to_string(), "ABCDEF/FEDCBA");
  EXPECT_THROW(PermutationPair::parse("ABC/CBB"), InvalidArgument);
  EXPECT_THROW(PermutationPair::parse("ABC/CB"), InvalidArgument);
  EXPECT_THROW(PermutationPair::parse("ABC"), InvalidArgument);
  EXPECT_THROW(PermutationPair::parse("A/A"), InvalidArgument);
}

TEST(MakeIet, SymmetricUniform) {
  const auto t = Iet::make(LengthVector(6, q(1, 6)), PermutationPair::symmetric(6));
  EXPECT_EQ(t.total_length(), 1);
  EXPECT_EQ(t(q(0, 1)), q(5, 6));
  EXPECT_EQ(t(q(11, 12)), q(1, 12));
}

TEST(MakeIet, RejectsDegenerateData) {
  EXPECT_THROW(Iet::make({q(0, 1), q(1, 2), q(1, 2), q(1, 2), q(1, 2), q(1, 2)}, PermutationPair::symmetric(6)),
               InvalidArgument);
  EXPECT_THROW(Iet::make({q(1, 2), q(-1, 2)}, PermutationPair::symmetric(2)), InvalidArgument);
  EXPECT_THROW(Iet::make({q(1, 2), q(1, 2), q(1, 2)}, PermutationPair::symmetric(2)), InvalidArgument);
}

TEST(MakeIet, TwoIntervalTranslations) {
  const auto t = two_rotation();
  EXPECT_EQ(t.translation(A), q(2, 5));
  EXPECT_EQ(t.translation(B), q(-3, 5));
  EXPECT_EQ(t(q(0, 1)), q(2, 5));
  EXPECT_EQ(t(q(4, 5)), q(1, 5));
  EXPECT_THROW(t(q(1, 1)), InvalidArgument);
  EXPECT_THROW(t(q(-1, 5)), InvalidArgument);
}

TEST(Evaluate, IdentityPermutationFixesEverything) {
  const auto t = Iet::make({q(1, 3), q(1, 2), q(1, 6)}, PermutationPair::parse("ABC/ABC"));
  for (long i = 0; i < 12; ++i) EXPECT_EQ(t(q(i, 12)), q(i, 12));
}

TEST(Evaluate, InverseUndoesTheMap) {
  const auto t = Iet::make({q(1, 7), q(2, 7), q(1, 7), q(3, 7)}, PermutationPair::parse("ABCD/DCAB"));
  const auto inv = t.inverse();
  for (long i = 0; i < 49; ++i) EXPECT_EQ(inv(t(q(i, 49))), q(i, 49));
}

TEST(VisitVector, TwoIntervalOrbit) {
  const auto t = two_rotation();
  // 0 -> 2/5 -> 4/5 -> 1/5 -> 3/5: letters A A B A B
  EXPECT_EQ(visit_vector(t, 0, 5), (CountVector{3, 2}));
  EXPECT_EQ(iterate(t, 0, 5), 0);
  EXPECT_EQ(visit_vector(t, q(1, 3), 0), (CountVector{0, 0}));
  EXPECT_EQ(visit_vector(t, q(4, 5), 1), (CountVector{0, 1}));
}

TEST(FirstReturn, FullDomainIsTheMapItself) {
  const auto t = two_rotation();
  const auto fr = first_return(t, t.domain());
  ASSERT_EQ(fr.branches.size(), 2u);
  for (const auto& b : fr.branches) EXPECT_EQ(b.return_time, 1u);
  EXPECT_EQ(fr.branches[0].domain, t.top_interval(A));
  EXPECT_EQ(fr.branches[0].translation, t.translation(A));
}

TEST(FirstReturn, TwoIntervalInducedOnA) {
  const auto t = two_rotation();
  const auto fr = first_return(t, {0, q(3, 5)});
  // [0,1/5) lands in [2/5,3/5) at once; [1/5,3/5) passes through B first
  ASSERT_EQ(fr.branches.size(), 2u);
  EXPECT_EQ(fr.branches[0].domain, (RationalInterval{0, q(1, 5)}));
  EXPECT_EQ(fr.branches[0].return_time, 1u);
  EXPECT_EQ(fr.branches[0].word, (std::vector<Letter>{A}));
  EXPECT_EQ(fr.branches[0].translation, q(2, 5));
  EXPECT_EQ(fr.branches[1].domain, (RationalInterval{q(1, 5), q(3, 5)}));
  EXPECT_EQ(fr.branches[1].return_time, 2u);
  EXPECT_EQ(fr.branches[1].word, (std::vector<Letter>{A, B}));
  EXPECT_EQ(fr.branches[1].translation, q(-1, 5));
}

TEST(FirstReturn, TwoIntervalInducedOnB) {
  const auto t = two_rotation();
  const auto fr = first_return(t, {q(3, 5), 1});
  std::vector<std::uint64_t> times;
  for (const auto& b : fr.branches) times.push_back(b.return_time);
  EXPECT_EQ(times, (std::vector<std::uint64_t>{3, 2}));  // [3/5,4/5) then [4/5,1)
  Rational measure = 0;
  for (const auto& b : fr.branches) measure += b.domain.width();
  EXPECT_EQ(measure, q(2, 5));
}

TEST(FirstReturn, RejectsOutsideIntervalAndCap) {
  const auto t = two_rotation();
  EXPECT_THROW(first_return(t, {q(1, 2), q(3, 2)}), InvalidArgument);
  const auto slow = Iet::make({q(1, 1000), q(999, 1000)}, PermutationPair::parse("AB/BA"));
  EXPECT_THROW(first_return(slow, {0, q(1, 100000)}, 10), DiagnosticError);
}

TEST(Keane, IdentityFailsImmediately) {
  const auto t = Iet::make({q(1, 3), q(1, 3), q(1, 3)}, PermutationPair::parse("ABC/ABC"));
  const auto r = keane_horizon_check(t, 10);
  EXPECT_FALSE(r.pass);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->time, 1u);
}

TEST(Keane, RationalRotationPassesBelowItsPeriod) {
  // The single cut is periodic with period 10007; exact rationals stand in
  // for an irrational rotation up to that horizon.
  const auto t = Iet::make({q(6000, 10007), q(4007, 10007)}, PermutationPair::parse("AB/BA"));
  EXPECT_TRUE(keane_horizon_check(t, 10'000).pass);
  const auto r = keane_horizon_check(t, 10'007);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.witness->time, 10'007u);
  EXPECT_THROW(keane_horizon_check(t, 0), InvalidArgument);
}
