#include <gtest/gtest.h>

#include <random>

#include "iet/rauzy.hpp"
#include "iet/words.hpp"

using namespace iet;
using namespace iet::letters;

namespace {

Rational q(long n, long d) { return make_rational(n, d); }

CountVector e(std::initializer_list<int> idx) {
  CountVector v(6, 0);
  for (int i : idx) v[static_cast<std::size_t>(i)] += 1;
  return v;
}

}  // namespace

TEST(RauzyStep, TwoIntervals) {
  const auto t = Iet::make({q(3, 5), q(2, 5)}, PermutationPair::parse("AB/BA"));
  const auto [next, rec] = rauzy_step(t);
  EXPECT_EQ(rec.winner, A);
  EXPECT_EQ(rec.loser, B);
  EXPECT_EQ(rec.side, Side::bottom_wins);
  EXPECT_EQ(next.lengths(), (LengthVector{q(1, 5), q(2, 5)}));
  EXPECT_EQ(next.permutation().to_string(), "AB/BA");
}

TEST(RauzyStep, SymmetricSixTopWins) {
  LengthVector l{q(1, 10), q(1, 10), q(1, 10), q(1, 10), q(1, 10), q(5, 10)};
  const auto [next, rec] = rauzy_step(Iet::make(l, PermutationPair::symmetric(6)));
  EXPECT_EQ(rec, (StepRecord{F, A, Side::top_wins}));
  EXPECT_EQ(next.permutation().to_string(), "ABCDEF/FAEDCB");
  EXPECT_EQ(next.length(F), q(4, 10));
}

TEST(RauzyStep, TieIsFatal) {
  const auto t = Iet::make({q(1, 2), q(1, 2)}, PermutationPair::parse("AB/BA"));
  EXPECT_FALSE(next_record(t).has_value());
  EXPECT_THROW(rauzy_step(t), DiagnosticError);
}

TEST(RauzyRun, ClosedFormMatchesSingleSteps) {
  // B is far longer than A on the fixed permutation AB/BA
  const auto t = Iet::make({q(1, 100), q(99, 100) - q(1, 1000)}, PermutationPair::parse("AB/BA"));
  const auto [fast, run] = rauzy_run(t);
  Iet slow = t;
  for (BigInt i = 0; i < run.count; ++i) slow = rauzy_step(slow).first;
  EXPECT_EQ(fast, slow);
  EXPECT_EQ(run.count, 98);
  EXPECT_EQ(next_record(fast)->winner, A);
}

TEST(ApplyRecord, ElementaryUpdate) {
  const auto m = apply_record(VisitMatrix::identity(6), {F, A, Side::top_wins});
  EXPECT_EQ(m.column(A), e({0, 5}));
  EXPECT_EQ(m.determinant(), 1);
}

TEST(ApplyRecord, ComposesAsMatrixProduct) {
  const StepRecord r1{F, A, Side::top_wins}, r2{C, F, Side::bottom_wins};
  const auto seq = apply_record(apply_record(VisitMatrix::identity(6), r1), r2);
  const auto prod = elementary_matrix(6, r1) * elementary_matrix(6, r2);
  EXPECT_EQ(seq.columns(), prod.columns());
}

TEST(ApplyRecord, OpeningRightLoop) {
  VisitMatrix m = VisitMatrix::identity(6);
  for (const auto& r : {StepRecord{F, A, Side::top_wins}, StepRecord{F, B, Side::top_wins},
                        StepRecord{C, F, Side::bottom_wins}, StepRecord{C, E, Side::bottom_wins}})
    m = apply_record(m, r);
  EXPECT_EQ(m.column(A), e({0, 5}));
  EXPECT_EQ(m.column(B), e({1, 5}));
  EXPECT_EQ(m.column(F), e({5, 2}));
  EXPECT_EQ(m.column(E), e({4, 2}));
}

TEST(ReplayPath, RightLoopItinerary) {
  const std::vector<StepRecord> recs{{F, A, Side::top_wins}, {F, B, Side::top_wins}, {C, F, Side::bottom_wins},
                                     {C, E, Side::bottom_wins}, {D, C, Side::top_wins}, {C, D, Side::bottom_wins},
                                     {F, C, Side::top_wins}, {F, D, Side::top_wins}, {E, F, Side::bottom_wins},
                                     {F, E, Side::top_wins}};
  const auto it = replay_path(PermutationPair::symmetric(6), recs);
  ASSERT_EQ(it.size(), recs.size() + 1);
  EXPECT_EQ(it[1].to_string(), "ABCDEF/FAEDCB");
  EXPECT_EQ(it[2].to_string(), "ABCDEF/FBAEDC");
  EXPECT_EQ(it.back(), PermutationPair::symmetric(6));
}

TEST(ReplayPath, EmptyAndInvalid) {
  EXPECT_EQ(replay_path(PermutationPair::symmetric(6), {}).size(), 1u);
  const std::vector<StepRecord> bad{{C, A, Side::top_wins}};
  EXPECT_THROW(replay_path(PermutationPair::symmetric(6), bad), InvalidArgument);
}

TEST(ConeSnapshot, IdentityAndOneUpdate) {
  const auto id = cone_snapshot(VisitMatrix::identity(6));
  EXPECT_EQ(id.diameter, 2);
  EXPECT_EQ(id.vertices[2], (std::vector<Rational>{0, 0, 1, 0, 0, 0}));
  const auto one = cone_snapshot(apply_record(VisitMatrix::identity(6), {F, A, Side::top_wins}));
  EXPECT_EQ(one.vertices[0], (std::vector<Rational>{q(1, 2), 0, 0, 0, 0, q(1, 2)}));
}

TEST(ConeSnapshot, ContainmentViaExactSolve) {
  const auto m = apply_record(VisitMatrix::identity(6), {F, A, Side::top_wins});
  EXPECT_TRUE(cone_contains(m, e({0, 5})));
  EXPECT_FALSE(cone_contains(m, e({0})));
}

// ---- properties ------------------------------------------------------------

namespace {

struct RandomIet {
  std::mt19937 rng;
  explicit RandomIet(unsigned seed) : rng(seed) {}

  Iet operator()() {
    std::uniform_int_distribution<int> dsize(2, 7), len(1, 997);
    for (;;) {
      const std::size_t d = static_cast<std::size_t>(dsize(rng));
      std::vector<Letter> top, bottom;
      for (std::size_t i = 0; i < d; ++i) top.emplace_back(static_cast<std::uint8_t>(i));
      bottom = top;
      std::shuffle(top.begin(), top.end(), rng);
      std::shuffle(bottom.begin(), bottom.end(), rng);
      if (top.back() == bottom.back()) continue;
      LengthVector l;
      for (std::size_t i = 0; i < d; ++i) l.push_back(make_rational(len(rng), 997));
      const Iet t = Iet::make(l, PermutationPair(top, bottom));
      if (next_record(t)) return t;
    }
  }
};

}  // namespace

TEST(RauzyProperty, StepIsFirstReturnToShortenedInterval) {
  RandomIet gen(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Iet t = gen();
    const auto [next, rec] = rauzy_step(t);
    const RationalInterval j{0, t.total_length() - t.length(rec.loser)};
    const auto fr = first_return(t, j);
    for (const auto& b : fr.branches) {
      ASSERT_LE(b.return_time, 2u);
      ASSERT_TRUE(next.continuous_on(b.domain)) << t.permutation().to_string();
      ASSERT_EQ(next.translation(next.letter_at(b.domain.lo)), b.translation);
    }
  }
}

TEST(RauzyProperty, CocycleIdentityAndUnimodularity) {
  RandomIet gen(11);
  for (int trial = 0; trial < 100; ++trial) {
    Iet t = gen();
    VisitMatrix m = VisitMatrix::identity(t.size());
    const LengthVector start = t.lengths();
    for (int s = 0; s < 20; ++s) {
      const auto rec = next_record(t);
      if (!rec) break;
      auto [next, r] = rauzy_step(t);
      ASSERT_EQ(elementary_matrix(t.size(), r) * next.lengths(), t.lengths());
      m = apply_record(m, r);
      ASSERT_EQ(m * next.lengths(), start);
      t = std::move(next);
    }
    ASSERT_EQ(abs(m.determinant()), 1);
  }
}

TEST(RauzyProperty, SurgeryKeepsRowsPermutations) {
  RandomIet gen(13);
  for (int trial = 0; trial < 200; ++trial) {
    const Iet t = gen();
    const auto [next, rec] = rauzy_step(t);
    const auto& p = t.permutation();
    const auto& n = next.permutation();
    // the winner's row is untouched
    if (rec.side == Side::top_wins) EXPECT_EQ(p.top(), n.top());
    else EXPECT_EQ(p.bottom(), n.bottom());
  }
}

TEST(Words, BlockOperations) {
  BlockWord w(C);
  BlockWord ce(C);
  ce.append(BlockWord(E));
  w.prepend(ce, 16);
  w.append(BlockWord(F));
  EXPECT_EQ(w.to_string(), "(CE)^16 C F");
  EXPECT_EQ(w.length(), 34);
  const auto c = w.counts(6);
  EXPECT_EQ(c[C.index], 17);
  EXPECT_EQ(c[E.index], 16);
  EXPECT_EQ(c[F.index], 1);
  EXPECT_EQ(w.at(0), C);
  EXPECT_EQ(w.at(31), E);
  EXPECT_EQ(w.at(33), F);
  EXPECT_THROW(w.at(34), InvalidArgument);
  EXPECT_THROW(w.expand(10), InvalidArgument);
  EXPECT_THROW(w.append(ce, 0), InvalidArgument);
}

TEST(Words, CompressedRepeatOfRepeatedBlocksIsRejected) {
  BlockWord inner(C);
  inner.append(BlockWord(D), 3);
  BlockWord w;
  EXPECT_THROW(w.append(inner, 2), DiagnosticError);
}

TEST(WordsProperty, CompressedAgreesWithExpanded) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> letter(0, 5), rep(1, 6), op(0, 3);
  for (int trial = 0; trial < 200; ++trial) {
    BlockWord w;
    std::vector<Letter> plain;
    for (int s = 0; s < 8; ++s) {
      const Letter a(static_cast<std::uint8_t>(letter(rng))), b(static_cast<std::uint8_t>(letter(rng)));
      BlockWord piece(a);
      piece.append(BlockWord(b));
      const int times = rep(rng);
      std::vector<Letter> expanded;
      for (int i = 0; i < times; ++i) expanded.insert(expanded.end(), {a, b});
      if (op(rng) == 0) {
        w.prepend(piece, times);
        plain.insert(plain.begin(), expanded.begin(), expanded.end());
      } else {
        w.append(piece, times);
        plain.insert(plain.end(), expanded.begin(), expanded.end());
      }
    }
    ASSERT_EQ(w.expand(100000), plain);
    ASSERT_EQ(w.length(), static_cast<long>(plain.size()));
    CountVector hist(6, 0);
    for (auto l : plain) hist[l.index] += 1;
    ASSERT_EQ(w.counts(6), hist);
    for (std::size_t i = 0; i < plain.size(); i += 3) ASSERT_EQ(w.at(static_cast<long>(i)), plain[i]);
  }
}
