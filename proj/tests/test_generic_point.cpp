#include <gtest/gtest.h>

#include <random>

#include "iet/generic_point.hpp"
#include "iet/projective.hpp"
#include "iet/verify.hpp"

using namespace iet;
using namespace iet::letters;

namespace {

struct Fixture {
  ConstructionTrace trace = build_trace(5);
  LengthVector lengths = concrete_lengths(trace);
  Iet t = Iet::make(lengths, PermutationPair::symmetric(6));
  NestedChain chain = nested_chain(trace, lengths, 5);
};

const Fixture& fx() {
  static const Fixture f;
  return f;
}

}  // namespace

TEST(LevelStructure, LevelZeroIsTheOriginalPartition) {
  const auto ls = level_structure(fx().trace, fx().lengths, 0);
  EXPECT_EQ(ls.J, fx().t.domain());
  for (std::uint8_t i = 0; i < 6; ++i) {
    EXPECT_EQ(ls.interval(Letter(i)), fx().t.top_interval(Letter(i)));
    EXPECT_EQ(ls.return_time(Letter(i)), 1);
  }
  EXPECT_THROW(level_structure(fx().trace, fx().lengths, 6), InvalidArgument);
}

TEST(LevelStructure, MatchesBruteForceFirstReturn) {
  for (std::size_t k = 1; k <= 2; ++k) {
    const auto ls = level_structure(fx().trace, fx().lengths, k);
    const auto fr = first_return(fx().t, ls.J);
    ASSERT_EQ(fr.branches.size(), 6u);
    Rational total = 0;
    for (std::uint8_t i = 0; i < 6; ++i) {
      const Letter l(i);
      total += ls.interval(l).width();
      const auto it = std::find_if(fr.branches.begin(), fr.branches.end(),
                                   [&](const ReturnBranch& b) { return b.domain == ls.interval(l); });
      ASSERT_NE(it, fr.branches.end()) << k << l.symbol();
      EXPECT_EQ(from_u64(it->return_time), ls.return_time(l));
      EXPECT_EQ(it->translation, ls.induced.translation(l));
      EXPECT_EQ(it->word, verify::expand_to_base(fx().trace, k, l));
    }
    EXPECT_EQ(total, ls.J.width());
  }
}

TEST(Hat, LevelOneIsCdcWithUnitConstant) {
  const auto ls1 = level_structure(fx().trace, fx().lengths, 1);
  const auto ls2 = level_structure(fx().trace, fx().lengths, 2);
  const auto h = hat_interval(fx().trace, ls1, ls2, true, true);
  EXPECT_EQ(h.c, 1);
  EXPECT_EQ(h.classification.major, C);
  ASSERT_TRUE(h.classification.matches);
  std::string order;
  for (const auto& f : h.classification.floors) order += f.tower.symbol();
  EXPECT_EQ(order, "CDC");
  // for c = 1 the orbit-staying set is the literal triple intersection
  EXPECT_EQ(h.literal_components, std::optional<std::size_t>(1));
  EXPECT_EQ(h.hat.pieces().size(), 1u);
  EXPECT_TRUE(h.orbit_inside);
}

TEST(Hat, EvenLevelsMirrorOntoD) {
  const auto ls2 = level_structure(fx().trace, fx().lengths, 2);
  const auto ls3 = level_structure(fx().trace, fx().lengths, 3);
  const auto h = hat_interval(fx().trace, ls2, ls3);
  EXPECT_EQ(h.c, 3);
  EXPECT_EQ(h.classification.major, D);
  EXPECT_TRUE(h.classification.matches);
  EXPECT_TRUE(h.orbit_inside);
}

TEST(Hat, BruteForceMembership) {
  // every sampled point of the hat keeps its S_1 orbit inside C_1 for |i| <= c
  const auto ls1 = level_structure(fx().trace, fx().lengths, 1);
  const auto ls2 = level_structure(fx().trace, fx().lengths, 2);
  const auto h = hat_interval(fx().trace, ls1, ls2);
  const auto x = ls1.interval(C);
  const Iet inv = ls1.induced.inverse();
  for (const auto& piece : h.hat.pieces())
    for (int s = 0; s < 16; ++s) {
      Rational p = piece.lo + piece.width() * make_rational(s, 16);
      Rational f = p, b = p;
      for (long i = 0; i < h.c; ++i) {
        f = ls1.induced(f);
        b = inv(b);
        ASSERT_TRUE(x.contains(f));
        ASSERT_TRUE(x.contains(b));
      }
    }
}

TEST(Hat, RequiresNextRound) {
  const auto ls = level_structure(fx().trace, fx().lengths, 5);
  EXPECT_THROW(hat_interval(fx().trace, ls, ls), InvalidArgument);
}

TEST(Chain, StrictlyNestedAndIncreasing) {
  const auto& c = fx().chain;
  ASSERT_EQ(c.depth(), 4u);
  for (std::size_t k = 2; k <= c.depth(); ++k) {
    EXPECT_TRUE(c.level(k - 1).interval.contains(c.level(k).interval));
    EXPECT_LT(c.level(k).interval.width(), c.level(k - 1).interval.width());
    EXPECT_GT(c.j(k), c.j(k - 1));
  }
  EXPECT_EQ(c.j(1), 19);
  EXPECT_EQ(c.j(2), 197);
  EXPECT_EQ(c.j(3), 5895);
  EXPECT_EQ(c.j(4), 2177305);
  EXPECT_THROW(nested_chain(fx().trace, fx().lengths, 1), InvalidArgument);
}

TEST(Chain, CheckpointTimeIsFirstEntryIntoNextLevel) {
  // j_k = min{ j : T^j I_k inside J_{k+1} }, by direct iteration
  const auto& c = fx().chain;
  for (std::size_t k = 1; k <= 3; ++k) {
    const auto J = c.structures[k + 1].J;
    RationalInterval cur = c.level(k).interval;
    BigInt j = 0;
    while (!J.contains(cur)) {
      ASSERT_TRUE(fx().t.continuous_on(cur));
      cur = cur.shifted(fx().t.translation(fx().t.letter_at(cur.lo)));
      ++j;
    }
    EXPECT_EQ(j, c.j(k)) << k;
  }
}

TEST(Birkhoff, TowerAgreesWithDirectIteration) {
  const auto& f = fx();
  Rational x = generic_point(f.chain).midpoint();
  CountVector counts(6, 0);
  const std::uint64_t cap = to_u64(f.chain.j(3));
  std::mt19937 rng(17);
  std::uniform_int_distribution<std::uint64_t> pick(1, cap);
  std::vector<std::uint64_t> probes{1, 2, 19, 20, 197, 198, cap};
  for (int i = 0; i < 40; ++i) probes.push_back(pick(rng));
  std::sort(probes.begin(), probes.end());
  std::size_t next = 0;
  for (std::uint64_t n = 1; n <= cap && next < probes.size(); ++n) {
    const Letter l = f.t.letter_at(x);
    counts[l.index] += 1;
    x += f.t.translation(l);
    while (next < probes.size() && probes[next] == n) {
      ASSERT_EQ(birkhoff_counts(f.trace, f.chain, from_u64(n)), counts) << n;
      ++next;
    }
  }
  EXPECT_THROW(birkhoff_counts(f.trace, f.chain, 0), InvalidArgument);
  EXPECT_THROW(birkhoff_counts(f.trace, f.chain, f.chain.j(4) + 1), InvalidArgument);
}

TEST(Birkhoff, FrequenciesAreProbabilityVectors) {
  const auto est = estimate_limits(fx().trace);
  const auto rep = genericity_report(fx().trace, fx().chain, est, 4);
  ASSERT_EQ(rep.checkpoints.size(), 4u);
  for (const auto& c : rep.checkpoints) {
    Rational s = 0;
    for (const auto& q : c.frequencies) s += q;
    EXPECT_EQ(s, 1);
    EXPECT_EQ(birkhoff_counts(fx().trace, fx().chain, c.j), c.counts);
  }
  EXPECT_EQ(rep.point, generic_point(fx().chain));
}
