#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "iet/construction.hpp"
#include "iet/projective.hpp"

using namespace iet;
using namespace iet::letters;

namespace {

CountVector v6(std::initializer_list<long> x) {
  CountVector out;
  for (long a : x) out.emplace_back(a);
  return out;
}

const ConstructionTrace& trace6() {
  static const ConstructionTrace t = build_trace(6);
  return t;
}

void expect_rel(double got, double want, double rel) { EXPECT_LE(std::abs(got - want), rel * std::abs(want)) << got; }

}  // namespace

TEST(Angle, ElementaryCases) {
  EXPECT_EQ(angle(v6({1, 0, 0, 0, 0, 0}), v6({1, 0, 0, 0, 0, 0})), 0.0);
  EXPECT_DOUBLE_EQ(angle(v6({1, 0, 0, 0, 0, 0}), v6({0, 1, 0, 0, 0, 0})), M_PI / 2);
  EXPECT_DOUBLE_EQ(angle(v6({1, 1, 0, 0, 0, 0}), v6({0, 1, 0, 0, 0, 0})), M_PI / 4);
  EXPECT_THROW(angle(v6({0, 0, 0, 0, 0, 0}), v6({1, 0, 0, 0, 0, 0})), InvalidArgument);
}

TEST(Angle, TinyAnglesBetweenHugeVectors) {
  // (N, N+1) vs (N+1, N+2): sin theta = 1 / (|v||w|) exactly from the Gram value
  const BigInt n = pow_big(10, 30);
  const CountVector v{n, n + 1}, w{n + 1, n + 2};
  const double want = 1.0 / (std::sqrt(2.0) * 1e30 * std::sqrt(2.0) * 1e30);
  expect_rel(angle(v, w), want, 1e-12);
}

TEST(Angle, MatchesHighPrecisionReference) {
  // mpmath at 40 digits on the step-oracle checkpoint columns
  const double cd[] = {0.13078263384791766, 0.011761047724535312, 0.0099747468716085995,
                       0.0011094214163695382, 0.00029184302228240732};
  const double cross[] = {1.5405303296099024, 1.2406848051552298, 0.6713083435632575, 0.64031935401918412,
                          0.62782278119842401};
  const auto a = prop_vectors_series(trace6());
  for (std::size_t k = 1; k <= 5; ++k) {
    expect_rel(*a.theta_cd[k], cd[k - 1], 1e-12);
    expect_rel(*a.theta_cross[k], cross[k - 1], 1e-12);
  }
}

TEST(SineAddition, ExactIdentityCases) {
  EXPECT_LE(sine_addition_check(v6({1, 0, 0, 0, 0, 0}), v6({0, 1, 0, 0, 0, 0})), 1e-12);
  EXPECT_LE(sine_addition_check(v6({2, 4, 0, 0, 0, 0}), v6({1, 2, 0, 0, 0, 0})), 1e-12);
}

TEST(SineAdditionProperty, RandomPairs) {
  std::mt19937 rng(99);
  std::uniform_int_distribution<long> dist(0, 100000);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    CountVector v(6), w(6);
    for (auto& x : v) x = dist(rng);
    for (auto& x : w) x = dist(rng);
    v[0] += 1;
    w[0] += 1;
    worst = std::max(worst, sine_addition_check(v, w));
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(AngleProperty, SymmetricScaleInvariantAndBounded) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<long> dist(0, 1000), scale(1, 50);
  for (int i = 0; i < 200; ++i) {
    CountVector v(6), w(6);
    for (auto& x : v) x = dist(rng);
    for (auto& x : w) x = dist(rng);
    v[1] += 1;
    w[2] += 1;
    const double a = angle(v, w);
    ASSERT_GE(a, 0.0);
    ASSERT_LE(a, M_PI);
    ASSERT_NEAR(a, angle(w, v), 1e-15);
    CountVector sv = v;
    const long factor = scale(rng);
    for (auto& x : sv) x *= factor;
    ASSERT_NEAR(a, angle(sv, w), 1e-14);
  }
}

TEST(Series, ShapeAndDomain) {
  EXPECT_THROW(prop_vectors_series(build_trace(2)), InvalidArgument);
  const auto a = prop_vectors_series(trace6());
  EXPECT_EQ(a.rounds, 6u);
  EXPECT_EQ(a.theta_cd.size(), 7u);
  for (const auto* s : {&a.theta_ef, &a.theta_ab, &a.theta_cross, &a.theta_cd, &a.contraction_c})
    for (const auto& x : *s)
      if (x) EXPECT_TRUE(*x >= 0 && *x <= M_PI);
  EXPECT_FALSE(a.theta_ab[1].has_value());  // no A/B pair before the first left round
  EXPECT_TRUE(a.discrepancy_c[2].has_value());
  EXPECT_FALSE(a.discrepancy_c[3].has_value());
  EXPECT_TRUE(a.discrepancy_d[3].has_value());
}

TEST(Series, CrossAngleBoundedBelowAtRoundTwo) {
  const auto a = prop_vectors_series(trace6());
  EXPECT_GT(*a.theta_cross[2], 1.0);
}

TEST(Series, ThetaCdDecreasesFromRoundTwo) {
  const auto a = prop_vectors_series(trace6());
  for (std::size_t k = 2; k < 6; ++k) EXPECT_LT(*a.theta_cd[k + 1], *a.theta_cd[k]) << k;
}

TEST(Series, ContractionNearOneMinusOneOverK) {
  const auto a = prop_vectors_series(trace6());
  for (std::size_t k = 3; k <= 6; ++k) {
    const double target = 1.0 - 1.0 / static_cast<double>(k), tol = 5.0 / static_cast<double>(k * k);
    EXPECT_NEAR(*a.contraction_c[k], target, tol) << k;
    EXPECT_NEAR(*a.contraction_d[k], target, tol) << k;
  }
}

TEST(Series, DiscrepanciesShrink) {
  const auto a = prop_vectors_series(trace6());
  EXPECT_LT(*a.discrepancy_c[4], *a.discrepancy_c[2]);
  EXPECT_LT(*a.discrepancy_c[6], *a.discrepancy_c[4]);
  EXPECT_LT(*a.discrepancy_d[5], *a.discrepancy_d[3]);
}

TEST(DecayRatio, HandlesGapsAndReportsWorst) {
  std::vector<std::optional<double>> s{std::nullopt, 1.0, std::nullopt, 0.25, 0.2};
  // (0.25/1)^(1/2) = 0.5, then 0.8
  EXPECT_DOUBLE_EQ(*max_decay_ratio(s, 1), 0.8);
  EXPECT_DOUBLE_EQ(*max_decay_ratio(s, 1), *max_decay_ratio(s, 0));
  EXPECT_FALSE(max_decay_ratio({std::nullopt, 1.0}, 1).has_value());
}

TEST(SegmentCoordinates, ProjectionOntoLine) {
  const std::vector<Rational> v0{1, 0, 0}, v1{0, 1, 0};
  const std::vector<Rational> mid{make_rational(1, 2), make_rational(1, 2), 0};
  const auto c = segment_coordinates(mid, v0, v1);
  EXPECT_EQ(c.u, make_rational(1, 2));
  EXPECT_EQ(c.y_squared, 0);
  const auto off = segment_coordinates(std::vector<Rational>{0, 0, 1}, v0, v1);
  EXPECT_EQ(off.u, make_rational(1, 2));
  EXPECT_EQ(off.y_squared, make_rational(3, 2));
  EXPECT_THROW(segment_coordinates(v0, v0, v0), InvalidArgument);
}

TEST(Limits, EstimatesAreProbabilityVectors) {
  EXPECT_THROW(estimate_limits(build_trace(3)), InvalidArgument);
  const auto est = estimate_limits(trace6());
  for (const auto* v : {&est.v0, &est.v1, &est.v_prime}) {
    Rational s = 0;
    for (const auto& x : *v) {
      EXPECT_GE(x, 0);
      s += x;
    }
    EXPECT_EQ(s, 1);
  }
  EXPECT_GE(est.v0_error, 0);
  EXPECT_LT(est.v0_error, 1e-3);
  EXPECT_LT(est.v1_error, 1e-2);
  const auto d = [](const std::vector<Rational>& a, const std::vector<Rational>& b) { return l1_distance(a, b).get_d(); };
  EXPECT_GT(d(est.v_prime, est.v0), 0.2);
  EXPECT_GT(d(est.v_prime, est.v1), 0.2);
}

TEST(Limits, ConeShrinksAcrossTheSegment) {
  const auto t = trace6();
  const auto profiles = cone_profiles(t, estimate_limits(t));
  ASSERT_EQ(profiles.size(), 6u);
  for (std::size_t i = 3; i < profiles.size(); ++i) EXPECT_LT(profiles[i].y_extent, profiles[i - 1].y_extent);
  for (const auto& p : profiles) {
    EXPECT_GT(p.u_max - p.u_min, 0.5);
    EXPECT_GT(p.u_c, 0.0);
    EXPECT_LT(p.u_c, 1.0);
  }
  EXPECT_TRUE(std::isfinite(u_gap_constant(profiles)));
  const auto cone2 = cone_snapshot(t.matrix(2)), cone1 = cone_snapshot(t.matrix(1));
  EXPECT_LT(cone2.diameter, cone1.diameter);
}
