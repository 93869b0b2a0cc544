#pragma once

// Projective geometry of the visit-matrix columns: angles from exact inner
// products, the per-round angle series of the construction, limit
// estimates for the segment the cones shrink to, and coordinates along it.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "iet/construction.hpp"
#include "iet/errors.hpp"
#include "iet/exact.hpp"

namespace iet {

namespace detail {

/// (mantissa, exponent) with v = m * 2^e, |m| in [0.5, 1) or 0.
struct Scaled {
  double m = 0;
  long e = 0;
};

inline Scaled scaled(const BigInt& v) {
  Scaled s;
  s.m = mpz_get_d_2exp(&s.e, v.get_mpz_t());
  return s;
}

inline BigInt dot(std::span<const BigInt> v, std::span<const BigInt> w) {
  BigInt s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * w[i];
  return s;
}

}  // namespace detail

/// Angle between two integer vectors in [0, pi]. The Gram determinant
/// |v|^2|w|^2 - <v,w>^2 is formed exactly, so tiny angles keep full
/// relative precision.
inline double angle(std::span<const BigInt> v, std::span<const BigInt> w) {
  if (v.size() != w.size()) throw InvalidArgument("angle: dimension mismatch");
  const BigInt vv = detail::dot(v, v), ww = detail::dot(w, w);
  if (vv == 0 || ww == 0) throw InvalidArgument("angle: zero vector");
  const BigInt vw = detail::dot(v, w);
  const BigInt gram = vv * ww - vw * vw;

  auto g = detail::scaled(gram);
  if (g.e % 2 != 0) {
    g.m *= 2;
    g.e -= 1;
  }
  const auto d = detail::scaled(vw);
  const double root = std::sqrt(g.m);
  if (gram == 0) return vw > 0 ? 0.0 : M_PI;
  if (vw == 0) return M_PI / 2;
  const long e = std::max(g.e / 2, d.e);
  return std::atan2(std::ldexp(root, static_cast<int>(g.e / 2 - e)), std::ldexp(d.m, static_cast<int>(d.e - e)));
}

/// | |sin theta(v+w, w)| - |v|/|v+w| |sin theta(v, w)| |.
inline double sine_addition_check(std::span<const BigInt> v, std::span<const BigInt> w) {
  CountVector sum(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sum[i] = v[i] + w[i];
  const double lhs = std::abs(std::sin(angle(sum, w)));
  const double nv = std::sqrt(detail::dot(v, v).get_d());
  const double ns = std::sqrt(detail::dot(sum, sum).get_d());
  const double rhs = nv / ns * std::abs(std::sin(angle(v, w)));
  return std::abs(lhs - rhs);
}

/// The representative vectors of the two large pairs at a snapshot index.
/// For the E/F pair, index k odd is taken right after F and E are first
/// beaten in right round k, and k+1 at the end of the s-block and of that
/// round. The A/B pair is the same with left rounds (k even).
struct PairVectors {
  CountVector first;   ///< F resp. A
  CountVector second;  ///< E resp. B
};

inline std::optional<PairVectors> pair_vectors(const ConstructionTrace& trace, LoopSide side, std::size_t k) {
  if (k == 0) return std::nullopt;
  const bool at_round_start = side_of_round(k) == side;
  const std::size_t round = at_round_start ? k : k - 1;
  if (round == 0 || round > trace.depth()) return std::nullopt;
  const auto& s = trace.round(round).snapshots;
  if (at_round_start) return PairVectors{s.lead_start, s.partner_start};
  return PairVectors{s.lead_end, s.partner_end};
}

/// Per-round angle quantities. Vectors are indexed by k (entry 0 unused);
/// entries are empty where the quantity is not defined at the trace depth.
struct AngleSeries {
  std::size_t rounds = 0;
  /// max theta(v_s(k), v_t(k+1)) over s, t in {E, F}
  std::vector<std::optional<double>> theta_ef;
  /// same for {A, B}
  std::vector<std::optional<double>> theta_ab;
  /// min angle between the E/F columns and the A/B columns at n_k
  std::vector<std::optional<double>> theta_cross;
  /// theta(C_C(n_k), C_D(n_k))
  std::vector<std::optional<double>> theta_cd;
  /// angle of C (resp. D) to the round's anchor after the two beats by the
  /// lead letter, divided by the same angle before them
  std::vector<std::optional<double>> contraction_c, contraction_d;
  /// |X| / (|X| + |anchor|) for the same step, X = C resp. D
  std::vector<std::optional<double>> simplex_contraction_c, simplex_contraction_d;
  /// theta(C_C, C_D) right after the r-block and the step after it
  std::vector<std::optional<double>> theta_cd_inner;
  /// C column at the end of right round k-1 against the C column after D
  /// beats it in left round k (k even); the D analogue at odd k, from the
  /// end of left round k-1 to right round k
  std::vector<std::optional<double>> discrepancy_c, discrepancy_d;
};

inline AngleSeries prop_vectors_series(const ConstructionTrace& trace) {
  using namespace letters;
  const std::size_t K = trace.depth();
  if (K < 3) throw InvalidArgument("angle series needs at least three rounds");
  AngleSeries out;
  out.rounds = K;
  auto sized = [K] { return std::vector<std::optional<double>>(K + 1); };
  out.theta_ef = sized();
  out.theta_ab = sized();
  out.theta_cross = sized();
  out.theta_cd = sized();
  out.contraction_c = sized();
  out.contraction_d = sized();
  out.simplex_contraction_c = sized();
  out.simplex_contraction_d = sized();
  out.theta_cd_inner = sized();
  out.discrepancy_c = sized();
  out.discrepancy_d = sized();

  auto movement = [&](LoopSide side, std::size_t k) -> std::optional<double> {
    auto a = pair_vectors(trace, side, k), b = pair_vectors(trace, side, k + 1);
    if (!a || !b) return std::nullopt;
    double m = 0;
    for (const auto* x : {&a->first, &a->second})
      for (const auto* y : {&b->first, &b->second}) m = std::max(m, angle(*x, *y));
    return m;
  };

  for (std::size_t k = 1; k <= K; ++k) {
    out.theta_ef[k] = movement(LoopSide::right, k);
    out.theta_ab[k] = movement(LoopSide::left, k);

    const auto& m = trace.matrix(k);
    double cross = M_PI;
    for (auto x : {E, F})
      for (auto y : {A, B}) cross = std::min(cross, angle(m.column(x), m.column(y)));
    out.theta_cross[k] = cross;
    out.theta_cd[k] = angle(m.column(C), m.column(D));

    const auto& s = trace.round(k).snapshots;
    out.contraction_c[k] = angle(s.c_second, s.lead_start) / angle(s.c_first, s.lead_start);
    out.contraction_d[k] = angle(s.d_second, s.lead_start) / angle(s.d_first, s.lead_start);
    const BigInt anchor = l1_norm(s.lead_start);
    const BigInt nc = l1_norm(s.c_first), nd = l1_norm(s.d_first);
    out.simplex_contraction_c[k] = make_rational(nc, nc + anchor).get_d();
    out.simplex_contraction_d[k] = make_rational(nd, nd + anchor).get_d();

    out.theta_cd_inner[k] = angle(s.c_first, s.d_first);
    if (k >= 2) {
      const auto& p = trace.round(k - 1).snapshots;
      if (side_of_round(k) == LoopSide::left)
        out.discrepancy_c[k] = angle(p.c_second, s.c_first);
      else
        out.discrepancy_d[k] = angle(p.d_second, s.d_first);
    }
  }
  return out;
}

/// Largest per-round ratio between consecutive defined entries at indices
/// >= from: (x(k2)/x(k1))^(1/(k2-k1)).
inline std::optional<double> max_decay_ratio(const std::vector<std::optional<double>>& series, std::size_t from) {
  std::optional<double> worst;
  std::optional<std::size_t> prev;
  for (std::size_t k = from; k < series.size(); ++k) {
    if (!series[k]) continue;
    if (prev) {
      const double ratio = std::pow(*series[k] / *series[*prev], 1.0 / static_cast<double>(k - *prev));
      if (!worst || ratio > *worst) worst = ratio;
    }
    prev = k;
  }
  return worst;
}

/// Smallest alpha with x(k) <= alpha^k for every defined k >= from.
inline std::optional<double> envelope_rate(const std::vector<std::optional<double>>& series, std::size_t from) {
  std::optional<double> alpha;
  for (std::size_t k = std::max<std::size_t>(from, 1); k < series.size(); ++k) {
    if (!series[k]) continue;
    const double a = std::pow(*series[k], 1.0 / static_cast<double>(k));
    if (!alpha || a > *alpha) alpha = a;
  }
  return alpha;
}

struct SegmentCoords {
  Rational u;          ///< 0 at v0, 1 at v1
  Rational y_squared;  ///< squared l2 distance from the line through v0, v1
  double y = 0;
};

inline SegmentCoords segment_coordinates(std::span<const Rational> v, std::span<const Rational> v0,
                                         std::span<const Rational> v1) {
  if (v.size() != v0.size() || v.size() != v1.size()) throw InvalidArgument("segment_coordinates: dimension mismatch");
  Rational dd = 0, pd = 0, pp = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Rational d = v1[i] - v0[i];
    const Rational p = v[i] - v0[i];
    dd += d * d;
    pd += p * d;
    pp += p * p;
  }
  if (dd == 0) throw InvalidArgument("segment_coordinates: v0 equals v1");
  SegmentCoords c;
  c.u = pd / dd;
  c.y_squared = pp - c.u * c.u * dd;
  c.y = std::sqrt(c.y_squared.get_d());
  return c;
}

/// Finite-depth estimates of the two ends of the limit segment and of the
/// interior point the C/D columns converge to.
struct MeasureEstimate {
  std::vector<Rational> v0, v1, v_prime;
  double v0_error = 0, v1_error = 0, v_prime_error = 0;
  /// l1 distance between consecutive candidates: entry k compares n_k with
  /// n_{k-1} (entries 0 and 1 unused)
  std::vector<double> v0_steps, v1_steps, v_prime_steps;
};

inline MeasureEstimate estimate_limits(const ConstructionTrace& trace) {
  using namespace letters;
  const std::size_t K = trace.depth();
  if (K < 4) throw InvalidArgument("limit estimates need at least four rounds");
  auto proj = [&](std::size_t k, Letter l) { return projectivize(trace.matrix(k).column(l)); };
  auto dist = [](const std::vector<Rational>& a, const std::vector<Rational>& b) {
    return l1_distance(a, b).get_d();
  };
  MeasureEstimate est;
  est.v0 = proj(K, F);
  est.v1 = proj(K, A);
  est.v_prime = proj(K, C);
  est.v0_steps.assign(K + 1, 0);
  est.v1_steps.assign(K + 1, 0);
  est.v_prime_steps.assign(K + 1, 0);
  for (std::size_t k = 2; k <= K; ++k) {
    est.v0_steps[k] = dist(proj(k, F), proj(k - 1, F));
    est.v1_steps[k] = dist(proj(k, A), proj(k - 1, A));
    est.v_prime_steps[k] = dist(proj(k, C), proj(k - 1, C));
  }
  est.v0_error = est.v0_steps[K] + dist(proj(K, E), est.v0);
  est.v1_error = est.v1_steps[K] + dist(proj(K, B), est.v1);
  est.v_prime_error = est.v_prime_steps[K] + dist(proj(K, D), est.v_prime);
  return est;
}

/// The cone M(n_k) Delta seen in segment coordinates.
struct ConeProfile {
  std::size_t k = 0;
  double y_extent = 0;  ///< largest y over the six vertices
  double u_min = 0, u_max = 0;
  double u_c = 0;  ///< u of the C vertex
  double l1_c_to_v_prime = 0;
};

inline std::vector<ConeProfile> cone_profiles(const ConstructionTrace& trace, const MeasureEstimate& est) {
  std::vector<ConeProfile> out;
  for (std::size_t k = 1; k <= trace.depth(); ++k) {
    const auto snap = cone_snapshot(trace.matrix(k));
    ConeProfile p;
    p.k = k;
    p.u_min = 1e300;
    p.u_max = -1e300;
    for (std::size_t i = 0; i < snap.vertices.size(); ++i) {
      const auto c = segment_coordinates(snap.vertices[i], est.v0, est.v1);
      const double u = c.u.get_d();
      p.y_extent = std::max(p.y_extent, c.y);
      p.u_min = std::min(p.u_min, u);
      p.u_max = std::max(p.u_max, u);
      if (i == letters::C.index) {
        p.u_c = u;
        p.l1_c_to_v_prime = l1_distance(snap.vertices[i], est.v_prime).get_d();
      }
    }
    out.push_back(p);
  }
  return out;
}

/// Smallest C with |u_c(k+2) - u_c(k)| <= C/k^2 for all k.
inline double u_gap_constant(const std::vector<ConeProfile>& profiles) {
  double c = 0;
  for (std::size_t i = 0; i + 2 < profiles.size(); ++i) {
    const double k = static_cast<double>(profiles[i].k);
    c = std::max(c, std::abs(profiles[i + 2].u_c - profiles[i].u_c) * k * k);
  }
  return c;
}

}  // namespace iet
