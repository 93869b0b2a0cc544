#pragma once

// Levels of the constructed IET, the hat intervals and the nested chain
// that pins down the generic point, and Birkhoff sums along its orbit
// computed by descending through the induction words.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "iet/construction.hpp"
#include "iet/errors.hpp"
#include "iet/exact.hpp"
#include "iet/projective.hpp"
#include "iet/transformation.hpp"
#include "iet/words.hpp"

namespace iet {

/// The first-return map S_k of T to J_k = [0, |lambda^(k)|), where
/// lambda = M(n_k) lambda^(k).
struct LevelStructure {
  std::size_t k = 0;
  LengthVector lengths;
  RationalInterval J;
  Iet induced = Iet::make(LengthVector(kAlphabetSize, 1), PermutationPair::symmetric(kAlphabetSize));
  std::vector<RationalInterval> letter_intervals;
  CountVector return_times;

  const RationalInterval& interval(Letter l) const { return letter_intervals[l.index]; }
  const BigInt& return_time(Letter l) const { return return_times[l.index]; }
  RationalInterval image(Letter l) const { return induced.image_interval(l); }
};

inline LevelStructure level_structure(const ConstructionTrace& trace, const LengthVector& lengths, std::size_t k) {
  if (k > trace.depth()) throw InvalidArgument("level beyond trace depth");
  if (lengths.size() != kAlphabetSize) throw InvalidArgument("need six lengths");
  const VisitMatrix m = trace.matrix(k);
  LevelStructure ls;
  ls.k = k;
  try {
    ls.lengths = solve_exact(m.to_rational(), lengths);
  } catch (const DiagnosticError&) {
    throw DiagnosticError("visit matrix at level " + std::to_string(k) + " is singular");
  }
  for (const auto& l : ls.lengths)
    if (l <= 0) throw DiagnosticError("lengths are not in the cone of level " + std::to_string(k));
  ls.induced = Iet::make(ls.lengths, PermutationPair::symmetric(kAlphabetSize));
  ls.J = ls.induced.domain();
  for (std::uint8_t i = 0; i < kAlphabetSize; ++i) {
    ls.letter_intervals.push_back(ls.induced.top_interval(Letter(i)));
    ls.return_times.push_back(m.norm(Letter(i)));
  }
  return ls;
}

/// S^n(set) for n >= 0, or (S^-1)^|n| for n < 0.
inline IntervalSet power_image(const Iet& s, IntervalSet set, long n) {
  const Iet inv = s.inverse();
  const Iet& step = n >= 0 ? s : inv;
  for (long i = 0; i < std::abs(n); ++i) set = step.image(set);
  return set;
}

/// One floor S_k^i(sigma_{k+1}) of a level-(k+1) tower seen from level k.
struct TowerFloor {
  Letter tower;
  std::size_t index = 0;
  RationalInterval interval;
};

/// All floors of the tower over sigma_{k+1}, checking that floor i lies in
/// the level-k letter the induction word prescribes and that the top
/// returns onto S_{k+1}(sigma).
inline std::vector<TowerFloor> tower_floors(const ConstructionTrace& trace, const LevelStructure& ls,
                                            const LevelStructure& next, Letter sigma,
                                            const BigInt& max_height = 10'000'000) {
  if (next.k != ls.k + 1) throw InvalidArgument("tower_floors needs consecutive levels");
  const auto word = trace.round(next.k).words[sigma.index].expand(max_height);
  std::vector<TowerFloor> out;
  RationalInterval cur = next.interval(sigma);
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (!ls.interval(word[i]).contains(cur))
      throw DiagnosticError("floor " + std::to_string(i) + " of tower " + sigma.symbol() + " at level " +
                            std::to_string(ls.k) + " leaves letter " + word[i].symbol());
    out.push_back({sigma, i, cur});
    cur = cur.shifted(ls.induced.translation(word[i]));
  }
  if (!(cur == next.image(sigma)))
    throw DiagnosticError(std::string("tower ") + sigma.symbol() + " does not close at level " + std::to_string(next.k));
  return out;
}

struct HatClassification {
  Letter major;  ///< the letter X the hat lives in; two floors of its tower
  Letter minor;  ///< the other tower; one floor
  std::vector<TowerFloor> floors;  ///< components of the hat, left to right
  std::size_t major_count = 0, minor_count = 0;
  bool matches = false;
};

struct HatResult {
  std::size_t k = 0;
  BigInt r_next;
  long c = 0;
  /// points of X whose S_k-orbit stays in X for -c <= i <= c
  IntervalSet hat;
  /// components of S^c(X) and S^-c(X) and X, when requested; larger than
  /// the hat's once c >= 2 because orbits may leave X and come back
  std::optional<std::size_t> literal_components;
  HatClassification classification;
  TowerFloor minor_floor;  ///< I_k
  /// S_k^i(I_k) inside X for -c < i < c
  bool orbit_inside = false;
};

/// The letter whose hat is taken at level k: C when round k+1 is a left
/// round, D when it is a right round.
inline Letter hat_letter(std::size_t k) {
  return side_of_round(k + 1) == LoopSide::left ? letters::C : letters::D;
}

/// Points of x whose orbit stays in x for steps -n..n.
inline IntervalSet staying_set(const Iet& s, const IntervalSet& x, long n) {
  const Iet inv = s.inverse();
  IntervalSet fwd = x, bwd = x;
  for (long i = 0; i < n; ++i) {
    fwd = x.intersect(s.image(fwd));
    bwd = x.intersect(inv.image(bwd));
  }
  return fwd.intersect(bwd);
}

inline HatResult hat_interval(const ConstructionTrace& trace, const LevelStructure& ls, const LevelStructure& next,
                              bool check_orbit = true, bool literal = false) {
  using namespace letters;
  const std::size_t k = ls.k;
  if (k < 1 || k + 1 > trace.depth()) throw InvalidArgument("hat needs 1 <= k < depth");
  HatResult res;
  res.k = k;
  res.r_next = trace.round(k + 1).r;
  if (res.r_next % 2 == 0) throw DiagnosticError("r is even");
  res.c = static_cast<long>(to_u64(res.r_next / 2));

  const Letter x = hat_letter(k);
  const Letter other = x == C ? D : C;
  const IntervalSet X(ls.interval(x));
  res.hat = staying_set(ls.induced, X, res.c);
  if (literal)
    res.literal_components =
        X.intersect(power_image(ls.induced, X, res.c)).intersect(power_image(ls.induced, X, -res.c)).pieces().size();
  if (res.hat.empty()) throw DiagnosticError("hat interval is empty at level " + std::to_string(k));

  auto& cls = res.classification;
  cls.major = x;
  cls.minor = other;
  Rational covered = 0;
  for (Letter tower : {C, D}) {
    for (auto& f : tower_floors(trace, ls, next, tower)) {
      if (!res.hat.intersects_any(f.interval)) continue;
      if (!res.hat.contains(f.interval))
        throw DiagnosticError("hat at level " + std::to_string(k) + " cuts a floor of tower " + tower.symbol());
      covered += f.interval.width();
      cls.floors.push_back(std::move(f));
    }
  }
  if (covered != res.hat.measure())
    throw DiagnosticError("hat at level " + std::to_string(k) + " is not a union of C/D floors");
  std::sort(cls.floors.begin(), cls.floors.end(),
            [](const TowerFloor& a, const TowerFloor& b) { return a.interval.lo < b.interval.lo; });
  for (const auto& f : cls.floors) (f.tower == x ? cls.major_count : cls.minor_count)++;
  cls.matches = cls.major_count == 2 && cls.minor_count == 1;
  if (!cls.matches) return res;

  for (const auto& f : cls.floors)
    if (f.tower == other) res.minor_floor = f;
  if (check_orbit) {
    res.orbit_inside = true;
    IntervalSet fwd(res.minor_floor.interval), bwd(res.minor_floor.interval);
    const Iet inv = ls.induced.inverse();
    for (long i = 1; i < res.c && res.orbit_inside; ++i) {
      fwd = ls.induced.image(fwd);
      bwd = inv.image(bwd);
      res.orbit_inside = fwd.pieces().size() == 1 && bwd.pieces().size() == 1 && X.contains(fwd.pieces()[0]) &&
                         X.contains(bwd.pieces()[0]);
    }
  }
  return res;
}

/// One level of the nested chain.
struct ChainLevel {
  std::size_t k = 0;
  HatResult hat;
  RationalInterval interval;  ///< script-I_k
  BigInt j;                   ///< j_k
  BigInt increment;           ///< j_k - j_{k-1}
  /// level-k letters the orbit of script-I_k runs through on [j_{k-1}, j_k)
  std::vector<Letter> segment;
  /// the two closed-form alternatives for j_k - j_{k-1}, for comparison
  BigInt formula_recurrence;  ///< (c-1) m_k(C) + m_k(A)
  BigInt formula_blocks;      ///< c m_k(C) + m_k(D) + m_k(A)
};

struct NestedChain {
  std::vector<LevelStructure> structures;  ///< levels 0..K
  std::vector<ChainLevel> levels;          ///< levels 1..K-1 at index k-1
  LengthVector lengths;

  const ChainLevel& level(std::size_t k) const { return levels.at(k - 1); }
  std::size_t depth() const { return levels.size(); }
  BigInt j(std::size_t k) const { return k == 0 ? BigInt(0) : level(k).j; }
};

inline NestedChain nested_chain(const ConstructionTrace& trace, const LengthVector& lengths, std::size_t K) {
  using namespace letters;
  if (K < 2) throw InvalidArgument("chain needs depth at least 2");
  if (K > trace.depth()) throw InvalidArgument("chain deeper than trace");
  NestedChain chain;
  chain.lengths = lengths;
  for (std::size_t k = 0; k <= K; ++k) chain.structures.push_back(level_structure(trace, lengths, k));

  for (std::size_t k = 1; k < K; ++k) {
    const auto& ls = chain.structures[k];
    const auto& next = chain.structures[k + 1];
    ChainLevel lvl;
    lvl.k = k;
    lvl.hat = hat_interval(trace, ls, next, false);
    if (!lvl.hat.classification.matches)
      throw DiagnosticError("hat at level " + std::to_string(k) + " does not split into two major and one minor floor");
    const auto& floor = lvl.hat.minor_floor;
    const Letter sigma = floor.tower;
    const auto word = trace.round(k + 1).words[sigma.index].expand(10'000'000);

    // the orbit of script-I_k enters the chain at floor u (k = 1) or u + 1
    std::size_t first;
    if (k == 1) {
      lvl.interval = floor.interval;
      first = floor.index;
    } else {
      const auto& prev = chain.levels.back();
      const Letter prev_sigma = prev.hat.minor_floor.tower;
      const RationalInterval landing = ls.image(prev_sigma);  // T^{j_{k-1}} of script-I_{k-1}
      if (!ls.interval(prev_sigma).contains(floor.interval))
        throw DiagnosticError("I_" + std::to_string(k) + " is not inside the letter reached by the previous level");
      const RationalInterval pushed = floor.interval.shifted(ls.induced.translation(prev_sigma));
      // script-I_{k-1} is the floor of height m_k(prev_sigma) - j_{k-1} of the
      // T-tower over prev_sigma, so within one return of I_k to J_k exactly
      // one iterate of I_k lies in it
      if (word[floor.index] != prev_sigma || prev.j > ls.return_time(prev_sigma))
        throw DiagnosticError("orbit of I_" + std::to_string(k) + " does not meet the previous chain interval once");
      lvl.interval = pushed.shifted(prev.interval.lo - landing.lo);
      if (!prev.interval.contains(lvl.interval) || lvl.interval == prev.interval)
        throw DiagnosticError("chain interval " + std::to_string(k) + " is not strictly nested");
      first = floor.index + 1;
    }
    lvl.increment = 0;
    for (std::size_t i = first; i < word.size(); ++i) {
      lvl.segment.push_back(word[i]);
      lvl.increment += ls.return_time(word[i]);
    }
    lvl.j = chain.j(k - 1) + lvl.increment;
    const BigInt c = lvl.hat.c;
    lvl.formula_recurrence = (c - 1) * ls.return_time(C) + ls.return_time(A);
    lvl.formula_blocks = c * ls.return_time(C) + ls.return_time(D) + ls.return_time(A);
    chain.levels.push_back(std::move(lvl));
  }
  return chain;
}

inline RationalInterval generic_point(const NestedChain& chain) {
  if (chain.depth() < 1) throw InvalidArgument("empty chain");
  return chain.levels.back().interval;
}

namespace detail {

/// Visit counts of the first n steps from the left end of the level-k
/// letter interval, n <= m_k(letter).
inline CountVector letter_prefix_counts(const ConstructionTrace& trace, std::size_t level, Letter letter, BigInt n) {
  CountVector counts(kAlphabetSize, 0);
  while (n > 0) {
    if (level == 0) {
      counts[letter.index] += n;  // n == 1 here
      break;
    }
    const VisitMatrix below = trace.matrix(level - 1);
    const auto& word = trace.round(level).words[letter.index];
    bool descended = false;
    for (const auto& block : word.blocks()) {
      BigInt pattern_len = 0;
      CountVector pattern_sum(kAlphabetSize, 0);
      for (auto p : block.pattern) {
        pattern_len += below.norm(p);
        for (std::size_t i = 0; i < kAlphabetSize; ++i) pattern_sum[i] += below.column(p)[i];
      }
      BigInt whole = n / pattern_len;
      if (whole > block.repeat) whole = block.repeat;
      for (std::size_t i = 0; i < kAlphabetSize; ++i) counts[i] += whole * pattern_sum[i];
      n -= whole * pattern_len;
      if (whole == block.repeat) continue;
      for (auto p : block.pattern) {
        const BigInt m = below.norm(p);
        if (n >= m) {
          for (std::size_t i = 0; i < kAlphabetSize; ++i) counts[i] += below.column(p)[i];
          n -= m;
          continue;
        }
        letter = p;
        --level;
        descended = true;
        break;
      }
      break;
    }
    if (!descended && n > 0) throw DiagnosticError("prefix longer than the letter's return time");
  }
  return counts;
}

}  // namespace detail

/// Visit counts of the orbit of any point of the chain's last interval for
/// times 0..N-1, summed through the induction words.
inline CountVector birkhoff_counts(const ConstructionTrace& trace, const NestedChain& chain, const BigInt& N) {
  if (N <= 0) throw InvalidArgument("Birkhoff time must be positive");
  if (N > chain.j(chain.depth())) throw InvalidArgument("time beyond the last chain checkpoint");
  CountVector counts(kAlphabetSize, 0);
  BigInt remaining = N;
  for (const auto& lvl : chain.levels) {
    const VisitMatrix m = trace.matrix(lvl.k);
    for (auto l : lvl.segment) {
      if (remaining == 0) return counts;
      const BigInt& len = chain.structures[lvl.k].return_time(l);
      if (remaining >= len) {
        for (std::size_t i = 0; i < kAlphabetSize; ++i) counts[i] += m.column(l)[i];
        remaining -= len;
      } else {
        const auto part = detail::letter_prefix_counts(trace, lvl.k, l, remaining);
        for (std::size_t i = 0; i < kAlphabetSize; ++i) counts[i] += part[i];
        return counts;
      }
    }
  }
  return counts;
}

inline std::vector<Rational> birkhoff(const ConstructionTrace& trace, const NestedChain& chain, const BigInt& N) {
  const auto counts = birkhoff_counts(trace, chain, N);
  std::vector<Rational> out;
  for (const auto& c : counts) out.push_back(make_rational(c, N));
  return out;
}

struct CheckpointStats {
  std::size_t k = 0;
  BigInt j;
  CountVector counts;
  std::vector<Rational> frequencies;
  double theta_c = 0, theta_d = 0;
  double l1_to_v_prime = 0, l1_to_v0 = 0, l1_to_v1 = 0;
  /// largest theta(v_j, C_C(n_k)) over sampled j in [j_{k-1}, j_k]
  double worst_theta_c = 0;
};

struct GenericPointReport {
  RationalInterval point;
  std::vector<CheckpointStats> checkpoints;
};

inline GenericPointReport genericity_report(const ConstructionTrace& trace, const NestedChain& chain,
                                            const MeasureEstimate& est, std::size_t samples = 32) {
  using namespace letters;
  if (chain.depth() < 3) throw InvalidArgument("report needs chain depth at least 3");
  GenericPointReport rep;
  rep.point = generic_point(chain);
  CountVector running(kAlphabetSize, 0);
  for (const auto& lvl : chain.levels) {
    const VisitMatrix m = trace.matrix(lvl.k);
    for (auto l : lvl.segment)
      for (std::size_t i = 0; i < kAlphabetSize; ++i) running[i] += m.column(l)[i];
    CheckpointStats st;
    st.k = lvl.k;
    st.j = lvl.j;
    st.counts = running;
    st.frequencies = projectivize(running);
    st.theta_c = angle(running, m.column(C));
    st.theta_d = angle(running, m.column(D));
    st.l1_to_v_prime = l1_distance(st.frequencies, est.v_prime).get_d();
    st.l1_to_v0 = l1_distance(st.frequencies, est.v0).get_d();
    st.l1_to_v1 = l1_distance(st.frequencies, est.v1).get_d();
    const BigInt lo = chain.j(lvl.k - 1), hi = lvl.j;
    for (std::size_t s = 0; s <= samples; ++s) {
      BigInt t = lo + (hi - lo) * static_cast<unsigned long>(s) / static_cast<unsigned long>(samples);
      if (t <= 0) continue;
      st.worst_theta_c = std::max(st.worst_theta_c, angle(birkhoff_counts(trace, chain, t), m.column(C)));
    }
    rep.checkpoints.push_back(std::move(st));
  }
  return rep;
}

}  // namespace iet
