#pragma once

// Interval exchange transformations with exact rational data: evaluation,
// orbits, visit counts, brute-force first-return maps and the finite-horizon
// Keane check. Everything downstream is validated against this file.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iet/alphabet.hpp"
#include "iet/exact.hpp"

namespace iet {

/// Interval lengths indexed by letter.
using LengthVector = std::vector<Rational>;

/// Visit counts indexed by letter.
using CountVector = std::vector<BigInt>;

class Iet {
 public:
  /// Lay out I_sigma in top order on [0, |lambda|) and their images in
  /// bottom order. Throws InvalidArgument on non-positive lengths.
  static Iet make(LengthVector lengths, PermutationPair perm) {
    if (lengths.size() != perm.size()) throw InvalidArgument("length vector and permutation disagree on d");
    for (std::size_t i = 0; i < lengths.size(); ++i)
      if (lengths[i] <= 0)
        throw InvalidArgument(std::string("length of ") + Letter(static_cast<std::uint8_t>(i)).symbol() +
                              " is not positive");
    return Iet(std::move(lengths), std::move(perm));
  }

  std::size_t size() const { return lengths_.size(); }
  const LengthVector& lengths() const { return lengths_; }
  const PermutationPair& permutation() const { return perm_; }
  const Rational& total_length() const { return total_; }
  RationalInterval domain() const { return {Rational(0), total_}; }

  const Rational& length(Letter l) const { return lengths_[l.index]; }
  const Rational& translation(Letter l) const { return translation_[l.index]; }
  RationalInterval top_interval(Letter l) const { return {start_[l.index], start_[l.index] + lengths_[l.index]}; }
  RationalInterval image_interval(Letter l) const { return top_interval(l).shifted(translation(l)); }

  /// Interior endpoints of the top partition, increasing.
  const std::vector<Rational>& discontinuities() const { return cuts_; }

  Letter letter_at(const Rational& x) const {
    check_domain(x);
    auto it = std::upper_bound(cuts_.begin(), cuts_.end(), x);
    return perm_.top()[static_cast<std::size_t>(it - cuts_.begin())];
  }

  Rational operator()(const Rational& x) const { return x + translation(letter_at(x)); }

  /// The inverse map, itself an IET with the two rows swapped.
  Iet inverse() const { return Iet(lengths_, PermutationPair(perm_.bottom(), perm_.top())); }

  /// Image of a finite union of intervals.
  IntervalSet image(const IntervalSet& set) const {
    std::vector<RationalInterval> out;
    for (const auto& piece : set.pieces()) {
      Rational lo = piece.lo;
      while (lo < piece.hi) {
        const Letter l = letter_at(lo);
        const Rational seg_hi = start_[l.index] + lengths_[l.index];
        const Rational& hi = piece.hi < seg_hi ? piece.hi : seg_hi;
        out.emplace_back(lo + translation(l), hi + translation(l));
        lo = hi;
      }
    }
    return IntervalSet(std::move(out));
  }

  /// True when T restricted to j is a single translation.
  bool continuous_on(const RationalInterval& j) const {
    for (const auto& c : cuts_)
      if (j.lo < c && c < j.hi) return false;
    return true;
  }

  friend bool operator==(const Iet& a, const Iet& b) { return a.lengths_ == b.lengths_ && a.perm_ == b.perm_; }

 private:
  Iet(LengthVector lengths, PermutationPair perm) : lengths_(std::move(lengths)), perm_(std::move(perm)) {
    const std::size_t d = lengths_.size();
    start_.assign(d, 0);
    translation_.assign(d, 0);
    Rational pos = 0;
    for (auto l : perm_.top()) {
      start_[l.index] = pos;
      pos += lengths_[l.index];
      if (cuts_.size() + 1 < d) cuts_.push_back(pos);
    }
    total_ = pos;
    Rational image_pos = 0;
    for (auto l : perm_.bottom()) {
      translation_[l.index] = image_pos - start_[l.index];
      image_pos += lengths_[l.index];
    }
  }

  void check_domain(const Rational& x) const {
    if (x < 0 || x >= total_) throw InvalidArgument("point " + x.get_str() + " outside [0, " + total_.get_str() + ")");
  }

  LengthVector lengths_;
  PermutationPair perm_;
  Rational total_;
  std::vector<Rational> start_;
  std::vector<Rational> translation_;
  std::vector<Rational> cuts_;
};

inline Iet make_iet(LengthVector lengths, PermutationPair perm) { return Iet::make(std::move(lengths), std::move(perm)); }

inline Rational evaluate(const Iet& t, const Rational& x) { return t(x); }

/// T^n(x).
inline Rational iterate(const Iet& t, Rational x, std::uint64_t n) {
  for (std::uint64_t i = 0; i < n; ++i) x = t(x);
  return x;
}

/// Letter counts of x, T x, ..., T^{n-1} x.
inline CountVector visit_vector(const Iet& t, Rational x, std::uint64_t n) {
  std::vector<std::uint64_t> counts(t.size(), 0);
  for (std::uint64_t i = 0; i < n; ++i) {
    const Letter l = t.letter_at(x);
    ++counts[l.index];
    x += t.translation(l);
  }
  CountVector out;
  out.reserve(counts.size());
  for (auto c : counts) out.push_back(from_u64(c));
  return out;
}

/// One maximal piece of a first-return map.
struct ReturnBranch {
  RationalInterval domain;
  std::uint64_t return_time = 0;
  Rational translation;
  std::vector<Letter> word;  ///< original letters visited before returning

  friend bool operator==(const ReturnBranch&, const ReturnBranch&) = default;
};

struct FirstReturnMap {
  RationalInterval base;
  std::vector<ReturnBranch> branches;  ///< sorted by domain, partition of base
};

inline constexpr std::uint64_t kDefaultFirstReturnCap = 10'000'000;

/// Brute-force first-return map of T to J: follows every point of J until
/// it comes back, splitting at discontinuities and at the edges of J.
/// `cap` bounds the total number of piece-steps.
inline FirstReturnMap first_return(const Iet& t, const RationalInterval& base,
                                   std::uint64_t cap = kDefaultFirstReturnCap) {
  if (!t.domain().contains(base)) throw InvalidArgument("first_return: interval not inside the domain");

  struct Piece {
    RationalInterval origin;
    Rational shift;
    std::vector<Letter> word;
  };

  std::vector<Piece> stack;
  stack.push_back({base, Rational(0), {}});
  std::vector<ReturnBranch> done;
  std::uint64_t steps = 0;

  while (!stack.empty()) {
    Piece p = std::move(stack.back());
    stack.pop_back();
    for (;;) {
      RationalInterval cur = p.origin.shifted(p.shift);
      const Letter l = t.letter_at(cur.lo);
      const RationalInterval seg = t.top_interval(l);
      if (cur.hi > seg.hi) {
        stack.push_back({{seg.hi - p.shift, p.origin.hi}, p.shift, p.word});
        p.origin.hi = seg.hi - p.shift;
      }
      p.shift += t.translation(l);
      p.word.push_back(l);
      if (++steps > cap) throw DiagnosticError("first_return: iteration cap exceeded");

      cur = p.origin.shifted(p.shift);
      if (!cur.intersects(base)) continue;
      if (cur.lo < base.lo) {
        stack.push_back({{p.origin.lo, base.lo - p.shift}, p.shift, p.word});
        p.origin.lo = base.lo - p.shift;
      }
      if (cur.hi > base.hi) {
        stack.push_back({{base.hi - p.shift, p.origin.hi}, p.shift, p.word});
        p.origin.hi = base.hi - p.shift;
      }
      done.push_back({p.origin, p.word.size(), p.shift, std::move(p.word)});
      break;
    }
  }

  std::sort(done.begin(), done.end(),
            [](const ReturnBranch& a, const ReturnBranch& b) { return a.domain.lo < b.domain.lo; });
  std::vector<ReturnBranch> merged;
  for (auto& b : done) {
    if (!merged.empty() && merged.back().domain.hi == b.domain.lo && merged.back().translation == b.translation &&
        merged.back().word == b.word) {
      merged.back().domain.hi = b.domain.hi;
    } else {
      merged.push_back(std::move(b));
    }
  }
  return {base, std::move(merged)};
}

struct KeaneWitness {
  std::size_t from = 0;  ///< index into discontinuities() of the starting point
  std::size_t hit = 0;   ///< index of the discontinuity reached
  std::uint64_t time = 0;
};

struct KeaneResult {
  bool pass = true;
  std::optional<KeaneWitness> witness;
};

/// Checks T^t(beta_i) != beta_j for 1 <= t <= horizon and all interior
/// discontinuities beta_i, beta_j (a point returning to itself counts).
inline KeaneResult keane_horizon_check(const Iet& t, std::uint64_t horizon) {
  if (horizon < 1) throw InvalidArgument("keane_horizon_check: horizon must be >= 1");
  const auto& cuts = t.discontinuities();
  KeaneResult best;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    Rational x = cuts[i];
    for (std::uint64_t step = 1; step <= horizon; ++step) {
      if (best.witness && step >= best.witness->time) break;
      x = t(x);
      auto it = std::lower_bound(cuts.begin(), cuts.end(), x);
      if (it != cuts.end() && *it == x) {
        best.pass = false;
        best.witness = KeaneWitness{i, static_cast<std::size_t>(it - cuts.begin()), step};
        break;
      }
    }
  }
  return best;
}

}  // namespace iet
