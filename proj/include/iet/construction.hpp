#pragma once

// The alternating right/left induction loops on (ABCDEF/FEDCBA), their
// threshold stopping rules, per-round audits and the concrete length vector
// whose Rauzy path begins with the constructed one.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iet/alphabet.hpp"
#include "iet/errors.hpp"
#include "iet/exact.hpp"
#include "iet/rauzy.hpp"
#include "iet/transformation.hpp"
#include "iet/words.hpp"

namespace iet {

inline constexpr std::size_t kAlphabetSize = 6;

/// The growth parameters a_1, a_2, ...; a_0 is taken to be 1.
class Schedule {
 public:
  /// a_k = base^k.
  static Schedule power(unsigned long base) {
    if (base < 2) throw InvalidArgument("schedule base must be at least 2");
    Schedule s;
    s.base_ = base;
    s.label_ = std::to_string(base) + "^k";
    // ((k+1)/k)^2 is largest at k = 1, so the first steps decide it
    s.check_ratio(3);
    return s;
  }

  /// Explicit values a_1, ..., a_m.
  static Schedule explicit_values(std::vector<BigInt> values) {
    if (values.empty()) throw InvalidArgument("explicit schedule is empty");
    Schedule s;
    s.values_ = std::move(values);
    for (std::size_t i = 0; i < s.values_.size(); ++i) {
      if (s.values_[i] <= 0) throw InvalidArgument("schedule values must be positive");
      if (i > 0 && s.values_[i] <= s.values_[i - 1]) throw InvalidArgument("schedule must be strictly increasing");
    }
    s.check_ratio(s.values_.size());
    for (std::size_t i = 0; i < s.values_.size(); ++i) s.label_ += (i ? "," : "") + s.values_[i].get_str();
    return s;
  }

  BigInt operator()(std::size_t k) const {
    if (k == 0) return 1;
    if (base_) return pow_big(*base_, k);
    if (k > values_.size())
      throw InvalidArgument("schedule defines a_1..a_" + std::to_string(values_.size()) + ", a_" + std::to_string(k) +
                            " requested");
    return values_[k - 1];
  }

  /// Largest k with a_k defined (0 means unbounded).
  std::size_t defined_up_to() const { return base_ ? 0 : values_.size(); }
  bool defines(std::size_t k) const { return base_ || k <= values_.size(); }

  const std::string& label() const { return label_; }
  std::optional<unsigned long> base() const { return base_; }
  const std::vector<BigInt>& values() const { return values_; }

  friend bool operator==(const Schedule&, const Schedule&) = default;

  /// a_k / k^2 must not decrease, and must increase from k = 2 on.
  void check_ratio(std::size_t up_to) const {
    for (std::size_t k = 1; k < up_to; ++k) {
      const Rational prev = make_rational((*this)(k), BigInt(k * k));
      const Rational next = make_rational((*this)(k + 1), BigInt((k + 1) * (k + 1)));
      if (next < prev || (k >= 2 && next == prev))
        throw InvalidArgument("schedule violates growth of a_k/k^2 at k=" + std::to_string(k + 1));
    }
  }

 private:
  std::optional<unsigned long> base_;
  std::vector<BigInt> values_;
  std::string label_;
};

inline Schedule default_schedule() { return Schedule::power(4); }

/// a_k of the default schedule.
inline BigInt default_schedule(std::size_t k) {
  if (k < 1) throw InvalidArgument("schedule index starts at 1");
  return pow_big(4, k);
}

enum class LoopSide { right, left };

inline const char* to_string(LoopSide s) { return s == LoopSide::right ? "right" : "left"; }

inline LoopSide side_of_round(std::size_t k) { return k % 2 == 1 ? LoopSide::right : LoopSide::left; }

/// Columns captured inside a round. "lead" is F in a right round and A in a
/// left round, "partner" is E resp. B. *_start are taken right after the
/// lead letter is first beaten (resp. the partner), *_end at the end of the
/// s-block and at the end of the round. c/d_first follow the r-block and
/// the step after it; c/d_second follow the two beats by the lead letter.
struct RoundSnapshots {
  CountVector lead_start, partner_start;
  CountVector c_first, d_first, c_second, d_second;
  CountVector lead_end, partner_end;

  friend bool operator==(const RoundSnapshots&, const RoundSnapshots&) = default;
};

/// Exact evidence that r and s are the minimal admissible counts.
struct StoppingWitness {
  BigInt threshold;      ///< right-hand side of the rule
  BigInt base;           ///< norm before any repeat
  BigInt increment;      ///< norm added per repeat
  BigInt count;          ///< chosen count
  bool holds = false;    ///< base + count*increment > threshold
  bool minimal = false;  ///< the previous admissible count fails

  friend bool operator==(const StoppingWitness&, const StoppingWitness&) = default;
};

struct ConditionAudit {
  bool exempt = false;
  // A-form: min(large) > a_k * max(opposite)
  bool a_holds = false;
  BigInt a_margin;
  // B-form: min(large) > (a_{k-1}/k^2) * max(C, D)
  bool b_holds = false;
  Rational b_margin;
  // growth produced by the s-block: large pair versus a_{k+1} times the other
  bool growth_holds = false;
  BigInt growth_margin;

  friend bool operator==(const ConditionAudit&, const ConditionAudit&) = default;
};

struct RoundSummary {
  std::size_t index = 0;
  LoopSide side = LoopSide::right;
  BigInt r, s;
  BigInt start;  ///< n_{k-1}
  BigInt n;      ///< n_k
  VisitMatrix checkpoint;
  RoundSnapshots snapshots;
  StoppingWitness r_rule, s_rule;
  ConditionAudit audit;
  /// Itinerary of each level-k letter through the level-(k-1) intervals.
  std::vector<BlockWord> words;
  std::vector<StepRun> log;

  friend bool operator==(const RoundSummary&, const RoundSummary&) = default;
};

struct ConstructionTrace {
  Schedule schedule = default_schedule();
  std::vector<RoundSummary> rounds;

  std::size_t depth() const { return rounds.size(); }
  BigInt n(std::size_t k) const { return k == 0 ? BigInt(0) : rounds.at(k - 1).n; }
  VisitMatrix matrix(std::size_t k) const {
    return k == 0 ? VisitMatrix::identity(kAlphabetSize) : rounds.at(k - 1).checkpoint;
  }
  const RoundSummary& round(std::size_t k) const { return rounds.at(k - 1); }

  friend bool operator==(const ConstructionTrace&, const ConstructionTrace&) = default;

  /// Full winner log, runs merged across round boundaries where they repeat.
  std::vector<StepRun> log() const {
    std::vector<StepRun> out;
    for (const auto& r : rounds)
      for (const auto& run : r.log) {
        if (!out.empty() && out.back().record == run.record)
          out.back().count += run.count;
        else
          out.push_back(run);
      }
    return out;
  }
};

/// State carried between rounds.
struct LoopState {
  VisitMatrix matrix = VisitMatrix::identity(kAlphabetSize);
  PermutationPair perm = PermutationPair::symmetric(kAlphabetSize);
  BigInt n = 0;
};

inline const BigInt& default_repeat_cap() {
  static const BigInt cap = pow_big(10, 40);
  return cap;
}

namespace detail {

class LoopRunner {
 public:
  LoopRunner(LoopState state, const BigInt& cap) : st_(std::move(state)), cap_(cap) {
    for (std::uint8_t i = 0; i < kAlphabetSize; ++i) words_.emplace_back(Letter(i));
  }

  void beat(Letter winner, Letter loser, const BigInt& times = 1) {
    if (times < 1) throw DiagnosticError("repeat count must be positive");
    if (times > cap_) throw DiagnosticError("repeat count exceeds cap");
    const PermutationPair& p = st_.perm;
    StepRecord rec{winner, loser, Side::top_wins};
    if (winner == p.last_bottom() && loser == p.last_top()) rec.side = Side::bottom_wins;
    PermutationPair next;
    try {
      next = apply_surgery(p, rec);
    } catch (const InvalidArgument& e) {
      throw DiagnosticError(std::string("loop step out of place: ") + e.what());
    }
    if (times > 1 && !(next == p)) throw DiagnosticError("repeated block at a permutation the step does not fix");
    st_.perm = std::move(next);
    st_.matrix.add_column(loser, winner, times);
    st_.n += times;
    if (rec.side == Side::top_wins)
      words_[loser.index].append(words_[winner.index], times);
    else
      words_[loser.index].prepend(words_[winner.index], times);
    if (!log_.empty() && log_.back().record == rec)
      log_.back().count += times;
    else
      log_.push_back({rec, times});
  }

  BigInt norm(Letter l) const { return st_.matrix.norm(l); }
  const CountVector& col(Letter l) const { return st_.matrix.column(l); }
  const LoopState& state() const { return st_; }
  std::vector<BlockWord> take_words() { return std::move(words_); }
  std::vector<StepRun> take_log() { return std::move(log_); }

 private:
  LoopState st_;
  BigInt cap_;
  std::vector<BlockWord> words_;
  std::vector<StepRun> log_;
};

/// Smallest count >= 1 (odd if requested) with base + count*inc > threshold.
inline StoppingWitness stopping_count(const BigInt& base, const BigInt& inc, const BigInt& threshold, bool odd,
                                      const BigInt& cap) {
  if (inc <= 0) throw DiagnosticError("stopping rule increment is not positive");
  StoppingWitness w{threshold, base, inc, 0, false, false};
  BigInt c = base > threshold ? BigInt(0) : floor_div(threshold - base, inc) + 1;
  if (c < 1) c = 1;
  if (odd && c % 2 == 0) c += 1;
  if (c > cap) throw DiagnosticError("stopping rule not satisfiable below the repeat cap");
  w.count = c;
  w.holds = base + c * inc > threshold;
  const BigInt step = odd ? 2 : 1;
  w.minimal = c - step < 1 || !(base + (c - step) * inc > threshold);
  return w;
}

inline RoundSummary finish_round(LoopRunner& run, std::size_t k, LoopSide side, const BigInt& start) {
  RoundSummary out;
  out.index = k;
  out.side = side;
  out.start = start;
  out.n = run.state().n;
  out.checkpoint = run.state().matrix;
  out.words = run.take_words();
  out.log = run.take_log();
  return out;
}

inline void require_symmetric(const LoopState& st) {
  if (!(st.perm == PermutationPair::symmetric(kAlphabetSize)))
    throw InvalidArgument("loop must start at ABCDEF/FEDCBA, got " + st.perm.to_string());
  if (st.matrix.size() != kAlphabetSize) throw InvalidArgument("loop needs a 6x6 visit matrix");
}

}  // namespace detail

/// One right round (F, E gain), round index k >= 1.
inline std::pair<LoopState, RoundSummary> run_right_loop(const LoopState& in, std::size_t k, const Schedule& schedule,
                                                         const BigInt& cap = default_repeat_cap()) {
  using namespace letters;
  detail::require_symmetric(in);
  if (k < 1) throw InvalidArgument("round index starts at 1");
  detail::LoopRunner run(in, cap);
  RoundSnapshots snap;
  run.beat(F, A);
  run.beat(F, B);
  run.beat(C, F);
  snap.lead_start = run.col(F);
  run.beat(C, E);
  snap.partner_start = run.col(E);
  auto r_rule = detail::stopping_count(run.norm(C), run.norm(D), BigInt(k) * run.norm(F), true, cap);
  run.beat(D, C, r_rule.count);
  snap.c_first = run.col(C);
  run.beat(C, D);
  snap.d_first = run.col(D);
  run.beat(F, C);
  snap.c_second = run.col(C);
  run.beat(F, D);
  snap.d_second = run.col(D);
  const BigInt big_ab = std::max(run.norm(A), run.norm(B));
  auto s_rule = detail::stopping_count(run.norm(F), run.norm(E), schedule(k + 1) * big_ab, false, cap);
  run.beat(E, F, s_rule.count);
  snap.lead_end = run.col(F);
  run.beat(F, E);
  snap.partner_end = run.col(E);

  LoopState out = run.state();
  RoundSummary sum = detail::finish_round(run, k, LoopSide::right, in.n);
  sum.r = r_rule.count;
  sum.s = s_rule.count;
  sum.r_rule = std::move(r_rule);
  sum.s_rule = std::move(s_rule);
  sum.snapshots = std::move(snap);
  return {std::move(out), std::move(sum)};
}

/// One left round (A, B gain), round index k >= 2 in the alternation but
/// any k >= 1 is accepted.
inline std::pair<LoopState, RoundSummary> run_left_loop(const LoopState& in, std::size_t k, const Schedule& schedule,
                                                        const BigInt& cap = default_repeat_cap()) {
  using namespace letters;
  detail::require_symmetric(in);
  if (k < 1) throw InvalidArgument("round index starts at 1");
  detail::LoopRunner run(in, cap);
  RoundSnapshots snap;
  run.beat(A, F);
  run.beat(A, E);
  run.beat(D, A);
  snap.lead_start = run.col(A);
  run.beat(D, B);
  snap.partner_start = run.col(B);
  auto r_rule = detail::stopping_count(run.norm(D), run.norm(C), BigInt(k) * run.norm(A), true, cap);
  run.beat(C, D, r_rule.count);
  snap.d_first = run.col(D);
  run.beat(D, C);
  snap.c_first = run.col(C);
  run.beat(A, D);
  snap.d_second = run.col(D);
  run.beat(A, C);
  snap.c_second = run.col(C);
  const BigInt small_ef = std::min(run.norm(E), run.norm(F));
  auto s_rule = detail::stopping_count(run.norm(A), run.norm(B), schedule(k + 1) * small_ef, false, cap);
  run.beat(B, A, s_rule.count);
  snap.lead_end = run.col(A);
  run.beat(A, B);
  snap.partner_end = run.col(B);

  LoopState out = run.state();
  RoundSummary sum = detail::finish_round(run, k, LoopSide::left, in.n);
  sum.r = r_rule.count;
  sum.s = s_rule.count;
  sum.r_rule = std::move(r_rule);
  sum.s_rule = std::move(s_rule);
  sum.snapshots = std::move(snap);
  return {std::move(out), std::move(sum)};
}

/// Audit at n_k. After a right round E, F are the large pair; after a left
/// round A, B are.
inline ConditionAudit audit_checkpoint(const VisitMatrix& m, std::size_t k, LoopSide side, const Schedule& schedule) {
  using namespace letters;
  const bool right = side == LoopSide::right;
  const Letter l1 = right ? E : A, l2 = right ? F : B;
  const Letter o1 = right ? A : E, o2 = right ? B : F;
  const BigInt small_large = std::min(m.norm(l1), m.norm(l2));
  const BigInt big_opp = std::max(m.norm(o1), m.norm(o2));
  const BigInt big_cd = std::max(m.norm(C), m.norm(D));

  ConditionAudit a;
  a.exempt = k == 1;
  a.a_margin = small_large - schedule(k) * big_opp;
  a.a_holds = a.a_margin > 0;
  a.b_margin = Rational(small_large) - make_rational(schedule(k - 1), BigInt(k * k)) * Rational(big_cd);
  a.b_holds = a.b_margin > 0;
  if (schedule.defines(k + 1)) {
    // right: min(E,F) against a_{k+1} max(A,B); left: |A| against a_{k+1} min(E,F)
    a.growth_margin = right ? small_large - schedule(k + 1) * big_opp
                            : m.norm(A) - schedule(k + 1) * std::min(m.norm(E), m.norm(F));
    a.growth_holds = a.growth_margin > 0;
  }
  return a;
}

/// K rounds from the identity matrix, right rounds at odd k.
inline ConstructionTrace build_trace(std::size_t K, const Schedule& schedule = default_schedule(),
                                     const BigInt& cap = default_repeat_cap()) {
  if (K < 1) throw InvalidArgument("need at least one round");
  if (!schedule.defines(K + 1))
    throw InvalidArgument("schedule must define a_1..a_" + std::to_string(K + 1) + " for " + std::to_string(K) +
                          " rounds");
  ConstructionTrace trace;
  trace.schedule = schedule;
  LoopState st;
  for (std::size_t k = 1; k <= K; ++k) {
    const LoopSide side = side_of_round(k);
    auto [next, sum] = side == LoopSide::right ? run_right_loop(st, k, schedule, cap) : run_left_loop(st, k, schedule, cap);
    if (!(next.perm == PermutationPair::symmetric(kAlphabetSize)))
      throw DiagnosticError("round " + std::to_string(k) + " did not return to ABCDEF/FEDCBA");
    sum.audit = audit_checkpoint(next.matrix, k, side, schedule);
    if (!sum.audit.exempt && !(sum.audit.a_holds && sum.audit.b_holds))
      throw DiagnosticError("growth audit failed at round " + std::to_string(k));
    st = std::move(next);
    trace.rounds.push_back(std::move(sum));
  }
  return trace;
}

/// l1-normalized M(n_K) (1,...,1).
inline LengthVector concrete_lengths(const VisitMatrix& m) {
  const CountVector sums = m * CountVector(m.size(), 1);
  const BigInt total = l1_norm(sums);
  LengthVector out;
  for (const auto& s : sums) out.push_back(make_rational(s, total));
  return out;
}

inline LengthVector concrete_lengths(const ConstructionTrace& trace) {
  if (trace.depth() < 1) throw InvalidArgument("trace has no rounds");
  return concrete_lengths(trace.matrix(trace.depth()));
}

/// Symbolic replay of a run log from `perm0`: validates every run (repeats
/// only at fixed permutations) and returns the permutation after each run
/// together with the cumulative step count.
struct ReplayPoint {
  BigInt steps;
  PermutationPair perm;
};

inline std::vector<ReplayPoint> replay_runs(const PermutationPair& perm0, const std::vector<StepRun>& runs) {
  std::vector<ReplayPoint> out{{0, perm0}};
  for (const auto& run : runs) {
    if (run.count < 1) throw InvalidArgument("run count must be positive");
    PermutationPair next = apply_surgery(out.back().perm, run.record);
    if (run.count > 1 && !(next == out.back().perm)) throw InvalidArgument("repeated run at a non-fixed permutation");
    out.push_back({out.back().steps + run.count, std::move(next)});
  }
  return out;
}

/// Checks that the IET with the given lengths and the symmetric permutation
/// follows `runs` exactly, applying each run in closed form. Returns the
/// induced IET after the last run. Throws DiagnosticError on mismatch.
inline Iet replay_lengths(const LengthVector& lengths, const std::vector<StepRun>& runs) {
  Iet t = Iet::make(lengths, PermutationPair::symmetric(lengths.size()));
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& want = runs[i];
    BigInt remaining = want.count;
    while (remaining > 0) {
      const auto rec = next_record(t);
      if (!rec || !(*rec == want.record))
        throw DiagnosticError("length replay diverges from the log at run " + std::to_string(i));
      auto [next, got] = rauzy_run(t);
      if (got.count > remaining) {
        // the run continues into the next logged run with the same record
        // only when logs were merged; take just what is needed
        LengthVector l = t.lengths();
        l[got.record.winner.index] -= Rational(remaining) * l[got.record.loser.index];
        next = Iet::make(std::move(l), apply_surgery(t.permutation(), got.record));
        got.count = remaining;
      }
      remaining -= got.count;
      t = std::move(next);
    }
  }
  return t;
}

}  // namespace iet
