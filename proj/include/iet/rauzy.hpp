#pragma once

// Rauzy-Veech induction: single steps on concrete IETs, the symbolic row
// surgery, the visitation-matrix cocycle and the cone M(n)Delta.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "iet/alphabet.hpp"
#include "iet/exact.hpp"
#include "iet/transformation.hpp"

namespace iet {

enum class Side { top_wins, bottom_wins };

inline const char* to_string(Side s) { return s == Side::top_wins ? "top" : "bottom"; }

/// Outcome of one induction step.
struct StepRecord {
  Letter winner;
  Letter loser;
  Side side = Side::top_wins;

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

/// Apply the row surgery a record describes, checking that its winner and
/// loser are the current last letters. The loser is moved immediately to
/// the right of the winner in the loser's row.
inline PermutationPair apply_surgery(const PermutationPair& perm, const StepRecord& rec) {
  const Letter expect_winner = rec.side == Side::top_wins ? perm.last_top() : perm.last_bottom();
  const Letter expect_loser = rec.side == Side::top_wins ? perm.last_bottom() : perm.last_top();
  if (rec.winner != expect_winner || rec.loser != expect_loser || rec.winner == rec.loser) {
    throw InvalidArgument(std::string("record ") + rec.winner.symbol() + " beats " + rec.loser.symbol() + " (" +
                          to_string(rec.side) + ") does not match last letters of " + perm.to_string());
  }
  std::vector<Letter> top = perm.top();
  std::vector<Letter> bottom = perm.bottom();
  std::vector<Letter>& row = rec.side == Side::top_wins ? bottom : top;
  row.pop_back();
  const auto pos = rec.side == Side::top_wins ? perm.bottom_position(rec.winner) : perm.top_position(rec.winner);
  row.insert(row.begin() + static_cast<std::ptrdiff_t>(pos) + 1, rec.loser);
  return {std::move(top), std::move(bottom)};
}

/// Winner/loser of the next step, or nullopt on a tie.
inline std::optional<StepRecord> next_record(const Iet& t) {
  const Letter alpha = t.permutation().last_top();
  const Letter beta = t.permutation().last_bottom();
  if (t.length(alpha) > t.length(beta)) return StepRecord{alpha, beta, Side::top_wins};
  if (t.length(beta) > t.length(alpha)) return StepRecord{beta, alpha, Side::bottom_wins};
  return std::nullopt;
}

/// One step of Rauzy induction: the first-return map to [0, |lambda| -
/// lambda_loser). Throws DiagnosticError on a tie.
inline std::pair<Iet, StepRecord> rauzy_step(const Iet& t) {
  const auto rec = next_record(t);
  if (!rec) throw DiagnosticError("Rauzy induction undefined: last top and bottom lengths tie");
  LengthVector lengths = t.lengths();
  lengths[rec->winner.index] -= lengths[rec->loser.index];
  return {Iet::make(std::move(lengths), apply_surgery(t.permutation(), *rec)), *rec};
}

/// Consecutive identical steps at a permutation fixed by the surgery,
/// applied in closed form. `count` is at least one.
struct StepRun {
  StepRecord record;
  BigInt count;

  friend bool operator==(const StepRun&, const StepRun&) = default;
};

/// Advance by one run: one step, plus every immediately following step
/// that repeats the same record (possible only when the surgery leaves the
/// permutation unchanged).
inline std::pair<Iet, StepRun> rauzy_run(const Iet& t) {
  auto [next, rec] = rauzy_step(t);
  BigInt count = 1;
  if (next.permutation() == t.permutation()) {
    // the winner keeps beating the same loser while it stays longer
    const Rational& w = next.length(rec.winner);
    const Rational& l = next.length(rec.loser);
    const Rational ratio = w / l;
    BigInt extra = ceil_div(ratio.get_num(), ratio.get_den()) - 1;
    if (extra > 0) {
      LengthVector lengths = next.lengths();
      lengths[rec.winner.index] -= Rational(extra) * l;
      next = Iet::make(std::move(lengths), next.permutation());
      count += extra;
    }
  }
  return {std::move(next), StepRun{rec, count}};
}

/// Square visitation matrix with unbounded non-negative integer entries,
/// stored by columns.
class VisitMatrix {
 public:
  VisitMatrix() = default;

  static VisitMatrix identity(std::size_t d) {
    VisitMatrix m;
    m.cols_.assign(d, CountVector(d, 0));
    for (std::size_t i = 0; i < d; ++i) m.cols_[i][i] = 1;
    return m;
  }

  static VisitMatrix from_columns(std::vector<CountVector> cols) {
    VisitMatrix m;
    for (const auto& c : cols)
      if (c.size() != cols.size()) throw InvalidArgument("visit matrix must be square");
    m.cols_ = std::move(cols);
    return m;
  }

  std::size_t size() const { return cols_.size(); }
  const CountVector& column(Letter l) const { return cols_[l.index]; }
  const std::vector<CountVector>& columns() const { return cols_; }
  const BigInt& at(std::size_t row, std::size_t col) const { return cols_[col][row]; }

  /// |C_sigma|, the l1 norm of a column.
  BigInt norm(Letter l) const { return l1_norm(cols_[l.index]); }

  /// C_loser += times * C_winner.
  void add_column(Letter loser, Letter winner, const BigInt& times = 1) {
    auto& dst = cols_[loser.index];
    const auto& src = cols_[winner.index];
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += times * src[i];
  }

  BigInt determinant() const {
    std::vector<std::vector<BigInt>> rows(size(), std::vector<BigInt>(size()));
    for (std::size_t r = 0; r < size(); ++r)
      for (std::size_t c = 0; c < size(); ++c) rows[r][c] = cols_[c][r];
    return iet::determinant(std::move(rows));
  }

  CountVector operator*(const CountVector& v) const {
    CountVector out(size(), 0);
    for (std::size_t c = 0; c < size(); ++c)
      for (std::size_t r = 0; r < size(); ++r) out[r] += cols_[c][r] * v[c];
    return out;
  }

  std::vector<Rational> operator*(const std::vector<Rational>& v) const {
    std::vector<Rational> out(size(), 0);
    for (std::size_t c = 0; c < size(); ++c)
      for (std::size_t r = 0; r < size(); ++r) out[r] += Rational(cols_[c][r]) * v[c];
    return out;
  }

  VisitMatrix operator*(const VisitMatrix& o) const {
    VisitMatrix m;
    m.cols_.reserve(size());
    for (const auto& c : o.cols_) m.cols_.push_back(*this * c);
    return m;
  }

  RationalMatrix to_rational() const {
    RationalMatrix a(size(), std::vector<Rational>(size()));
    for (std::size_t r = 0; r < size(); ++r)
      for (std::size_t c = 0; c < size(); ++c) a[r][c] = cols_[c][r];
    return a;
  }

  friend bool operator==(const VisitMatrix&, const VisitMatrix&) = default;

 private:
  std::vector<CountVector> cols_;
};

/// The elementary matrix of one step: identity with column loser equal to
/// e_loser + e_winner.
inline VisitMatrix elementary_matrix(std::size_t d, const StepRecord& rec) {
  auto m = VisitMatrix::identity(d);
  m.add_column(rec.loser, rec.winner);
  return m;
}

inline VisitMatrix apply_record(VisitMatrix m, const StepRecord& rec) {
  m.add_column(rec.loser, rec.winner);
  return m;
}

/// Symbolic replay of a record sequence from perm0; element i of the result
/// is the permutation after i steps.
inline std::vector<PermutationPair> replay_path(const PermutationPair& perm0, std::span<const StepRecord> records) {
  std::vector<PermutationPair> itinerary{perm0};
  itinerary.reserve(records.size() + 1);
  for (const auto& r : records) itinerary.push_back(apply_surgery(itinerary.back(), r));
  return itinerary;
}

/// Vertices of M Delta (l1-projectivized columns) and their l1 diameter.
struct ConeSnapshot {
  std::vector<std::vector<Rational>> vertices;
  Rational diameter;
};

inline ConeSnapshot cone_snapshot(const VisitMatrix& m) {
  ConeSnapshot snap;
  for (const auto& c : m.columns()) snap.vertices.push_back(projectivize(c));
  snap.diameter = 0;
  for (std::size_t i = 0; i < snap.vertices.size(); ++i)
    for (std::size_t j = i + 1; j < snap.vertices.size(); ++j) {
      Rational dist = l1_distance(snap.vertices[i], snap.vertices[j]);
      if (dist > snap.diameter) snap.diameter = dist;
    }
  return snap;
}

/// Coefficients c with M c = v; v lies in the cone over M's columns iff all
/// are non-negative.
inline std::vector<Rational> cone_coordinates(const VisitMatrix& m, const CountVector& v) {
  std::vector<Rational> rhs(v.begin(), v.end());
  return solve_exact(m.to_rational(), std::move(rhs));
}

inline bool cone_contains(const VisitMatrix& m, const CountVector& v) {
  for (const auto& c : cone_coordinates(m, v))
    if (c < 0) return false;
  return true;
}

}  // namespace iet
