#pragma once

// Exact arithmetic primitives: unbounded integers and rationals (GMP),
// half-open rational intervals, finite unions of them, and small dense
// linear algebra over Q.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "iet/errors.hpp"

namespace iet {

using BigInt = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw InvalidArgument("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline std::string to_decimal(const BigInt& v) { return v.get_str(10); }

inline BigInt parse_bigint(const std::string& s) {
  BigInt v;
  if (s.empty() || v.set_str(s, 10) != 0) throw ParseError("not a decimal integer: '" + s + "'");
  return v;
}

inline BigInt pow_big(unsigned long base, unsigned long exp) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

/// Ceiling of a / b for b > 0.
inline BigInt ceil_div(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

/// Floor of a / b for b > 0.
inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline double to_double(const Rational& q) { return q.get_d(); }

inline std::uint64_t to_u64(const BigInt& v) {
  if (v < 0 || mpz_sizeinbase(v.get_mpz_t(), 2) > 64) throw InvalidArgument("value does not fit in 64 bits");
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, v.get_mpz_t());
  return out;
}

inline BigInt from_u64(std::uint64_t v) {
  BigInt out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return out;
}

/// l1 norm of an integer vector.
inline BigInt l1_norm(std::span<const BigInt> v) {
  BigInt s = 0;
  for (const auto& x : v) s += abs(x);
  return s;
}

/// Projectivize a non-negative vector onto the standard simplex.
inline std::vector<Rational> projectivize(std::span<const BigInt> v) {
  const BigInt total = l1_norm(v);
  if (total == 0) throw InvalidArgument("cannot projectivize the zero vector");
  std::vector<Rational> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(make_rational(x, total));
  return out;
}

inline Rational l1_distance(std::span<const Rational> a, std::span<const Rational> b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += abs(a[i] - b[i]);
  return s;
}

/// Half-open interval [lo, hi) with rational endpoints.
struct RationalInterval {
  Rational lo;
  Rational hi;

  RationalInterval() = default;
  RationalInterval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
    if (!(lo < hi)) throw InvalidArgument("empty or reversed interval");
  }

  Rational width() const { return hi - lo; }
  Rational midpoint() const { return (lo + hi) / 2; }
  bool contains(const Rational& x) const { return lo <= x && x < hi; }
  bool contains(const RationalInterval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool intersects(const RationalInterval& o) const { return lo < o.hi && o.lo < hi; }
  RationalInterval shifted(const Rational& by) const { return {lo + by, hi + by}; }

  friend bool operator==(const RationalInterval& a, const RationalInterval& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
};

inline std::string to_string(const RationalInterval& j) {
  return "[" + j.lo.get_str() + ", " + j.hi.get_str() + ")";
}

/// Finite disjoint union of half-open intervals, kept sorted with adjacent
/// pieces merged so equality is set equality.
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(RationalInterval j) { pieces_.push_back(std::move(j)); }
  explicit IntervalSet(std::vector<RationalInterval> pieces) : pieces_(std::move(pieces)) { normalize(); }

  const std::vector<RationalInterval>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }

  Rational measure() const {
    Rational m = 0;
    for (const auto& p : pieces_) m += p.width();
    return m;
  }

  bool contains(const Rational& x) const {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                               [](const Rational& v, const RationalInterval& p) { return v < p.lo; });
    if (it == pieces_.begin()) return false;
    return std::prev(it)->contains(x);
  }

  bool contains(const RationalInterval& j) const {
    for (const auto& p : pieces_)
      if (p.contains(j)) return true;
    return false;
  }

  bool intersects_any(const RationalInterval& j) const {
    for (const auto& p : pieces_)
      if (p.intersects(j)) return true;
    return false;
  }

  IntervalSet intersect(const IntervalSet& o) const {
    std::vector<RationalInterval> out;
    std::size_t i = 0, k = 0;
    while (i < pieces_.size() && k < o.pieces_.size()) {
      const auto& a = pieces_[i];
      const auto& b = o.pieces_[k];
      const Rational& lo = a.lo < b.lo ? b.lo : a.lo;
      const Rational& hi = a.hi < b.hi ? a.hi : b.hi;
      if (lo < hi) out.emplace_back(lo, hi);
      if (a.hi < b.hi) ++i; else ++k;
    }
    return IntervalSet(std::move(out));
  }

  friend bool operator==(const IntervalSet& a, const IntervalSet& b) { return a.pieces_ == b.pieces_; }

 private:
  void normalize() {
    std::sort(pieces_.begin(), pieces_.end(),
              [](const RationalInterval& a, const RationalInterval& b) { return a.lo < b.lo; });
    std::vector<RationalInterval> merged;
    for (auto& p : pieces_) {
      if (!merged.empty() && merged.back().hi >= p.lo) {
        if (merged.back().hi < p.hi) merged.back().hi = p.hi;
      } else {
        merged.push_back(std::move(p));
      }
    }
    pieces_ = std::move(merged);
  }

  std::vector<RationalInterval> pieces_;
};

/// Dense square matrix over Q, row-major. Only what the exact solves need.
using RationalMatrix = std::vector<std::vector<Rational>>;

/// Solve A x = b exactly by Gaussian elimination. Throws DiagnosticError
/// when A is singular.
inline std::vector<Rational> solve_exact(RationalMatrix a, std::vector<Rational> b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) throw DiagnosticError("singular matrix in exact solve");
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || a[row][col] == 0) continue;
      const Rational f = a[row][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[row][c] -= f * a[col][c];
      b[row] -= f * b[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

/// Determinant of an integer matrix (row-major) by fraction-free Bareiss
/// elimination.
inline BigInt determinant(std::vector<std::vector<BigInt>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  BigInt sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

}  // namespace iet
