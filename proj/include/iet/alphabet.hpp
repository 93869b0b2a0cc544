#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "iet/errors.hpp"

namespace iet {

/// A letter of the alphabet {A, B, C, ...}; the index fixes the total order.
struct Letter {
  std::uint8_t index = 0;

  constexpr Letter() = default;
  constexpr explicit Letter(std::uint8_t i) : index(i) {}

  constexpr char symbol() const { return static_cast<char>('A' + index); }
  static Letter from_symbol(char c) {
    if (c < 'A' || c > 'Z') throw InvalidArgument(std::string("not a letter: '") + c + "'");
    return Letter(static_cast<std::uint8_t>(c - 'A'));
  }

  friend constexpr auto operator<=>(Letter, Letter) = default;
};

inline constexpr std::size_t kMaxAlphabet = 26;

/// Named letters of the six-letter alphabet the construction uses.
namespace letters {
inline constexpr Letter A{0}, B{1}, C{2}, D{3}, E{4}, F{5};
}

/// Combinatorial data of an IET: the order of the subintervals before
/// (top row) and after (bottom row) the exchange.
class PermutationPair {
 public:
  PermutationPair() = default;

  PermutationPair(std::vector<Letter> top, std::vector<Letter> bottom)
      : top_(std::move(top)), bottom_(std::move(bottom)) {
    validate();
  }

  /// Parse "ABCDEF/FEDCBA".
  static PermutationPair parse(std::string_view rows) {
    const auto slash = rows.find('/');
    if (slash == std::string_view::npos) throw InvalidArgument("permutation needs 'top/bottom' form");
    auto row = [](std::string_view s) {
      std::vector<Letter> out;
      for (char c : s)
        if (c != ' ') out.push_back(Letter::from_symbol(c));
      return out;
    };
    return {row(rows.substr(0, slash)), row(rows.substr(slash + 1))};
  }

  /// The symmetric permutation (A B ... / ... B A) on d letters.
  static PermutationPair symmetric(std::size_t d) {
    std::vector<Letter> top, bottom;
    for (std::size_t i = 0; i < d; ++i) {
      top.emplace_back(static_cast<std::uint8_t>(i));
      bottom.emplace_back(static_cast<std::uint8_t>(d - 1 - i));
    }
    return {std::move(top), std::move(bottom)};
  }

  std::size_t size() const { return top_.size(); }
  const std::vector<Letter>& top() const { return top_; }
  const std::vector<Letter>& bottom() const { return bottom_; }
  Letter last_top() const { return top_.back(); }
  Letter last_bottom() const { return bottom_.back(); }

  std::size_t top_position(Letter l) const { return position(top_, l); }
  std::size_t bottom_position(Letter l) const { return position(bottom_, l); }

  std::string to_string() const {
    std::string s;
    for (auto l : top_) s += l.symbol();
    s += '/';
    for (auto l : bottom_) s += l.symbol();
    return s;
  }

  friend bool operator==(const PermutationPair&, const PermutationPair&) = default;

 private:
  static std::size_t position(const std::vector<Letter>& row, Letter l) {
    auto it = std::find(row.begin(), row.end(), l);
    if (it == row.end()) throw InvalidArgument(std::string("letter not in row: ") + l.symbol());
    return static_cast<std::size_t>(it - row.begin());
  }

  void validate() const {
    const std::size_t d = top_.size();
    if (d < 2 || d > kMaxAlphabet) throw InvalidArgument("alphabet size must be in [2, 26]");
    if (bottom_.size() != d) throw InvalidArgument("rows have different lengths");
    auto check = [d](const std::vector<Letter>& row, const char* name) {
      std::vector<bool> seen(d, false);
      for (auto l : row) {
        if (l.index >= d || seen[l.index]) throw InvalidArgument(std::string(name) + " row is not a bijection");
        seen[l.index] = true;
      }
    };
    check(top_, "top");
    check(bottom_, "bottom");
  }

  std::vector<Letter> top_;
  std::vector<Letter> bottom_;
};

}  // namespace iet
