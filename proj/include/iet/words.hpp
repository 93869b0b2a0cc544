#pragma once

// Compressed words over the alphabet: a word is a sequence of blocks, each a
// short letter pattern repeated an unbounded number of times. Induction
// words (the itinerary of a level-k interval through level-(k-1) intervals)
// contain repeats as long as s_k, so they are never expanded in bulk.

#include <functional>
#include <string>
#include <vector>

#include "iet/alphabet.hpp"
#include "iet/errors.hpp"
#include "iet/exact.hpp"

namespace iet {

struct WordBlock {
  std::vector<Letter> pattern;
  BigInt repeat = 1;

  friend bool operator==(const WordBlock&, const WordBlock&) = default;
};

class BlockWord {
 public:
  BlockWord() = default;
  explicit BlockWord(Letter l) { blocks_.push_back({{l}, 1}); }
  explicit BlockWord(std::vector<WordBlock> blocks) : blocks_(std::move(blocks)) {}

  const std::vector<WordBlock>& blocks() const { return blocks_; }

  BigInt length() const {
    BigInt n = 0;
    for (const auto& b : blocks_) n += b.repeat * static_cast<unsigned long>(b.pattern.size());
    return n;
  }

  /// this = this . other^times
  void append(const BlockWord& other, const BigInt& times = 1) { splice(other, times, /*front=*/false); }
  /// this = other^times . this
  void prepend(const BlockWord& other, const BigInt& times = 1) { splice(other, times, /*front=*/true); }

  /// Number of occurrences of each letter.
  std::vector<BigInt> counts(std::size_t d) const {
    std::vector<BigInt> out(d, 0);
    for (const auto& b : blocks_)
      for (auto l : b.pattern) {
        if (l.index >= d) throw InvalidArgument("letter outside alphabet");
        out[l.index] += b.repeat;
      }
    return out;
  }

  /// Visit every letter in order until `f` returns false. Only for words of
  /// moderate length.
  void for_each(const std::function<bool(Letter)>& f) const {
    for (const auto& b : blocks_)
      for (BigInt i = 0; i < b.repeat; ++i)
        for (auto l : b.pattern)
          if (!f(l)) return;
  }

  std::vector<Letter> expand(const BigInt& max_length) const {
    if (length() > max_length) throw InvalidArgument("word too long to expand");
    std::vector<Letter> out;
    for_each([&](Letter l) {
      out.push_back(l);
      return true;
    });
    return out;
  }

  /// Letter at a 0-based position.
  Letter at(BigInt pos) const {
    for (const auto& b : blocks_) {
      const BigInt block_len = b.repeat * static_cast<unsigned long>(b.pattern.size());
      if (pos < block_len) {
        BigInt within = pos % static_cast<unsigned long>(b.pattern.size());
        return b.pattern[within.get_ui()];
      }
      pos -= block_len;
    }
    throw InvalidArgument("word position out of range");
  }

  std::string to_string() const {
    std::string s;
    for (const auto& b : blocks_) {
      if (!s.empty()) s += ' ';
      std::string p;
      for (auto l : b.pattern) p += l.symbol();
      if (b.repeat == 1) {
        s += p;
      } else {
        s += (b.pattern.size() > 1 ? "(" + p + ")" : p) + "^" + b.repeat.get_str();
      }
    }
    return s;
  }

  friend bool operator==(const BlockWord&, const BlockWord&) = default;

 private:
  void splice(const BlockWord& other, const BigInt& times, bool front) {
    if (times < 1) throw InvalidArgument("repeat count must be positive");
    std::vector<WordBlock> add;
    if (times == 1) {
      add = other.blocks_;
    } else {
      // Only a single block, or a word without inner repeats, can be
      // repeated without expanding it.
      if (other.blocks_.size() == 1) {
        add.push_back({other.blocks_[0].pattern, other.blocks_[0].repeat * times});
      } else {
        WordBlock flat{{}, times};
        for (const auto& b : other.blocks_) {
          if (b.repeat != 1) throw DiagnosticError("cannot repeat a multi-block word in compressed form");
          flat.pattern.insert(flat.pattern.end(), b.pattern.begin(), b.pattern.end());
        }
        add.push_back(std::move(flat));
      }
    }
    if (front) {
      add.insert(add.end(), blocks_.begin(), blocks_.end());
      blocks_ = std::move(add);
    } else {
      blocks_.insert(blocks_.end(), add.begin(), add.end());
    }
  }

  std::vector<WordBlock> blocks_;
};

}  // namespace iet
