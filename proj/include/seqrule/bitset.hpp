#pragma once

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace seqrule {

/// Dynamic bitset over 64-bit words. Trailing bits past size() are kept zero
/// so that equality and popcount can work on whole words.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t nbits)
      : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

  std::size_t size() const { return nbits_; }

  bool test(std::size_t i) const {
    assert(i < nbits_);
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }

  void set(std::size_t i) {
    assert(i < nbits_);
    words_[i >> 6] |= std::uint64_t{1} << (i & 63);
  }

  void reset(std::size_t i) {
    assert(i < nbits_);
    words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }

  void assign(std::size_t i, bool v) { v ? set(i) : reset(i); }

  /// Sets bits [0, n).
  void set_first(std::size_t n) {
    assert(n <= nbits_);
    std::size_t full = n >> 6;
    std::fill(words_.begin(), words_.begin() + static_cast<std::ptrdiff_t>(full), ~std::uint64_t{0});
    if (n & 63) words_[full] |= (std::uint64_t{1} << (n & 63)) - 1;
  }

  void clear() { std::fill(words_.begin(), words_.end(), 0); }

  /// Bitwise OR of another set of the same size into this one.
  void or_with(const Bitset& other) {
    assert(other.nbits_ == nbits_);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool any() const {
    for (auto w : words_) {
      if (w) return true;
    }
    return false;
  }

  bool none() const { return !any(); }

  /// Number of set bits shared with `other` (same size).
  std::size_t count_and(const Bitset& other) const {
    assert(other.nbits_ == nbits_);
    std::size_t c = 0;
    for (std::size_t w = 0; w < words_.size(); ++w)
      c += static_cast<std::size_t>(std::popcount(words_[w] & other.words_[w]));
    return c;
  }

  /// Keep only bits also present in `other`.
  void and_with(const Bitset& other) {
    assert(other.nbits_ == nbits_);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

  bool operator==(const Bitset&) const = default;

  std::string to_string() const {
    std::string s(nbits_, '0');
    for (std::size_t i = 0; i < nbits_; ++i)
      if (test(i)) s[i] = '1';
    return s;
  }

  static Bitset from_string(const std::string& s) {
    Bitset b(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i] == '1') b.set(i);
    return b;
  }

 private:
  std::size_t nbits_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace seqrule
