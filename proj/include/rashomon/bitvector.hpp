#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rashomon {

// Fixed-length bit string packed into 64-bit words. Bits past size() in the
// last word are kept at zero so that popcounts and equality need no masking.
class BitVector {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BitVector() = default;
  explicit BitVector(std::size_t size, bool value = false);

  static BitVector ones(std::size_t size) { return BitVector(size, true); }

  std::size_t size() const noexcept { return size_; }
  std::size_t num_words() const noexcept { return words_.size(); }

  bool test(std::size_t i) const noexcept {
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
  }
  void set(std::size_t i, bool value = true) noexcept {
    const Word mask = Word{1} << (i % kWordBits);
    if (value) {
      words_[i / kWordBits] |= mask;
    } else {
      words_[i / kWordBits] &= ~mask;
    }
  }

  std::size_t count() const noexcept;
  bool any() const noexcept { return count() != 0; }

  std::span<const Word> words() const noexcept { return words_; }
  std::span<Word> words() noexcept { return words_; }

  BitVector& operator&=(const BitVector& other) noexcept;
  BitVector& operator|=(const BitVector& other) noexcept;
  BitVector& operator^=(const BitVector& other) noexcept;
  // this &= ~other
  BitVector& and_not(const BitVector& other) noexcept;
  BitVector& flip() noexcept;

  friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
  friend BitVector operator|(BitVector a, const BitVector& b) { return a |= b; }
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
  friend BitVector operator~(BitVector a) { return a.flip(); }

  friend bool operator==(const BitVector&, const BitVector&) = default;

  std::size_t capacity_bytes() const noexcept {
    return words_.capacity() * sizeof(Word);
  }

 private:
  void clear_tail() noexcept;

  std::size_t size_ = 0;
  std::vector<Word> words_;
};

// Fused popcounts over equal-length vectors; none of them allocate.
std::size_t count_and(const BitVector& a, const BitVector& b) noexcept;
std::size_t count_xor(const BitVector& a, const BitVector& b) noexcept;
// popcount(a & ~b)
std::size_t count_and_not(const BitVector& a, const BitVector& b) noexcept;
// popcount(a & ~b & c)
std::size_t count_and_not_and(const BitVector& a, const BitVector& b,
                              const BitVector& c) noexcept;

// 64-bit FNV-1a over the words, used for dataset fingerprints.
std::uint64_t fnv1a(const BitVector& v, std::uint64_t seed) noexcept;

}  // namespace rashomon
