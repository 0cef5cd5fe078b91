#include "rashomon/bitvector.hpp"

#include <cassert>

namespace rashomon {

BitVector::BitVector(std::size_t size, bool value)
    : size_(size),
      words_((size + kWordBits - 1) / kWordBits, value ? ~Word{0} : Word{0}) {
  clear_tail();
}

void BitVector::clear_tail() noexcept {
  const std::size_t rem = size_ % kWordBits;
  if (rem != 0 && !words_.empty()) {
    words_.back() &= (Word{1} << rem) - 1;
  }
}

std::size_t BitVector::count() const noexcept {
  std::size_t c = 0;
  for (Word w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

BitVector& BitVector::operator&=(const BitVector& other) noexcept {
  assert(size_ == other.size_);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

BitVector& BitVector::operator|=(const BitVector& other) noexcept {
  assert(size_ == other.size_);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

BitVector& BitVector::operator^=(const BitVector& other) noexcept {
  assert(size_ == other.size_);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

BitVector& BitVector::and_not(const BitVector& other) noexcept {
  assert(size_ == other.size_);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
  return *this;
}

BitVector& BitVector::flip() noexcept {
  for (Word& w : words_) w = ~w;
  clear_tail();
  return *this;
}

std::size_t count_and(const BitVector& a, const BitVector& b) noexcept {
  assert(a.size() == b.size());
  const auto wa = a.words();
  const auto wb = b.words();
  std::size_t c = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) {
    c += static_cast<std::size_t>(std::popcount(wa[i] & wb[i]));
  }
  return c;
}

std::size_t count_xor(const BitVector& a, const BitVector& b) noexcept {
  assert(a.size() == b.size());
  const auto wa = a.words();
  const auto wb = b.words();
  std::size_t c = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) {
    c += static_cast<std::size_t>(std::popcount(wa[i] ^ wb[i]));
  }
  return c;
}

std::size_t count_and_not(const BitVector& a, const BitVector& b) noexcept {
  assert(a.size() == b.size());
  const auto wa = a.words();
  const auto wb = b.words();
  std::size_t c = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) {
    c += static_cast<std::size_t>(std::popcount(wa[i] & ~wb[i]));
  }
  return c;
}

std::size_t count_and_not_and(const BitVector& a, const BitVector& b,
                              const BitVector& c) noexcept {
  assert(a.size() == b.size() && a.size() == c.size());
  const auto wa = a.words();
  const auto wb = b.words();
  const auto wc = c.words();
  std::size_t n = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) {
    n += static_cast<std::size_t>(std::popcount(wa[i] & ~wb[i] & wc[i]));
  }
  return n;
}

std::uint64_t fnv1a(const BitVector& v, std::uint64_t seed) noexcept {
  constexpr std::uint64_t kPrime = 0x100000001b3ULL;
  std::uint64_t h = seed;
  auto mix = [&](std::uint64_t w) {
    for (int b = 0; b < 8; ++b) {
      h ^= (w >> (8 * b)) & 0xffU;
      h *= kPrime;
    }
  };
  mix(v.size());
  for (auto w : v.words()) mix(w);
  return h;
}

}  // namespace rashomon
