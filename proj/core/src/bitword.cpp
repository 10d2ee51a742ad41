#include "softguess/bitword.hpp"

#include <string>

#include "softguess/errors.hpp"

namespace softguess {

BitWord::BitWord(std::size_t n) : size_(n) {
  if (n > kMaxBits) {
    throw BadDimensions("BitWord length " + std::to_string(n) + " exceeds " +
                        std::to_string(kMaxBits));
  }
}

BitWord::BitWord(std::initializer_list<int> bits) : BitWord(bits.size()) {
  std::size_t i = 0;
  for (int b : bits) set_unchecked(i++, b != 0);
}

BitWord BitWord::from_string(std::string_view s) {
  BitWord w(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '0' && s[i] != '1') throw Error("BitWord::from_string: expected only 0/1");
    w.set_unchecked(i, s[i] == '1');
  }
  return w;
}

BitWord BitWord::from_bits(std::span<const std::uint8_t> bits) {
  BitWord w(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) w.set_unchecked(i, bits[i] != 0);
  return w;
}

bool BitWord::get(std::size_t i) const {
  if (i >= size_) throw std::out_of_range("BitWord::get index out of range");
  return test_unchecked(i);
}

void BitWord::set(std::size_t i, bool value) {
  if (i >= size_) throw std::out_of_range("BitWord::set index out of range");
  set_unchecked(i, value);
}

void BitWord::flip(std::size_t i) {
  if (i >= size_) throw std::out_of_range("BitWord::flip index out of range");
  flip_unchecked(i);
}

std::size_t BitWord::weight() const noexcept {
  std::size_t w = 0;
  for (std::uint64_t l : limbs_) w += static_cast<std::size_t>(std::popcount(l));
  return w;
}

bool BitWord::none() const noexcept {
  for (std::uint64_t l : limbs_) {
    if (l != 0) return false;
  }
  return true;
}

BitWord& BitWord::operator^=(const BitWord& other) {
  if (other.size_ != size_) throw LengthMismatch("BitWord xor of unequal lengths");
  xor_unchecked(other);
  return *this;
}

bool BitWord::dot(const BitWord& other) const {
  if (other.size_ != size_) throw LengthMismatch("BitWord dot of unequal lengths");
  std::uint64_t acc = 0;
  for (std::size_t l = 0; l < kLimbs; ++l) acc ^= limbs_[l] & other.limbs_[l];
  return std::popcount(acc) & 1;
}

std::string BitWord::to_string() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if (test_unchecked(i)) s[i] = '1';
  }
  return s;
}

bool operator<(const BitWord& a, const BitWord& b) noexcept {
  if (a.size_ != b.size_) return a.size_ < b.size_;
  for (std::size_t l = 0; l < BitWord::kLimbs; ++l) {
    const std::uint64_t diff = a.limbs_[l] ^ b.limbs_[l];
    if (diff != 0) {
      // Lowest differing position decides; the word with a 0 there is smaller.
      const int bit = std::countr_zero(diff);
      return ((a.limbs_[l] >> bit) & 1u) == 0;
    }
  }
  return false;
}

}  // namespace softguess
