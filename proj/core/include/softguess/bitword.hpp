#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>

namespace softguess {

/// Fixed-length binary word packed into 64-bit limbs.
///
/// Bit i lives in limb i / 64 at offset i % 64. Bits past size() are kept
/// zero so that limb-wise comparisons and popcounts are exact. Storage is
/// inline (no allocation) which keeps the decoder inner loops cheap.
class BitWord {
 public:
  static constexpr std::size_t kMaxBits = 256;
  static constexpr std::size_t kLimbs = kMaxBits / 64;

  BitWord() = default;
  /// All-zero word of length n. Throws BadDimensions when n > kMaxBits.
  explicit BitWord(std::size_t n);
  BitWord(std::initializer_list<int> bits);

  static BitWord from_string(std::string_view s);
  static BitWord from_bits(std::span<const std::uint8_t> bits);

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  /// Bounds-checked access.
  bool get(std::size_t i) const;
  void set(std::size_t i, bool value);
  void flip(std::size_t i);

  /// Unchecked access for hot loops.
  bool test_unchecked(std::size_t i) const noexcept {
    return (limbs_[i >> 6] >> (i & 63)) & 1u;
  }
  void flip_unchecked(std::size_t i) noexcept { limbs_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
  void set_unchecked(std::size_t i, bool value) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      limbs_[i >> 6] |= mask;
    } else {
      limbs_[i >> 6] &= ~mask;
    }
  }

  std::size_t weight() const noexcept;
  bool none() const noexcept;
  bool parity() const noexcept { return weight() & 1u; }

  BitWord& operator^=(const BitWord& other);
  friend BitWord operator^(BitWord a, const BitWord& b) { return a ^= b; }

  /// XOR without the length check; caller guarantees equal lengths.
  void xor_unchecked(const BitWord& other) noexcept {
    for (std::size_t l = 0; l < kLimbs; ++l) limbs_[l] ^= other.limbs_[l];
  }

  /// Dot product over GF(2).
  bool dot(const BitWord& other) const;

  std::span<const std::uint64_t> limbs() const noexcept { return {limbs_.data(), limb_count()}; }
  std::size_t limb_count() const noexcept { return (size_ + 63) / 64; }

  /// Calls fn(i) for each set bit in ascending order.
  template <typename Fn>
  void for_each_set(Fn&& fn) const {
    for (std::size_t l = 0; l < limb_count(); ++l) {
      std::uint64_t w = limbs_[l];
      while (w != 0) {
        fn(l * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  std::string to_string() const;

  friend bool operator==(const BitWord& a, const BitWord& b) noexcept {
    return a.size_ == b.size_ && a.limbs_ == b.limbs_;
  }
  /// Lexicographic by bit position, shorter words first.
  friend bool operator<(const BitWord& a, const BitWord& b) noexcept;

 private:
  std::array<std::uint64_t, kLimbs> limbs_{};
  std::size_t size_ = 0;
};

}  // namespace softguess
