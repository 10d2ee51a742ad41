#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "softguess/bitword.hpp"

namespace softguess {

/// Dense matrix over GF(2), stored as packed rows.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);
  /// Builds from a list of equal-length rows.
  static BitMatrix from_rows(std::vector<BitWord> rows);

  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t cols() const noexcept { return cols_; }

  bool get(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, bool value);

  const BitWord& row(std::size_t r) const;
  BitWord column(std::size_t c) const;
  BitMatrix transpose() const;

  /// Row vector times matrix: x (length rows()) -> x * M (length cols()).
  BitWord left_multiply(const BitWord& x) const;
  /// Matrix times column vector: M * x (x of length cols()).
  BitWord multiply(const BitWord& x) const;
  BitMatrix operator*(const BitMatrix& rhs) const;

  std::size_t rank() const;
  bool is_zero() const noexcept;

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::vector<BitWord> rows_;
  std::size_t cols_ = 0;
};

/// An (n,k) binary linear code held in systematic form.
///
/// Internally the code is G_sys = [I_k | P] and H_sys = [P^T | I_{n-k}].
/// `perm()[j]` is the original (transmitted) position of systematic column
/// j, so info bit j is transmitted at position perm()[j] for j < k. All
/// public encode/syndrome operations work in original coordinates.
class SystematicCode {
 public:
  SystematicCode(BitMatrix parity_part, std::vector<std::size_t> perm);

  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }
  std::size_t redundancy() const noexcept { return n_ - k_; }
  double rate() const noexcept { return static_cast<double>(k_) / static_cast<double>(n_); }

  const BitMatrix& parity_part() const noexcept { return parity_; }
  std::span<const std::size_t> perm() const noexcept { return perm_; }
  std::size_t info_position(std::size_t j) const { return perm_.at(j); }

  /// G in original coordinates (k x n).
  BitMatrix generator() const;
  /// H in original coordinates ((n-k) x n).
  const BitMatrix& parity_check() const noexcept { return check_; }
  /// Column `pos` of H (length n-k), original coordinates.
  const BitWord& check_column(std::size_t pos) const { return check_columns_.at(pos); }

  BitWord encode(const BitWord& info) const;
  BitWord syndrome(const BitWord& word) const;
  bool is_codeword(const BitWord& word) const { return syndrome(word).none(); }
  /// Reads the k info bits back out of a word.
  BitWord extract_info(const BitWord& word) const;

  /// Parity bits (length n-k) of info * G_sys, i.e. info * P.
  BitWord parity_of(const BitWord& info) const { return parity_.left_multiply(info); }
  /// Maps a systematic-coordinate word [info | parity] to original coordinates.
  BitWord from_systematic(const BitWord& info, const BitWord& parity) const;

  /// True when every codeword has even Hamming weight.
  bool is_even() const noexcept { return even_; }

 private:
  std::size_t n_ = 0;
  std::size_t k_ = 0;
  BitMatrix parity_;
  std::vector<std::size_t> perm_;
  BitMatrix check_;
  std::vector<BitWord> check_columns_;
  bool even_ = false;
};

/// Reduces a full-rank k x n generator to systematic form.
///
/// Column swaps pick the lowest-index column (in current order) that holds a
/// pivot. Throws RankDeficient when rank < rows.
SystematicCode to_systematic(const BitMatrix& generator);

}  // namespace softguess
