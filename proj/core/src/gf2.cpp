#include "softguess/gf2.hpp"

#include <numeric>
#include <string>
#include <utility>

#include "softguess/errors.hpp"

namespace softguess {

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols) : rows_(rows, BitWord(cols)), cols_(cols) {}

BitMatrix BitMatrix::from_rows(std::vector<BitWord> rows) {
  BitMatrix m;
  m.cols_ = rows.empty() ? 0 : rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != m.cols_) throw LengthMismatch("BitMatrix::from_rows: ragged rows");
  }
  m.rows_ = std::move(rows);
  return m;
}

bool BitMatrix::get(std::size_t r, std::size_t c) const { return row(r).get(c); }

void BitMatrix::set(std::size_t r, std::size_t c, bool value) {
  if (r >= rows_.size()) throw std::out_of_range("BitMatrix row out of range");
  rows_[r].set(c, value);
}

const BitWord& BitMatrix::row(std::size_t r) const {
  if (r >= rows_.size()) throw std::out_of_range("BitMatrix row out of range");
  return rows_[r];
}

BitWord BitMatrix::column(std::size_t c) const {
  if (c >= cols_) throw std::out_of_range("BitMatrix column out of range");
  BitWord col(rows_.size());
  for (std::size_t r = 0; r < rows_.size(); ++r) col.set_unchecked(r, rows_[r].test_unchecked(c));
  return col;
}

BitMatrix BitMatrix::transpose() const {
  BitMatrix t(cols_, rows_.size());
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    rows_[r].for_each_set([&](std::size_t c) { t.rows_[c].set_unchecked(r, true); });
  }
  return t;
}

BitWord BitMatrix::left_multiply(const BitWord& x) const {
  if (x.size() != rows_.size()) throw LengthMismatch("BitMatrix::left_multiply length mismatch");
  BitWord out(cols_);
  x.for_each_set([&](std::size_t r) { out.xor_unchecked(rows_[r]); });
  return out;
}

BitWord BitMatrix::multiply(const BitWord& x) const {
  if (x.size() != cols_) throw LengthMismatch("BitMatrix::multiply length mismatch");
  BitWord out(rows_.size());
  for (std::size_t r = 0; r < rows_.size(); ++r) out.set_unchecked(r, rows_[r].dot(x));
  return out;
}

BitMatrix BitMatrix::operator*(const BitMatrix& rhs) const {
  if (cols_ != rhs.rows()) throw LengthMismatch("BitMatrix product dimension mismatch");
  BitMatrix out(rows_.size(), rhs.cols());
  for (std::size_t r = 0; r < rows_.size(); ++r) out.rows_[r] = rhs.left_multiply(rows_[r]);
  return out;
}

std::size_t BitMatrix::rank() const {
  std::vector<BitWord> work = rows_;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols_ && rank < work.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < work.size() && !work[pivot].test_unchecked(c)) ++pivot;
    if (pivot == work.size()) continue;
    std::swap(work[rank], work[pivot]);
    for (std::size_t r = 0; r < work.size(); ++r) {
      if (r != rank && work[r].test_unchecked(c)) work[r].xor_unchecked(work[rank]);
    }
    ++rank;
  }
  return rank;
}

bool BitMatrix::is_zero() const noexcept {
  for (const auto& r : rows_) {
    if (!r.none()) return false;
  }
  return true;
}

SystematicCode::SystematicCode(BitMatrix parity_part, std::vector<std::size_t> perm)
    : n_(perm.size()), k_(parity_part.rows()), parity_(std::move(parity_part)), perm_(std::move(perm)) {
  if (k_ == 0 || k_ > n_) throw BadDimensions("SystematicCode needs 0 < k <= n");
  if (parity_.cols() != n_ - k_) throw BadDimensions("SystematicCode parity part must be k x (n-k)");
  std::vector<bool> seen(n_, false);
  for (std::size_t p : perm_) {
    if (p >= n_ || seen[p]) throw BadDimensions("SystematicCode perm is not a permutation");
    seen[p] = true;
  }

  const std::size_t r = n_ - k_;
  check_ = BitMatrix(r, n_);
  check_columns_.assign(n_, BitWord(r));
  for (std::size_t j = 0; j < k_; ++j) {
    // Column j of H_sys is row j of P.
    check_columns_[perm_[j]] = parity_.row(j);
  }
  for (std::size_t i = 0; i < r; ++i) {
    BitWord unit(r);
    unit.set_unchecked(i, true);
    check_columns_[perm_[k_ + i]] = unit;
  }
  for (std::size_t c = 0; c < n_; ++c) {
    check_columns_[c].for_each_set([&](std::size_t row) { check_.set(row, c, true); });
  }

  even_ = true;
  for (std::size_t j = 0; j < k_; ++j) {
    if ((1 + parity_.row(j).weight()) % 2 != 0) {
      even_ = false;
      break;
    }
  }
}

BitMatrix SystematicCode::generator() const {
  std::vector<BitWord> rows;
  rows.reserve(k_);
  for (std::size_t j = 0; j < k_; ++j) {
    BitWord unit(k_);
    unit.set_unchecked(j, true);
    rows.push_back(encode(unit));
  }
  return BitMatrix::from_rows(std::move(rows));
}

BitWord SystematicCode::from_systematic(const BitWord& info, const BitWord& parity) const {
  BitWord out(n_);
  for (std::size_t j = 0; j < k_; ++j) out.set_unchecked(perm_[j], info.test_unchecked(j));
  for (std::size_t i = 0; i < n_ - k_; ++i) out.set_unchecked(perm_[k_ + i], parity.test_unchecked(i));
  return out;
}

BitWord SystematicCode::encode(const BitWord& info) const {
  if (info.size() != k_) {
    throw LengthMismatch("encode: info length " + std::to_string(info.size()) + " != k " +
                         std::to_string(k_));
  }
  return from_systematic(info, parity_of(info));
}

BitWord SystematicCode::syndrome(const BitWord& word) const {
  if (word.size() != n_) {
    throw LengthMismatch("syndrome: word length " + std::to_string(word.size()) + " != n " +
                         std::to_string(n_));
  }
  BitWord s(n_ - k_);
  word.for_each_set([&](std::size_t i) { s.xor_unchecked(check_columns_[i]); });
  return s;
}

BitWord SystematicCode::extract_info(const BitWord& word) const {
  if (word.size() != n_) throw LengthMismatch("extract_info: word length != n");
  BitWord info(k_);
  for (std::size_t j = 0; j < k_; ++j) info.set_unchecked(j, word.test_unchecked(perm_[j]));
  return info;
}

SystematicCode to_systematic(const BitMatrix& generator) {
  const std::size_t k = generator.rows();
  const std::size_t n = generator.cols();
  if (k == 0 || k > n) throw BadDimensions("to_systematic: need 0 < k <= n");

  std::vector<BitWord> rows;
  rows.reserve(k);
  for (std::size_t r = 0; r < k; ++r) rows.push_back(generator.row(r));
  // order[c] = original column currently sitting at working column c.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  auto swap_columns = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (auto& row : rows) {
      const bool va = row.test_unchecked(a);
      const bool vb = row.test_unchecked(b);
      row.set_unchecked(a, vb);
      row.set_unchecked(b, va);
    }
    std::swap(order[a], order[b]);
  };

  for (std::size_t r = 0; r < k; ++r) {
    std::size_t pivot_col = n;
    std::size_t pivot_row = k;
    for (std::size_t c = r; c < n && pivot_col == n; ++c) {
      for (std::size_t rr = r; rr < k; ++rr) {
        if (rows[rr].test_unchecked(c)) {
          pivot_col = c;
          pivot_row = rr;
          break;
        }
      }
    }
    if (pivot_col == n) {
      throw RankDeficient("to_systematic: generator has rank " + std::to_string(r) + " < k = " +
                          std::to_string(k));
    }
    swap_columns(r, pivot_col);
    std::swap(rows[r], rows[pivot_row]);
    for (std::size_t rr = 0; rr < k; ++rr) {
      if (rr != r && rows[rr].test_unchecked(r)) rows[rr].xor_unchecked(rows[r]);
    }
  }

  BitMatrix parity(k, n - k);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = k; c < n; ++c) {
      if (rows[r].test_unchecked(c)) parity.set(r, c - k, true);
    }
  }
  return SystematicCode(std::move(parity), std::move(order));
}

}  // namespace softguess
