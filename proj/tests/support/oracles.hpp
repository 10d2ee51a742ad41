#pragma once

// Slow, obviously-correct reference computations used by the unit tests.
// Nothing here shares code with the library beyond the public types.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "softguess/bitword.hpp"
#include "softguess/gf2.hpp"

namespace oracle {

using Bits = std::vector<int>;

inline Bits to_bits(const softguess::BitWord& w) {
  Bits b(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) b[i] = w.get(i) ? 1 : 0;
  return b;
}

inline softguess::BitWord to_word(const Bits& b) {
  softguess::BitWord w(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) w.set(i, b[i] != 0);
  return w;
}

/// Row vector times matrix with plain integer arithmetic mod 2.
inline Bits vec_mat(const Bits& x, const std::vector<Bits>& m) {
  Bits out(m.empty() ? 0 : m[0].size(), 0);
  for (std::size_t r = 0; r < m.size(); ++r) {
    if (!x[r]) continue;
    for (std::size_t c = 0; c < out.size(); ++c) out[c] ^= m[r][c];
  }
  return out;
}

inline std::vector<Bits> rows_of(const softguess::BitMatrix& m) {
  std::vector<Bits> rows;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Bits row(m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c) row[c] = m.get(r, c) ? 1 : 0;
    rows.push_back(row);
  }
  return rows;
}

/// Rank by Gaussian elimination on a copy.
inline std::size_t rank(std::vector<Bits> m) {
  std::size_t r = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && !m[p][c]) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i != r && m[i][c]) {
        for (std::size_t j = 0; j < cols; ++j) m[i][j] ^= m[r][j];
      }
    }
    ++r;
  }
  return r;
}

inline Bits info_bits(std::uint64_t value, std::size_t k) {
  Bits b(k);
  for (std::size_t i = 0; i < k; ++i) b[i] = (value >> i) & 1u;
  return b;
}

/// ln q and ln(1-q) for q = 1 / (1 + e^{|L|}), written directly.
inline double flip_logp(double llr) { return -std::log1p(std::exp(std::min(std::fabs(llr), 50.0))); }
inline double keep_logp(double llr) { return -std::log1p(std::exp(-std::min(std::fabs(llr), 50.0))); }

/// Log-probability that `word` was sent given channel LLRs.
inline double word_logp(const Bits& word, const std::vector<double>& llr) {
  double s = 0.0;
  for (std::size_t i = 0; i < word.size(); ++i) {
    const int hard = llr[i] < 0.0 ? 1 : 0;
    s += word[i] == hard ? keep_logp(llr[i]) : flip_logp(llr[i]);
  }
  return s;
}

/// Exact codeword posteriors and bitwise MAP LLRs over the codebook spanned by `g`.
struct Map {
  std::vector<Bits> codewords;
  std::vector<double> posterior;
  std::vector<double> bit_llr;
};

inline Map exact_map(const std::vector<Bits>& g, const std::vector<double>& llr) {
  Map m;
  const std::size_t k = g.size();
  const std::size_t n = llr.size();
  std::vector<double> logp;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << k); ++v) {
    m.codewords.push_back(vec_mat(info_bits(v, k), g));
    logp.push_back(word_logp(m.codewords.back(), llr));
  }
  const double top = *std::max_element(logp.begin(), logp.end());
  double z = 0.0;
  for (double lp : logp) z += std::exp(lp - top);
  for (double lp : logp) m.posterior.push_back(std::exp(lp - top) / z);
  for (std::size_t i = 0; i < n; ++i) {
    double p0 = 0.0, p1 = 0.0;
    for (std::size_t c = 0; c < m.codewords.size(); ++c) {
      (m.codewords[c][i] ? p1 : p0) += m.posterior[c];
    }
    m.bit_llr.push_back(std::log(p0) - std::log(p1));
  }
  return m;
}

inline std::vector<double> random_llrs(std::size_t n, std::mt19937_64& rng, double scale = 3.0) {
  std::normal_distribution<double> d(scale, 2.0 * std::sqrt(scale));
  std::bernoulli_distribution sign(0.5);
  std::vector<double> out(n);
  for (auto& v : out) v = sign(rng) ? d(rng) : -d(rng);
  return out;
}

}  // namespace oracle
