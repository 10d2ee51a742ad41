#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "softguess/bitword.hpp"

namespace softguess {

/// Reliability magnitudes are clipped here before flip probabilities are
/// formed, so ln q_i stays finite.
inline constexpr double kLlrClip = 50.0;

/// Per-bit channel soft information.
///
/// Sign convention: llr_i = ln p(r_i | c_i = 0) / p(r_i | c_i = 1), so a
/// positive value favours bit 0. llr_i = 0 hard-decides to 0.
class ChannelObservation {
 public:
  ChannelObservation() = default;
  explicit ChannelObservation(std::vector<double> llr);

  std::size_t size() const noexcept { return llr_.size(); }
  std::span<const double> llr() const noexcept { return llr_; }
  /// min(|llr_i|, kLlrClip).
  std::span<const double> magnitude() const noexcept { return magnitude_; }
  const BitWord& hard() const noexcept { return hard_; }
  /// ln q_i, q_i = 1 / (1 + e^{|L_i|}).
  std::span<const double> flip_logp() const noexcept { return flip_logp_; }
  /// ln (1 - q_i).
  std::span<const double> keep_logp() const noexcept { return keep_logp_; }

  /// p(c_i = 0 | r_i) under the clipped magnitude.
  double prob_zero(std::size_t i) const noexcept {
    const double q = std::exp(flip_logp_[i]);
    return llr_[i] >= 0.0 ? 1.0 - q : q;
  }

 private:
  std::vector<double> llr_;
  std::vector<double> magnitude_;
  BitWord hard_;
  std::vector<double> flip_logp_;
  std::vector<double> keep_logp_;
};

/// Natural-log probability of the noise effect `flipped` restricted to `scope`.
/// Throws PositionOutOfScope when flipped is not a subset of scope.
double pattern_log_prob(const ChannelObservation& obs, std::span<const std::size_t> flipped,
                        std::span<const std::size_t> scope);

/// Sum of keep_logp over `scope` (the log probability of the empty pattern).
double empty_pattern_log_prob(const ChannelObservation& obs, std::span<const std::size_t> scope);

/// Running sum of pattern probabilities in the linear domain, compensated
/// (Neumaier) so long runs of tiny terms do not lose mass.
class MassAccumulator {
 public:
  void add(double logp) noexcept {
    const double x = std::exp(logp);
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double mass() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

/// Returns a copy of `acc` with e^{logp} added.
inline MassAccumulator accumulate(MassAccumulator acc, double logp) noexcept {
  acc.add(logp);
  return acc;
}

/// Log-domain sum of exponentials: holds ln sum_i e^{x_i} without overflow
/// or underflow for arbitrarily negative terms.
class LogSumExp {
 public:
  void add(double x) noexcept {
    if (x == -std::numeric_limits<double>::infinity()) return;
    if (x <= max_) {
      scaled_ += std::exp(x - max_);
    } else {
      scaled_ = scaled_ * std::exp(max_ - x) + 1.0;
      max_ = x;
    }
  }
  void add(const LogSumExp& other) noexcept {
    if (other.empty()) return;
    add(other.value());
  }
  bool empty() const noexcept { return scaled_ == 0.0; }
  double value() const noexcept {
    return empty() ? -std::numeric_limits<double>::infinity() : max_ + std::log(scaled_);
  }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double scaled_ = 0.0;
};

/// ln(e^a + e^b).
double log_add_exp(double a, double b) noexcept;

/// Noise variance for BPSK at the given Eb/N0 (dB) and code rate.
double awgn_noise_variance(double ebno_db, double rate);

/// BPSK (0 -> +1, 1 -> -1) over AWGN; returns channel LLRs 2 r / sigma^2.
/// Deterministic given `rng_seed`.
std::vector<double> awgn_llrs(std::span<const std::uint8_t> bits, double ebno_db, double rate,
                              std::uint64_t rng_seed);

ChannelObservation bpsk_awgn_llr(const BitWord& codeword, double ebno_db, double rate,
                                 std::uint64_t rng_seed);

}  // namespace softguess
