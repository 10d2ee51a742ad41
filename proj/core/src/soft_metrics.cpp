#include "softguess/soft_metrics.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "softguess/errors.hpp"

namespace softguess {

ChannelObservation::ChannelObservation(std::vector<double> llr)
    : llr_(std::move(llr)),
      magnitude_(llr_.size()),
      hard_(llr_.size()),
      flip_logp_(llr_.size()),
      keep_logp_(llr_.size()) {
  for (std::size_t i = 0; i < llr_.size(); ++i) {
    const double m = std::min(std::fabs(llr_[i]), kLlrClip);
    magnitude_[i] = m;
    hard_.set_unchecked(i, llr_[i] < 0.0);
    // ln(1 - q) = -ln(1 + e^{-m}), ln q = -m + ln(1 - q).
    keep_logp_[i] = -std::log1p(std::exp(-m));
    flip_logp_[i] = keep_logp_[i] - m;
  }
}

double empty_pattern_log_prob(const ChannelObservation& obs, std::span<const std::size_t> scope) {
  double total = 0.0;
  for (std::size_t i : scope) {
    if (i >= obs.size()) throw PositionOutOfScope("scope position beyond observation length");
    total += obs.keep_logp()[i];
  }
  return total;
}

double pattern_log_prob(const ChannelObservation& obs, std::span<const std::size_t> flipped,
                        std::span<const std::size_t> scope) {
  std::vector<bool> in_scope(obs.size(), false);
  for (std::size_t i : scope) {
    if (i >= obs.size()) throw PositionOutOfScope("scope position beyond observation length");
    in_scope[i] = true;
  }
  std::vector<bool> is_flipped(obs.size(), false);
  for (std::size_t i : flipped) {
    if (i >= obs.size() || !in_scope[i]) {
      throw PositionOutOfScope("flipped position " + std::to_string(i) + " is not in scope");
    }
    is_flipped[i] = true;
  }
  double total = 0.0;
  for (std::size_t i : scope) total += is_flipped[i] ? obs.flip_logp()[i] : obs.keep_logp()[i];
  return total;
}

double log_add_exp(double a, double b) noexcept {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

double awgn_noise_variance(double ebno_db, double rate) {
  if (!(rate > 0.0 && rate <= 1.0)) throw BadDimensions("code rate must lie in (0, 1]");
  return 1.0 / (2.0 * rate * std::pow(10.0, ebno_db / 10.0));
}

std::vector<double> awgn_llrs(std::span<const std::uint8_t> bits, double ebno_db, double rate,
                              std::uint64_t rng_seed) {
  const double variance = awgn_noise_variance(ebno_db, rate);
  const double sigma = std::sqrt(variance);
  std::mt19937_64 gen(rng_seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> llr(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const double r = (bits[i] ? -1.0 : 1.0) + sigma * noise(gen);
    llr[i] = 2.0 * r / variance;
  }
  return llr;
}

ChannelObservation bpsk_awgn_llr(const BitWord& codeword, double ebno_db, double rate,
                                 std::uint64_t rng_seed) {
  std::vector<std::uint8_t> bits(codeword.size());
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = codeword.test_unchecked(i);
  return ChannelObservation(awgn_llrs(bits, ebno_db, rate, rng_seed));
}

}  // namespace softguess
