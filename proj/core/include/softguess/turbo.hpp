#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "softguess/bitword.hpp"
#include "softguess/codes.hpp"
#include "softguess/decoders.hpp"

namespace softguess {

/// Square row-major matrix of LLRs.
class LlrGrid {
 public:
  LlrGrid() = default;
  explicit LlrGrid(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}
  LlrGrid(std::size_t n, std::vector<double> data);

  std::size_t n() const noexcept { return n_; }
  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * n_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * n_ + c]; }
  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * n_, n_}; }
  std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * n_, n_}; }
  std::span<const double> data() const noexcept { return data_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

enum class HalfIteration { Row, Column };

/// Snapshot after a half-iteration. `a_priori` is the input used by that
/// half, so extrinsic == app - (channel + a_priori).
struct TurboState {
  const LlrGrid& channel;
  const LlrGrid& a_priori;
  const LlrGrid& app;
  const LlrGrid& extrinsic;
  std::size_t iteration;  // 1-based full iteration
  double alpha;
  HalfIteration half;
};

struct TurboConfig {
  double alpha = 0.5;
  std::size_t max_iters = 16;
  DecoderConfig component{4, kDefaultMaxQueries, false, QueryOrder::Orb};
  /// Optional hook called after every half-iteration.
  std::function<void(const TurboState&)> observer;
};

enum class TurboStatus { Success, Failure };

struct TurboResult {
  std::vector<BitWord> decision;  // n rows of n bits
  TurboStatus status = TurboStatus::Failure;
  std::size_t iterations_used = 0;
  std::uint64_t total_queries = 0;
  std::size_t component_decodes = 0;
  double max_bookkeeping_error = 0.0;
};

/// Bit 0 where L >= 0, else 1.
std::vector<BitWord> hard_decision(const LlrGrid& app);

/// Block turbo decoding: alternating row and column SO-GCD passes on
/// channel + a-priori, with a-priori = alpha * extrinsic between halves.
/// Each half decodes every row (or column) from the same snapshot.
TurboResult turbo_decode(const ProductCode& pc, const LlrGrid& channel, const TurboConfig& cfg);

}  // namespace softguess
