#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace softguess {

class ChannelObservation;

enum class Parity { Even, Odd };

enum class IterStatus { Active, Exhausted, BudgetExceeded };

inline constexpr std::uint64_t kDefaultMaxQueries = std::uint64_t{1} << 22;

/// Designated positions sorted by ascending reliability |LLR|.
///
/// The position at index r has rank r + 1. Equal magnitudes are ordered by
/// position index.
struct ReliabilityOrder {
  std::vector<std::size_t> positions;
  std::vector<double> magnitudes;  // magnitudes[r] belongs to positions[r]
  double empty_logp = 0.0;         // log-probability of flipping nothing in scope

  std::size_t size() const noexcept { return positions.size(); }

  /// `magnitude` is indexed by position; only entries named in `scope` are used.
  static ReliabilityOrder build(std::span<const double> magnitude, std::span<const std::size_t> scope,
                                double empty_logp = 0.0);
  static ReliabilityOrder from_observation(const ChannelObservation& obs,
                                           std::span<const std::size_t> scope);
};

/// A candidate noise effect over the positions of a ReliabilityOrder.
struct ErrorPattern {
  std::vector<std::size_t> flipped;  // positions, listed in ascending rank
  std::vector<std::size_t> ranks;    // 1-based, ascending
  std::uint64_t logistic_weight = 0;
  double log_prob = 0.0;
};

struct PatternOptions {
  std::optional<Parity> parity;     // skip patterns of the other Hamming-weight parity
  std::uint64_t max_queries = kDefaultMaxQueries;
};

/// ORBGRAND 1-line order: every subset of ranks exactly once, by
/// nondecreasing logistic weight W; within W by increasing Hamming weight,
/// then lexicographically by the ascending rank tuple. Each (W, w) class is
/// swept in place from its lexicographically smallest partition of W into w
/// distinct parts, so no pattern storage is needed.
class OrbPatternIterator {
 public:
  explicit OrbPatternIterator(ReliabilityOrder order, PatternOptions opts = {});

  /// Next pattern, or nullptr once the stream ends (see status()). The
  /// pointee is overwritten by the following call.
  const ErrorPattern* next();
  IterStatus status() const noexcept { return status_; }
  std::uint64_t emitted() const noexcept { return emitted_; }
  const ReliabilityOrder& order() const noexcept { return order_; }

 private:
  bool advance();
  bool seek(std::uint64_t weight, std::size_t hamming);
  void fill(std::size_t from, std::size_t prev, std::uint64_t remaining);
  bool next_tuple();
  std::uint64_t max_sum(std::size_t parts) const noexcept;

  ReliabilityOrder order_;
  PatternOptions opts_;
  IterStatus status_ = IterStatus::Active;
  std::uint64_t emitted_ = 0;
  bool started_ = false;
  std::uint64_t weight_ = 0;     // current logistic weight
  std::size_t hamming_ = 0;      // current Hamming weight
  std::size_t first_hamming_ = 1;
  std::size_t step_ = 1;
  std::vector<std::size_t> parts_;
  ErrorPattern current_;
};

/// Exact maximum-likelihood order (nonincreasing log_prob; ties by the
/// lexicographic order of the sorted flipped positions). Best-first
/// expansion over a frontier, so memory grows with the number emitted;
/// intended as a test oracle and limited to 24 positions.
class MlPatternIterator {
 public:
  static constexpr std::size_t kMaxPositions = 24;

  /// Throws ScaleExceeded when the order has more than kMaxPositions entries.
  explicit MlPatternIterator(ReliabilityOrder order, PatternOptions opts = {});
  /// Positions 0..m-1 with the given |LLR| magnitudes.
  static MlPatternIterator from_magnitudes(std::span<const double> magnitudes, PatternOptions opts = {});

  const ErrorPattern* next();
  IterStatus status() const noexcept { return status_; }
  std::uint64_t emitted() const noexcept { return emitted_; }
  const ReliabilityOrder& order() const noexcept { return order_; }

 private:
  struct Node {
    double cost;
    std::uint32_t mask;  // bit r set => rank r + 1 flipped
    int last;            // highest set bit, -1 for the empty pattern
  };
  bool before(const Node& a, const Node& b) const;
  double cost_of(std::uint32_t mask) const;
  void push(std::uint32_t mask, int last);

  ReliabilityOrder order_;
  PatternOptions opts_;
  IterStatus status_ = IterStatus::Active;
  std::uint64_t emitted_ = 0;
  std::vector<Node> heap_;
  ErrorPattern current_;
};

}  // namespace softguess
