#include "softguess/patterns.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "softguess/errors.hpp"
#include "softguess/soft_metrics.hpp"

namespace softguess {

ReliabilityOrder ReliabilityOrder::build(std::span<const double> magnitude,
                                         std::span<const std::size_t> scope, double empty_logp) {
  ReliabilityOrder order;
  order.positions.assign(scope.begin(), scope.end());
  for (std::size_t p : order.positions) {
    if (p >= magnitude.size()) throw PositionOutOfScope("ReliabilityOrder: position beyond magnitudes");
  }
  std::sort(order.positions.begin(), order.positions.end(), [&](std::size_t a, std::size_t b) {
    if (magnitude[a] != magnitude[b]) return magnitude[a] < magnitude[b];
    return a < b;
  });
  order.magnitudes.reserve(order.positions.size());
  for (std::size_t p : order.positions) order.magnitudes.push_back(magnitude[p]);
  order.empty_logp = empty_logp;
  return order;
}

ReliabilityOrder ReliabilityOrder::from_observation(const ChannelObservation& obs,
                                                    std::span<const std::size_t> scope) {
  return build(obs.magnitude(), scope, empty_pattern_log_prob(obs, scope));
}

// ---------------------------------------------------------------------------

OrbPatternIterator::OrbPatternIterator(ReliabilityOrder order, PatternOptions opts)
    : order_(std::move(order)), opts_(opts) {
  if (order_.size() == 0) throw BadDimensions("OrbPatternIterator needs at least one position");
  if (opts_.parity) {
    step_ = 2;
    first_hamming_ = *opts_.parity == Parity::Even ? 2 : 1;
  }
  parts_.reserve(order_.size());
  current_.flipped.reserve(order_.size());
  current_.ranks.reserve(order_.size());
}

std::uint64_t OrbPatternIterator::max_sum(std::size_t parts) const noexcept {
  const std::uint64_t m = order_.size();
  const std::uint64_t t = parts;
  return t * m - t * (t - 1) / 2;
}

// Smallest-lexicographic completion of parts_[from..] with values > prev
// summing to `remaining`. Caller guarantees feasibility.
void OrbPatternIterator::fill(std::size_t from, std::size_t prev, std::uint64_t remaining) {
  for (std::size_t j = from; j < hamming_; ++j) {
    const std::uint64_t rest = max_sum(hamming_ - 1 - j);
    std::uint64_t v = prev + 1;
    if (remaining > rest && remaining - rest > v) v = remaining - rest;
    parts_[j] = static_cast<std::size_t>(v);
    remaining -= v;
    prev = parts_[j];
  }
}

bool OrbPatternIterator::next_tuple() {
  const std::uint64_t m = order_.size();
  std::uint64_t suffix = parts_[hamming_ - 1];
  for (std::size_t i = hamming_ - 1; i-- > 0;) {
    suffix += parts_[i];  // sum of parts_[i..]
    const std::uint64_t t = hamming_ - 1 - i;
    std::uint64_t v = parts_[i] + 1;
    const std::uint64_t rest_max = max_sum(t);
    if (suffix > rest_max && suffix - rest_max > v) v = suffix - rest_max;
    if (v > m || v >= suffix) continue;
    const std::uint64_t rest_min = t * v + t * (t + 1) / 2;
    if (rest_min > suffix - v) continue;
    parts_[i] = static_cast<std::size_t>(v);
    fill(i + 1, parts_[i], suffix - v);
    return true;
  }
  return false;
}

bool OrbPatternIterator::seek(std::uint64_t weight, std::size_t hamming) {
  const std::uint64_t m = order_.size();
  const std::uint64_t top = m * (m + 1) / 2;
  for (; weight <= top; ++weight, hamming = first_hamming_) {
    for (std::size_t w = hamming; w <= m && std::uint64_t{w} * (w + 1) / 2 <= weight; w += step_) {
      if (weight <= max_sum(w)) {
        weight_ = weight;
        hamming_ = w;
        parts_.resize(w);
        fill(0, 0, weight);
        return true;
      }
    }
  }
  return false;
}

bool OrbPatternIterator::advance() {
  if (!started_) {
    started_ = true;
    if (!opts_.parity || *opts_.parity == Parity::Even) {
      weight_ = 0;
      hamming_ = 0;
      parts_.clear();
      return true;
    }
    return seek(1, first_hamming_);
  }
  if (hamming_ > 0 && next_tuple()) return true;
  if (hamming_ == 0) return seek(1, first_hamming_);
  return seek(weight_, hamming_ + step_);
}

const ErrorPattern* OrbPatternIterator::next() {
  if (status_ != IterStatus::Active) return nullptr;
  if (!advance()) {
    status_ = IterStatus::Exhausted;
    return nullptr;
  }
  if (emitted_ >= opts_.max_queries) {
    status_ = IterStatus::BudgetExceeded;
    return nullptr;
  }
  ++emitted_;
  current_.ranks.assign(parts_.begin(), parts_.end());
  current_.flipped.clear();
  double cost = 0.0;
  for (std::size_t r : parts_) {
    current_.flipped.push_back(order_.positions[r - 1]);
    cost += order_.magnitudes[r - 1];
  }
  current_.logistic_weight = weight_;
  current_.log_prob = order_.empty_logp - cost;
  return &current_;
}

// ---------------------------------------------------------------------------

MlPatternIterator::MlPatternIterator(ReliabilityOrder order, PatternOptions opts)
    : order_(std::move(order)), opts_(opts) {
  if (order_.size() > kMaxPositions) {
    throw ScaleExceeded("MlPatternIterator supports at most " + std::to_string(kMaxPositions) +
                        " positions, got " + std::to_string(order_.size()));
  }
  push(0, -1);
}

MlPatternIterator MlPatternIterator::from_magnitudes(std::span<const double> magnitudes,
                                                     PatternOptions opts) {
  std::vector<std::size_t> scope(magnitudes.size());
  std::iota(scope.begin(), scope.end(), std::size_t{0});
  double empty_logp = 0.0;
  for (double m : magnitudes) empty_logp -= std::log1p(std::exp(-std::min(m, kLlrClip)));
  std::vector<double> clipped(magnitudes.begin(), magnitudes.end());
  for (double& m : clipped) m = std::min(m, kLlrClip);
  return MlPatternIterator(ReliabilityOrder::build(clipped, scope, empty_logp), opts);
}

double MlPatternIterator::cost_of(std::uint32_t mask) const {
  double cost = 0.0;
  for (std::uint32_t w = mask; w != 0; w &= w - 1) cost += order_.magnitudes[std::countr_zero(w)];
  return cost;
}

bool MlPatternIterator::before(const Node& a, const Node& b) const {
  if (a.cost != b.cost) return a.cost < b.cost;
  // Tie: lexicographic on the sorted original positions.
  auto sorted_positions = [&](std::uint32_t mask) {
    std::vector<std::size_t> out;
    for (std::uint32_t w = mask; w != 0; w &= w - 1) out.push_back(order_.positions[std::countr_zero(w)]);
    std::sort(out.begin(), out.end());
    return out;
  };
  return sorted_positions(a.mask) < sorted_positions(b.mask);
}

void MlPatternIterator::push(std::uint32_t mask, int last) {
  heap_.push_back(Node{cost_of(mask), mask, last});
  std::push_heap(heap_.begin(), heap_.end(), [this](const Node& a, const Node& b) { return before(b, a); });
}

const ErrorPattern* MlPatternIterator::next() {
  if (status_ != IterStatus::Active) return nullptr;
  const auto worse = [this](const Node& a, const Node& b) { return before(b, a); };
  const int m = static_cast<int>(order_.size());
  while (true) {
    if (heap_.empty()) {
      status_ = IterStatus::Exhausted;
      return nullptr;
    }
    const Node top = heap_.front();
    const bool allowed =
        !opts_.parity || ((std::popcount(top.mask) % 2 == 0) == (*opts_.parity == Parity::Even));
    if (allowed && emitted_ >= opts_.max_queries) {
      status_ = IterStatus::BudgetExceeded;
      return nullptr;
    }
    std::pop_heap(heap_.begin(), heap_.end(), worse);
    heap_.pop_back();
    // Successors: append the next rank, or slide the highest rank up by one.
    // Every nonempty subset is reached from exactly one parent.
    const int next_rank = top.last + 1;
    if (next_rank < m) {
      push(top.mask | (std::uint32_t{1} << next_rank), next_rank);
      if (top.last >= 0) {
        push((top.mask & ~(std::uint32_t{1} << top.last)) | (std::uint32_t{1} << next_rank), next_rank);
      }
    }
    if (!allowed) continue;

    ++emitted_;
    current_.ranks.clear();
    current_.flipped.clear();
    current_.logistic_weight = 0;
    for (std::uint32_t w = top.mask; w != 0; w &= w - 1) {
      const int r = std::countr_zero(w);
      current_.ranks.push_back(static_cast<std::size_t>(r) + 1);
      current_.flipped.push_back(order_.positions[r]);
      current_.logistic_weight += static_cast<std::uint64_t>(r) + 1;
    }
    current_.log_prob = order_.empty_logp - top.cost;
    return &current_;
  }
}

}  // namespace softguess
