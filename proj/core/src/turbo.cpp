#include "softguess/turbo.hpp"

#include <string>

#include "softguess/errors.hpp"

namespace softguess {

LlrGrid::LlrGrid(std::size_t n, std::vector<double> data) : n_(n), data_(std::move(data)) {
  if (data_.size() != n * n) throw LengthMismatch("LlrGrid: data size must be n*n");
}

std::vector<BitWord> hard_decision(const LlrGrid& app) {
  const std::size_t n = app.n();
  std::vector<BitWord> out(n, BitWord(n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) out[r].set_unchecked(c, app(r, c) < 0.0);
  }
  return out;
}

TurboResult turbo_decode(const ProductCode& pc, const LlrGrid& channel, const TurboConfig& cfg) {
  const std::size_t n = pc.n();
  if (channel.n() != n) {
    throw LengthMismatch("turbo_decode: channel grid is " + std::to_string(channel.n()) +
                         " wide, product code needs " + std::to_string(n));
  }
  if (!(cfg.alpha >= 0.0)) throw BadDimensions("turbo_decode: alpha must be non-negative");
  if (cfg.max_iters == 0) throw BadDimensions("turbo_decode: max_iters must be >= 1");

  const SystematicCode& component = pc.component();
  LlrGrid a_priori(n, 0.0);
  LlrGrid app(n, 0.0);
  LlrGrid extrinsic(n, 0.0);
  std::vector<double> input(n);

  TurboResult result;
  for (std::size_t iter = 1; iter <= cfg.max_iters; ++iter) {
    for (HalfIteration half : {HalfIteration::Row, HalfIteration::Column}) {
      const bool rows = half == HalfIteration::Row;
      for (std::size_t line = 0; line < n; ++line) {
        for (std::size_t t = 0; t < n; ++t) {
          const std::size_t r = rows ? line : t;
          const std::size_t c = rows ? t : line;
          input[t] = channel(r, c) + a_priori(r, c);
        }
        const ChannelObservation obs(input);
        const DecodeOutcome out = gcd_so_decode(component, obs, cfg.component);
        result.total_queries += out.queries;
        ++result.component_decodes;
        result.max_bookkeeping_error = std::max(result.max_bookkeeping_error, out.bookkeeping_error());
        for (std::size_t t = 0; t < n; ++t) {
          const std::size_t r = rows ? line : t;
          const std::size_t c = rows ? t : line;
          app(r, c) = out.app_llr[t];
          extrinsic(r, c) = out.app_llr[t] - input[t];
        }
      }
      if (cfg.observer) cfg.observer(TurboState{channel, a_priori, app, extrinsic, iter, cfg.alpha, half});

      result.decision = hard_decision(app);
      result.iterations_used = iter;
      if (pc.is_valid(result.decision)) {
        result.status = TurboStatus::Success;
        return result;
      }
      if (iter == cfg.max_iters && !rows) break;
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) a_priori(r, c) = cfg.alpha * extrinsic(r, c);
      }
    }
  }
  result.status = TurboStatus::Failure;
  return result;
}

}  // namespace softguess
