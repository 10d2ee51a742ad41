#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "softguess/codes.hpp"
#include "softguess/errors.hpp"
#include "softguess/soft_metrics.hpp"
#include "softguess/turbo.hpp"

using namespace softguess;

namespace {

std::vector<BitWord> random_array(const ProductCode& pc, std::mt19937_64& rng) {
  std::vector<BitWord> info(pc.k(), BitWord(pc.k()));
  for (auto& row : info)
    for (std::size_t i = 0; i < pc.k(); ++i) row.set(i, rng() & 1u);
  return pc.encode(info);
}

LlrGrid channel_grid(const std::vector<BitWord>& array, double ebno, double rate, std::uint64_t seed) {
  const std::size_t n = array.size();
  LlrGrid g(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto obs = bpsk_awgn_llr(array[r], ebno, rate, seed + r);
    for (std::size_t c = 0; c < n; ++c) g(r, c) = obs.llr()[c];
  }
  return g;
}

LlrGrid strong_grid(const std::vector<BitWord>& array, double magnitude) {
  const std::size_t n = array.size();
  LlrGrid g(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) g(r, c) = array[r].get(c) ? -magnitude : magnitude;
  return g;
}

}  // namespace

TEST_CASE("hard decision") {
  LlrGrid g(3, 1.0);
  for (const auto& row : hard_decision(g)) CHECK(row.none());
  g(1, 2) = -0.5;
  const auto d = hard_decision(g);
  CHECK(d[1].get(2));
  CHECK(d[1].weight() == 1);
  g(0, 0) = 0.0;
  CHECK_FALSE(hard_decision(g)[0].get(0));

  std::vector<double> llr{0.3, -1.0, 2.0, -0.1};
  const ChannelObservation obs(llr);
  LlrGrid g2(2, llr);
  const auto d2 = hard_decision(g2);
  for (std::size_t i = 0; i < 4; ++i) CHECK(d2[i / 2].get(i % 2) == obs.hard().get(i));
}

TEST_CASE("noiseless block succeeds at iteration 1 after the row half") {
  const auto pc = make_product(make_ebch(16, 11));
  std::mt19937_64 rng(1);
  const auto arr = random_array(pc, rng);
  int halves = 0;
  TurboConfig cfg;
  cfg.observer = [&](const TurboState&) { ++halves; };
  const auto res = turbo_decode(pc, strong_grid(arr, 200.0), cfg);
  CHECK(res.status == TurboStatus::Success);
  CHECK(res.iterations_used == 1);
  CHECK(halves == 1);
  CHECK(res.decision == arr);
  CHECK(res.component_decodes == 16);
}

TEST_CASE("single corrupted bit is corrected") {
  const auto pc = make_product(make_ebch(16, 11));
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const auto arr = random_array(pc, rng);
    auto g = strong_grid(arr, 8.0);
    const std::size_t r = rng() % 16, c = rng() % 16;
    g(r, c) = -g(r, c) * 0.25;
    const auto res = turbo_decode(pc, g, {});
    CHECK(res.status == TurboStatus::Success);
    CHECK(res.decision == arr);
  }
}

TEST_CASE("extrinsic identity after every half-iteration") {
  const auto pc = make_product(make_ebch(16, 11));
  std::mt19937_64 rng(3);
  const auto arr = random_array(pc, rng);
  const auto ch = channel_grid(arr, 1.5, pc.rate(), 40);
  double worst = 0.0;
  std::size_t calls = 0;
  std::size_t last_iter = 0;
  HalfIteration next = HalfIteration::Row;
  TurboConfig cfg;
  cfg.observer = [&](const TurboState& s) {
    ++calls;
    CHECK(s.half == next);
    next = s.half == HalfIteration::Row ? HalfIteration::Column : HalfIteration::Row;
    CHECK(s.iteration >= last_iter);
    last_iter = s.iteration;
    for (std::size_t r = 0; r < 16; ++r)
      for (std::size_t c = 0; c < 16; ++c) {
        const double e = s.app(r, c) - (s.channel(r, c) + s.a_priori(r, c));
        worst = std::max(worst, std::fabs(s.extrinsic(r, c) - e));
      }
  };
  const auto res = turbo_decode(pc, ch, cfg);
  CHECK(calls >= 1);
  CHECK(worst <= 1e-9);
  CHECK(res.max_bookkeeping_error <= 1e-9);
}

TEST_CASE("alpha = 0 keeps the a priori input at zero") {
  const auto pc = make_product(make_ebch(16, 11));
  std::mt19937_64 rng(4);
  const auto arr = random_array(pc, rng);
  const auto ch = channel_grid(arr, 0.5, pc.rate(), 90);
  TurboConfig cfg;
  cfg.alpha = 0.0;
  cfg.max_iters = 3;
  double worst = 0.0;
  cfg.observer = [&](const TurboState& s) {
    for (double v : s.a_priori.data()) worst = std::max(worst, std::fabs(v));
  };
  turbo_decode(pc, ch, cfg);
  CHECK(worst == 0.0);
}

TEST_CASE("success implies a valid product codeword; queries grow with iterations") {
  const auto pc = make_product(make_ebch(16, 11));
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto arr = random_array(pc, rng);
    const auto ch = channel_grid(arr, 2.0, pc.rate(), 1000 * t);
    std::uint64_t prev = 0;
    std::size_t prev_iters = 0;
    for (std::size_t iters : {1u, 2u, 4u}) {
      TurboConfig cfg;
      cfg.max_iters = iters;
      const auto res = turbo_decode(pc, ch, cfg);
      CHECK(res.iterations_used <= iters);
      if (res.iterations_used >= prev_iters) CHECK(res.total_queries >= prev);
      prev = res.total_queries;
      prev_iters = res.iterations_used;
      CHECK((res.status == TurboStatus::Success) == pc.is_valid(res.decision));
      if (res.status == TurboStatus::Success) {
        CHECK(pc.encode(pc.extract_info(res.decision)) == res.decision);
      }
    }
  }
}

TEST_CASE("turbo argument checks") {
  const auto pc = make_product(make_ebch(16, 11));
  CHECK_THROWS_AS(turbo_decode(pc, LlrGrid(15), {}), LengthMismatch);
  TurboConfig cfg;
  cfg.max_iters = 0;
  CHECK_THROWS_AS(turbo_decode(pc, LlrGrid(16, 1.0), cfg), BadDimensions);
  cfg.max_iters = 1;
  cfg.alpha = -0.1;
  CHECK_THROWS_AS(turbo_decode(pc, LlrGrid(16, 1.0), cfg), BadDimensions);
  CHECK_THROWS_AS(LlrGrid(3, std::vector<double>(8)), LengthMismatch);
}
