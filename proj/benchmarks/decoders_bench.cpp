#include <benchmark/benchmark.h>

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "softguess/codes.hpp"
#include "softguess/decoders.hpp"
#include "softguess/patterns.hpp"
#include "softguess/soft_metrics.hpp"
#include "softguess/turbo.hpp"

using namespace softguess;

namespace {

std::vector<ChannelObservation> observations(const SystematicCode& code, double ebno, std::size_t count) {
  std::mt19937_64 rng(42);
  std::vector<ChannelObservation> out;
  for (std::size_t t = 0; t < count; ++t) {
    BitWord info(code.k());
    for (std::size_t i = 0; i < code.k(); ++i) info.set(i, rng() & 1u);
    out.push_back(bpsk_awgn_llr(code.encode(info), ebno, code.rate(), rng()));
  }
  return out;
}

void BM_OrbPatterns(benchmark::State& state) {
  const std::size_t m = static_cast<std::size_t>(state.range(0));
  std::vector<double> mag(m);
  std::vector<std::size_t> scope(m);
  std::iota(mag.begin(), mag.end(), 1.0);
  std::iota(scope.begin(), scope.end(), std::size_t{0});
  const auto order = ReliabilityOrder::build(mag, scope);
  for (auto _ : state) {
    PatternOptions opts;
    opts.max_queries = 4096;
    OrbPatternIterator it(order, opts);
    std::uint64_t w = 0;
    while (const auto* p = it.next()) w += p->logistic_weight;
    benchmark::DoNotOptimize(w);
  }
  state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_OrbPatterns)->Arg(26)->Arg(57);

void BM_GcdDecode(benchmark::State& state) {
  const auto code = state.range(0) == 32 ? make_ebch(32, 26) : make_ebch(64, 57);
  const auto obs = observations(code, 3.0, 256);
  const DecoderConfig cfg{static_cast<std::size_t>(state.range(1)), kDefaultMaxQueries, false, QueryOrder::Orb};
  std::size_t i = 0;
  std::uint64_t queries = 0;
  for (auto _ : state) {
    const auto out = gcd_so_decode(code, obs[i++ % obs.size()], cfg);
    queries += out.queries;
    benchmark::DoNotOptimize(out.not_in_list);
  }
  state.counters["queries/decode"] = benchmark::Counter(static_cast<double>(queries) / state.iterations());
}
BENCHMARK(BM_GcdDecode)->Args({32, 1})->Args({32, 4})->Args({64, 4});

void BM_GrandDecode(benchmark::State& state) {
  const auto code = make_ebch(32, 26);
  const auto obs = observations(code, 4.0, 256);
  const DecoderConfig cfg{1, kDefaultMaxQueries, state.range(0) != 0, QueryOrder::Orb};
  std::size_t i = 0;
  for (auto _ : state) {
    const auto out = grand_so_decode(code, obs[i++ % obs.size()], cfg);
    benchmark::DoNotOptimize(out.not_in_list);
  }
}
BENCHMARK(BM_GrandDecode)->Arg(0)->Arg(1);

void BM_TurboDecode(benchmark::State& state) {
  const auto pc = make_product(make_ebch(16, 11));
  const double ebno = static_cast<double>(state.range(0)) / 10.0;
  std::mt19937_64 rng(7);
  std::vector<LlrGrid> grids;
  for (int b = 0; b < 32; ++b) {
    std::vector<BitWord> info(11, BitWord(11));
    for (auto& row : info)
      for (std::size_t j = 0; j < 11; ++j) row.set(j, rng() & 1u);
    const auto arr = pc.encode(info);
    LlrGrid g(16);
    for (std::size_t r = 0; r < 16; ++r) {
      const auto obs = bpsk_awgn_llr(arr[r], ebno, pc.rate(), rng());
      for (std::size_t c = 0; c < 16; ++c) g(r, c) = obs.llr()[c];
    }
    grids.push_back(std::move(g));
  }
  const TurboConfig cfg;
  std::size_t i = 0;
  for (auto _ : state) {
    const auto res = turbo_decode(pc, grids[i++ % grids.size()], cfg);
    benchmark::DoNotOptimize(res.total_queries);
  }
}
BENCHMARK(BM_TurboDecode)->Arg(20)->Arg(30);

}  // namespace
BENCHMARK_MAIN();
