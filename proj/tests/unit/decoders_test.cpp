#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "softguess/codes.hpp"
#include "softguess/decoders.hpp"
#include "softguess/errors.hpp"
#include "softguess/patterns.hpp"

using namespace softguess;

namespace {

BitWord random_codeword(const SystematicCode& code, std::mt19937_64& rng) {
  BitWord info(code.k());
  for (std::size_t i = 0; i < code.k(); ++i) info.set(i, rng() & 1u);
  return code.encode(info);
}

ChannelObservation noisy(const SystematicCode& code, const BitWord& c, double ebno, std::uint64_t seed) {
  return bpsk_awgn_llr(c, ebno, code.rate(), seed);
}

void check_invariants(const DecodeOutcome& out, std::size_t n) {
  CHECK(out.bookkeeping_error() <= 1e-9);
  CHECK(out.not_in_list >= 0.0);
  CHECK(out.not_in_list <= 1.0);
  CHECK(out.app_llr.size() == n);
  for (std::size_t i = 1; i < out.list.size(); ++i) CHECK(out.list[i - 1].logp >= out.list[i].logp);
  if (out.status == DecodeStatus::Converged) {
    CHECK(out.queries >= out.list.size());
    CHECK(out.list.size() >= 1);
  }
}

}  // namespace

TEST_CASE("gcd on a noiseless observation returns the sent codeword") {
  std::mt19937_64 rng(1);
  for (const auto& code : {make_ebch(32, 26), make_rlc(64, 57, 7), make_ebch(8, 4)}) {
    const auto c = random_codeword(code, rng);
    const auto obs = noisy(code, c, 60.0, 5);
    for (QueryOrder order : {QueryOrder::Orb, QueryOrder::Ml}) {
      if (order == QueryOrder::Ml && code.k() > MlPatternIterator::kMaxPositions) continue;
      const auto out = gcd_so_decode(code, obs, {1, kDefaultMaxQueries, false, order});
      REQUIRE(!out.list.empty());
      CHECK(out.list[0].codeword == c);
      CHECK(out.list[0].posterior >= 0.999);
      CHECK(out.status == DecodeStatus::Converged);
      check_invariants(out, code.n());
    }
  }
}

TEST_CASE("gcd with the whole (8,4) codebook reproduces exact posteriors") {
  const auto code = make_ebch(8, 4);
  const auto g = oracle::rows_of(code.generator());
  std::mt19937_64 rng(2);
  for (int t = 0; t < 200; ++t) {
    const auto llr = oracle::random_llrs(8, rng, 1.5);
    const ChannelObservation obs(llr);
    const auto out = gcd_so_decode(code, obs, {16, 16, false, QueryOrder::Orb});
    const auto exact = oracle::exact_map(g, llr);
    REQUIRE(out.list.size() == 16);
    CHECK(out.status == DecodeStatus::Converged);
    CHECK(out.queried_mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(out.not_in_list <= 1e-12);
    for (const auto& e : out.list) {
      const auto idx = std::find(exact.codewords.begin(), exact.codewords.end(), oracle::to_bits(e.codeword));
      REQUIRE(idx != exact.codewords.end());
      CHECK(std::fabs(e.posterior - exact.posterior[idx - exact.codewords.begin()]) <= 1e-9);
    }
    for (std::size_t i = 0; i < 8; ++i) {
      const double want = std::clamp(exact.bit_llr[i], -kLlrClip, kLlrClip);
      CHECK(std::fabs(out.app_llr[i] - want) <= 1e-6);
    }
    check_invariants(out, 8);
  }
}

TEST_CASE("exhaustive map oracle agrees with the independent brute force") {
  const auto code = make_ebch(16, 11);
  const auto g = oracle::rows_of(code.generator());
  std::mt19937_64 rng(3);
  for (int t = 0; t < 5; ++t) {
    const auto llr = oracle::random_llrs(16, rng);
    const auto res = exhaustive_map_oracle(code, ChannelObservation(llr));
    const auto exact = oracle::exact_map(g, llr);
    double sum = 0.0;
    for (std::size_t v = 0; v < 2048; ++v) {
      CHECK(oracle::to_bits(res.codewords[v]) == exact.codewords[v]);
      CHECK(res.posterior[v] == doctest::Approx(exact.posterior[v]).epsilon(1e-9));
      sum += res.posterior[v];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    for (std::size_t i = 0; i < 16; ++i) CHECK(res.bit_llr[i] == doctest::Approx(exact.bit_llr[i]).epsilon(1e-9));
  }
}

TEST_CASE("exhaustive map oracle edge cases") {
  const auto code = make_ebch(8, 4);
  const auto uniform = exhaustive_map_oracle(code, ChannelObservation(std::vector<double>(8, 0.0)));
  for (double p : uniform.posterior) CHECK(p == doctest::Approx(1.0 / 16.0));
  std::mt19937_64 rng(4);
  const auto c = random_codeword(code, rng);
  const auto clean = exhaustive_map_oracle(code, noisy(code, c, 60.0, 1));
  const auto it = std::find(clean.codewords.begin(), clean.codewords.end(), c);
  CHECK(clean.posterior[it - clean.codewords.begin()] >= 0.999);
  CHECK_THROWS_AS(exhaustive_map_oracle(make_ebch(32, 26), ChannelObservation(std::vector<double>(32, 1.0))),
                  ScaleExceeded);
}

TEST_CASE("ml-order gcd top codeword is the ML codeword") {
  const auto code = make_ebch(16, 11);
  std::mt19937_64 rng(5);
  int converged = 0;
  for (int t = 0; t < 500; ++t) {
    const auto c = random_codeword(code, rng);
    const auto obs = noisy(code, c, 3.0, 100 + t);
    const auto out = gcd_so_decode(code, obs, {1, kDefaultMaxQueries, false, QueryOrder::Ml});
    if (out.status != DecodeStatus::Converged) continue;
    ++converged;
    const auto oracle = exhaustive_map_oracle(code, obs);
    const auto best = std::max_element(oracle.logp.begin(), oracle.logp.end()) - oracle.logp.begin();
    CHECK(out.list[0].codeword == oracle.codewords[best]);
    check_invariants(out, 16);
  }
  CHECK(converged == 500);
}

TEST_CASE("gcd and grand agree on the ML codeword for (8,4)") {
  const auto code = make_ebch(8, 4);
  std::mt19937_64 rng(6);
  for (int t = 0; t < 300; ++t) {
    const auto c = random_codeword(code, rng);
    const auto obs = noisy(code, c, 2.0, 700 + t);
    const DecoderConfig cfg{1, kDefaultMaxQueries, false, QueryOrder::Ml};
    const auto a = gcd_so_decode(code, obs, cfg);
    const auto b = grand_so_decode(code, obs, cfg);
    CHECK(a.list[0].codeword == b.list[0].codeword);
    check_invariants(b, 8);
  }
}

TEST_CASE("grand on a noiseless observation hits at the first query") {
  const auto code = make_ebch(32, 26);
  std::mt19937_64 rng(7);
  const auto c = random_codeword(code, rng);
  const auto out = grand_so_decode(code, noisy(code, c, 60.0, 9), {});
  CHECK(out.queries == 1);
  CHECK(out.list[0].codeword == c);
  check_invariants(out, 32);
}

TEST_CASE("grand listing every (8,4) codeword reproduces exact posteriors") {
  const auto code = make_ebch(8, 4);
  const auto g = oracle::rows_of(code.generator());
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    const auto llr = oracle::random_llrs(8, rng, 1.5);
    const auto out = grand_so_decode(code, ChannelObservation(llr), {16, kDefaultMaxQueries, false, QueryOrder::Orb});
    REQUIRE(out.list.size() == 16);
    CHECK(out.not_in_list == 0.0);
    const auto exact = oracle::exact_map(g, llr);
    for (const auto& e : out.list) {
      const auto idx = std::find(exact.codewords.begin(), exact.codewords.end(), oracle::to_bits(e.codeword));
      CHECK(std::fabs(e.posterior - exact.posterior[idx - exact.codewords.begin()]) <= 1e-9);
    }
  }
}

TEST_CASE("grand parity skip: same list, no more queries") {
  const auto code = make_ebch(16, 11);
  std::mt19937_64 rng(9);
  for (int t = 0; t < 300; ++t) {
    const auto c = random_codeword(code, rng);
    const auto obs = noisy(code, c, 2.5, 3000 + t);
    for (std::size_t lambda : {1u, 3u}) {
      const auto off = grand_so_decode(code, obs, {lambda, kDefaultMaxQueries, false, QueryOrder::Orb});
      const auto on = grand_so_decode(code, obs, {lambda, kDefaultMaxQueries, true, QueryOrder::Orb});
      REQUIRE(on.list.size() == off.list.size());
      for (std::size_t j = 0; j < on.list.size(); ++j) CHECK(on.list[j].codeword == off.list[j].codeword);
      CHECK(on.queries <= off.queries);
      check_invariants(on, 16);
    }
  }
  CHECK_THROWS_AS(grand_so_decode(make_rlc(16, 11, 1), ChannelObservation(std::vector<double>(16, 1.0)),
                                  {1, kDefaultMaxQueries, true, QueryOrder::Orb}),
                  UnsupportedCode);
}

TEST_CASE("budget exhaustion still yields a well-formed outcome") {
  const auto code = make_ebch(32, 26);
  std::mt19937_64 rng(10);
  const auto c = random_codeword(code, rng);
  const auto obs = noisy(code, c, 0.0, 77);
  const auto gcd = gcd_so_decode(code, obs, {8, 3, false, QueryOrder::Orb});
  CHECK(gcd.status == DecodeStatus::BudgetExhausted);
  CHECK(gcd.queries == 3);
  check_invariants(gcd, 32);
  const auto grand = grand_so_decode(code, obs, {4, 2, false, QueryOrder::Orb});
  CHECK(grand.status == DecodeStatus::BudgetExhausted);
  check_invariants(grand, 32);
}

TEST_CASE("more queries never increase the not-in-list mass while every codeword is listed") {
  // With a list large enough to hold every identified codeword, each query
  // moves mass from the unqueried remainder into the list.
  const auto code = make_ebch(32, 26);
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const auto obs = noisy(code, random_codeword(code, rng), 1.0, 900 + t);
    double prev = 1.0;
    for (std::uint64_t budget : {1u, 4u, 16u, 64u, 256u, 1024u}) {
      const auto out = gcd_so_decode(code, obs, {4096, budget, false, QueryOrder::Orb});
      CHECK(out.list.size() == out.queries);
      CHECK(out.not_in_list <= prev + 1e-12);
      prev = out.not_in_list;
    }
  }
}

TEST_CASE("bitwise app llr degenerate cases") {
  const ChannelObservation obs({1.5, -0.25, 3.0, 0.0});
  const auto prior = bitwise_app_llr({}, 1.0, obs);
  for (std::size_t i = 0; i < 4; ++i) CHECK(prior[i] == doctest::Approx(obs.llr()[i]).epsilon(1e-12));

  const std::vector<ListEntry> one{{BitWord{0, 1, 1, 0}, -1.0, 1.0}};
  const auto sure = bitwise_app_llr(one, 0.0, obs);
  CHECK(sure == std::vector<double>{kLlrClip, -kLlrClip, -kLlrClip, kLlrClip});
}

TEST_CASE("forney normalisation") {
  const std::vector<ListEntry> single{{BitWord(4), -3.0, 0.0}};
  CHECK(forney_block_so(single) == std::vector<double>{1.0});
  const std::vector<ListEntry> pair{{BitWord(4), -2.0, 0.0}, {BitWord{1, 1, 1, 1}, -2.0, 0.0}};
  const auto post = forney_block_so(pair);
  CHECK(post[0] == doctest::Approx(0.5));
  CHECK(post[1] == doctest::Approx(0.5));
}

TEST_CASE("pyndiah llr") {
  const auto code = make_ebch(8, 4);
  std::mt19937_64 rng(12);
  for (int t = 0; t < 100; ++t) {
    const auto llr = oracle::random_llrs(8, rng, 1.0);
    const ChannelObservation obs(llr);
    const auto out = gcd_so_decode(code, obs, {16, kDefaultMaxQueries, false, QueryOrder::Orb});
    const auto pyn = pyndiah_bitwise_llr(out.list, obs);
    // Over the whole codebook the max-log decision is the ML codeword.
    const auto exact = exhaustive_map_oracle(code, obs);
    const auto ml = std::max_element(exact.logp.begin(), exact.logp.end()) - exact.logp.begin();
    for (std::size_t i = 0; i < 8; ++i) {
      if (pyn[i] == 0.0) continue;
      CHECK((pyn[i] < 0) == exact.codewords[ml].get(i));
    }
  }
  const ChannelObservation obs({2.0, -1.0, 0.5, 4.0});
  const std::vector<ListEntry> agree{{BitWord{0, 1, 0, 1}, -1.0, 0.6}, {BitWord{0, 1, 1, 0}, -2.0, 0.3}};
  const auto v = pyndiah_bitwise_llr(agree, obs, 0.5);
  CHECK(v[0] == doctest::Approx(1.0));
  CHECK(v[1] == doctest::Approx(-0.5));
  CHECK(v[2] == doctest::Approx(1.0));
  CHECK(v[3] == doctest::Approx(-1.0));
  CHECK_THROWS_AS(pyndiah_bitwise_llr({}, obs), BadDimensions);
}
