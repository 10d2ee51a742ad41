#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "softguess/bitword.hpp"
#include "softguess/gf2.hpp"
#include "softguess/patterns.hpp"
#include "softguess/soft_metrics.hpp"

namespace softguess {

enum class QueryOrder { Orb, Ml };

enum class DecodeStatus { Converged, BudgetExhausted };

struct DecoderConfig {
  std::size_t lambda = 1;  // good-list size
  std::uint64_t max_queries = kDefaultMaxQueries;
  bool parity_skip = false;  // GRAND on even codes only
  QueryOrder order = QueryOrder::Orb;
};

struct ListEntry {
  BitWord codeword;      // original coordinates
  double logp = 0.0;     // n-scope log-probability of codeword xor hard decision
  double posterior = 0.0;
};

struct DecodeOutcome {
  std::vector<ListEntry> list;  // nonincreasing logp
  double not_in_list = 1.0;
  std::vector<double> app_llr;
  std::uint64_t queries = 0;
  DecodeStatus status = DecodeStatus::Converged;
  double queried_mass = 0.0;  // k-scope (GCD) or n-scope (GRAND) mass of queried patterns

  /// |sum of posteriors + not_in_list - 1|.
  double bookkeeping_error() const noexcept;
};

/// Guessing codeword decoding with soft output.
///
/// Patterns are guessed on the k information positions and extended to
/// codewords through the generator. The best `lambda` codewords are kept;
/// the search stops once the next pattern's k-scope probability cannot beat
/// the lambda-th best codeword's n-scope probability. Posteriors use every
/// codeword identified plus the unqueried mass scaled by (2^k-1)/(2^n-1).
DecodeOutcome gcd_so_decode(const SystematicCode& code, const ChannelObservation& obs,
                            const DecoderConfig& cfg);

/// GRAND with soft output: n-scope noise guesses tested by syndrome until
/// `lambda` codewords are found or the budget runs out.
DecodeOutcome grand_so_decode(const SystematicCode& code, const ChannelObservation& obs,
                              const DecoderConfig& cfg);

/// Bitwise APP LLRs from a posterior-weighted list plus not-in-list mass,
/// which falls back on the channel prior. Clipped to +-kLlrClip.
std::vector<double> bitwise_app_llr(std::span<const ListEntry> list, double not_in_list,
                                    const ChannelObservation& obs);

/// List-only normalisation of e^{logp} (the unlisted mass is dropped).
std::vector<double> forney_block_so(std::span<const ListEntry> list);

/// Max-log list LLR with a beta * |L_i| fallback when the list agrees at bit i.
std::vector<double> pyndiah_bitwise_llr(std::span<const ListEntry> list, const ChannelObservation& obs,
                                        double beta = 0.5);

struct MapOracleResult {
  std::vector<BitWord> codewords;  // indexed by info word value
  std::vector<double> logp;
  std::vector<double> posterior;
  std::vector<double> bit_llr;     // exact bitwise MAP LLRs, unclipped
};

/// Exact codeword posteriors by enumerating all 2^k codewords (k <= 16).
MapOracleResult exhaustive_map_oracle(const SystematicCode& code, const ChannelObservation& obs);

}  // namespace softguess
