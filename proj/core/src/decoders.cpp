#include "softguess/decoders.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <variant>

#include "softguess/errors.hpp"

namespace softguess {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

/// (2^k - 1) / (2^n - 1) evaluated without forming 2^n.
double random_hit_ratio(std::size_t n, std::size_t k) {
  if (k >= n) return 1.0;
  const double num = -std::expm1(-static_cast<double>(k) * std::log(2.0));
  const double den = -std::expm1(-static_cast<double>(n) * std::log(2.0));
  return std::ldexp(num / den, static_cast<int>(k) - static_cast<int>(n));
}

std::vector<std::size_t> iota_scope(std::size_t count) {
  std::vector<std::size_t> scope(count);
  std::iota(scope.begin(), scope.end(), std::size_t{0});
  return scope;
}

using AnyIterator = std::variant<OrbPatternIterator, MlPatternIterator>;

AnyIterator make_iterator(QueryOrder order, ReliabilityOrder reliability, PatternOptions opts) {
  if (order == QueryOrder::Ml) return MlPatternIterator(std::move(reliability), opts);
  return OrbPatternIterator(std::move(reliability), opts);
}

/// Fills posteriors, not_in_list and app_llr from log-domain masses.
void finish_outcome(DecodeOutcome& out, const LogSumExp& dropped, double log_missing,
                    const ChannelObservation& obs) {
  std::sort(out.list.begin(), out.list.end(), [](const ListEntry& a, const ListEntry& b) {
    if (a.logp != b.logp) return a.logp > b.logp;
    return a.codeword < b.codeword;
  });
  LogSumExp outside = dropped;
  outside.add(log_missing);
  LogSumExp total = outside;
  for (const auto& e : out.list) total.add(e.logp);
  const double log_total = total.value();
  if (log_total == kNegInf) {
    // Nothing identified and no residual mass: everything is prior.
    out.not_in_list = 1.0;
  } else {
    for (auto& e : out.list) e.posterior = std::exp(e.logp - log_total);
    out.not_in_list = outside.empty() ? 0.0 : std::exp(outside.value() - log_total);
  }
  out.app_llr = bitwise_app_llr(out.list, out.not_in_list, obs);
}

struct GcdCandidate {
  double logp;
  BitWord info;    // systematic info bits
  BitWord parity;  // systematic parity bits
};

// Min-heap on logp: front() is the lambda-th best candidate.
bool candidate_worse(const GcdCandidate& a, const GcdCandidate& b) { return a.logp > b.logp; }

}  // namespace

double DecodeOutcome::bookkeeping_error() const noexcept {
  double total = not_in_list;
  for (const auto& e : list) total += e.posterior;
  return std::fabs(total - 1.0);
}

DecodeOutcome gcd_so_decode(const SystematicCode& code, const ChannelObservation& obs,
                            const DecoderConfig& cfg) {
  const std::size_t n = code.n();
  const std::size_t k = code.k();
  if (obs.size() != n) throw LengthMismatch("gcd_so_decode: observation length != n");
  if (cfg.lambda == 0) throw BadDimensions("gcd_so_decode: lambda must be >= 1");
  const auto perm = code.perm();

  // Systematic coordinates: j < k info, j >= k parity.
  std::vector<double> magnitude(n);
  BitWord hard_info(k);
  BitWord hard_parity(n - k);
  double keep_all = 0.0;
  double keep_info = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t p = perm[j];
    magnitude[j] = obs.magnitude()[p];
    keep_all += obs.keep_logp()[p];
    if (j < k) {
      keep_info += obs.keep_logp()[p];
      hard_info.set_unchecked(j, obs.hard().test_unchecked(p));
    } else {
      hard_parity.set_unchecked(j - k, obs.hard().test_unchecked(p));
    }
  }
  const double parity_keep = keep_all - keep_info;
  const BitWord base_parity = code.parity_of(hard_info);
  const BitMatrix& P = code.parity_part();

  const auto scope = iota_scope(k);
  auto iterator = make_iterator(cfg.order, ReliabilityOrder::build(magnitude, scope, keep_info),
                                PatternOptions{std::nullopt, cfg.max_queries});

  DecodeOutcome out;
  MassAccumulator mass;
  LogSumExp dropped;
  std::vector<GcdCandidate> best;
  best.reserve(std::min<std::size_t>(cfg.lambda, 4096));
  bool terminated = false;

  std::visit(
      [&](auto& it) {
        while (const ErrorPattern* z = it.next()) {
          if (best.size() == cfg.lambda && z->log_prob <= best.front().logp) {
            terminated = true;
            break;
          }
          ++out.queries;
          mass.add(z->log_prob);

          BitWord parity = base_parity;
          for (std::size_t j : z->flipped) parity.xor_unchecked(P.row(j));
          BitWord diff = parity;
          diff.xor_unchecked(hard_parity);
          double parity_cost = 0.0;
          diff.for_each_set([&](std::size_t i) { parity_cost += magnitude[k + i]; });
          const double logp = z->log_prob + parity_keep - parity_cost;

          if (best.size() < cfg.lambda) {
            BitWord info = hard_info;
            for (std::size_t j : z->flipped) info.flip_unchecked(j);
            best.push_back(GcdCandidate{logp, info, parity});
            if (best.size() == cfg.lambda) std::make_heap(best.begin(), best.end(), candidate_worse);
          } else if (logp > best.front().logp) {
            dropped.add(best.front().logp);
            std::pop_heap(best.begin(), best.end(), candidate_worse);
            BitWord& info = best.back().info;
            info = hard_info;
            for (std::size_t j : z->flipped) info.flip_unchecked(j);
            best.back().parity = parity;
            best.back().logp = logp;
            std::push_heap(best.begin(), best.end(), candidate_worse);
          } else {
            dropped.add(logp);
          }
        }
        const IterStatus st = it.status();
        const bool exhausted = !terminated && st == IterStatus::Exhausted;
        out.status = (terminated || exhausted) ? DecodeStatus::Converged : DecodeStatus::BudgetExhausted;
        out.queried_mass = exhausted ? 1.0 : std::min(mass.mass(), 1.0);
      },
      iterator);

  out.list.reserve(best.size());
  for (const auto& c : best) out.list.push_back(ListEntry{code.from_systematic(c.info, c.parity), c.logp, 0.0});

  const double missing = (1.0 - out.queried_mass) * random_hit_ratio(n, k);
  finish_outcome(out, dropped, safe_log(missing), obs);
  return out;
}

DecodeOutcome grand_so_decode(const SystematicCode& code, const ChannelObservation& obs,
                              const DecoderConfig& cfg) {
  const std::size_t n = code.n();
  const std::size_t k = code.k();
  if (obs.size() != n) throw LengthMismatch("grand_so_decode: observation length != n");
  if (cfg.lambda == 0) throw BadDimensions("grand_so_decode: lambda must be >= 1");

  PatternOptions opts{std::nullopt, cfg.max_queries};
  if (cfg.parity_skip) {
    if (!code.is_even()) throw UnsupportedCode("grand_so_decode: parity_skip requires an even code");
    // Codewords have even weight, so the noise effect shares the parity of y.
    opts.parity = obs.hard().parity() ? Parity::Odd : Parity::Even;
  }

  const auto scope = iota_scope(n);
  auto iterator = make_iterator(cfg.order, ReliabilityOrder::from_observation(obs, scope), opts);
  const BitWord hard_syndrome = code.syndrome(obs.hard());

  DecodeOutcome out;
  MassAccumulator mass;
  bool filled = false;
  bool exhausted = false;

  std::visit(
      [&](auto& it) {
        while (const ErrorPattern* z = it.next()) {
          ++out.queries;
          mass.add(z->log_prob);
          BitWord s = hard_syndrome;
          for (std::size_t p : z->flipped) s.xor_unchecked(code.check_column(p));
          if (!s.none()) continue;
          BitWord cw = obs.hard();
          for (std::size_t p : z->flipped) cw.flip_unchecked(p);
          out.list.push_back(ListEntry{cw, z->log_prob, 0.0});
          if (out.list.size() == cfg.lambda) {
            filled = true;
            break;
          }
        }
        exhausted = !filled && it.status() == IterStatus::Exhausted;
      },
      iterator);
  out.status = (filled || exhausted) ? DecodeStatus::Converged : DecodeStatus::BudgetExhausted;
  out.queried_mass = (exhausted && !opts.parity) ? 1.0 : std::min(mass.mass(), 1.0);

  // Once the whole codebook is listed no codeword can remain unidentified.
  const bool whole_codebook = k < 63 && out.list.size() == (std::size_t{1} << k);
  double missing = 0.0;
  if (exhausted || whole_codebook) {
    missing = 0.0;
  } else if (opts.parity) {
    // Remaining mass among noise effects of the admissible parity, each of
    // which lands on one of 2^k - 1 codewords out of 2^{n-1} - 1 candidates.
    double tanh_product = 1.0;
    for (double m : obs.magnitude()) tanh_product *= std::tanh(0.5 * m);
    const double admissible = 0.5 * (1.0 + (*opts.parity == Parity::Even ? tanh_product : -tanh_product));
    missing = std::max(0.0, admissible - out.queried_mass) * random_hit_ratio(n - 1, k);
  } else {
    missing = std::max(0.0, 1.0 - out.queried_mass) * random_hit_ratio(n, k);
  }
  finish_outcome(out, LogSumExp{}, safe_log(missing), obs);
  return out;
}

std::vector<double> bitwise_app_llr(std::span<const ListEntry> list, double not_in_list,
                                    const ChannelObservation& obs) {
  const std::size_t n = obs.size();
  std::vector<double> llr(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p0 = obs.prob_zero(i);
    double num = not_in_list * p0;
    double den = not_in_list * (1.0 - p0);
    for (const auto& e : list) {
      if (e.codeword.test_unchecked(i)) {
        den += e.posterior;
      } else {
        num += e.posterior;
      }
    }
    double v;
    if (den <= 0.0) {
      v = kLlrClip;
    } else if (num <= 0.0) {
      v = -kLlrClip;
    } else {
      v = std::clamp(std::log(num / den), -kLlrClip, kLlrClip);
    }
    llr[i] = v;
  }
  return llr;
}

std::vector<double> forney_block_so(std::span<const ListEntry> list) {
  LogSumExp total;
  for (const auto& e : list) total.add(e.logp);
  std::vector<double> post;
  post.reserve(list.size());
  for (const auto& e : list) post.push_back(std::exp(e.logp - total.value()));
  return post;
}

std::vector<double> pyndiah_bitwise_llr(std::span<const ListEntry> list, const ChannelObservation& obs,
                                        double beta) {
  if (list.empty()) throw BadDimensions("pyndiah_bitwise_llr: empty list");
  const std::size_t n = obs.size();
  // Index of the most likely entry regardless of list order.
  std::size_t top = 0;
  for (std::size_t j = 1; j < list.size(); ++j) {
    if (list[j].logp > list[top].logp) top = j;
  }
  std::vector<double> llr(n);
  for (std::size_t i = 0; i < n; ++i) {
    double best0 = kNegInf;
    double best1 = kNegInf;
    for (const auto& e : list) {
      double& slot = e.codeword.test_unchecked(i) ? best1 : best0;
      slot = std::max(slot, e.logp);
    }
    if (best0 > kNegInf && best1 > kNegInf) {
      llr[i] = best0 - best1;
    } else {
      const double sign = list[top].codeword.test_unchecked(i) ? -1.0 : 1.0;
      llr[i] = sign * beta * obs.magnitude()[i];
    }
  }
  return llr;
}

MapOracleResult exhaustive_map_oracle(const SystematicCode& code, const ChannelObservation& obs) {
  const std::size_t n = code.n();
  const std::size_t k = code.k();
  if (k > 16) throw ScaleExceeded("exhaustive_map_oracle: k = " + std::to_string(k) + " > 16");
  if (obs.size() != n) throw LengthMismatch("exhaustive_map_oracle: observation length != n");

  double keep_all = 0.0;
  for (double v : obs.keep_logp()) keep_all += v;

  const std::size_t count = std::size_t{1} << k;
  MapOracleResult res;
  res.codewords.reserve(count);
  res.logp.reserve(count);
  LogSumExp total;
  std::vector<LogSumExp> zero(n), one(n);
  BitWord info(k);
  for (std::size_t v = 0; v < count; ++v) {
    for (std::size_t j = 0; j < k; ++j) info.set_unchecked(j, (v >> j) & 1u);
    BitWord cw = code.encode(info);
    BitWord diff = cw;
    diff.xor_unchecked(obs.hard());
    double logp = keep_all;
    diff.for_each_set([&](std::size_t i) { logp -= obs.magnitude()[i]; });
    total.add(logp);
    for (std::size_t i = 0; i < n; ++i) (cw.test_unchecked(i) ? one[i] : zero[i]).add(logp);
    res.codewords.push_back(std::move(cw));
    res.logp.push_back(logp);
  }
  res.posterior.reserve(count);
  for (double lp : res.logp) res.posterior.push_back(std::exp(lp - total.value()));
  res.bit_llr.resize(n);
  for (std::size_t i = 0; i < n; ++i) res.bit_llr[i] = zero[i].value() - one[i].value();
  return res;
}

}  // namespace softguess
