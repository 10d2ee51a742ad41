#include "softguess/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <random>
#include <thread>

#include "softguess/errors.hpp"
#include "softguess/rng.hpp"

namespace softguess {

namespace {

constexpr std::uint64_t kChunkTrials = 512;

// Runs fn(chunk) for chunk in [0, chunks) on up to `threads` workers.
template <typename Fn>
void parallel_chunks(std::size_t chunks, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, chunks));
  if (threads == 1) {
    for (std::size_t c = 0; c < chunks; ++c) fn(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) fn(c);
    });
  }
  for (auto& th : pool) th.join();
}

BitWord random_word(std::size_t length, std::mt19937_64& gen) {
  BitWord w(length);
  for (std::size_t i = 0; i < length; ++i) w.set_unchecked(i, (gen() >> 63) != 0);
  return w;
}

double predicted_one(double llr) { return 1.0 / (1.0 + std::exp(llr)); }

}  // namespace

std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SOFTGUESS_THREADS")) {
    const std::string_view s(env);
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc{} && ptr == s.data() + s.size() && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// ---------------------------------------------------------------------------

std::vector<double> log_bin_edges(double lo, int per_decade) {
  if (!(lo > 0.0 && lo < 1.0) || per_decade < 1) throw BadDimensions("log_bin_edges: bad parameters");
  const int steps = static_cast<int>(std::lround(-std::log10(lo) * per_decade));
  std::vector<double> edges{0.0};
  for (int j = 0; j <= steps; ++j) {
    edges.push_back(j == steps ? 1.0 : lo * std::pow(10.0, static_cast<double>(j) / per_decade));
  }
  return edges;
}

std::vector<double> uniform_bin_edges(std::size_t count) {
  if (count == 0) throw BadDimensions("uniform_bin_edges: need at least one bin");
  std::vector<double> edges(count + 1);
  for (std::size_t j = 0; j <= count; ++j) edges[j] = static_cast<double>(j) / static_cast<double>(count);
  return edges;
}

CalibrationBinning::CalibrationBinning(std::vector<double> edges)
    : edges_(std::move(edges)),
      predicted_sum_(edges_.size() - 1, 0.0),
      count_(edges_.size() - 1, 0),
      events_(edges_.size() - 1, 0) {
  if (edges_.size() < 2) throw BadDimensions("CalibrationBinning: need at least two edges");
}

std::size_t CalibrationBinning::bin_index(double predicted) const {
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), predicted);
  const std::ptrdiff_t idx = (it - edges_.begin()) - 1;
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(count_.size()) - 1));
}

void CalibrationBinning::add(double predicted, bool event) {
  const std::size_t b = bin_index(predicted);
  predicted_sum_[b] += predicted;
  ++count_[b];
  events_[b] += event ? 1 : 0;
}

void CalibrationBinning::merge(const CalibrationBinning& other) {
  for (std::size_t b = 0; b < count_.size(); ++b) {
    predicted_sum_[b] += other.predicted_sum_[b];
    count_[b] += other.count_[b];
    events_[b] += other.events_[b];
  }
}

CalibrationTable CalibrationBinning::table() const {
  CalibrationTable t;
  for (std::size_t b = 0; b < count_.size(); ++b) {
    CalibrationBin bin;
    bin.lo = edges_[b];
    bin.hi = edges_[b + 1];
    bin.count = count_[b];
    bin.events = events_[b];
    if (bin.count > 0) {
      bin.mean_predicted = predicted_sum_[b] / static_cast<double>(bin.count);
      bin.empirical = static_cast<double>(bin.events) / static_cast<double>(bin.count);
    }
    t.observations += bin.count;
    t.bins.push_back(bin);
  }
  return t;
}

const CalibrationBin* CalibrationTable::bin_containing(double predicted) const {
  for (const auto& b : bins) {
    if (predicted >= b.lo && predicted < b.hi) return &b;
  }
  if (!bins.empty() && predicted >= bins.back().hi) return &bins.back();
  return nullptr;
}

// ---------------------------------------------------------------------------

TrialRecord run_trial(const SystematicCode& code, const BlockTrialConfig& cfg, std::uint64_t seed,
                      std::uint64_t trial_id) {
  std::mt19937_64 gen(trial_seed(seed, trial_id, 0));
  const BitWord info = random_word(code.k(), gen);
  const BitWord sent = code.encode(info);
  const ChannelObservation obs = bpsk_awgn_llr(sent, cfg.ebno_db, code.rate(), trial_seed(seed, trial_id, 1));

  const DecodeOutcome out = cfg.kind == BlockSoKind::GrandSo ? grand_so_decode(code, obs, cfg.decoder)
                                                             : gcd_so_decode(code, obs, cfg.decoder);
  TrialRecord rec;
  rec.trial_id = trial_id;
  rec.queries = out.queries;
  rec.status = out.status;
  rec.bookkeeping_error = out.bookkeeping_error();
  rec.true_in_list = std::any_of(out.list.begin(), out.list.end(),
                                 [&](const ListEntry& e) { return e.codeword == sent; });
  rec.top1_correct = !out.list.empty() && out.list.front().codeword == sent;
  if (cfg.kind == BlockSoKind::GcdForney) {
    const auto post = forney_block_so(out.list);
    rec.predicted_not_in_list = 1.0 - *std::max_element(post.begin(), post.end());
  } else {
    rec.predicted_not_in_list = out.not_in_list;
  }

  if (cfg.keep_bits) {
    std::vector<double> llr = out.app_llr;
    if (cfg.bit_kind == BitSoKind::Pyndiah && !out.list.empty()) {
      llr = pyndiah_bitwise_llr(out.list, obs, cfg.pyndiah_beta);
    }
    const std::size_t n = code.n();
    rec.predicted_one.resize(n);
    rec.bit_is_one.resize(n);
    rec.predicted_bit_error.resize(n);
    rec.bit_error.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const bool one = sent.test_unchecked(i);
      rec.predicted_one[i] = predicted_one(llr[i]);
      rec.bit_is_one[i] = one;
      rec.predicted_bit_error[i] = 1.0 / (1.0 + std::exp(std::fabs(llr[i])));
      rec.bit_error[i] = (llr[i] < 0.0) != one;
    }
  }
  return rec;
}

namespace {

struct ChunkSummary {
  CalibrationBinning binning;
  std::uint64_t trials = 0;
  std::uint64_t budget_exhausted = 0;
  std::uint64_t queries = 0;
  double max_bookkeeping_error = 0.0;
};

CalibrationTable run_calibration(const SystematicCode& code, const BlockTrialConfig& cfg,
                                 const RunOptions& run, const std::vector<double>& edges, bool bitwise) {
  if (run.trials == 0) throw BadDimensions("calibration needs at least one trial");
  const std::uint64_t chunks = (run.trials + kChunkTrials - 1) / kChunkTrials;
  std::vector<ChunkSummary> summaries(chunks, ChunkSummary{CalibrationBinning(edges)});
  parallel_chunks(chunks, resolve_threads(run.threads), [&](std::size_t c) {
    ChunkSummary& s = summaries[c];
    const std::uint64_t begin = c * kChunkTrials;
    const std::uint64_t end = std::min(run.trials, begin + kChunkTrials);
    for (std::uint64_t t = begin; t < end; ++t) {
      const TrialRecord rec = run_trial(code, cfg, run.seed, t);
      ++s.trials;
      s.queries += rec.queries;
      s.budget_exhausted += rec.status == DecodeStatus::BudgetExhausted ? 1 : 0;
      s.max_bookkeeping_error = std::max(s.max_bookkeeping_error, rec.bookkeeping_error);
      if (bitwise) {
        for (std::size_t i = 0; i < rec.predicted_one.size(); ++i) {
          s.binning.add(rec.predicted_one[i], rec.bit_is_one[i] != 0);
        }
      } else {
        const bool missed = cfg.kind == BlockSoKind::GcdForney ? !rec.top1_correct : !rec.true_in_list;
        s.binning.add(rec.predicted_not_in_list, missed);
      }
    }
  });

  CalibrationBinning total(edges);
  std::uint64_t trials = 0, exhausted = 0, queries = 0;
  double bookkeeping = 0.0;
  for (const auto& s : summaries) {
    total.merge(s.binning);
    trials += s.trials;
    exhausted += s.budget_exhausted;
    queries += s.queries;
    bookkeeping = std::max(bookkeeping, s.max_bookkeeping_error);
  }
  CalibrationTable table = total.table();
  table.trials = trials;
  table.budget_exhausted = exhausted;
  table.mean_queries = static_cast<double>(queries) / static_cast<double>(trials);
  table.max_bookkeeping_error = bookkeeping;
  return table;
}

}  // namespace

CalibrationTable run_block_calibration(const SystematicCode& code, BlockSoKind kind, std::size_t lambda,
                                       double ebno_db, const RunOptions& run, const DecoderConfig& base) {
  BlockTrialConfig cfg;
  cfg.kind = kind;
  cfg.decoder = base;
  cfg.decoder.lambda = lambda;
  cfg.ebno_db = ebno_db;
  return run_calibration(code, cfg, run, log_bin_edges(), false);
}

CalibrationTable run_bit_calibration(const SystematicCode& code, BitSoKind kind, std::size_t lambda,
                                     double ebno_db, const RunOptions& run, double pyndiah_beta,
                                     const DecoderConfig& base) {
  BlockTrialConfig cfg;
  cfg.kind = BlockSoKind::GcdSo;
  cfg.decoder = base;
  cfg.decoder.lambda = lambda;
  cfg.ebno_db = ebno_db;
  cfg.keep_bits = true;
  cfg.bit_kind = kind;
  cfg.pyndiah_beta = pyndiah_beta;
  return run_calibration(code, cfg, run, uniform_bin_edges(20), true);
}

// ---------------------------------------------------------------------------

ProductBlockRecord run_product_block(const ProductCode& pc, const TurboConfig& cfg, double ebno_db,
                                     std::uint64_t seed, std::uint64_t block_id) {
  std::mt19937_64 gen(trial_seed(seed, block_id, 0));
  std::vector<BitWord> info;
  info.reserve(pc.k());
  for (std::size_t a = 0; a < pc.k(); ++a) info.push_back(random_word(pc.k(), gen));
  const std::vector<BitWord> sent = pc.encode(info);

  const std::size_t n = pc.n();
  std::vector<std::uint8_t> bits(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) bits[r * n + c] = sent[r].test_unchecked(c);
  }
  const LlrGrid channel(n, awgn_llrs(bits, ebno_db, pc.rate(), trial_seed(seed, block_id, 1)));
  const TurboResult res = turbo_decode(pc, channel, cfg);

  ProductBlockRecord rec;
  rec.block_error = res.decision != sent;
  rec.queries = res.total_queries;
  rec.iterations = res.iterations_used;
  rec.bookkeeping_error = res.max_bookkeeping_error;
  const auto perm = pc.component().perm();
  for (std::size_t a = 0; a < pc.k(); ++a) {
    for (std::size_t b = 0; b < pc.k(); ++b) {
      const std::size_t r = perm[a], c = perm[b];
      rec.bit_errors += res.decision[r].test_unchecked(c) != sent[r].test_unchecked(c) ? 1 : 0;
    }
  }
  return rec;
}

std::vector<CurvePoint> run_product_curve(const ProductCode& pc, const TurboConfig& cfg,
                                          const std::vector<double>& ebno_db_list,
                                          std::uint64_t min_block_errors, std::uint64_t max_trials,
                                          std::uint64_t seed, std::size_t threads) {
  if (min_block_errors == 0) throw BadDimensions("run_product_curve: min_block_errors must be >= 1");
  if (max_trials == 0) throw BadDimensions("run_product_curve: max_trials must be >= 1");
  constexpr std::uint64_t kChunkBlocks = 16;
  const std::size_t workers = resolve_threads(threads);

  std::vector<CurvePoint> points;
  for (std::size_t p = 0; p < ebno_db_list.size(); ++p) {
    const double ebno = ebno_db_list[p];
    const std::uint64_t point_seed = splitmix64(seed + p);
    CurvePoint pt;
    pt.ebno_db = ebno;
    std::uint64_t queries = 0, iterations = 0;
    std::uint64_t next_block = 0;
    bool done = false;
    while (!done) {
      // One wave of chunks; results are consumed strictly in block order.
      const std::uint64_t wave_blocks = std::min<std::uint64_t>(max_trials - next_block, kChunkBlocks * workers * 2);
      std::vector<ProductBlockRecord> recs(wave_blocks);
      const std::size_t chunks = static_cast<std::size_t>((wave_blocks + kChunkBlocks - 1) / kChunkBlocks);
      parallel_chunks(chunks, workers, [&](std::size_t c) {
        const std::uint64_t begin = c * kChunkBlocks;
        const std::uint64_t end = std::min(wave_blocks, begin + kChunkBlocks);
        for (std::uint64_t b = begin; b < end; ++b) {
          recs[b] = run_product_block(pc, cfg, ebno, point_seed, next_block + b);
        }
      });
      for (const auto& rec : recs) {
        ++pt.blocks;
        pt.block_errors += rec.block_error ? 1 : 0;
        pt.bit_errors += rec.bit_errors;
        queries += rec.queries;
        iterations += rec.iterations;
        pt.max_bookkeeping_error = std::max(pt.max_bookkeeping_error, rec.bookkeeping_error);
        if (pt.block_errors >= min_block_errors || pt.blocks >= max_trials) {
          done = true;
          break;
        }
      }
      next_block += wave_blocks;
    }
    const double blocks = static_cast<double>(pt.blocks);
    pt.bler = static_cast<double>(pt.block_errors) / blocks;
    pt.ber = static_cast<double>(pt.bit_errors) / (static_cast<double>(pc.dimension()) * blocks);
    pt.avg_queries = static_cast<double>(queries) / blocks;
    pt.avg_iterations = static_cast<double>(iterations) / blocks;
    pt.bler_stderr = std::sqrt(pt.bler * (1.0 - pt.bler) / blocks);
    pt.low_confidence = pt.block_errors < 10;
    points.push_back(pt);
  }
  return points;
}

// ---------------------------------------------------------------------------

OracleCheckReport run_oracle_check(const SystematicCode& code, std::uint64_t trials, std::uint64_t seed,
                                   double ebno_lo, double ebno_hi, std::size_t threads) {
  if (code.k() > 16) throw ScaleExceeded("run_oracle_check: k > 16");
  const std::size_t n = code.n();
  const std::size_t codebook = std::size_t{1} << code.k();
  const bool full_list = codebook <= 4096;
  const bool grand = n <= MlPatternIterator::kMaxPositions;

  const std::uint64_t chunks = (trials + kChunkTrials - 1) / kChunkTrials;
  std::vector<OracleCheckReport> parts(chunks);
  parallel_chunks(chunks, resolve_threads(threads), [&](std::size_t c) {
    OracleCheckReport& rep = parts[c];
    const std::uint64_t begin = c * kChunkTrials;
    const std::uint64_t end = std::min(trials, begin + kChunkTrials);
    for (std::uint64_t t = begin; t < end; ++t) {
      std::mt19937_64 gen(trial_seed(seed, t, 0));
      const double ebno = std::uniform_real_distribution<double>(ebno_lo, ebno_hi)(gen);
      const BitWord sent = code.encode(random_word(code.k(), gen));
      const ChannelObservation obs = bpsk_awgn_llr(sent, ebno, code.rate(), trial_seed(seed, t, 1));
      const MapOracleResult oracle = exhaustive_map_oracle(code, obs);
      const std::size_t argmax = static_cast<std::size_t>(
          std::max_element(oracle.logp.begin(), oracle.logp.end()) - oracle.logp.begin());
      ++rep.trials;

      DecoderConfig ml{1, kDefaultMaxQueries, false, QueryOrder::Ml};
      const DecodeOutcome gcd_ml = gcd_so_decode(code, obs, ml);
      rep.max_bookkeeping_error = std::max(rep.max_bookkeeping_error, gcd_ml.bookkeeping_error());
      if (gcd_ml.status == DecodeStatus::Converged) {
        ++rep.ml_converged;
        if (gcd_ml.list.front().codeword != oracle.codewords[argmax]) ++rep.ml_mismatches;
      }
      if (grand) {
        const DecodeOutcome grand_ml = grand_so_decode(code, obs, ml);
        rep.max_bookkeeping_error = std::max(rep.max_bookkeeping_error, grand_ml.bookkeeping_error());
        if (grand_ml.list.empty() || grand_ml.list.front().codeword != gcd_ml.list.front().codeword) {
          ++rep.grand_mismatches;
        }
      }
      if (full_list) {
        DecoderConfig all{codebook, kDefaultMaxQueries, false, QueryOrder::Orb};
        const DecodeOutcome full = gcd_so_decode(code, obs, all);
        rep.max_bookkeeping_error = std::max(rep.max_bookkeeping_error, full.bookkeeping_error());
        ++rep.full_list_checked;
        double post_err = full.list.size() == codebook ? 0.0 : 1.0;
        for (const auto& e : full.list) {
          const BitWord info = code.extract_info(e.codeword);
          std::size_t idx = 0;
          for (std::size_t j = 0; j < code.k(); ++j) idx |= static_cast<std::size_t>(info.test_unchecked(j)) << j;
          post_err = std::max(post_err, std::fabs(e.posterior - oracle.posterior[idx]));
        }
        double llr_err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double exact = std::clamp(oracle.bit_llr[i], -kLlrClip, kLlrClip);
          llr_err = std::max(llr_err, std::fabs(full.app_llr[i] - exact));
        }
        rep.max_posterior_error = std::max(rep.max_posterior_error, post_err);
        rep.max_llr_error = std::max(rep.max_llr_error, llr_err);
        if (post_err > 1e-6) ++rep.posterior_mismatches;
        if (llr_err > 1e-6) ++rep.llr_mismatches;
      }
    }
  });

  OracleCheckReport total;
  for (const auto& p : parts) {
    total.trials += p.trials;
    total.ml_converged += p.ml_converged;
    total.ml_mismatches += p.ml_mismatches;
    total.full_list_checked += p.full_list_checked;
    total.posterior_mismatches += p.posterior_mismatches;
    total.llr_mismatches += p.llr_mismatches;
    total.grand_mismatches += p.grand_mismatches;
    total.max_posterior_error = std::max(total.max_posterior_error, p.max_posterior_error);
    total.max_llr_error = std::max(total.max_llr_error, p.max_llr_error);
    total.max_bookkeeping_error = std::max(total.max_bookkeeping_error, p.max_bookkeeping_error);
  }
  return total;
}

// ---------------------------------------------------------------------------

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

void write_calibration_csv(std::ostream& os, const CalibrationTable& table) {
  os << "bin_lo,bin_hi,mean_predicted,empirical,count\n";
  for (const auto& b : table.bins) {
    os << format_double(b.lo) << ',' << format_double(b.hi) << ',' << format_double(b.mean_predicted) << ','
       << format_double(b.empirical) << ',' << b.count << '\n';
  }
}

void write_curve_csv(std::ostream& os, const std::vector<CurvePoint>& points) {
  os << "ebno_db,bler,ber,avg_queries,blocks,block_errors,bler_stderr,low_confidence\n";
  for (const auto& p : points) {
    os << format_double(p.ebno_db) << ',' << format_double(p.bler) << ',' << format_double(p.ber) << ','
       << format_double(p.avg_queries) << ',' << p.blocks << ',' << p.block_errors << ','
       << format_double(p.bler_stderr) << ',' << (p.low_confidence ? 1 : 0) << '\n';
  }
}

}  // namespace softguess
