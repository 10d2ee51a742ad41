#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "softguess/codes.hpp"
#include "softguess/decoders.hpp"
#include "softguess/turbo.hpp"

namespace softguess {

enum class BlockSoKind { GcdSo, GrandSo, GcdForney };
enum class BitSoKind { SoGcd, Pyndiah };

/// Worker count: `requested` when nonzero, else $SOFTGUESS_THREADS, else
/// the number of hardware threads.
std::size_t resolve_threads(std::size_t requested = 0);

struct CalibrationBin {
  double lo = 0.0;
  double hi = 0.0;
  double mean_predicted = 0.0;
  double empirical = 0.0;
  std::uint64_t count = 0;
  std::uint64_t events = 0;  // observations flagged as errors
};

struct CalibrationTable {
  std::vector<CalibrationBin> bins;
  std::uint64_t observations = 0;
  std::uint64_t trials = 0;
  std::uint64_t budget_exhausted = 0;
  double mean_queries = 0.0;
  double max_bookkeeping_error = 0.0;

  /// Bin whose [lo, hi) range contains `predicted`.
  const CalibrationBin* bin_containing(double predicted) const;
};

/// Bin edges: an underflow bin [0, lo) followed by `per_decade` logarithmic
/// bins per decade over [lo, 1].
std::vector<double> log_bin_edges(double lo = 1e-4, int per_decade = 3);
/// `count` equal-width bins over [0, 1].
std::vector<double> uniform_bin_edges(std::size_t count = 20);

/// Accumulates (predicted, event) pairs into fixed bins.
class CalibrationBinning {
 public:
  explicit CalibrationBinning(std::vector<double> edges);
  void add(double predicted, bool event);
  void merge(const CalibrationBinning& other);
  CalibrationTable table() const;
  std::size_t bin_index(double predicted) const;

 private:
  std::vector<double> edges_;
  std::vector<double> predicted_sum_;
  std::vector<std::uint64_t> count_;
  std::vector<std::uint64_t> events_;
};

struct TrialRecord {
  std::uint64_t trial_id = 0;
  bool true_in_list = false;
  bool top1_correct = false;
  double predicted_not_in_list = 1.0;
  std::uint64_t queries = 0;
  DecodeStatus status = DecodeStatus::Converged;
  double bookkeeping_error = 0.0;
  std::vector<double> predicted_one;  // per bit, 1 / (1 + e^{llr})
  std::vector<std::uint8_t> bit_is_one;
  std::vector<double> predicted_bit_error;  // per bit, 1 / (1 + e^{|llr|})
  std::vector<std::uint8_t> bit_error;
};

struct BlockTrialConfig {
  BlockSoKind kind = BlockSoKind::GcdSo;
  DecoderConfig decoder;
  double ebno_db = 3.0;
  bool keep_bits = false;
  BitSoKind bit_kind = BitSoKind::SoGcd;
  double pyndiah_beta = 0.5;
};

/// One Monte-Carlo trial: random info word, BPSK/AWGN, decode.
TrialRecord run_trial(const SystematicCode& code, const BlockTrialConfig& cfg, std::uint64_t seed,
                      std::uint64_t trial_id);

struct RunOptions {
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  std::size_t threads = 0;  // 0: resolve_threads()
};

/// Blockwise reliability table: predicted not-in-list mass (Forney: 1 - max
/// posterior) against whether the transmitted codeword was missed.
CalibrationTable run_block_calibration(const SystematicCode& code, BlockSoKind kind, std::size_t lambda,
                                       double ebno_db, const RunOptions& run,
                                       const DecoderConfig& base = {});

/// Bitwise reliability table on 20 uniform bins: predicted P(bit = 1) from
/// the soft output against the transmitted bit value.
CalibrationTable run_bit_calibration(const SystematicCode& code, BitSoKind kind, std::size_t lambda,
                                     double ebno_db, const RunOptions& run, double pyndiah_beta = 0.5,
                                     const DecoderConfig& base = {});

struct CurvePoint {
  double ebno_db = 0.0;
  double bler = 0.0;
  double ber = 0.0;
  double avg_queries = 0.0;
  std::uint64_t blocks = 0;
  std::uint64_t block_errors = 0;
  std::uint64_t bit_errors = 0;
  double bler_stderr = 0.0;
  bool low_confidence = true;  // fewer than 10 block errors
  double avg_iterations = 0.0;
  double max_bookkeeping_error = 0.0;
};

struct ProductBlockRecord {
  bool block_error = false;
  std::uint64_t bit_errors = 0;  // info bits
  std::uint64_t queries = 0;
  std::size_t iterations = 0;
  double bookkeeping_error = 0.0;
};

ProductBlockRecord run_product_block(const ProductCode& pc, const TurboConfig& cfg, double ebno_db,
                                     std::uint64_t seed, std::uint64_t block_id);

/// Per Eb/N0 point, simulates blocks in id order until `min_block_errors`
/// errors or `max_trials` blocks, whichever comes first.
std::vector<CurvePoint> run_product_curve(const ProductCode& pc, const TurboConfig& cfg,
                                          const std::vector<double>& ebno_db_list,
                                          std::uint64_t min_block_errors, std::uint64_t max_trials,
                                          std::uint64_t seed, std::size_t threads = 0);

struct OracleCheckReport {
  std::uint64_t trials = 0;
  std::uint64_t ml_converged = 0;
  std::uint64_t ml_mismatches = 0;         // ML-order GCD top != exhaustive argmax
  std::uint64_t full_list_checked = 0;
  std::uint64_t posterior_mismatches = 0;  // full-enumeration GCD vs exact posteriors
  std::uint64_t llr_mismatches = 0;
  std::uint64_t grand_mismatches = 0;      // ML GRAND top != ML GCD top (n <= 24 only)
  double max_posterior_error = 0.0;
  double max_llr_error = 0.0;
  double max_bookkeeping_error = 0.0;
  bool passed() const noexcept {
    return ml_mismatches == 0 && posterior_mismatches == 0 && llr_mismatches == 0 &&
           grand_mismatches == 0 && max_bookkeeping_error <= 1e-9;
  }
};

/// Exhaustive-oracle equivalence suite (k <= 16). Eb/N0 per trial is drawn
/// uniformly from [ebno_lo, ebno_hi].
OracleCheckReport run_oracle_check(const SystematicCode& code, std::uint64_t trials, std::uint64_t seed,
                                   double ebno_lo = 0.0, double ebno_hi = 6.0, std::size_t threads = 0);

/// Shortest round-trip decimal form.
std::string format_double(double v);

void write_calibration_csv(std::ostream& os, const CalibrationTable& table);
void write_curve_csv(std::ostream& os, const std::vector<CurvePoint>& points);

}  // namespace softguess
