#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "softguess/codes.hpp"
#include "softguess/decoders.hpp"
#include "softguess/errors.hpp"
#include "softguess/harness.hpp"
#include "softguess/soft_metrics.hpp"
#include "softguess/turbo.hpp"

#ifndef SOFTGUESS_GIT_DESCRIBE
#define SOFTGUESS_GIT_DESCRIBE "unknown"
#endif

namespace softguess::cli {
namespace {

using nlohmann::json;

// Thrown for input problems found after CLI11 parsing succeeded.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

RegisteredCode require_code(const std::string& id, bool want_product) {
  auto code = lookup_code(id);
  if (!code) {
    std::string msg = "unknown code id '" + id + "'; run `softguess codes list` for valid ids";
    throw UsageError(msg);
  }
  if (want_product && !code->is_product()) {
    throw UsageError("code '" + id + "' is not a product code; use a product-... id");
  }
  if (!want_product && code->is_product()) {
    throw UsageError("code '" + id + "' is a product code; this command needs a component code");
  }
  return *code;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw UsageError("cannot open '" + path + "' for writing");
  return os;
}

void write_manifest(const std::string& out_path, json manifest) {
  manifest["version"] = SOFTGUESS_GIT_DESCRIBE;
  std::ofstream os = open_output(out_path + ".manifest.json");
  os << manifest.dump(2) << '\n';
}

std::vector<double> read_llr_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot read LLR file '" + path + "'");
  std::vector<double> llr;
  std::string token;
  while (is >> token) {
    if (token.front() == ',') token.erase(0, 1);
    if (!token.empty() && token.back() == ',') token.pop_back();
    if (token.empty()) continue;
    try {
      std::size_t used = 0;
      llr.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw UsageError("LLR file '" + path + "': '" + token + "' is not a number");
    }
  }
  return llr;
}

const char* status_name(DecodeStatus s) {
  return s == DecodeStatus::Converged ? "converged" : "budget_exhausted";
}

struct CommonRun {
  std::string code_id;
  std::uint64_t seed = 1;
  std::uint64_t trials = 1000;
  std::size_t threads = 0;
  std::string out;
};

void add_common(CLI::App* cmd, CommonRun& c, std::uint64_t default_trials) {
  c.trials = default_trials;
  cmd->add_option("--code", c.code_id, "Code id")->required();
  cmd->add_option("--seed", c.seed, "Run seed")->capture_default_str();
  cmd->add_option("--trials", c.trials, "Monte-Carlo trials")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--threads", c.threads, "Worker threads (0: $SOFTGUESS_THREADS or all cores)");
  cmd->add_option("--out", c.out, "CSV output path; a .manifest.json is written alongside")->required();
}

json table_summary(const CalibrationTable& t) {
  return {{"observations", t.observations},
          {"trials", t.trials},
          {"budget_exhausted", t.budget_exhausted},
          {"mean_queries", t.mean_queries},
          {"max_bookkeeping_error", t.max_bookkeeping_error}};
}

int cmd_codes_list(std::ostream& out) {
  out << "id,kind,n,k,rate\n";
  for (const auto& id : registry_ids()) {
    const auto code = lookup_code(id);
    if (code->is_product()) {
      const auto& p = *code->product;
      out << id << ",product," << p.length() << ',' << p.dimension() << ',' << format_double(p.rate()) << '\n';
    } else {
      const auto& c = *code->code;
      out << id << ",block," << c.n() << ',' << c.k() << ',' << format_double(c.rate()) << '\n';
    }
  }
  return kExitOk;
}

struct DecodeOneArgs {
  std::string code_id;
  std::string llr_path;
  std::string decoder = "gcd";
  std::size_t lambda = 1;
  std::string order = "orb";
  std::uint64_t max_queries = kDefaultMaxQueries;
  bool parity_skip = false;
  std::string out;
};

int cmd_decode_one(const DecodeOneArgs& a, std::ostream& out) {
  const RegisteredCode rc = require_code(a.code_id, false);
  const SystematicCode& code = *rc.code;
  std::vector<double> llr = read_llr_file(a.llr_path);
  if (llr.size() != code.n()) {
    throw UsageError("LLR file holds " + std::to_string(llr.size()) + " values but " + a.code_id + " needs " +
                     std::to_string(code.n()));
  }
  const ChannelObservation obs(std::move(llr));
  DecoderConfig cfg;
  cfg.lambda = a.lambda;
  cfg.max_queries = a.max_queries;
  cfg.parity_skip = a.parity_skip;
  cfg.order = a.order == "ml" ? QueryOrder::Ml : QueryOrder::Orb;
  const DecodeOutcome res =
      a.decoder == "grand" ? grand_so_decode(code, obs, cfg) : gcd_so_decode(code, obs, cfg);

  json list = json::array();
  for (const auto& e : res.list) {
    list.push_back({{"codeword", e.codeword.to_string()}, {"logp", e.logp}, {"posterior", e.posterior}});
  }
  const json doc = {{"code", a.code_id},
                    {"decoder", a.decoder},
                    {"order", a.order},
                    {"lambda", a.lambda},
                    {"status", status_name(res.status)},
                    {"queries", res.queries},
                    {"queried_mass", res.queried_mass},
                    {"not_in_list", res.not_in_list},
                    {"list", list},
                    {"app_llr", res.app_llr}};
  out << doc.dump(2) << '\n';

  if (!a.out.empty()) {
    std::ofstream os = open_output(a.out);
    os << "rank,codeword,logp,posterior\n";
    for (std::size_t i = 0; i < res.list.size(); ++i) {
      const auto& e = res.list[i];
      os << i << ',' << e.codeword.to_string() << ',' << format_double(e.logp) << ','
         << format_double(e.posterior) << '\n';
    }
    write_manifest(a.out, {{"command", "decode-one"},
                           {"code_id", a.code_id},
                           {"decoder", a.decoder},
                           {"order", a.order},
                           {"lambda", a.lambda},
                           {"llr_file", a.llr_path}});
  }
  return kExitOk;
}

struct CalibrateArgs {
  CommonRun run;
  std::string kind;
  std::size_t lambda = 1;
  double ebno_db = 3.0;
  double beta = 0.5;
};

int cmd_calibrate_block(const CalibrateArgs& a, std::ostream& out) {
  const RegisteredCode rc = require_code(a.run.code_id, false);
  const BlockSoKind kind = a.kind == "grand"    ? BlockSoKind::GrandSo
                           : a.kind == "forney" ? BlockSoKind::GcdForney
                                                : BlockSoKind::GcdSo;
  const CalibrationTable t = run_block_calibration(*rc.code, kind, a.lambda, a.ebno_db,
                                                   {a.run.trials, a.run.seed, a.run.threads});
  {
    std::ofstream os = open_output(a.run.out);
    write_calibration_csv(os, t);
  }
  json manifest = {{"command", "calibrate-block"}, {"seed", a.run.seed},     {"code_id", a.run.code_id},
                   {"decoder", a.kind},            {"lambda", a.lambda},     {"ebno_db", a.ebno_db},
                   {"trials", a.run.trials},       {"summary", table_summary(t)}};
  write_manifest(a.run.out, manifest);
  out << "wrote " << a.run.out << " (" << t.trials << " trials, mean queries " << format_double(t.mean_queries)
      << ")\n";
  return kExitOk;
}

int cmd_calibrate_bit(const CalibrateArgs& a, std::ostream& out) {
  const RegisteredCode rc = require_code(a.run.code_id, false);
  const BitSoKind kind = a.kind == "pyndiah" ? BitSoKind::Pyndiah : BitSoKind::SoGcd;
  const CalibrationTable t = run_bit_calibration(*rc.code, kind, a.lambda, a.ebno_db,
                                                 {a.run.trials, a.run.seed, a.run.threads}, a.beta);
  {
    std::ofstream os = open_output(a.run.out);
    write_calibration_csv(os, t);
  }
  json manifest = {{"command", "calibrate-bit"}, {"seed", a.run.seed},     {"code_id", a.run.code_id},
                   {"decoder", a.kind},          {"lambda", a.lambda},     {"ebno_db", a.ebno_db},
                   {"trials", a.run.trials},     {"summary", table_summary(t)}};
  if (kind == BitSoKind::Pyndiah) manifest["beta"] = a.beta;
  write_manifest(a.run.out, manifest);
  out << "wrote " << a.run.out << " (" << t.observations << " bits)\n";
  return kExitOk;
}

struct ProductArgs {
  std::string code_id;
  std::vector<double> ebno;
  std::uint64_t min_errors = 100;
  std::uint64_t max_trials = 100000;
  double alpha = 0.5;
  std::size_t max_iters = 16;
  std::size_t lambda = 4;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  std::string out;
};

int cmd_product_curve(const ProductArgs& a, std::ostream& out) {
  const RegisteredCode rc = require_code(a.code_id, true);
  TurboConfig cfg;
  cfg.alpha = a.alpha;
  cfg.max_iters = a.max_iters;
  cfg.component.lambda = a.lambda;
  const auto points = run_product_curve(*rc.product, cfg, a.ebno, a.min_errors, a.max_trials, a.seed, a.threads);
  {
    std::ofstream os = open_output(a.out);
    write_curve_csv(os, points);
  }
  write_manifest(a.out, {{"command", "product-curve"},
                         {"seed", a.seed},
                         {"code_id", a.code_id},
                         {"decoder", "turbo-gcd-so"},
                         {"lambda", a.lambda},
                         {"alpha", a.alpha},
                         {"max_iters", a.max_iters},
                         {"ebno_db", a.ebno},
                         {"min_block_errors", a.min_errors},
                         {"trials", a.max_trials}});
  write_curve_csv(out, points);
  return kExitOk;
}

struct OracleArgs {
  std::string code_id;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  std::string out;
};

int cmd_oracle_check(const OracleArgs& a, std::ostream& out) {
  const RegisteredCode rc = require_code(a.code_id, false);
  if (rc.code->k() > 16) throw UsageError("oracle-check enumerates 2^k codewords and needs k <= 16");
  const OracleCheckReport r = run_oracle_check(*rc.code, a.trials, a.seed, 0.0, 6.0, a.threads);
  const json doc = {{"code", a.code_id},
                    {"trials", r.trials},
                    {"ml_converged", r.ml_converged},
                    {"ml_mismatches", r.ml_mismatches},
                    {"grand_mismatches", r.grand_mismatches},
                    {"full_list_checked", r.full_list_checked},
                    {"posterior_mismatches", r.posterior_mismatches},
                    {"llr_mismatches", r.llr_mismatches},
                    {"max_posterior_error", r.max_posterior_error},
                    {"max_llr_error", r.max_llr_error},
                    {"max_bookkeeping_error", r.max_bookkeeping_error},
                    {"passed", r.passed()}};
  out << doc.dump(2) << '\n';
  if (!a.out.empty()) {
    std::ofstream os = open_output(a.out);
    os << "trials,ml_converged,ml_mismatches,grand_mismatches,full_list_checked,posterior_mismatches,"
          "llr_mismatches,max_posterior_error,max_llr_error,max_bookkeeping_error,passed\n"
       << r.trials << ',' << r.ml_converged << ',' << r.ml_mismatches << ',' << r.grand_mismatches << ','
       << r.full_list_checked << ',' << r.posterior_mismatches << ',' << r.llr_mismatches << ','
       << format_double(r.max_posterior_error) << ',' << format_double(r.max_llr_error) << ','
       << format_double(r.max_bookkeeping_error) << ',' << (r.passed() ? 1 : 0) << '\n';
    write_manifest(a.out, {{"command", "oracle-check"},
                           {"seed", a.seed},
                           {"code_id", a.code_id},
                           {"decoder", "gcd+grand"},
                           {"trials", a.trials}});
  }
  return r.passed() ? kExitOk : kExitOracleFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Soft-output guessing decoders: calibration and product-code experiments", "softguess"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(SOFTGUESS_GIT_DESCRIBE));

  auto* codes = app.add_subcommand("codes", "Code registry");
  auto* codes_list = codes->add_subcommand("list", "Print every registered code id");
  codes->require_subcommand(1);

  DecodeOneArgs d1;
  auto* decode_one = app.add_subcommand("decode-one", "Decode one LLR frame and print the outcome as JSON");
  decode_one->add_option("--code", d1.code_id, "Component code id")->required();
  decode_one->add_option("--llr", d1.llr_path, "File of n whitespace-separated LLRs")->required();
  decode_one->add_option("--decoder", d1.decoder)->check(CLI::IsMember({"gcd", "grand"}))->capture_default_str();
  decode_one->add_option("--lambda", d1.lambda)->check(CLI::PositiveNumber)->capture_default_str();
  decode_one->add_option("--order", d1.order)->check(CLI::IsMember({"orb", "ml"}))->capture_default_str();
  decode_one->add_option("--max-queries", d1.max_queries)->check(CLI::PositiveNumber)->capture_default_str();
  decode_one->add_flag("--parity-skip", d1.parity_skip, "GRAND only: skip odd-parity patterns");
  decode_one->add_option("--out", d1.out, "Optional CSV of the list");

  CalibrateArgs cb;
  cb.kind = "gcd";
  auto* cal_block = app.add_subcommand("calibrate-block", "Blockwise reliability table");
  add_common(cal_block, cb.run, 1000);
  cal_block->add_option("--decoder", cb.kind)->check(CLI::IsMember({"gcd", "grand", "forney"}))->capture_default_str();
  cal_block->add_option("--lambda", cb.lambda)->check(CLI::PositiveNumber)->capture_default_str();
  cal_block->add_option("--ebno", cb.ebno_db, "Eb/N0 in dB")->capture_default_str();

  CalibrateArgs cbit;
  cbit.kind = "sogcd";
  cbit.lambda = 4;
  auto* cal_bit = app.add_subcommand("calibrate-bit", "Bitwise reliability table");
  add_common(cal_bit, cbit.run, 1000);
  cal_bit->add_option("--so", cbit.kind)->check(CLI::IsMember({"sogcd", "pyndiah"}))->capture_default_str();
  cal_bit->add_option("--lambda", cbit.lambda)->check(CLI::PositiveNumber)->capture_default_str();
  cal_bit->add_option("--ebno", cbit.ebno_db, "Eb/N0 in dB")->capture_default_str();
  cal_bit->add_option("--beta", cbit.beta, "Pyndiah fallback weight")->capture_default_str();

  ProductArgs pa;
  auto* product = app.add_subcommand("product-curve", "BLER/BER/query curve of turbo product decoding");
  product->add_option("--code", pa.code_id, "Product code id")->required();
  product->add_option("--ebno", pa.ebno, "Eb/N0 points in dB")->required()->delimiter(',');
  product->add_option("--min-errors", pa.min_errors)->check(CLI::PositiveNumber)->capture_default_str();
  product->add_option("--max-trials", pa.max_trials)->check(CLI::PositiveNumber)->capture_default_str();
  product->add_option("--alpha", pa.alpha)->check(CLI::NonNegativeNumber)->capture_default_str();
  product->add_option("--max-iters", pa.max_iters)->check(CLI::PositiveNumber)->capture_default_str();
  product->add_option("--lambda", pa.lambda)->check(CLI::PositiveNumber)->capture_default_str();
  product->add_option("--seed", pa.seed)->capture_default_str();
  product->add_option("--threads", pa.threads);
  product->add_option("--out", pa.out, "CSV output path")->required();

  OracleArgs oa;
  auto* oracle = app.add_subcommand("oracle-check", "Compare decoders against exhaustive MAP decoding");
  oracle->add_option("--code", oa.code_id, "Component code id with k <= 16")->required();
  oracle->add_option("--trials", oa.trials)->check(CLI::PositiveNumber)->capture_default_str();
  oracle->add_option("--seed", oa.seed)->capture_default_str();
  oracle->add_option("--threads", oa.threads);
  oracle->add_option("--out", oa.out, "Optional CSV summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (codes_list->parsed()) return cmd_codes_list(out);
    if (decode_one->parsed()) return cmd_decode_one(d1, out);
    if (cal_block->parsed()) return cmd_calibrate_block(cb, out);
    if (cal_bit->parsed()) return cmd_calibrate_bit(cbit, out);
    if (product->parsed()) return cmd_product_curve(pa, out);
    if (oracle->parsed()) return cmd_oracle_check(oa, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const softguess::Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("softguess");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace softguess::cli
