#include "softguess/codes.hpp"

#include <charconv>
#include <random>
#include <string>
#include <utility>

#include "softguess/errors.hpp"

namespace softguess {

SystematicCode make_rlc(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k == 0 || k >= n || n > 128) {
    throw BadDimensions("make_rlc: need 0 < k < n <= 128, got n=" + std::to_string(n) +
                        " k=" + std::to_string(k));
  }
  // mt19937_64 output is fully specified by the standard, so P is portable.
  std::mt19937_64 gen(seed);
  BitMatrix parity(k, n - k);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < n - k; ++c) parity.set(r, c, (gen() >> 63) != 0);
  }
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  return SystematicCode(std::move(parity), std::move(perm));
}

namespace {

struct EbchParams {
  std::size_t n;
  std::size_t k;
  std::uint32_t generator;  // bit i = coefficient of x^i
};

// Primitive polynomials generating the single-error-correcting cyclic codes.
constexpr EbchParams kEbchTable[] = {
    {8, 4, 0b1011},           // x^3 + x + 1
    {16, 11, 0b10011},        // x^4 + x + 1
    {32, 26, 0b100101},       // x^5 + x^2 + 1
    {64, 57, 0b1000011},      // x^6 + x + 1
};

}  // namespace

SystematicCode make_ebch(std::size_t n, std::size_t k) {
  const EbchParams* params = nullptr;
  for (const auto& p : kEbchTable) {
    if (p.n == n && p.k == k) params = &p;
  }
  if (params == nullptr) {
    throw UnsupportedCode("make_ebch: unsupported (n,k)=(" + std::to_string(n) + "," +
                          std::to_string(k) + ")");
  }
  const std::size_t cyclic_len = n - 1;
  const std::size_t degree = cyclic_len - k;
  std::vector<BitWord> rows;
  rows.reserve(k);
  for (std::size_t shift = 0; shift < k; ++shift) {
    BitWord row(n);
    for (std::size_t d = 0; d <= degree; ++d) {
      if ((params->generator >> d) & 1u) row.set(shift + d, true);
    }
    // Overall even-parity bit in the last position.
    row.set(n - 1, row.parity());
    rows.push_back(row);
  }
  return to_systematic(BitMatrix::from_rows(std::move(rows)));
}

SystematicCode make_code(const CodeSpec& spec) {
  switch (spec.family) {
    case CodeFamily::Rlc:
      return make_rlc(spec.n, spec.k, spec.seed);
    case CodeFamily::Ebch:
      return make_ebch(spec.n, spec.k);
    case CodeFamily::ExtHamming:
      if (spec.n != 8 || spec.k != 4) throw UnsupportedCode("extended Hamming is (8,4) only");
      return make_ebch(8, 4);
  }
  throw UnsupportedCode("make_code: unknown family");
}

ProductCode::ProductCode(SystematicCode component) : component_(std::move(component)) {}

std::vector<BitWord> ProductCode::encode(const std::vector<BitWord>& info) const {
  const std::size_t n = this->n();
  const std::size_t k = this->k();
  if (info.size() != k) throw LengthMismatch("ProductCode::encode: need k info rows");

  std::vector<BitWord> row_codewords;
  row_codewords.reserve(k);
  for (const auto& r : info) row_codewords.push_back(component_.encode(r));

  std::vector<BitWord> array(n, BitWord(n));
  BitWord column_info(k);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t a = 0; a < k; ++a) column_info.set_unchecked(a, row_codewords[a].test_unchecked(c));
    const BitWord column = component_.encode(column_info);
    for (std::size_t r = 0; r < n; ++r) array[r].set_unchecked(c, column.test_unchecked(r));
  }
  return array;
}

std::vector<BitWord> ProductCode::encode_columns_first(const std::vector<BitWord>& info) const {
  const std::size_t n = this->n();
  const std::size_t k = this->k();
  if (info.size() != k) throw LengthMismatch("ProductCode::encode_columns_first: need k info rows");
  const auto perm = component_.perm();

  // columns[perm[b]] holds the encoded info column b.
  std::vector<BitWord> columns(n, BitWord(n));
  BitWord column_info(k);
  for (std::size_t b = 0; b < k; ++b) {
    for (std::size_t a = 0; a < k; ++a) column_info.set_unchecked(a, info[a].get(b));
    columns[perm[b]] = component_.encode(column_info);
  }
  std::vector<BitWord> array;
  array.reserve(n);
  BitWord row_info(k);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t b = 0; b < k; ++b) row_info.set_unchecked(b, columns[perm[b]].test_unchecked(r));
    array.push_back(component_.encode(row_info));
  }
  return array;
}

bool ProductCode::is_valid(const std::vector<BitWord>& array) const {
  const std::size_t n = this->n();
  if (array.size() != n) return false;
  for (const auto& row : array) {
    if (row.size() != n || !component_.is_codeword(row)) return false;
  }
  BitWord column(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = 0; r < n; ++r) column.set_unchecked(r, array[r].test_unchecked(c));
    if (!component_.is_codeword(column)) return false;
  }
  return true;
}

std::vector<BitWord> ProductCode::extract_info(const std::vector<BitWord>& array) const {
  if (array.size() != n()) throw LengthMismatch("ProductCode::extract_info: need n rows");
  const auto perm = component_.perm();
  std::vector<BitWord> info(k(), BitWord(k()));
  for (std::size_t a = 0; a < k(); ++a) {
    for (std::size_t b = 0; b < k(); ++b) info[a].set_unchecked(b, array[perm[a]].get(perm[b]));
  }
  return info;
}

ProductCode make_product(SystematicCode component) { return ProductCode(std::move(component)); }

namespace {

bool parse_size(std::string_view s, std::size_t& out) {
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

bool parse_u64(std::string_view s, std::uint64_t& out) {
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

std::vector<std::string_view> split_dash(std::string_view s) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find('-', start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::optional<CodeSpec> parse_block_id(std::string_view id) {
  const auto parts = split_dash(id);
  CodeSpec spec;
  if (parts.size() == 3 && (parts[0] == "ebch" || parts[0] == "ehamming")) {
    spec.family = parts[0] == "ebch" ? CodeFamily::Ebch : CodeFamily::ExtHamming;
    if (!parse_size(parts[1], spec.n) || !parse_size(parts[2], spec.k)) return std::nullopt;
    return spec;
  }
  if (parts.size() == 4 && parts[0] == "rlc") {
    spec.family = CodeFamily::Rlc;
    std::string_view n = parts[1], k = parts[2], s = parts[3];
    if (n.starts_with('n')) n.remove_prefix(1);
    if (k.starts_with('k')) k.remove_prefix(1);
    if (!s.starts_with('s')) return std::nullopt;
    s.remove_prefix(1);
    if (!parse_size(n, spec.n) || !parse_size(k, spec.k) || !parse_u64(s, spec.seed)) return std::nullopt;
    return spec;
  }
  return std::nullopt;
}

}  // namespace

std::optional<RegisteredCode> lookup_code(std::string_view id) {
  RegisteredCode out;
  out.id = std::string(id);
  std::string_view block_id = id;
  const bool product = id.starts_with("product-");
  if (product) block_id.remove_prefix(std::string_view("product-").size());
  const auto spec = parse_block_id(block_id);
  if (!spec) return std::nullopt;
  try {
    auto code = std::make_shared<const SystematicCode>(make_code(*spec));
    if (product) out.product = std::make_shared<const ProductCode>(*code);
    out.code = std::move(code);
  } catch (const Error&) {
    return std::nullopt;
  }
  return out;
}

std::vector<std::string> registry_ids() {
  return {"ehamming-8-4",         "ebch-8-4",           "ebch-16-11",         "ebch-32-26",
          "ebch-64-57",           "rlc-16-11-s1",       "rlc-32-26-s7",       "rlc-64-57-s7",
          "product-ebch-16-11",   "product-ebch-32-26", "product-ebch-64-57"};
}

}  // namespace softguess
