#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "softguess/gf2.hpp"

namespace softguess {

enum class CodeFamily { Rlc, Ebch, ExtHamming };

struct CodeSpec {
  CodeFamily family = CodeFamily::Ebch;
  std::size_t n = 0;
  std::size_t k = 0;
  std::uint64_t seed = 0;  // RLC only
};

/// Systematic random linear code: G = [I_k | P] with P i.i.d. uniform bits
/// drawn from a generator seeded by `seed`. Pure function of (n, k, seed).
SystematicCode make_rlc(std::size_t n, std::size_t k, std::uint64_t seed);

/// Extended single-error-correcting BCH code (cyclic code of length n-1 plus
/// an overall even-parity bit). Supported (n,k): (8,4), (16,11), (32,26), (64,57).
SystematicCode make_ebch(std::size_t n, std::size_t k);

SystematicCode make_code(const CodeSpec& spec);

/// Square product of a component code with itself.
///
/// Code arrays are n x n, stored as n row words. Info bit (a, b) of the
/// k x k info block sits at array position (perm[a], perm[b]).
class ProductCode {
 public:
  explicit ProductCode(SystematicCode component);

  const SystematicCode& component() const noexcept { return component_; }
  std::size_t n() const noexcept { return component_.n(); }
  std::size_t k() const noexcept { return component_.k(); }
  std::size_t length() const noexcept { return n() * n(); }
  std::size_t dimension() const noexcept { return k() * k(); }
  double rate() const noexcept {
    return static_cast<double>(dimension()) / static_cast<double>(length());
  }

  /// k info rows (each length k) -> n code rows (each length n). Rows first, then columns.
  std::vector<BitWord> encode(const std::vector<BitWord>& info) const;
  /// Same code array, encoding columns first and rows second.
  std::vector<BitWord> encode_columns_first(const std::vector<BitWord>& info) const;
  /// Every row and every column has zero syndrome.
  bool is_valid(const std::vector<BitWord>& array) const;
  /// Reads the k x k info block back out of a code array.
  std::vector<BitWord> extract_info(const std::vector<BitWord>& array) const;

 private:
  SystematicCode component_;
};

ProductCode make_product(SystematicCode component);

/// A code addressable by string id in the registry.
struct RegisteredCode {
  std::string id;
  std::shared_ptr<const SystematicCode> code;            // set for block codes
  std::shared_ptr<const ProductCode> product;            // set for product codes
  bool is_product() const noexcept { return product != nullptr; }
};

/// Ids accepted by `lookup_code`: `ebch-N-K`, `ehamming-8-4`, `rlc-N-K-sS`,
/// `rlc-nN-kK-sS`, and `product-<component id>`.
std::optional<RegisteredCode> lookup_code(std::string_view id);

/// Canonical ids listed by `codes list`.
std::vector<std::string> registry_ids();

}  // namespace softguess
