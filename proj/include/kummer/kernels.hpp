#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kummer/exact_sequence.hpp"

/// Brute-force verification passes over finite groups, in 64-bit Smith coordinates.
/// Every pass has a serial reference and an OpenMP version with identical results.
namespace kummer::kernels {

enum class Mode { serial, parallel };

// Elements are indexed in mixed radix over the Smith moduli (first coordinate fastest).
class FiniteCoords {
 public:
  // UnsupportedError for infinite groups or more than `limit` elements.
  explicit FiniteCoords(const FgAbGroup& g, std::uint64_t limit = std::uint64_t{1} << 26);

  std::uint64_t size() const { return size_; }
  const std::vector<std::int64_t>& moduli() const { return moduli_; }
  void decode(std::uint64_t index, std::int64_t* coords) const;
  std::uint64_t encode(const std::int64_t* coords) const;
  std::int64_t order(const std::int64_t* coords) const;
  GroupElement element(const FgAbGroup& g, std::uint64_t index) const;

 private:
  std::vector<std::int64_t> moduli_;
  std::uint64_t size_ = 1;
};

// h in Smith coordinates of source and target.
class DenseHom {
 public:
  explicit DenseHom(const Homomorphism& h);
  const FiniteCoords& source() const { return src_; }
  const FiniteCoords& target() const { return dst_; }
  std::uint64_t apply(std::uint64_t index) const;

 private:
  FiniteCoords src_, dst_;
  std::vector<std::int64_t> m_;  // row-major, target rows x source cols
};

struct Scan {
  std::uint64_t checked = 0;
  std::uint64_t defects = 0;
  std::optional<std::uint64_t> first_defect;  // smallest defective index
};

// Defect: c in C with no b, g(b) = c, of the same order.
Scan elementwise_purity(const ShortExactSequence& seq, Mode mode);
// Defect: c in C with g(s(c)) != c.
Scan section_check(const ShortExactSequence& seq, const Homomorphism& s, Mode mode);
// Defect: b in f(A) and in nB but not in n f(A), indexed in B.
Scan subgroup_criterion(const ShortExactSequence& seq, std::int64_t n, Mode mode);
// Membership flags of nG, indexed as in FiniteCoords(g).
std::vector<std::uint8_t> divisible_by(const FgAbGroup& g, std::int64_t n, Mode mode);

// Sets the OpenMP thread count; 0 keeps the runtime default.
void set_threads(int n);
int max_threads();

}  // namespace kummer::kernels
