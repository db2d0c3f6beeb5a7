#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "kummer/kummer_tower.hpp"

namespace kummer {

/// A tower S_1, S_2, ... produced on demand. Levels and steps are memoized; safe to query
/// from several threads.
class ColimitTower {
 public:
  enum class Family { counterexample, user };
  using LevelFn = std::function<TowerLevel(std::size_t)>;
  // step(k, S_k, S_{k+1}) : S_k -> S_{k+1}
  using StepFn = std::function<TowerStep(std::size_t, const TowerLevel&, const TowerLevel&)>;

  ColimitTower(Integer p, Family family, std::string tag, LevelFn level, StepFn step);
  // Lazy wrapper around a fixed generator of Kummer-shaped levels.
  static ColimitTower user(Integer p, std::string tag, LevelFn level, StepFn step);

  const Integer& p() const { return p_; }
  Family family() const { return family_; }
  const std::string& tag() const { return tag_; }

  TowerLevel level(std::size_t k) const;  // 1-based
  TowerStep step(std::size_t k) const;    // level k -> level k+1
  KummerTower prefix(std::size_t n) const;

 private:
  struct Cache {
    std::mutex mutex;
    std::map<std::size_t, TowerLevel> levels;
    std::map<std::size_t, TowerStep> steps;
  };
  Integer p_;
  Family family_;
  std::string tag_;
  LevelFn level_fn_;
  StepFn step_fn_;
  std::shared_ptr<Cache> cache_;
};

/// B_n = prod_{k<=n} Z/p^k, C_n = Z/p^n, g_n(x) = sum p^{n-k} x_k, A_n = ker g_n,
/// psi_n appends a zero, eta_n multiplies by p.
ColimitTower counterexample_tower(const Integer& p);

// For the counterexample family: exactness per level, eta o g = g o psi and f o phi = psi o f
// for every step up to level n.
TowerReport check_family_contract(const ColimitTower& t, std::size_t n);

// Explicit section of S_n: e_n for the counterexample family, tower_split otherwise.
Section level_section(const ColimitTower& t, std::size_t n);

enum class Column { A, B, C };

struct ColimitElement {
  Column column;
  std::size_t level;  // 1-based
  GroupElement value;
};

GroupElement push_forward(const ColimitTower& t, const ColimitElement& e, std::size_t to_level);
// Representative at the smallest level from which the element is reached.
ColimitElement canonicalize(const ColimitTower& t, const ColimitElement& e);
Integer colimit_order(const ColimitTower& t, const ColimitElement& e);

struct Height {
  unsigned long value = 0;
  bool at_least = false;  // value == depth and the search was cut off
  std::string to_string() const;
  bool operator==(const Height& o) const { return value == o.value && at_least == o.at_least; }
};

// Largest h <= depth with push(e) divisible by p^h at level e.level + depth.
Height colimit_height_probe(const ColimitTower& t, const ColimitElement& e, unsigned long depth);
// Closed forms for the counterexample family on B and C, the probe otherwise.
Height colimit_height(const ColimitTower& t, const ColimitElement& e, unsigned long depth);

struct NoSectionCertificate {
  Integer p;
  std::size_t depth = 0;
  std::vector<bool> divisible;                 // c = (level 1, 1) is p^h-divisible, h = 1..depth
  std::size_t heights_checked = 0;             // B elements whose closed-form height was probed
  bool heights_match = false;
  std::vector<bool> level_sections;            // g_n has a section, n = 1..depth
  std::vector<bool> compatibility_unsolvable;  // no section of g_{n+1} restricts through psi_n
  std::string inference;

  bool valid() const;
};

// Throws UnsupportedError for a family other than the counterexample.
NoSectionCertificate limit_no_section_certificate(const ColimitTower& t, std::size_t depth);

// Whether some u in B_{n+1}, v in B_n satisfy g_{n+1}(u) = 1 and p u = psi_n(v).
bool compatibility_solvable(const ColimitTower& t, std::size_t n);

// Same-order preimage in B of an element of C, lifted at the level of its order.
ColimitElement limit_purity_witness(const ColimitTower& t, const ColimitElement& c);

/// lim A_k = D + M with D = Z(p^inf)^d and M finite. theta(k, L) maps A_k into
/// (Z/p^L)^d + M, where Z/p^L stands for Z(p^inf)[p^L] via 1 -> 1/p^L.
struct DivisibleDecomposition {
  std::size_t divisible_rank = 0;
  FgAbGroup bounded;
  std::function<Homomorphism(std::size_t, std::size_t)> theta;
};

// (Z/p^L)^d + M with the presentation theta must use.
FgAbGroup decomposition_target(const Integer& p, std::size_t d, const FgAbGroup& m, std::size_t precision);

struct DirectLimitHypothesis {
  int which = 2;      // 1 or 2
  std::size_t n = 1;  // case 2: stabilization level; case 1: C-level to certify
  std::optional<DivisibleDecomposition> decomposition;
  std::optional<std::size_t> precision;  // case 1, default n + v_p(exp M) + 2
};

struct DirectLimitSplit {
  int which = 2;
  std::size_t n = 0;
  std::size_t level = 0;  // s : C_n -> B_level
  std::size_t precision = 0;
  Homomorphism section;
  std::vector<Homomorphism> retractions;  // case 1: r_k : B_k -> (Z/p^L)^d + M
  std::vector<std::string> checks;
};

// Input error when the hypothesis evidence fails.
DirectLimitSplit direct_limit_split(const ColimitTower& t, const DirectLimitHypothesis& h);

// Fixtures.
ColimitTower stabilizing_tower(const Integer& p);  // C[p^k] = Z/p^{min(k,2)}
ColimitTower divisible_kernel_tower(const Integer& p);  // A_k = Z/p^k, C[p^k] = Z/p
DivisibleDecomposition divisible_kernel_decomposition(const Integer& p);

}  // namespace kummer
