#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kummer/exact_sequence.hpp"

namespace kummer {

/// One level 0 -> A_k -f-> B_k -g-> C_k -> 0, unvalidated.
struct TowerLevel {
  Homomorphism f;
  Homomorphism g;
};

/// Maps from level k to level k+1 (Kummer towers) or from level k+1 to level k (co-towers).
struct TowerStep {
  Homomorphism alpha;
  Homomorphism beta;
  Homomorphism gamma;
};

/// S_1..S_n with maps S_k -> S_{k+1}. C_k plays the role of C[p^k]; the ambient C is C_n,
/// and gamma_k must identify C_k with C_{k+1}[p^k].
struct KummerTower {
  Integer p;
  std::vector<TowerLevel> levels;
  std::vector<TowerStep> maps;  // maps[k] : level k -> level k+1 (0-based)

  std::size_t n() const { return levels.size(); }
  ShortExactSequence top() const;
  ShortExactSequence sequence(std::size_t level) const;  // 1-based
};

/// S_1..S_n with S_k = 0 -> A/p^k -> B_k -> C_k -> 0 and maps S_{k+1} -> S_k whose left
/// component is the canonical surjection.
struct CoKummerTower {
  Integer p;
  std::vector<TowerLevel> levels;
  std::vector<TowerStep> maps;  // maps[k] : level k+1 -> level k (0-based)

  std::size_t n() const { return levels.size(); }
  ShortExactSequence top() const;
};

struct TowerViolation {
  std::size_t level = 0;  // 1-based; for square checks the lower level of the step
  std::string check;      // shape, exact, torsion, square-left, square-right, inclusion, surjection
  std::string detail;
  std::optional<GroupElement> witness;
};

struct TowerReport {
  std::vector<TowerViolation> violations;
  bool valid() const { return violations.empty(); }
  std::string summary() const;
};

TowerReport validate_tower(const KummerTower& t);
TowerReport validate_tower(const CoKummerTower& t);

// Same-order lifts of the cyclic generators of C_n (from pruefer_decompose), built by lifting
// in S_k and pushing through the betas. Throws ValidationError on an invalid tower.
PurityWitnessSet tower_purity(const KummerTower& t);
Section tower_split(const KummerTower& t);

/// sigma acting on Z(p^inf)^r through M, with F = sigma-invariants.
struct SigmaModel {
  Integer p;
  std::size_t r = 0;
  IntMatrix M;
  IntMatrix D;                        // M - I
  SmithDecomposition smith;           // of D
  std::vector<unsigned long> e;       // v_p of the nonzero elementary divisors, in Smith order
  std::size_t s = 0;                  // corank of D

  // Throws InputError if M is not square or p divides det M.
  static SigmaModel make(const Integer& p, const IntMatrix& M);
};

KummerTower sigma_kummer_tower(const SigmaModel& model, std::size_t n);

CoKummerTower dualize_tower(const KummerTower& t);
KummerTower dualize_tower(const CoKummerTower& t);

// Section of the top sequence via the dual tower and the evaluation isomorphisms.
Section dual_tower_split(const CoKummerTower& t);

/// One prime's share of an m-torsion sequence: iota_b embeds the tower's B_n into B and
/// pi_c projects C onto the tower's C_n.
struct CrtComponent {
  KummerTower tower;
  Homomorphism iota_b;
  Homomorphism pi_c;
};

struct CrtAssembly {
  ShortExactSequence sequence;
  std::vector<CrtComponent> components;
};

// Direct sum of the towers' top sequences together with the canonical glue.
CrtAssembly assemble_crt(const std::vector<KummerTower>& towers);

// s = sum_p iota_b o s_p o pi_c. Throws InputError naming the prime whose glue fails.
Section crt_split(const Integer& m, const ShortExactSequence& seq, const std::vector<CrtComponent>& components);

}  // namespace kummer
