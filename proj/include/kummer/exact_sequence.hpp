#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kummer/abelian_group.hpp"

namespace kummer {

/// Outcome of checking 0 -> A -f-> B -g-> C -> 0. `failure` names the first failed
/// condition ("mono", "epi", "complex" or "middle") and `witnesses` holds offending
/// subgroup generators: kernel generators of f for "mono", generators of C outside the
/// image of g for "epi", generators of A with g(f(a)) != 0 for "complex", and kernel
/// generators of g outside the image of f for "middle".
struct ExactnessReport {
  bool injective = false;
  bool surjective = false;
  bool complex = false;
  bool middle_exact = false;
  std::string failure;
  std::vector<GroupElement> witnesses;

  bool exact() const { return injective && surjective && complex && middle_exact; }
};

/// A validated short exact sequence 0 -> A -> B -> C -> 0.
class ShortExactSequence {
 public:
  // Throws InputError for non-composable maps and ValidationError when not exact.
  ShortExactSequence(Homomorphism f, Homomorphism g);

  const Homomorphism& f() const { return f_; }
  const Homomorphism& g() const { return g_; }
  const FgAbGroup& a() const { return f_.source(); }
  const FgAbGroup& b() const { return f_.target(); }
  const FgAbGroup& c() const { return g_.target(); }

 private:
  Homomorphism f_;
  Homomorphism g_;
};

ExactnessReport exactness_report(const Homomorphism& f, const Homomorphism& g);

struct ExactnessCheck {
  ExactnessReport report;
  std::optional<ShortExactSequence> sequence;
};
// Throws InputError only when the maps cannot be composed.
ExactnessCheck check_exact(const Homomorphism& f, const Homomorphism& g);

/// s : C -> B with g ∘ s = id_C, checked at construction.
class Section {
 public:
  Section(const ShortExactSequence& seq, Homomorphism s);
  const Homomorphism& map() const { return s_; }

 private:
  Homomorphism s_;
};

class PurityViolation : public std::runtime_error {
 public:
  explicit PurityViolation(GroupElement c);
  const GroupElement& element() const { return c_; }

 private:
  GroupElement c_;
};

struct PurityWitnessSet {
  std::vector<std::pair<GroupElement, GroupElement>> witnesses;  // (c, b) with g(b) = c, same order
  std::string scope;
};

struct PurityCheck {
  Integer n;
  bool equal = false;                   // nA == A ∩ nB
  std::optional<GroupElement> witness;  // element of A ∩ nB outside nA
};

struct PurityReport {
  bool pure = false;
  bool exhaustive = false;  // every n | exp(B) was tested
  std::string scope;
  std::vector<PurityCheck> checks;
  std::optional<GroupElement> unliftable;  // c in C with no same-order lift
};

// For bounded B tests n | exp(B); otherwise `moduli` must be supplied (UnsupportedError if not).
PurityReport is_pure(const ShortExactSequence& seq, const std::optional<std::vector<Integer>>& moduli = std::nullopt);

// b with g(b) = c and order(b) = order(c); throws PurityViolation when no such lift exists.
GroupElement pure_witness(const ShortExactSequence& seq, const GroupElement& c);

struct PrueferDecomposition {
  std::vector<Integer> orders;
  FgAbGroup cyclic_sum;  // ⊕ Z/orders[i]
  Homomorphism iso;      // cyclic_sum -> G
  Homomorphism inverse;  // G -> cyclic_sum
};
// Invariant-factor decomposition; `primary` refines each factor into prime powers.
PrueferDecomposition pruefer_decompose(const FgAbGroup& g, bool primary = false);

std::optional<Section> section_exists(const ShortExactSequence& seq);

/// Section assembled from one same-order lift per cyclic summand of C:
/// s = [lifts] ∘ decomposition.inverse.
Section section_from_lifts(const ShortExactSequence& seq, const PrueferDecomposition& decomposition,
                           const std::vector<GroupElement>& lifts);
Section section_from_purity(const ShortExactSequence& seq);

/// Section solving g X = id and X R_C = 0 together with X S_C = S_B X for each supplied
/// pair (S_C, S_B) of endomorphism matrices. Returns nullopt when the system has no solution.
std::optional<Section> section_with_commuting(const ShortExactSequence& seq,
                                              const std::vector<std::pair<IntMatrix, IntMatrix>>& commuting);

Homomorphism retraction_from_section(const ShortExactSequence& seq, const Section& s);
Section section_from_retraction(const ShortExactSequence& seq, const Homomorphism& r);

// Hom(G, Q/Z) for finite G, presented on the invariant factors of G.
FgAbGroup pontryagin_dual(const FgAbGroup& g);
// Precomposition with h: dual(target) -> dual(source).
Homomorphism pontryagin_dual(const Homomorphism& h);
// Value in [0, 1) of the character `chi` (an element of pontryagin_dual(g)) at x.
mpq_class character_value(const FgAbGroup& g, const GroupElement& chi, const GroupElement& x);
// Evaluation map G -> dual(dual(G)).
Homomorphism double_dual(const FgAbGroup& g);

ShortExactSequence dualize_sequence(const ShortExactSequence& seq);

// Largest r with (Z/m)^r embedded in G. Finite G, m >= 2.
std::size_t rank_m(const FgAbGroup& g, const Integer& m);

}  // namespace kummer
