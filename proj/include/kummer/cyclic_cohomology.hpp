#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kummer/exact_sequence.hpp"

namespace kummer {

/// Module over Z[G] for G cyclic of order d, generated by sigma acting through S.
class CyclicGroupModule {
 public:
  // Throws InputError unless S is an endomorphism of its source with S^d = id.
  CyclicGroupModule(std::size_t d, Homomorphism S);

  static CyclicGroupModule trivial(std::size_t d, const FgAbGroup& m);
  // Z[G] (n = 0) or (Z/n)[G], basis 1, sigma, ..., sigma^{d-1}.
  static CyclicGroupModule regular(std::size_t d, const Integer& n = 0);

  std::size_t d() const { return d_; }
  const FgAbGroup& group() const { return S_.source(); }
  const Homomorphism& sigma() const { return S_; }

  Homomorphism sigma_power(std::size_t i) const;
  Homomorphism norm() const;             // sum of sigma^i, i < d
  Homomorphism sigma_minus_one() const;  // sigma - 1

  // M / nM with the induced action, and the projection.
  CyclicGroupModule quotient(const Integer& n) const;
  Homomorphism quotient_map(const Integer& n) const;

 private:
  std::size_t d_;
  Homomorphism S_;
};

/// Equivariant homomorphism between modules over the same cyclic group.
class GModuleMap {
 public:
  // Throws InputError when h does not commute with the actions.
  GModuleMap(CyclicGroupModule source, CyclicGroupModule target, Homomorphism h);

  const CyclicGroupModule& source() const { return source_; }
  const CyclicGroupModule& target() const { return target_; }
  const Homomorphism& map() const { return h_; }

 private:
  CyclicGroupModule source_;
  CyclicGroupModule target_;
  Homomorphism h_;
};

/// ker(a) / im(b) for composable a, b with a o b = 0.
struct Subquotient {
  FgAbGroup group;
  Homomorphism inclusion;   // K -> ambient, K = ker(a)
  Homomorphism projection;  // K -> group

  GroupElement class_of(const GroupElement& x) const;  // x in ker(a)
  GroupElement lift(const GroupElement& h) const;      // representative in the ambient group
};
Subquotient subquotient(const Homomorphism& a, const Homomorphism& b);

struct TateGroups {
  Subquotient H_minus1;  // ker N / (sigma - 1) M
  Subquotient H_0;       // M^G / N M
  Subquotient H_1;       // crossed homomorphisms G -> M modulo principal ones, in C^1 = M^d
  Subquotient H_2;       // M^G / N M, via cup product with the generator of H^2(G, Z)
  Homomorphism periodicity_1;  // H_1 -> H_minus1, f -> f(sigma)
  Homomorphism periodicity_2;  // H_2 -> H_0

  bool all_zero() const;
};

TateGroups tate_cohomology(const CyclicGroupModule& m);
bool is_cohomologically_trivial(const CyclicGroupModule& m);

/// 0 -> A -> B -> C -> 0 of G-modules.
class GModuleSequence {
 public:
  // Throws InputError unless f, g compose and the underlying sequence is exact.
  GModuleSequence(GModuleMap f, GModuleMap g);

  const GModuleMap& f() const { return f_; }
  const GModuleMap& g() const { return g_; }
  ShortExactSequence underlying() const { return ShortExactSequence(f_.map(), g_.map()); }

 private:
  GModuleMap f_;
  GModuleMap g_;
};

// Equivariant section s : C -> B, or nullopt. UnsupportedError unless p kills B.
std::optional<GModuleMap> equivariant_section_exists(const GModuleSequence& seq, const Integer& p);

// 0 -> <G.gens> -> M -> M / <G.gens> -> 0 with the restricted and induced actions.
GModuleSequence submodule_sequence(const CyclicGroupModule& m, const std::vector<GroupElement>& gens);

// 0 -> I_G -> F_p[G] -> F_p -> 0 for G = Z/p, augmentation on the right.
GModuleSequence augmentation_sequence(const Integer& p);

/// X = Z[G] + Z (N/p) inside Q[G], G = Z/p, basis 1, sigma, ..., sigma^{p-2}, N/p.
CyclicGroupModule tate_model(const Integer& p);

// 0 -> H^1(G, M) -> H^1(G, M/p) -> H^2(G, M) -> 0 for |G| = p and M[p] = 0.
ShortExactSequence les_multiplication_by_p(const CyclicGroupModule& m, const Integer& p);

struct ChrisStep {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct ChrisReport {
  Integer p;
  bool inside_hypothesis = true;  // p odd
  std::vector<Integer> h1_model, h2_model, h1_quotient, hminus1_quotient, norm_kernel;
  std::vector<ChrisStep> steps;
  std::string inference;

  bool valid() const;
};

ChrisReport chris_verify(const Integer& p);

}  // namespace kummer
