#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kummer/int_matrix.hpp"
#include "kummer/normal_form.hpp"

namespace kummer {

class GroupElement;

/// Z^g modulo the column span of an integer relation matrix (g rows, one column per
/// relator). Smith and Hermite data are computed once at construction, so a group value
/// is immutable and cheap to copy and share across threads.
class FgAbGroup {
 public:
  FgAbGroup();  // trivial group, no generators
  FgAbGroup(std::size_t generators, IntMatrix relations);

  static FgAbGroup cyclic(const Integer& n);  // Z/n, or Z when n == 0
  static FgAbGroup free(std::size_t rank);
  // Z^k / diag(orders); a zero order gives a free summand.
  static FgAbGroup from_orders(const std::vector<Integer>& orders);
  static FgAbGroup from_orders(std::initializer_list<long> orders);

  std::size_t generator_count() const;
  const IntMatrix& relations() const;
  const SmithDecomposition& smith() const;
  const HermiteForm& hermite() const;

  // Invariant factors d_i > 1 with d_i | d_{i+1}; the free part is reported separately.
  const std::vector<Integer>& invariant_factors() const;
  std::size_t free_rank() const;
  bool is_finite() const { return free_rank() == 0; }
  bool is_trivial() const { return invariant_factors().empty() && free_rank() == 0; }
  // Throws UnsupportedError for infinite groups.
  Integer order() const;
  // Largest invariant factor; 0 when the group is infinite, 1 when trivial.
  Integer exponent() const;

  // Smith coordinates: the group is ⊕ Z/m_i with m_i = smith_moduli()[i] (0 for Z).
  const std::vector<Integer>& smith_moduli() const;
  // k x g matrix taking presentation coordinates to Smith coordinates.
  const IntMatrix& to_smith_matrix() const;
  // g x k matrix taking Smith coordinates back to presentation coordinates.
  const IntMatrix& from_smith_matrix() const;
  IntVector to_smith(const IntVector& x) const;  // reduced into [0, m_i)
  IntVector from_smith(const IntVector& y) const;

  IntVector canonical(IntVector coords) const;
  GroupElement element(IntVector coords) const;
  GroupElement zero() const;
  GroupElement generator(std::size_t i) const;
  // All elements in Smith-coordinate lexicographic order. Finite groups only.
  std::vector<GroupElement> elements() const;

  bool same_presentation(const FgAbGroup& other) const;
  std::string describe() const;  // e.g. "Z/2 + Z/4 + Z"

 private:
  struct Data;
  std::shared_ptr<const Data> d_;
};

/// An element in canonical (Hermite-reduced) coordinates; equality is coordinate equality.
class GroupElement {
 public:
  GroupElement(FgAbGroup parent, IntVector canonical_coords);

  const FgAbGroup& parent() const { return parent_; }
  const IntVector& coords() const { return coords_; }
  bool is_zero() const { return kummer::is_zero(coords_); }

  // Least n > 0 with n x = 0, or nullopt when x has infinite order.
  std::optional<Integer> order() const;

  GroupElement operator+(const GroupElement& o) const;
  GroupElement operator-(const GroupElement& o) const;
  GroupElement operator-() const;
  friend GroupElement operator*(const Integer& n, const GroupElement& x);
  bool operator==(const GroupElement& o) const;
  bool operator!=(const GroupElement& o) const { return !(*this == o); }
  std::string to_string() const;

 private:
  FgAbGroup parent_;
  IntVector coords_;
};

std::optional<Integer> element_order(const GroupElement& x);

/// Integer matrix on presentation generators. Construction checks that every relator of
/// the source maps into the relation lattice of the target.
class Homomorphism {
 public:
  Homomorphism(FgAbGroup source, FgAbGroup target, IntMatrix matrix);

  static Homomorphism identity(const FgAbGroup& g);
  static Homomorphism zero(const FgAbGroup& source, const FgAbGroup& target);
  static Homomorphism multiplication(const FgAbGroup& g, const Integer& n);

  const FgAbGroup& source() const { return source_; }
  const FgAbGroup& target() const { return target_; }
  const IntMatrix& matrix() const { return matrix_; }

  GroupElement operator()(const GroupElement& x) const;
  GroupElement apply(const IntVector& coords) const;

  // Same source/target presentations and equal generator images.
  bool operator==(const Homomorphism& o) const;
  bool is_zero() const;
  bool is_injective() const;
  bool is_surjective() const;
  bool is_isomorphism() const { return is_injective() && is_surjective(); }

  // Matrix of the map in Smith coordinates of source and target, rows reduced.
  IntMatrix smith_matrix() const;

 private:
  FgAbGroup source_;
  FgAbGroup target_;
  IntMatrix matrix_;
};

// after ∘ before. Throws InputError unless before.target() and after.source() match.
Homomorphism compose(const Homomorphism& after, const Homomorphism& before);
Homomorphism operator+(const Homomorphism& a, const Homomorphism& b);
Homomorphism operator-(const Homomorphism& a, const Homomorphism& b);
Homomorphism operator*(const Integer& n, const Homomorphism& h);

// Inverse of an isomorphism; throws InputError when h is not bijective.
Homomorphism inverse(const Homomorphism& h);

// Solve h(x) = y; nullopt when y is not in the image.
std::optional<GroupElement> preimage(const Homomorphism& h, const GroupElement& y);

/// Subgroup of an ambient group, given by generators (columns in ambient coordinates).
class Subgroup {
 public:
  Subgroup(FgAbGroup ambient, IntMatrix generators);
  static Subgroup image_of(const Homomorphism& h);

  const FgAbGroup& ambient() const { return ambient_; }
  const IntMatrix& generators() const { return generators_; }

  bool contains(const GroupElement& x) const;
  bool contains(const Subgroup& other) const;
  // Returns a generator of `other` outside this subgroup, if any.
  std::optional<GroupElement> first_outside(const Subgroup& other) const;
  bool operator==(const Subgroup& other) const { return contains(other) && other.contains(*this); }
  Subgroup intersect(const Subgroup& other) const;
  Subgroup scaled(const Integer& n) const;  // n * H
  // The subgroup as an abstract group together with its inclusion.
  Homomorphism inclusion() const;

 private:
  FgAbGroup ambient_;
  IntMatrix generators_;
  HermiteForm span_;  // hermite form of [generators | relations]
};

struct SubgroupMap {
  FgAbGroup group;
  Homomorphism map;  // inclusion into, or projection onto, the group of interest
};

// Presentation with one generator per nontrivial Smith coordinate.
struct Simplification {
  FgAbGroup group;
  Homomorphism to_original;
  Homomorphism from_original;
};
Simplification simplify(const FgAbGroup& g);

SubgroupMap kernel(const Homomorphism& h);
SubgroupMap image(const Homomorphism& h);
SubgroupMap cokernel(const Homomorphism& h);

struct DirectSum {
  FgAbGroup group;
  Homomorphism inject_first, inject_second;
  Homomorphism project_first, project_second;
};
DirectSum direct_sum(const FgAbGroup& a, const FgAbGroup& b);
// h1 ⊕ h2 : A1 ⊕ A2 -> B1 ⊕ B2, using the block presentations of direct_sum().
Homomorphism direct_sum(const Homomorphism& h1, const Homomorphism& h2);

// Elements of p-power order, with inclusion. Finite groups only.
SubgroupMap primary_component(const FgAbGroup& g, const Integer& p);
// G[n] = kernel of multiplication by n, with inclusion.
SubgroupMap torsion_subgroup(const FgAbGroup& g, const Integer& n);

}  // namespace kummer
