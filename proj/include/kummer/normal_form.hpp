#pragma once

#include <optional>
#include <vector>

#include "kummer/int_matrix.hpp"

namespace kummer {

/// U * source * V = S with U, V unimodular and S diagonal, d_1 | d_2 | ... | d_rank > 0
/// followed by zeros. U_inverse is tracked alongside U so callers can move between
/// presentation coordinates and Smith coordinates without a second inversion.
struct SmithDecomposition {
  IntMatrix U;
  IntMatrix U_inverse;
  IntMatrix S;
  IntMatrix V;
  IntMatrix source;
  std::size_t rank = 0;

  std::vector<Integer> diagonal() const;
};

// Pivot: smallest nonzero |entry| of the active block, scanning column by column
// (leftmost, then topmost). Deterministic for a fixed input.
SmithDecomposition smith_normal_form(const IntMatrix& m);

/// Column-style Hermite form H = A * W (W unimodular). Nonzero columns come first, in
/// echelon shape: column t has its pivot at pivot_rows[t] (strictly increasing), the
/// pivot is positive, entries above it are zero and entries to its left in the pivot
/// row lie in [0, pivot).
struct HermiteForm {
  IntMatrix H;
  IntMatrix W;
  std::vector<std::size_t> pivot_rows;

  std::size_t rank() const { return pivot_rows.size(); }

  // Unique representative of v + colspan(A).
  IntVector reduce(IntVector v) const;
  // As reduce(), also returning coefficients c with v - H*c = reduced.
  IntVector reduce(IntVector v, IntVector& coeffs) const;
  bool contains(const IntVector& v) const;
  // Columns of W spanning {x : A x = 0}.
  IntMatrix kernel_basis() const;
  // Nonzero columns of H: a basis of colspan(A).
  IntMatrix lattice_basis() const;
};

HermiteForm column_hermite_form(const IntMatrix& a);

// Basis (as columns) of the integer kernel of a.
IntMatrix integer_kernel(const IntMatrix& a);

/// Finds x with a*x ≡ b modulo colspan(modulus). The returned solution is reduced modulo
/// the lattice of homogeneous solutions, so it is canonical for the input.
/// Throws InputError on dimension mismatch.
std::optional<IntVector> solve_integer_system(const IntMatrix& a, const IntVector& b,
                                              const IntMatrix& modulus);

}  // namespace kummer
