#include "kummer/normal_form.hpp"

#include <algorithm>

#include "kummer/errors.hpp"

namespace kummer {
namespace {

Integer tdiv(const Integer& a, const Integer& b) {
  Integer q;
  mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

bool divides(const Integer& d, const Integer& x) {
  return mpz_divisible_p(x.get_mpz_t(), d.get_mpz_t()) != 0;
}

// Row and column operations applied to S and mirrored on U, U^{-1} and V.
struct SmithWork {
  IntMatrix S, U, Uinv, V;

  void swap_rows(std::size_t a, std::size_t b) {
    S.swap_rows(a, b);
    U.swap_rows(a, b);
    Uinv.swap_cols(a, b);
  }
  void swap_cols(std::size_t a, std::size_t b) {
    S.swap_cols(a, b);
    V.swap_cols(a, b);
  }
  void add_row(std::size_t dst, std::size_t src, const Integer& c) {
    S.add_row_multiple(dst, src, c);
    U.add_row_multiple(dst, src, c);
    Uinv.add_col_multiple(src, dst, -c);
  }
  void add_col(std::size_t dst, std::size_t src, const Integer& c) {
    S.add_col_multiple(dst, src, c);
    V.add_col_multiple(dst, src, c);
  }
  void negate_row(std::size_t i) {
    S.negate_row(i);
    U.negate_row(i);
    Uinv.negate_col(i);
  }
};

}  // namespace

std::vector<Integer> SmithDecomposition::diagonal() const {
  std::vector<Integer> d;
  const std::size_t n = std::min(S.rows(), S.cols());
  for (std::size_t i = 0; i < n; ++i) d.push_back(S(i, i));
  return d;
}

SmithDecomposition smith_normal_form(const IntMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  SmithWork w{m, IntMatrix::identity(rows), IntMatrix::identity(rows), IntMatrix::identity(cols)};
  auto& S = w.S;
  std::size_t t = 0;
  for (; t < std::min(rows, cols); ++t) {
    // Global pivot of the active block.
    std::size_t pi = rows, pj = cols;
    for (std::size_t j = t; j < cols; ++j)
      for (std::size_t i = t; i < rows; ++i)
        if (S(i, j) != 0 && (pi == rows || abs(S(i, j)) < abs(S(pi, pj)))) {
          pi = i;
          pj = j;
        }
    if (pi == rows) break;
    w.swap_rows(t, pi);
    w.swap_cols(t, pj);

    for (;;) {
      bool clear = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (S(i, t) == 0) continue;
        w.add_row(i, t, -tdiv(S(i, t), S(t, t)));
        if (S(i, t) != 0) clear = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (S(t, j) == 0) continue;
        w.add_col(j, t, -tdiv(S(t, j), S(t, t)));
        if (S(t, j) != 0) clear = false;
      }
      if (!clear) {
        // A remainder survived: it is smaller than the pivot, move it into place.
        std::size_t bi = t, bj = t;
        for (std::size_t j = t + 1; j < cols; ++j)
          if (S(t, j) != 0 && abs(S(t, j)) < abs(S(bi, bj))) {
            bi = t;
            bj = j;
          }
        for (std::size_t i = t + 1; i < rows; ++i)
          if (S(i, t) != 0 && abs(S(i, t)) < abs(S(bi, bj))) {
            bi = i;
            bj = t;
          }
        w.swap_rows(t, bi);
        w.swap_cols(t, bj);
        continue;
      }
      // Divisibility chain: fold an offending row into the pivot row and retry.
      bool fixed = false;
      for (std::size_t j = t + 1; j < cols && !fixed; ++j)
        for (std::size_t i = t + 1; i < rows && !fixed; ++i)
          if (!divides(S(t, t), S(i, j))) {
            w.add_row(t, i, 1);
            fixed = true;
          }
      if (!fixed) break;
    }
    if (S(t, t) < 0) w.negate_row(t);
  }
  return SmithDecomposition{std::move(w.U), std::move(w.Uinv), std::move(w.S), std::move(w.V), m, t};
}

HermiteForm column_hermite_form(const IntMatrix& a) {
  const std::size_t rows = a.rows(), cols = a.cols();
  IntMatrix H = a;
  IntMatrix W = IntMatrix::identity(cols);
  std::vector<std::size_t> pivots;
  std::size_t k = 0;
  for (std::size_t i = 0; i < rows && k < cols; ++i) {
    for (;;) {
      std::size_t best = cols;
      for (std::size_t j = k; j < cols; ++j)
        if (H(i, j) != 0 && (best == cols || abs(H(i, j)) < abs(H(i, best)))) best = j;
      if (best == cols) break;
      H.swap_cols(k, best);
      W.swap_cols(k, best);
      bool clear = true;
      for (std::size_t j = k + 1; j < cols; ++j) {
        if (H(i, j) == 0) continue;
        const Integer q = tdiv(H(i, j), H(i, k));
        H.add_col_multiple(j, k, -q);
        W.add_col_multiple(j, k, -q);
        if (H(i, j) != 0) clear = false;
      }
      if (clear) break;
    }
    if (H(i, k) == 0) continue;
    if (H(i, k) < 0) {
      H.negate_col(k);
      W.negate_col(k);
    }
    for (std::size_t j = 0; j < k; ++j) {
      const Integer q = floor_div(H(i, j), H(i, k));
      if (q == 0) continue;
      H.add_col_multiple(j, k, -q);
      W.add_col_multiple(j, k, -q);
    }
    pivots.push_back(i);
    ++k;
  }
  return HermiteForm{std::move(H), std::move(W), std::move(pivots)};
}

IntVector HermiteForm::reduce(IntVector v) const {
  IntVector unused;
  return reduce(std::move(v), unused);
}

IntVector HermiteForm::reduce(IntVector v, IntVector& coeffs) const {
  if (v.size() != H.rows()) throw InputError("vector length does not match lattice dimension");
  coeffs.assign(H.cols(), 0);
  for (std::size_t t = 0; t < pivot_rows.size(); ++t) {
    const std::size_t i = pivot_rows[t];
    const Integer q = floor_div(v[i], H(i, t));
    if (q == 0) continue;
    coeffs[t] = q;
    for (std::size_t r = i; r < H.rows(); ++r) v[r] -= q * H(r, t);
  }
  return v;
}

bool HermiteForm::contains(const IntVector& v) const { return is_zero(reduce(v)); }

IntMatrix HermiteForm::kernel_basis() const { return W.block(0, W.rows(), rank(), W.cols()); }

IntMatrix HermiteForm::lattice_basis() const { return H.block(0, H.rows(), 0, rank()); }

IntMatrix integer_kernel(const IntMatrix& a) { return column_hermite_form(a).kernel_basis(); }

std::optional<IntVector> solve_integer_system(const IntMatrix& a, const IntVector& b,
                                              const IntMatrix& modulus) {
  if (a.rows() != b.size()) throw InputError("solve_integer_system: right-hand side has wrong length");
  if (modulus.rows() != a.rows() && !(modulus.cols() == 0 && modulus.rows() == 0)) {
    throw InputError("solve_integer_system: modulus has " + std::to_string(modulus.rows()) +
                     " rows, system has " + std::to_string(a.rows()));
  }
  const IntMatrix mod = modulus.rows() == a.rows() ? modulus : IntMatrix(a.rows(), 0);
  const IntMatrix full = hconcat(a, mod);
  const auto snf = smith_normal_form(full);
  // U full V = S  =>  full (V z) = b  iff  S z = U b.
  const IntVector ub = snf.U * std::span<const Integer>(b);
  IntVector z(full.cols());
  for (std::size_t i = 0; i < ub.size(); ++i) {
    if (i < snf.rank) {
      const Integer& d = snf.S(i, i);
      if (!divides(d, ub[i])) return std::nullopt;
      z[i] = ub[i] / d;
    } else if (ub[i] != 0) {
      return std::nullopt;
    }
  }
  const IntVector sol = snf.V * std::span<const Integer>(z);
  IntVector x(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(a.cols()));
  // Homogeneous solutions projected to the x block.
  const IntMatrix kernel = integer_kernel(full);
  const IntMatrix lattice = kernel.block(0, a.cols(), 0, kernel.cols());
  return column_hermite_form(lattice).reduce(std::move(x));
}

}  // namespace kummer
