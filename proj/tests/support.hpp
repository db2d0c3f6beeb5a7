#pragma once
// Test-only oracles and random generators. The oracles are brute force (minors,
// enumeration by repeated addition) and never call the Smith code they check.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "kummer/abelian_group.hpp"
#include "kummer/exact_sequence.hpp"
#include "kummer/kummer_tower.hpp"

namespace kummer::testing {

using Rng = std::mt19937_64;

inline long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

// Determinant by cofactor expansion; fine for the n <= 4 matrices the oracle sees.
inline Integer det_cofactor(const std::vector<std::vector<Integer>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  Integer d = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j] == 0) continue;
    std::vector<std::vector<Integer>> sub;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<Integer> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      sub.push_back(row);
    }
    const Integer c = m[0][j] * det_cofactor(sub);
    d += (j % 2 == 0) ? c : Integer(-c);
  }
  return d;
}

inline void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                    std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

// D_k = gcd of all k x k minors, for k = 1..min(rows, cols).
inline std::vector<Integer> minor_gcds(const IntMatrix& m) {
  std::vector<Integer> out;
  const std::size_t n = std::min(m.rows(), m.cols());
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<std::vector<std::size_t>> rs, cs;
    std::vector<std::size_t> cur;
    subsets(m.rows(), k, 0, cur, rs);
    subsets(m.cols(), k, 0, cur, cs);
    Integer g = 0;
    for (const auto& r : rs)
      for (const auto& c : cs) {
        std::vector<std::vector<Integer>> sub(k, std::vector<Integer>(k));
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) sub[i][j] = m(r[i], c[j]);
        g = gcd(g, det_cofactor(sub));
      }
    out.push_back(g);
  }
  return out;
}

// Expected Smith diagonal from minor gcds: d_k = D_k / D_{k-1}, zero once D_k vanishes.
inline std::vector<Integer> smith_diagonal_oracle(const IntMatrix& m) {
  const auto D = minor_gcds(m);
  std::vector<Integer> d;
  Integer prev = 1;
  for (const auto& Dk : D) {
    if (Dk == 0 || prev == 0) {
      d.push_back(0);
      prev = 0;
    } else {
      d.push_back(Dk / prev);
      prev = Dk;
    }
  }
  return d;
}

inline IntMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, long bound) {
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = uniform(rng, -bound, bound);
  return m;
}

inline IntMatrix random_unimodular(Rng& rng, std::size_t n, int steps = 12) {
  IntMatrix u = IntMatrix::identity(n);
  if (n < 2) return uniform(rng, 0, 1) ? u : Integer(-1) * u;
  for (int s = 0; s < steps; ++s) {
    const auto a = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(n) - 1));
    auto b = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(n) - 2));
    if (b >= a) ++b;
    u.add_row_multiple(a, b, uniform(rng, -2, 2));
    if (uniform(rng, 0, 3) == 0) u.swap_rows(a, b);
  }
  return u;
}

// Random finite group of order <= max_order, presented with a scrambled relation matrix.
inline FgAbGroup random_finite_group(Rng& rng, long max_order, std::size_t max_gens = 3) {
  for (;;) {
    const auto g = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(max_gens)));
    std::vector<Integer> orders;
    Integer total = 1;
    for (std::size_t i = 0; i < g; ++i) {
      orders.emplace_back(uniform(rng, 1, 8));
      total *= orders.back();
    }
    if (total > max_order) continue;
    IntMatrix rel = IntMatrix::diagonal(orders);
    const IntMatrix u = random_unimodular(rng, g);
    const IntMatrix v = random_unimodular(rng, g);
    return FgAbGroup(g, u * rel * v);
  }
}

// Random well-defined map: images of the Smith generators of `a` are chosen in `b` and
// scaled so that their orders divide the corresponding cyclic orders.
inline Homomorphism random_hom(Rng& rng, const FgAbGroup& a, const FgAbGroup& b, long bound = 5) {
  const auto& mods = a.smith_moduli();
  IntMatrix y(b.generator_count(), mods.size());
  for (std::size_t i = 0; i < mods.size(); ++i) {
    Integer factor = 1;
    if (mods[i] != 0) factor = b.is_finite() ? Integer(b.exponent() / gcd(b.exponent(), mods[i])) : Integer(0);
    for (std::size_t r = 0; r < b.generator_count(); ++r) y(r, i) = factor * uniform(rng, -bound, bound);
  }
  return Homomorphism(a, b, y * a.to_smith_matrix());
}

// Elements of a finite group found by closing {0} under adding generators; independent
// of Smith coordinates (uses only canonical forms).
inline std::vector<IntVector> enumerate_by_closure(const FgAbGroup& g) {
  std::set<IntVector> seen;
  std::vector<IntVector> frontier{g.zero().coords()};
  seen.insert(frontier[0]);
  while (!frontier.empty()) {
    std::vector<IntVector> next;
    for (const auto& x : frontier)
      for (std::size_t i = 0; i < g.generator_count(); ++i) {
        IntVector y = g.canonical(add(x, unit_vector(g.generator_count(), i)));
        if (seen.insert(y).second) next.push_back(std::move(y));
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

// Order by repeated addition.
inline long order_by_addition(const GroupElement& x, long cap = 1 << 20) {
  GroupElement acc = x;
  for (long n = 1; n <= cap; ++n) {
    if (acc.is_zero()) return n;
    acc = acc + x;
  }
  return -1;
}


// Random extension 0 -> A -> B -> C -> 0 with B = Z^{a+c} / [[R_A, X], [0, R_C]], then a
// unimodular change of B's generators. |B| = |A| |C| <= max_order.
inline ShortExactSequence random_extension(Rng& rng, long max_order, std::size_t max_gens = 3) {
  for (;;) {
    const FgAbGroup a = random_finite_group(rng, max_order, max_gens);
    const long room = static_cast<long>(max_order / a.order().get_si());
    if (room < 1) continue;
    const FgAbGroup c = random_finite_group(rng, room, max_gens);
    const std::size_t na = a.generator_count(), nc = c.generator_count();
    const IntMatrix x = random_matrix(rng, na, c.relations().cols(), 3);
    const IntMatrix rel = vconcat(hconcat(a.relations(), x), hconcat(IntMatrix(nc, a.relations().cols()), c.relations()));
    const IntMatrix p = random_unimodular(rng, na + nc);
    // U p V = I, so p^{-1} = V U.
    const auto snf = smith_normal_form(p);
    const IntMatrix pinv = snf.V * snf.U;
    const FgAbGroup b(na + nc, p * rel);
    const IntMatrix f = vconcat(IntMatrix::identity(na), IntMatrix(nc, na));
    const IntMatrix g = hconcat(IntMatrix(nc, na), IntMatrix::identity(nc));
    return ShortExactSequence(Homomorphism(a, b, p * f), Homomorphism(b, c, g * pinv));
  }
}

// Every element of B grouped by g(b), with orders; brute force.
inline bool elementwise_pure(const ShortExactSequence& seq) {
  std::map<IntVector, std::set<long>> lift_orders;
  for (const auto& b : seq.b().elements()) lift_orders[seq.g()(b).coords()].insert(order_by_addition(b));
  for (const auto& c : seq.c().elements())
    if (!lift_orders[c.coords()].count(order_by_addition(c))) return false;
  return true;
}

// g(s(c)) == c for every c, by enumeration.
inline bool section_holds_everywhere(const ShortExactSequence& seq, const Homomorphism& s) {
  for (const auto& c : seq.c().elements())
    if (seq.g()(s(c)) != c) return false;
  return true;
}

// Exhaustive search for a section: every assignment of generator images of C in B.
inline bool section_exists_brute(const ShortExactSequence& seq) {
  const auto bs = seq.b().elements();
  const std::size_t nc = seq.c().generator_count();
  std::vector<std::size_t> idx(nc, 0);
  for (;;) {
    IntMatrix m(seq.b().generator_count(), nc);
    for (std::size_t j = 0; j < nc; ++j) m.set_column(j, bs[idx[j]].coords());
    bool ok = true;
    for (std::size_t k = 0; k < seq.c().relations().cols() && ok; ++k)
      ok = seq.b().element(m * seq.c().relations().column(k)).is_zero();
    for (std::size_t j = 0; j < nc && ok; ++j) ok = seq.g().apply(m.column(j)) == seq.c().generator(j);
    if (ok) return true;
    std::size_t j = 0;
    while (j < nc && ++idx[j] == bs.size()) idx[j++] = 0;
    if (j == nc) return false;
  }
}

inline Integer det_of(const IntMatrix& m) {
  std::vector<std::vector<Integer>> rows;
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
  return det_cofactor(rows);
}

// Random r x r matrix with det prime to p.
inline IntMatrix random_sigma_matrix(Rng& rng, const Integer& p, std::size_t r) {
  for (;;) {
    IntMatrix m = random_matrix(rng, r, r, 3);
    // bias towards eigenvalue 1 so that M - I is often singular mod p
    if (uniform(rng, 0, 1)) m = m + Integer(p * uniform(rng, 0, 1)) * IntMatrix::identity(r);
    if (uniform(rng, 0, 2) == 0) m = IntMatrix::identity(r) + Integer(p) * random_matrix(rng, r, r, 1);
    if (det_of(m) % p != 0) return m;
  }
}

// Z/p^{min(c,k)} -> Z/p^{min(c,k+1)} induced by the inclusion C[p^k] -> C[p^{k+1}] for C = Z/p^c.
inline Integer inclusion_factor(const Integer& p, long c, long k) { return c >= k + 1 ? p : Integer(1); }

// Split tower B_k = A_k + C[p^k] with A = ⊕ Z/p^{a_i} (alpha = x p or the inclusion-type map),
// C = ⊕ Z/p^{c_j}, and each B_k rewritten by a random unimodular change of generators.
inline KummerTower handcrafted_split_tower(Rng& rng, const Integer& p, std::size_t n) {
  const auto na = static_cast<std::size_t>(uniform(rng, 0, 2));
  const auto nc = static_cast<std::size_t>(uniform(rng, 0, 2));
  std::vector<long> a, c;
  for (std::size_t i = 0; i < na; ++i) a.push_back(uniform(rng, 1, static_cast<long>(n) + 1));
  for (std::size_t j = 0; j < nc; ++j) c.push_back(uniform(rng, 1, static_cast<long>(n) + 1));
  const bool alpha_times_p = uniform(rng, 0, 1);
  std::vector<FgAbGroup> as, bs, cs;
  std::vector<IntMatrix> ps, pinvs;
  KummerTower t;
  t.p = p;
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<Integer> ao, co;
    for (long x : a) ao.push_back(power(p, std::min<long>(x, static_cast<long>(k))));
    for (long x : c) co.push_back(power(p, std::min<long>(x, static_cast<long>(k))));
    as.push_back(FgAbGroup::from_orders(ao));
    cs.push_back(FgAbGroup::from_orders(co));
    const auto ds = direct_sum(as.back(), cs.back());
    const IntMatrix u = random_unimodular(rng, na + nc);
    const auto snf = smith_normal_form(u);
    ps.push_back(u);
    pinvs.push_back(snf.V * snf.U);
    bs.emplace_back(na + nc, u * ds.group.relations());
    t.levels.push_back(TowerLevel{Homomorphism(as.back(), bs.back(), u * ds.inject_first.matrix()),
                                  Homomorphism(bs.back(), cs.back(), ds.project_second.matrix() * pinvs.back())});
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::vector<Integer> fa, fc;
    for (long x : a) fa.push_back(alpha_times_p ? Integer(p) : inclusion_factor(p, x, static_cast<long>(k) + 1));
    for (long x : c) fc.push_back(inclusion_factor(p, x, static_cast<long>(k) + 1));
    const IntMatrix alpha = IntMatrix::diagonal(fa), gamma = IntMatrix::diagonal(fc);
    const IntMatrix beta = ps[k + 1] * block_diagonal(alpha, gamma) * pinvs[k];
    t.maps.push_back(TowerStep{Homomorphism(as[k], as[k + 1], alpha), Homomorphism(bs[k], bs[k + 1], beta),
                               Homomorphism(cs[k], cs[k + 1], gamma)});
  }
  return t;
}

}  // namespace kummer::testing
