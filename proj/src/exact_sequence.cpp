#include "kummer/exact_sequence.hpp"

#include "kummer/errors.hpp"

namespace kummer {

namespace {

void require_composable(const Homomorphism& f, const Homomorphism& g) {
  if (!f.target().same_presentation(g.source())) {
    throw InputError("maps are not composable: f lands in " + f.target().describe() + ", g starts at " +
                     g.source().describe());
  }
}

std::vector<GroupElement> generator_images(const Homomorphism& h) {
  std::vector<GroupElement> out;
  for (std::size_t j = 0; j < h.source().generator_count(); ++j) {
    auto x = h.apply(unit_vector(h.source().generator_count(), j));
    if (!x.is_zero()) out.push_back(std::move(x));
  }
  return out;
}

void require_finite(const FgAbGroup& g, const char* what) {
  if (!g.is_finite()) throw UnsupportedError(std::string(what) + " requires a finite group, got " + g.describe());
}

}  // namespace

ExactnessReport exactness_report(const Homomorphism& f, const Homomorphism& g) {
  require_composable(f, g);
  ExactnessReport r;

  const auto kf = kernel(f);
  r.injective = kf.group.is_trivial();
  if (!r.injective && r.failure.empty()) {
    r.failure = "mono";
    r.witnesses = generator_images(kf.map);
  }

  const Subgroup img_g = Subgroup::image_of(g);
  const FgAbGroup& c = g.target();
  std::vector<GroupElement> missing;
  for (std::size_t j = 0; j < c.generator_count(); ++j) {
    const auto e = c.generator(j);
    if (!img_g.contains(e)) missing.push_back(e);
  }
  r.surjective = missing.empty();
  if (!r.surjective && r.failure.empty()) {
    r.failure = "epi";
    r.witnesses = std::move(missing);
  }

  std::vector<GroupElement> leaks;
  for (std::size_t j = 0; j < f.source().generator_count(); ++j) {
    const auto a = f.source().generator(j);
    if (!g(f(a)).is_zero()) leaks.push_back(a);
  }
  r.complex = leaks.empty();
  if (!r.complex && r.failure.empty()) {
    r.failure = "complex";
    r.witnesses = std::move(leaks);
  }

  const Subgroup img_f = Subgroup::image_of(f);
  std::vector<GroupElement> outside;
  for (const auto& k : generator_images(kernel(g).map))
    if (!img_f.contains(k)) outside.push_back(k);
  r.middle_exact = outside.empty();
  if (!r.middle_exact && r.failure.empty()) {
    r.failure = "middle";
    r.witnesses = std::move(outside);
  }
  return r;
}

ExactnessCheck check_exact(const Homomorphism& f, const Homomorphism& g) {
  ExactnessCheck out{exactness_report(f, g), std::nullopt};
  if (out.report.exact()) out.sequence.emplace(f, g);
  return out;
}

ShortExactSequence::ShortExactSequence(Homomorphism f, Homomorphism g) : f_(std::move(f)), g_(std::move(g)) {
  const auto r = exactness_report(f_, g_);
  if (!r.exact()) {
    std::string msg = "sequence is not exact (" + r.failure + ")";
    for (const auto& w : r.witnesses) msg += " " + w.to_string();
    throw ValidationError(msg);
  }
}

Section::Section(const ShortExactSequence& seq, Homomorphism s) : s_(std::move(s)) {
  if (!s_.source().same_presentation(seq.c()) || !s_.target().same_presentation(seq.b()))
    throw InputError("section must map C to B");
  if (!(compose(seq.g(), s_) == Homomorphism::identity(seq.c())))
    throw ValidationError("g o s is not the identity on C");
}

PurityViolation::PurityViolation(GroupElement c)
    : std::runtime_error("no lift of " + c.to_string() + " with the same order"), c_(std::move(c)) {}

GroupElement pure_witness(const ShortExactSequence& seq, const GroupElement& c) {
  const auto m = c.order();
  if (!m) throw InputError("pure_witness: " + c.to_string() + " has infinite order");
  const auto b0 = preimage(seq.g(), c);
  if (!b0) throw InputError("pure_witness: element not in the image of g");
  // m (b0 + f(a)) = 0 in B  <=>  m F a ≡ -m b0 modulo the relations of B.
  const FgAbGroup& b = seq.b();
  const auto a = solve_integer_system(*m * seq.f().matrix(), scale(-*m, b0->coords()), b.relations());
  if (!a) throw PurityViolation(c);
  return *b0 + seq.f().apply(*a);
}

PrueferDecomposition pruefer_decompose(const FgAbGroup& g, bool primary) {
  require_finite(g, "pruefer_decompose");
  const auto& d = g.invariant_factors();
  const IntMatrix& to = g.to_smith_matrix();
  const IntMatrix& from = g.from_smith_matrix();
  std::vector<Integer> orders;
  std::vector<IntVector> iso_cols;
  std::vector<IntVector> inv_rows;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!primary) {
      orders.push_back(d[i]);
      iso_cols.push_back(from.column(i));
      inv_rows.push_back(to.row(i));
      continue;
    }
    for (const auto& [p, e] : factorize(d[i])) {
      const Integer q = power(p, e);
      const Integer cofactor = d[i] / q;
      orders.push_back(q);
      iso_cols.push_back(scale(cofactor, from.column(i)));
      // CRT idempotent: coordinate i times cofactor^{-1} mod q.
      inv_rows.push_back(scale(inverse_mod(cofactor, q), to.row(i)));
    }
  }
  FgAbGroup sum = FgAbGroup::from_orders(orders);
  IntMatrix inv(inv_rows.size(), g.generator_count());
  for (std::size_t i = 0; i < inv_rows.size(); ++i)
    for (std::size_t j = 0; j < g.generator_count(); ++j) inv(i, j) = inv_rows[i][j];
  Homomorphism iso(sum, g, IntMatrix::from_columns(g.generator_count(), iso_cols));
  Homomorphism back(g, sum, inv);
  return PrueferDecomposition{std::move(orders), sum, std::move(iso), std::move(back)};
}

PurityReport is_pure(const ShortExactSequence& seq, const std::optional<std::vector<Integer>>& moduli) {
  const FgAbGroup& b = seq.b();
  PurityReport report;
  std::vector<Integer> ns;
  if (moduli) {
    ns = *moduli;
    report.scope = "given moduli";
  } else {
    if (!b.is_finite()) {
      throw UnsupportedError("purity of a sequence with unbounded middle term " + b.describe() +
                             " needs an explicit list of moduli");
    }
    ns = divisors(b.exponent());
    report.exhaustive = true;
    report.scope = "all n dividing exp(B) = " + b.exponent().get_str();
  }
  const Subgroup a = Subgroup::image_of(seq.f());
  const Subgroup whole(b, IntMatrix::identity(b.generator_count()));
  report.pure = true;
  for (const auto& n : ns) {
    PurityCheck check;
    check.n = n;
    const Subgroup na = a.scaled(n);
    const Subgroup meet = a.intersect(whole.scaled(n));
    check.witness = na.first_outside(meet);
    check.equal = !check.witness.has_value();
    if (!check.equal) report.pure = false;
    report.checks.push_back(std::move(check));
  }
  if (!report.pure && seq.c().is_finite()) {
    // Some cyclic generator of C must fail to lift, otherwise the lifts would split the sequence.
    const auto dec = pruefer_decompose(seq.c());
    for (std::size_t i = 0; i < dec.orders.size() && !report.unliftable; ++i) {
      const auto c = dec.iso(dec.cyclic_sum.generator(i));
      try {
        pure_witness(seq, c);
      } catch (const PurityViolation&) {
        report.unliftable = c;
      }
    }
  }
  return report;
}

Section section_from_lifts(const ShortExactSequence& seq, const PrueferDecomposition& decomposition,
                           const std::vector<GroupElement>& lifts) {
  if (lifts.size() != decomposition.orders.size()) throw InputError("one lift per cyclic summand is required");
  std::vector<IntVector> cols;
  for (const auto& b : lifts) cols.push_back(b.coords());
  const Homomorphism on_sum(decomposition.cyclic_sum, seq.b(), IntMatrix::from_columns(seq.b().generator_count(), cols));
  return Section(seq, compose(on_sum, decomposition.inverse));
}

Section section_from_purity(const ShortExactSequence& seq) {
  require_finite(seq.c(), "section_from_purity");
  const auto dec = pruefer_decompose(seq.c());
  std::vector<GroupElement> lifts;
  for (std::size_t i = 0; i < dec.orders.size(); ++i)
    lifts.push_back(pure_witness(seq, dec.iso(dec.cyclic_sum.generator(i))));
  return section_from_lifts(seq, dec, lifts);
}

std::optional<Section> section_with_commuting(const ShortExactSequence& seq,
                                              const std::vector<std::pair<IntMatrix, IntMatrix>>& commuting) {
  const FgAbGroup& B = seq.b();
  const FgAbGroup& C = seq.c();
  const std::size_t nb = B.generator_count(), nc = C.generator_count();
  const IntMatrix& rb = B.relations();
  const IntMatrix& rc = C.relations();
  const IntMatrix ib = IntMatrix::identity(nb), ic = IntMatrix::identity(nc);

  // Unknown: vec(X), X is nb x nc, stacked column by column.
  // g X ≡ I (mod R_C, column by column)
  IntMatrix system = kronecker(ic, seq.g().matrix());
  IntMatrix modulus = kronecker(ic, rc);
  IntVector rhs;
  for (std::size_t j = 0; j < nc; ++j)
    for (std::size_t i = 0; i < nc; ++i) rhs.emplace_back(i == j ? 1 : 0);

  const auto append = [&](const IntMatrix& rows, const IntMatrix& mod) {
    system = vconcat(system, rows);
    modulus = block_diagonal(modulus, mod);
    rhs.resize(system.rows(), 0);
  };
  // X R_C ≡ 0 (mod R_B): the images of C's relators vanish.
  if (rc.cols() > 0) append(kronecker(rc.transpose(), ib), kronecker(IntMatrix::identity(rc.cols()), rb));
  for (const auto& [sc, sb] : commuting) {
    if (sc.rows() != nc || sc.cols() != nc || sb.rows() != nb || sb.cols() != nb)
      throw InputError("commuting constraint has wrong shape");
    append(kronecker(sc.transpose(), ib) - kronecker(ic, sb), kronecker(ic, rb));
  }

  const auto x = solve_integer_system(system, rhs, modulus);
  if (!x) return std::nullopt;
  IntMatrix s(nb, nc);
  for (std::size_t j = 0; j < nc; ++j)
    for (std::size_t i = 0; i < nb; ++i) s(i, j) = (*x)[j * nb + i];
  return Section(seq, Homomorphism(C, B, s));
}

std::optional<Section> section_exists(const ShortExactSequence& seq) { return section_with_commuting(seq, {}); }

Homomorphism retraction_from_section(const ShortExactSequence& seq, const Section& s) {
  const FgAbGroup& b = seq.b();
  std::vector<IntVector> cols;
  for (std::size_t j = 0; j < b.generator_count(); ++j) {
    const auto e = b.generator(j);
    const auto v = e - s.map()(seq.g()(e));
    cols.push_back(preimage(seq.f(), v)->coords());
  }
  Homomorphism r(b, seq.a(), IntMatrix::from_columns(seq.a().generator_count(), cols));
  if (!(compose(r, seq.f()) == Homomorphism::identity(seq.a()))) throw ValidationError("r o f is not the identity");
  return r;
}

Section section_from_retraction(const ShortExactSequence& seq, const Homomorphism& r) {
  if (!(compose(r, seq.f()) == Homomorphism::identity(seq.a())))
    throw InputError("section_from_retraction: r o f is not the identity on A");
  const FgAbGroup& c = seq.c();
  std::vector<IntVector> cols;
  for (std::size_t j = 0; j < c.generator_count(); ++j) {
    const auto b = *preimage(seq.g(), c.generator(j));
    cols.push_back((b - seq.f()(r(b))).coords());
  }
  return Section(seq, Homomorphism(c, seq.b(), IntMatrix::from_columns(seq.b().generator_count(), cols)));
}

FgAbGroup pontryagin_dual(const FgAbGroup& g) {
  require_finite(g, "pontryagin_dual");
  return FgAbGroup::from_orders(g.invariant_factors());
}

Homomorphism pontryagin_dual(const Homomorphism& h) {
  require_finite(h.source(), "pontryagin_dual");
  require_finite(h.target(), "pontryagin_dual");
  // Characters are coefficient vectors on Smith coordinates: chi_a(y) = sum a_i y_i / d_i.
  const IntMatrix t = h.smith_matrix();
  const auto& ds = h.source().invariant_factors();
  const auto& dt = h.target().invariant_factors();
  IntMatrix m(ds.size(), dt.size());
  for (std::size_t i = 0; i < dt.size(); ++i)
    for (std::size_t j = 0; j < ds.size(); ++j) m(j, i) = t(i, j) * ds[j] / dt[i];
  return Homomorphism(pontryagin_dual(h.target()), pontryagin_dual(h.source()), m);
}

mpq_class character_value(const FgAbGroup& g, const GroupElement& chi, const GroupElement& x) {
  const auto& d = g.invariant_factors();
  const IntVector y = g.to_smith(x.coords());
  const IntVector& a = chi.coords();
  mpq_class v = 0;
  for (std::size_t i = 0; i < d.size(); ++i) v += mpq_class(a[i] * y[i], d[i]);
  v.canonicalize();
  const mpz_class whole = floor_div(v.get_num(), v.get_den());
  v -= whole;
  return v;
}

Homomorphism double_dual(const FgAbGroup& g) {
  const FgAbGroup dd = pontryagin_dual(pontryagin_dual(g));
  return Homomorphism(g, dd, g.to_smith_matrix());
}

ShortExactSequence dualize_sequence(const ShortExactSequence& seq) {
  return ShortExactSequence(pontryagin_dual(seq.g()), pontryagin_dual(seq.f()));
}

std::size_t rank_m(const FgAbGroup& g, const Integer& m) {
  if (m < 2) throw InputError("rank_m needs m >= 2, got " + m.get_str());
  require_finite(g, "rank_m");
  std::size_t best = g.invariant_factors().size();
  for (const auto& [p, t] : factorize(m)) {
    std::size_t count = 0;
    for (const auto& d : g.invariant_factors())
      if (valuation(d, p) >= t) ++count;
    best = std::min(best, count);
  }
  return best;
}

}  // namespace kummer
