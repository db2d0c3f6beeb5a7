#include "kummer/cyclic_cohomology.hpp"

#include <sstream>

#include "kummer/errors.hpp"

namespace kummer {

namespace {

// G^k with block relations; coordinates of block i occupy [i*g, (i+1)*g).
FgAbGroup power_group(const FgAbGroup& g, std::size_t k) {
  IntMatrix rel;
  for (std::size_t i = 0; i < k; ++i) {
    rel = i == 0 ? g.relations() : block_diagonal(rel, g.relations());
  }
  if (k == 0) return FgAbGroup();
  return FgAbGroup(g.generator_count() * k, rel);
}

// Place `block` (rows x cols) at block position (bi, bj) of a larger zero matrix.
void put_block(IntMatrix& big, std::size_t bi, std::size_t bj, const IntMatrix& block) {
  for (std::size_t i = 0; i < block.rows(); ++i)
    for (std::size_t j = 0; j < block.cols(); ++j) big(bi * block.rows() + i, bj * block.cols() + j) += block(i, j);
}

// Induced map on quotients: pi_t o h o lift(pi_s).
Homomorphism induced(const Homomorphism& h, const Homomorphism& pi_s, const Homomorphism& pi_t) {
  std::vector<IntVector> cols;
  for (std::size_t j = 0; j < pi_s.target().generator_count(); ++j) {
    const auto x = preimage(pi_s, pi_s.target().generator(j));
    if (!x) throw ValidationError("projection is not surjective");
    cols.push_back(pi_t(h(*x)).coords());
  }
  return Homomorphism(pi_s.target(), pi_t.target(), IntMatrix::from_columns(pi_t.target().generator_count(), cols));
}

// sigma restricted to a stable subgroup given by its inclusion.
Homomorphism restricted(const Homomorphism& S, const Homomorphism& incl) {
  std::vector<IntVector> cols;
  for (std::size_t j = 0; j < incl.source().generator_count(); ++j) {
    const auto y = preimage(incl, S(incl(incl.source().generator(j))));
    if (!y) throw InputError("subgroup is not stable under the action");
    cols.push_back(y->coords());
  }
  return Homomorphism(incl.source(), incl.source(), IntMatrix::from_columns(incl.source().generator_count(), cols));
}

std::string describe_factors(const FgAbGroup& g) { return g.is_trivial() ? "0" : g.describe(); }

}  // namespace

CyclicGroupModule::CyclicGroupModule(std::size_t d, Homomorphism S) : d_(d), S_(std::move(S)) {
  if (d == 0) throw InputError("cyclic group order must be positive");
  if (!S_.source().same_presentation(S_.target())) throw InputError("sigma must be an endomorphism");
  if (!(sigma_power(d) == Homomorphism::identity(group()))) throw InputError("sigma^d is not the identity");
}

CyclicGroupModule CyclicGroupModule::trivial(std::size_t d, const FgAbGroup& m) {
  return CyclicGroupModule(d, Homomorphism::identity(m));
}

CyclicGroupModule CyclicGroupModule::regular(std::size_t d, const Integer& n) {
  const FgAbGroup m = n == 0 ? FgAbGroup::free(d) : FgAbGroup(d, IntMatrix::scalar(d, n));
  IntMatrix shift(d, d);
  for (std::size_t i = 0; i < d; ++i) shift((i + 1) % d, i) = 1;
  return CyclicGroupModule(d, Homomorphism(m, m, shift));
}

Homomorphism CyclicGroupModule::sigma_power(std::size_t i) const {
  Homomorphism out = Homomorphism::identity(group());
  for (std::size_t k = 0; k < i; ++k) out = compose(S_, out);
  return out;
}

Homomorphism CyclicGroupModule::norm() const {
  Homomorphism out = Homomorphism::zero(group(), group());
  Homomorphism s = Homomorphism::identity(group());
  for (std::size_t k = 0; k < d_; ++k) {
    out = out + s;
    s = compose(S_, s);
  }
  return out;
}

Homomorphism CyclicGroupModule::sigma_minus_one() const { return S_ - Homomorphism::identity(group()); }

Homomorphism CyclicGroupModule::quotient_map(const Integer& n) const {
  return cokernel(Homomorphism::multiplication(group(), n)).map;
}

CyclicGroupModule CyclicGroupModule::quotient(const Integer& n) const {
  const auto pi = quotient_map(n);
  return CyclicGroupModule(d_, induced(S_, pi, pi));
}

GModuleMap::GModuleMap(CyclicGroupModule source, CyclicGroupModule target, Homomorphism h)
    : source_(std::move(source)), target_(std::move(target)), h_(std::move(h)) {
  if (source_.d() != target_.d()) throw InputError("G-module map between different groups");
  if (!h_.source().same_presentation(source_.group()) || !h_.target().same_presentation(target_.group()))
    throw InputError("G-module map does not match the module presentations");
  if (!(compose(h_, source_.sigma()) == compose(target_.sigma(), h_)))
    throw InputError("map does not commute with the G-action");
}

GroupElement Subquotient::class_of(const GroupElement& x) const {
  const auto k = preimage(inclusion, x);
  if (!k) throw InputError("element does not lie in the numerator subgroup");
  return projection(*k);
}

GroupElement Subquotient::lift(const GroupElement& h) const {
  const auto k = preimage(projection, h);
  return inclusion(*k);
}

Subquotient subquotient(const Homomorphism& a, const Homomorphism& b) {
  if (!b.target().same_presentation(a.source())) throw InputError("subquotient maps do not compose");
  if (!compose(a, b).is_zero()) throw InputError("subquotient requires a o b = 0");
  const auto k = kernel(a);
  std::vector<IntVector> cols;
  for (std::size_t j = 0; j < b.source().generator_count(); ++j)
    cols.push_back(preimage(k.map, b(b.source().generator(j)))->coords());
  const Homomorphism into_k(b.source(), k.group, IntMatrix::from_columns(k.group.generator_count(), cols));
  const auto q = cokernel(into_k);
  return Subquotient{q.group, k.map, q.map};
}

bool TateGroups::all_zero() const {
  return H_minus1.group.is_trivial() && H_0.group.is_trivial() && H_1.group.is_trivial() && H_2.group.is_trivial();
}

TateGroups tate_cohomology(const CyclicGroupModule& m) {
  const FgAbGroup& M = m.group();
  const std::size_t d = m.d(), g = M.generator_count();
  const auto N = m.norm(), D = m.sigma_minus_one();

  Subquotient hm1 = subquotient(N, D);
  Subquotient h0 = subquotient(D, N);

  // Cochains: C^0 = M, C^1 = M^d (values at sigma^0, ..., sigma^{d-1}).
  // A 1-cochain is a crossed homomorphism iff f(1) = 0 and
  // f(sigma^{i+1}) = f(sigma^i) + sigma^i f(sigma) for all i (indices mod d).
  const FgAbGroup c1 = power_group(M, d), c2 = power_group(M, d + 1);
  IntMatrix delta0(g * d, g);
  for (std::size_t i = 0; i < d; ++i) put_block(delta0, i, 0, (m.sigma_power(i) - Homomorphism::identity(M)).matrix());
  IntMatrix delta1(g * (d + 1), g * d);
  const IntMatrix id = IntMatrix::identity(g);
  const std::size_t at_sigma = d > 1 ? 1 : 0;
  for (std::size_t i = 0; i < d; ++i) {
    put_block(delta1, i, (i + 1) % d, id);
    put_block(delta1, i, i, IntMatrix::scalar(g, -1));
    put_block(delta1, i, at_sigma, Integer(-1) * m.sigma_power(i).matrix());
  }
  put_block(delta1, d, 0, id);
  Subquotient h1 = subquotient(Homomorphism(c1, c2, delta1), Homomorphism(M, c1, delta0));

  // f -> f(sigma), read in ker N / (sigma - 1) M.
  std::vector<IntVector> cols;
  for (std::size_t j = 0; j < h1.group.generator_count(); ++j) {
    const auto f = h1.lift(h1.group.generator(j)).coords();
    IntVector value(f.begin() + static_cast<std::ptrdiff_t>(at_sigma * g),
                    f.begin() + static_cast<std::ptrdiff_t>((at_sigma + 1) * g));
    cols.push_back(hm1.class_of(M.element(value)).coords());
  }
  Homomorphism per1(h1.group, hm1.group, IntMatrix::from_columns(hm1.group.generator_count(), cols));
  if (!per1.is_isomorphism()) throw ValidationError("evaluation at sigma is not an isomorphism H^1 -> H^-1");

  Subquotient h2 = h0;
  Homomorphism per2 = Homomorphism::identity(h0.group);
  return TateGroups{hm1, h0, h1, h2, per1, per2};
}

bool is_cohomologically_trivial(const CyclicGroupModule& m) { return tate_cohomology(m).all_zero(); }

GModuleSequence::GModuleSequence(GModuleMap f, GModuleMap g) : f_(std::move(f)), g_(std::move(g)) {
  if (!f_.map().target().same_presentation(g_.map().source())) throw InputError("G-module maps do not compose");
  const auto check = check_exact(f_.map(), g_.map());
  if (!check.report.exact()) throw InputError("G-module sequence is not exact: " + check.report.failure);
}

std::optional<GModuleMap> equivariant_section_exists(const GModuleSequence& seq, const Integer& p) {
  for (const auto* m : {&seq.f().source(), &seq.f().target(), &seq.g().target()}) {
    if (!Homomorphism::multiplication(m->group(), p).is_zero())
      throw UnsupportedError("equivariant splitting needs modules killed by " + p.get_str());
  }
  const auto& B = seq.g().source();
  const auto& C = seq.g().target();
  const auto s = section_with_commuting(seq.underlying(), {{C.sigma().matrix(), B.sigma().matrix()}});
  if (!s) return std::nullopt;
  GModuleMap out(C, B, s->map());
  if (!(compose(seq.g().map(), out.map()) == Homomorphism::identity(C.group())))
    throw ValidationError("equivariant section fails g o s = id");
  return out;
}

GModuleSequence submodule_sequence(const CyclicGroupModule& m, const std::vector<GroupElement>& gens) {
  std::vector<IntVector> orbit;
  for (const auto& x : gens) {
    if (!x.parent().same_presentation(m.group())) throw InputError("generator not in the module");
    auto y = x;
    for (std::size_t i = 0; i < m.d(); ++i, y = m.sigma()(y)) orbit.push_back(y.coords());
  }
  const FgAbGroup& M = m.group();
  const IntMatrix span = orbit.empty() ? IntMatrix(M.generator_count(), 0) : IntMatrix::from_columns(M.generator_count(), orbit);
  const auto sub = image(Homomorphism(FgAbGroup::free(span.cols()), M, span));
  const auto quot = cokernel(sub.map);
  const CyclicGroupModule a(m.d(), restricted(m.sigma(), sub.map));
  const CyclicGroupModule c(m.d(), induced(m.sigma(), quot.map, quot.map));
  return GModuleSequence(GModuleMap(a, m, sub.map), GModuleMap(m, c, quot.map));
}

GModuleSequence augmentation_sequence(const Integer& p) {
  if (!is_prime(p)) throw InputError("p must be prime");
  const std::size_t d = p.get_ui();
  const auto reg = CyclicGroupModule::regular(d, p);
  const FgAbGroup fp = FgAbGroup::cyclic(p);
  IntMatrix eps(1, d);
  for (std::size_t i = 0; i < d; ++i) eps(0, i) = 1;
  const Homomorphism aug(reg.group(), fp, eps);
  const auto ideal = kernel(aug);
  const CyclicGroupModule ideal_module(d, restricted(reg.sigma(), ideal.map));
  return GModuleSequence(GModuleMap(ideal_module, reg, ideal.map),
                         GModuleMap(reg, CyclicGroupModule::trivial(d, fp), aug));
}

CyclicGroupModule tate_model(const Integer& p) {
  if (!is_prime(p)) throw InputError("p must be prime");
  const std::size_t n = p.get_ui();
  IntMatrix S(n, n);
  for (std::size_t i = 0; i + 2 < n; ++i) S(i + 1, i) = 1;
  // sigma * sigma^{p-2} = sigma^{p-1} = p (N/p) - (1 + sigma + ... + sigma^{p-2})
  for (std::size_t i = 0; i + 1 < n; ++i) S(i, n - 2) -= 1;
  S(n - 1, n - 2) += p;
  S(n - 1, n - 1) = 1;
  const FgAbGroup x = FgAbGroup::free(n);
  return CyclicGroupModule(n, Homomorphism(x, x, S));
}

ShortExactSequence les_multiplication_by_p(const CyclicGroupModule& m, const Integer& p) {
  if (!is_prime(p) || m.d() != p.get_ui()) throw InputError("G must have prime order p");
  const auto tors = torsion_subgroup(m.group(), p);
  if (!tors.group.is_trivial())
    throw InputError("M[p] != 0, witness " + tors.map(tors.group.generator(0)).to_string());
  const auto mod_p = m.quotient(p);
  const auto pi = m.quotient_map(p);
  const auto t = tate_cohomology(m), tq = tate_cohomology(mod_p);

  // H^1(M) -> H^1(M/p): f -> pi o f, read through evaluation at sigma.
  const auto to_hm1 = t.periodicity_1, from_hm1q = inverse(tq.periodicity_1);
  std::vector<IntVector> fcols;
  for (std::size_t j = 0; j < t.H_1.group.generator_count(); ++j) {
    const auto a = t.H_minus1.lift(to_hm1(t.H_1.group.generator(j)));
    fcols.push_back(from_hm1q(tq.H_minus1.class_of(pi(a))).coords());
  }
  const Homomorphism f(t.H_1.group, tq.H_1.group, IntMatrix::from_columns(tq.H_1.group.generator_count(), fcols));

  // Connecting map: lift x, N x = p y, class of y in M^G / N M.
  const auto N = m.norm();
  const auto times_p = Homomorphism::multiplication(m.group(), p);
  std::vector<IntVector> gcols;
  for (std::size_t j = 0; j < tq.H_1.group.generator_count(); ++j) {
    const auto xbar = tq.H_minus1.lift(tq.periodicity_1(tq.H_1.group.generator(j)));
    const auto x = preimage(pi, xbar);
    const auto y = preimage(times_p, N(*x));
    if (!y) throw ValidationError("N x is not divisible by p");
    gcols.push_back(inverse(t.periodicity_2)(t.H_0.class_of(*y)).coords());
  }
  const Homomorphism g(tq.H_1.group, t.H_2.group, IntMatrix::from_columns(t.H_2.group.generator_count(), gcols));
  return ShortExactSequence(f, g);
}

bool ChrisReport::valid() const {
  for (const auto& s : steps)
    if (!s.ok) return false;
  return !steps.empty();
}

ChrisReport chris_verify(const Integer& p) {
  if (!is_prime(p)) throw InputError("p must be prime");
  ChrisReport r;
  r.p = p;
  r.inside_hypothesis = p != 2;
  const std::size_t d = p.get_ui();
  const auto step = [&r](std::string name, bool ok, std::string detail) {
    r.steps.push_back(ChrisStep{std::move(name), ok, std::move(detail)});
  };
  const auto prime_power = [&p](std::size_t k) { return std::vector<Integer>(k, p); };

  const auto x = tate_model(p);
  const auto lattice = CyclicGroupModule::regular(d);
  step("lattice acyclic", is_cohomologically_trivial(lattice), "Z[G] has vanishing Tate cohomology");

  // Z[G] sits in X as 1, sigma, ..., sigma^{p-2}, sigma^{p-1}; the quotient is Z/p with trivial action.
  IntMatrix emb(d, d);
  for (std::size_t i = 0; i + 1 < d; ++i) emb(i, i) = 1;
  emb.set_column(d - 1, x.sigma().matrix().column(d - 2));
  const GModuleMap inc(lattice, x, Homomorphism(lattice.group(), x.group(), emb));
  const auto quot = cokernel(inc.map());
  const auto quot_action = induced(x.sigma(), quot.map, quot.map);
  step("model extension", quot.group.invariant_factors() == prime_power(1) && quot_action == Homomorphism::identity(quot.group),
       "X / Z[G] = " + describe_factors(quot.group) + " with trivial action");
  step("model torsion-free", torsion_subgroup(x.group(), p).group.is_trivial(), "X[p] = 0");

  const auto tx = tate_cohomology(x);
  r.h1_model = tx.H_1.group.invariant_factors();
  r.h2_model = tx.H_2.group.invariant_factors();
  step("H1(G,X) = Z/p", r.h1_model == prime_power(1), "H^1(G,X) = " + describe_factors(tx.H_1.group));
  step("H2(G,X) = Z/p", r.h2_model == prime_power(1), "H^2(G,X) = " + describe_factors(tx.H_2.group));

  const auto les = les_multiplication_by_p(x, p);
  step("cohomology sequence exact", true,
       describe_factors(les.a()) + " -> " + describe_factors(les.b()) + " -> " + describe_factors(les.c()));

  const auto xq = x.quotient(p);
  const auto tq = tate_cohomology(xq);
  r.h1_quotient = tq.H_1.group.invariant_factors();
  r.hminus1_quotient = tq.H_minus1.group.invariant_factors();
  step("H1(G,X/p) = (Z/p)^2", r.h1_quotient == prime_power(2), "H^1(G,X/p) = " + describe_factors(tq.H_1.group));
  step("periodicity H1 = H^-1", tq.periodicity_1.is_isomorphism() && r.hminus1_quotient == r.h1_quotient,
       "evaluation at sigma is an isomorphism");
  step("H^-1(G,X/p) != 0", !tq.H_minus1.group.is_trivial(), "H^-1(G,X/p) = " + describe_factors(tq.H_minus1.group));

  // Norm on coinvariants (X/p)_G -> X/p; its kernel is H^-1 by definition.
  const auto coinv = cokernel(xq.sigma_minus_one());
  const auto norm_bar = induced(xq.norm(), coinv.map, Homomorphism::identity(xq.group()));
  const auto nk = kernel(norm_bar);
  r.norm_kernel = nk.group.invariant_factors();
  step("norm on coinvariants not injective", !nk.group.is_trivial() && r.norm_kernel == r.hminus1_quotient,
       "kernel = " + describe_factors(nk.group));

  std::ostringstream inf;
  inf << "The kernel of the norm map (X/p)_G -> X/p is H^-1(G,X/p) = " << describe_factors(tq.H_minus1.group)
      << ", nonzero. Under local Tate duality (cited, not recomputed) this norm map is the dual of gamma, so gamma "
         "is not surjective, hence rho is not surjective, hence the Kummer sequence has no G-equivariant section.";
  if (!r.inside_hypothesis) inf << " Computed outside the hypothesis p odd (p = 2).";
  r.inference = inf.str();
  return r;
}

}  // namespace kummer
