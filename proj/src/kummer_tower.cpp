#include "kummer/kummer_tower.hpp"

#include <algorithm>

#include "kummer/errors.hpp"

namespace kummer {

namespace {

// First generator of the common source on which the two maps differ.
std::optional<GroupElement> first_disagreement(const Homomorphism& a, const Homomorphism& b) {
  for (std::size_t j = 0; j < a.source().generator_count(); ++j) {
    const auto x = a.source().generator(j);
    if (a(x) != b(x)) return x;
  }
  return std::nullopt;
}

std::optional<GroupElement> first_not_killed(const FgAbGroup& g, const Integer& n) {
  for (std::size_t j = 0; j < g.generator_count(); ++j) {
    const auto x = g.generator(j);
    if (!(n * x).is_zero()) return x;
  }
  return std::nullopt;
}

bool same(const FgAbGroup& a, const FgAbGroup& b) { return a.same_presentation(b); }

struct Checker {
  TowerReport report;
  void add(std::size_t level, std::string check, std::string detail, std::optional<GroupElement> w = std::nullopt) {
    report.violations.push_back(TowerViolation{level, std::move(check), std::move(detail), std::move(w)});
  }
};

// Shape checks shared by both tower kinds; `upward` says whether maps[k] runs k -> k+1.
bool check_shape(Checker& c, const Integer& p, const std::vector<TowerLevel>& levels,
                 const std::vector<TowerStep>& maps, bool upward) {
  if (!is_prime(p)) c.add(0, "shape", p.get_str() + " is not prime");
  if (levels.empty()) c.add(0, "shape", "tower has no levels");
  if (!levels.empty() && maps.size() + 1 != levels.size())
    c.add(0, "shape", "expected " + std::to_string(levels.size() - 1) + " steps, got " + std::to_string(maps.size()));
  for (std::size_t k = 0; k < levels.size(); ++k)
    if (!same(levels[k].f.target(), levels[k].g.source())) c.add(k + 1, "shape", "f and g are not composable");
  if (!c.report.valid()) return false;
  for (std::size_t j = 0; j < maps.size(); ++j) {
    const TowerLevel& from = upward ? levels[j] : levels[j + 1];
    const TowerLevel& to = upward ? levels[j + 1] : levels[j];
    const TowerStep& m = maps[j];
    if (!same(m.alpha.source(), from.f.source()) || !same(m.alpha.target(), to.f.source()))
      c.add(j + 1, "shape", "alpha does not connect the A terms");
    if (!same(m.beta.source(), from.f.target()) || !same(m.beta.target(), to.f.target()))
      c.add(j + 1, "shape", "beta does not connect the B terms");
    if (!same(m.gamma.source(), from.g.target()) || !same(m.gamma.target(), to.g.target()))
      c.add(j + 1, "shape", "gamma does not connect the C terms");
  }
  return c.report.valid();
}

void check_levels(Checker& c, const Integer& p, const std::vector<TowerLevel>& levels) {
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const auto r = exactness_report(levels[k].f, levels[k].g);
    if (!r.exact())
      c.add(k + 1, "exact", "S_" + std::to_string(k + 1) + " fails " + r.failure,
            r.witnesses.empty() ? std::nullopt : std::optional<GroupElement>(r.witnesses.front()));
    const Integer q = power(p, k + 1);
    const std::pair<const char*, const FgAbGroup*> terms[] = {
        {"A", &levels[k].f.source()}, {"B", &levels[k].f.target()}, {"C", &levels[k].g.target()}};
    for (const auto& [name, g] : terms)
      if (auto w = first_not_killed(*g, q))
        c.add(k + 1, "torsion", std::string(name) + "_" + std::to_string(k + 1) + " is not killed by " + q.get_str(), w);
  }
}

void check_square(Checker& c, std::size_t level, const char* which, const Homomorphism& lhs, const Homomorphism& rhs) {
  if (auto w = first_disagreement(lhs, rhs)) c.add(level, which, "square does not commute", w);
}

Homomorphism composite(const std::vector<TowerStep>& maps, std::size_t from, std::size_t to,
                       Homomorphism TowerStep::*which, const FgAbGroup& start) {
  Homomorphism h = Homomorphism::identity(start);
  for (std::size_t j = from; j < to; ++j) h = compose(maps[j].*which, h);
  return h;
}

}  // namespace

ShortExactSequence KummerTower::top() const { return sequence(n()); }

ShortExactSequence KummerTower::sequence(std::size_t level) const {
  if (level == 0 || level > n()) throw InputError("tower level out of range");
  return ShortExactSequence(levels[level - 1].f, levels[level - 1].g);
}

ShortExactSequence CoKummerTower::top() const {
  if (levels.empty()) throw InputError("tower has no levels");
  return ShortExactSequence(levels.back().f, levels.back().g);
}

std::string TowerReport::summary() const {
  if (valid()) return "valid";
  std::string s;
  for (const auto& v : violations) {
    if (!s.empty()) s += "; ";
    s += "level " + std::to_string(v.level) + " " + v.check + ": " + v.detail;
    if (v.witness) s += " " + v.witness->to_string();
  }
  return s;
}

TowerReport validate_tower(const KummerTower& t) {
  Checker c;
  if (!check_shape(c, t.p, t.levels, t.maps, true)) return c.report;
  check_levels(c, t.p, t.levels);
  for (std::size_t j = 0; j < t.maps.size(); ++j) {
    const auto& lo = t.levels[j];
    const auto& hi = t.levels[j + 1];
    const auto& m = t.maps[j];
    check_square(c, j + 1, "square-left", compose(m.beta, lo.f), compose(hi.f, m.alpha));
    check_square(c, j + 1, "square-right", compose(m.gamma, lo.g), compose(hi.g, m.beta));
    const auto ker = kernel(m.gamma);
    if (!ker.group.is_trivial()) {
      c.add(j + 1, "inclusion", "gamma is not injective", ker.map(ker.group.generator(0)));
      continue;
    }
    const Subgroup torsion = Subgroup::image_of(torsion_subgroup(hi.g.target(), power(t.p, j + 1)).map);
    const Subgroup img = Subgroup::image_of(m.gamma);
    if (auto w = img.first_outside(torsion))
      c.add(j + 1, "inclusion", "C[p^k] is not in the image of gamma", w);
    else if (auto w2 = torsion.first_outside(img))
      c.add(j + 1, "inclusion", "gamma leaves C[p^k]", w2);
  }
  return c.report;
}

TowerReport validate_tower(const CoKummerTower& t) {
  Checker c;
  if (!check_shape(c, t.p, t.levels, t.maps, false)) return c.report;
  check_levels(c, t.p, t.levels);
  for (std::size_t j = 0; j < t.maps.size(); ++j) {
    const auto& lo = t.levels[j];
    const auto& hi = t.levels[j + 1];
    const auto& m = t.maps[j];
    check_square(c, j + 1, "square-left", compose(m.beta, hi.f), compose(lo.f, m.alpha));
    check_square(c, j + 1, "square-right", compose(m.gamma, hi.g), compose(lo.g, m.beta));
    const Subgroup img = Subgroup::image_of(m.alpha);
    for (std::size_t i = 0; i < lo.f.source().generator_count(); ++i) {
      const auto a = lo.f.source().generator(i);
      if (!img.contains(a)) {
        c.add(j + 1, "surjection", "alpha is not surjective", a);
        break;
      }
    }
    const Subgroup ker = Subgroup::image_of(kernel(m.alpha).map);
    const Subgroup expected = Subgroup::image_of(Homomorphism::multiplication(hi.f.source(), power(t.p, j + 1)));
    if (auto w = ker.first_outside(expected))
      c.add(j + 1, "surjection", "p^k A is not killed by alpha", w);
    else if (auto w2 = expected.first_outside(ker))
      c.add(j + 1, "surjection", "alpha kills more than p^k A", w2);
  }
  return c.report;
}

PurityWitnessSet tower_purity(const KummerTower& t) {
  const auto report = validate_tower(t);
  if (!report.valid()) throw ValidationError("invalid tower: " + report.summary());
  const std::size_t n = t.n();
  const FgAbGroup& cn = t.levels[n - 1].g.target();
  const auto dec = pruefer_decompose(cn);
  PurityWitnessSet out;
  out.scope = "cyclic generators of C_" + std::to_string(n);
  for (std::size_t i = 0; i < dec.orders.size(); ++i) {
    const auto target = dec.iso(dec.cyclic_sum.generator(i));
    const std::size_t k = valuation(dec.orders[i], t.p);
    // Lift in S_k, where every element of B_k has order dividing p^k.
    const auto iota = composite(t.maps, k - 1, n - 1, &TowerStep::gamma, t.levels[k - 1].g.target());
    const auto tk = preimage(iota, target);
    const auto x = preimage(t.levels[k - 1].g, *tk);
    const auto y = composite(t.maps, k - 1, n - 1, &TowerStep::beta, t.levels[k - 1].f.target())(*x);
    if (y.order() != target.order()) throw ValidationError("pushed lift has the wrong order: " + y.to_string());
    out.witnesses.emplace_back(target, y);
  }
  return out;
}

Section tower_split(const KummerTower& t) {
  const auto witnesses = tower_purity(t);
  const auto seq = t.top();
  const auto dec = pruefer_decompose(seq.c());
  std::vector<GroupElement> lifts;
  for (const auto& w : witnesses.witnesses) lifts.push_back(w.second);
  return section_from_lifts(seq, dec, lifts);
}

SigmaModel SigmaModel::make(const Integer& p, const IntMatrix& M) {
  if (!is_prime(p)) throw InputError("sigma model: " + p.get_str() + " is not prime");
  if (M.rows() != M.cols()) throw InputError("sigma model: M must be square");
  SigmaModel m;
  m.p = p;
  m.r = M.rows();
  m.M = M;
  // det M mod p from the Smith diagonal of M.
  const auto sm = smith_normal_form(M);
  const auto dm = sm.diagonal();
  bool unit = sm.rank == m.r;
  for (const auto& d : dm) unit = unit && d % p != 0;
  if (!unit) throw InputError("sigma model: det M is divisible by " + p.get_str());
  m.D = M - IntMatrix::identity(m.r);
  m.smith = smith_normal_form(m.D);
  const auto delta = m.smith.diagonal();
  for (std::size_t i = 0; i < m.smith.rank; ++i) m.e.push_back(valuation(delta[i], p));
  m.s = m.r - m.smith.rank;
  return m;
}

KummerTower sigma_kummer_tower(const SigmaModel& model, std::size_t n) {
  if (n == 0) throw InputError("tower needs at least one level");
  const std::size_t r = model.r, rho = model.smith.rank;
  const auto delta = model.smith.diagonal();
  std::vector<std::size_t> torsion_idx;
  for (std::size_t i = 0; i < rho; ++i)
    if (model.e[i] > 0) torsion_idx.push_back(i);

  // Connecting map: the class of 1/p^{e_i} goes to (delta_i / p^{e_i}) U^{-1} e_i.
  IntMatrix f_mat(r, torsion_idx.size());
  for (std::size_t j = 0; j < torsion_idx.size(); ++j) {
    const std::size_t i = torsion_idx[j];
    f_mat.set_column(j, scale(delta[i] / power(model.p, model.e[i]), model.smith.U_inverse.column(i)));
  }
  std::vector<std::size_t> free_rows;
  for (std::size_t i = rho; i < r; ++i) free_rows.push_back(i);
  const IntMatrix g_mat = model.smith.U.select_rows(free_rows);

  KummerTower t;
  t.p = model.p;
  std::vector<FgAbGroup> as, bs, cs;
  for (std::size_t k = 1; k <= n; ++k) {
    const Integer q = power(model.p, k);
    std::vector<Integer> a_orders;
    for (std::size_t i : torsion_idx) a_orders.push_back(power(model.p, std::min<std::size_t>(model.e[i], k)));
    as.push_back(FgAbGroup::from_orders(a_orders));
    bs.emplace_back(r, hconcat(model.D, IntMatrix::scalar(r, q)));
    cs.push_back(FgAbGroup::from_orders(std::vector<Integer>(model.s, q)));
    t.levels.push_back(TowerLevel{Homomorphism(as.back(), bs.back(), f_mat), Homomorphism(bs.back(), cs.back(), g_mat)});
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    t.maps.push_back(TowerStep{Homomorphism(as[k], as[k + 1], IntMatrix::scalar(torsion_idx.size(), model.p)),
                               Homomorphism(bs[k], bs[k + 1], IntMatrix::scalar(r, model.p)),
                               Homomorphism(cs[k], cs[k + 1], IntMatrix::scalar(model.s, model.p))});
  }
  return t;
}

namespace {

std::vector<TowerLevel> dual_levels(const std::vector<TowerLevel>& levels) {
  std::vector<TowerLevel> out;
  for (const auto& l : levels) out.push_back(TowerLevel{pontryagin_dual(l.g), pontryagin_dual(l.f)});
  return out;
}

std::vector<TowerStep> dual_steps(const std::vector<TowerStep>& maps) {
  std::vector<TowerStep> out;
  for (const auto& m : maps)
    out.push_back(TowerStep{pontryagin_dual(m.gamma), pontryagin_dual(m.beta), pontryagin_dual(m.alpha)});
  return out;
}

}  // namespace

CoKummerTower dualize_tower(const KummerTower& t) { return CoKummerTower{t.p, dual_levels(t.levels), dual_steps(t.maps)}; }

KummerTower dualize_tower(const CoKummerTower& t) { return KummerTower{t.p, dual_levels(t.levels), dual_steps(t.maps)}; }

Section dual_tower_split(const CoKummerTower& t) {
  const auto report = validate_tower(t);
  if (!report.valid()) throw ValidationError("invalid co-tower: " + report.summary());
  const auto seq = t.top();
  if (!seq.b().is_finite()) throw UnsupportedError("dual_tower_split needs finite groups");
  const KummerTower dual = dualize_tower(t);
  const Section t_hat = tower_split(dual);  // section of f^ : B^ -> A^
  // r = ev_A^{-1} o (t_hat)^ o ev_B is a retraction of f.
  const Homomorphism r =
      compose(inverse(double_dual(seq.a())), compose(pontryagin_dual(t_hat.map()), double_dual(seq.b())));
  return section_from_retraction(seq, r);
}

CrtAssembly assemble_crt(const std::vector<KummerTower>& towers) {
  if (towers.empty()) throw InputError("assemble_crt needs at least one tower");
  std::vector<ShortExactSequence> tops;
  for (const auto& t : towers) tops.push_back(t.top());
  Homomorphism f = tops[0].f(), g = tops[0].g();
  std::vector<Homomorphism> inj_b{Homomorphism::identity(tops[0].b())};
  std::vector<Homomorphism> proj_c{Homomorphism::identity(tops[0].c())};
  for (std::size_t i = 1; i < tops.size(); ++i) {
    const auto db = direct_sum(f.target(), tops[i].b());
    const auto dc = direct_sum(g.target(), tops[i].c());
    for (auto& h : inj_b) h = compose(db.inject_first, h);
    inj_b.push_back(db.inject_second);
    for (auto& h : proj_c) h = compose(h, dc.project_first);
    proj_c.push_back(dc.project_second);
    f = direct_sum(f, tops[i].f());
    g = direct_sum(g, tops[i].g());
  }
  CrtAssembly out{ShortExactSequence(f, g), {}};
  for (std::size_t i = 0; i < towers.size(); ++i) out.components.push_back(CrtComponent{towers[i], inj_b[i], proj_c[i]});
  return out;
}

Section crt_split(const Integer& m, const ShortExactSequence& seq, const std::vector<CrtComponent>& components) {
  Integer product = 1;
  std::vector<Integer> seen;
  Homomorphism total_pi = Homomorphism::zero(seq.c(), FgAbGroup());
  bool first = true;
  for (const auto& comp : components) {
    const std::string who = "prime " + comp.tower.p.get_str();
    const auto report = validate_tower(comp.tower);
    if (!report.valid()) throw InputError(who + ": invalid tower: " + report.summary());
    if (std::find(seen.begin(), seen.end(), comp.tower.p) != seen.end()) throw InputError(who + " appears twice");
    seen.push_back(comp.tower.p);
    product *= power(comp.tower.p, comp.tower.n());
    const auto& top = comp.tower.levels.back();
    if (!same(comp.iota_b.source(), top.f.target()) || !same(comp.iota_b.target(), seq.b()))
      throw InputError(who + ": iota_b must map the tower's B_n into B");
    if (!same(comp.pi_c.source(), seq.c()) || !same(comp.pi_c.target(), top.g.target()))
      throw InputError(who + ": pi_c must map C onto the tower's C_n");
    if (!(compose(comp.pi_c, compose(seq.g(), comp.iota_b)) == top.g))
      throw InputError(who + ": glue square pi_c o g o iota_b = g_n fails");
    if (first) {
      total_pi = comp.pi_c;
      first = false;
    } else {
      const auto dc = direct_sum(total_pi.target(), comp.pi_c.target());
      total_pi = Homomorphism(seq.c(), dc.group, vconcat(total_pi.matrix(), comp.pi_c.matrix()));
    }
  }
  if (product != m) throw InputError("towers cover " + product.get_str() + ", expected m = " + m.get_str());
  if (!total_pi.is_isomorphism()) throw InputError("glue: the projections do not decompose C");
  Homomorphism s = Homomorphism::zero(seq.c(), seq.b());
  for (const auto& comp : components) s = s + compose(comp.iota_b, compose(tower_split(comp.tower).map(), comp.pi_c));
  return Section(seq, s);
}

}  // namespace kummer
