#include "kummer/colimit.hpp"

#include "kummer/errors.hpp"

namespace kummer {

namespace {

IntMatrix square2(const Integer& a, const Integer& b, const Integer& c, const Integer& d) {
  IntMatrix m(2, 2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}

}  // namespace

ColimitTower::ColimitTower(Integer p, Family family, std::string tag, LevelFn level, StepFn step)
    : p_(std::move(p)),
      family_(family),
      tag_(std::move(tag)),
      level_fn_(std::move(level)),
      step_fn_(std::move(step)),
      cache_(std::make_shared<Cache>()) {
  if (!is_prime(p_)) throw InputError("colimit tower: " + p_.get_str() + " is not prime");
}

ColimitTower ColimitTower::user(Integer p, std::string tag, LevelFn level, StepFn step) {
  return ColimitTower(std::move(p), Family::user, std::move(tag), std::move(level), std::move(step));
}

TowerLevel ColimitTower::level(std::size_t k) const {
  if (k == 0) throw InputError("colimit levels start at 1");
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    if (auto it = cache_->levels.find(k); it != cache_->levels.end()) return it->second;
  }
  TowerLevel fresh = level_fn_(k);
  std::lock_guard<std::mutex> lock(cache_->mutex);
  return cache_->levels.emplace(k, std::move(fresh)).first->second;
}

TowerStep ColimitTower::step(std::size_t k) const {
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    if (auto it = cache_->steps.find(k); it != cache_->steps.end()) return it->second;
  }
  const TowerLevel lo = level(k), hi = level(k + 1);
  TowerStep fresh = step_fn_(k, lo, hi);
  std::lock_guard<std::mutex> lock(cache_->mutex);
  return cache_->steps.emplace(k, std::move(fresh)).first->second;
}

KummerTower ColimitTower::prefix(std::size_t n) const {
  KummerTower t;
  t.p = p_;
  for (std::size_t k = 1; k <= n; ++k) t.levels.push_back(level(k));
  for (std::size_t k = 1; k < n; ++k) t.maps.push_back(step(k));
  return t;
}

ColimitTower counterexample_tower(const Integer& p) {
  auto level = [p](std::size_t n) {
    std::vector<Integer> orders;
    IntMatrix g(1, n);
    for (std::size_t k = 1; k <= n; ++k) {
      orders.push_back(power(p, k));
      g(0, k - 1) = power(p, n - k);
    }
    const FgAbGroup b = FgAbGroup::from_orders(orders);
    const Homomorphism gn(b, FgAbGroup::cyclic(power(p, n)), g);
    const auto a = kernel(gn);
    return TowerLevel{a.map, gn};
  };
  auto step = [p](std::size_t n, const TowerLevel& lo, const TowerLevel& hi) {
    const IntMatrix psi = vconcat(IntMatrix::identity(n), IntMatrix(1, n));
    const Homomorphism beta(lo.f.target(), hi.f.target(), psi);
    const Homomorphism eta(lo.g.target(), hi.g.target(), IntMatrix::scalar(1, p));
    std::vector<IntVector> cols;
    for (std::size_t j = 0; j < lo.f.source().generator_count(); ++j)
      cols.push_back(preimage(hi.f, beta(lo.f(lo.f.source().generator(j))))->coords());
    const Homomorphism phi(lo.f.source(), hi.f.source(), IntMatrix::from_columns(hi.f.source().generator_count(), cols));
    return TowerStep{phi, beta, eta};
  };
  return ColimitTower(p, ColimitTower::Family::counterexample, "counterexample", level, step);
}

TowerReport check_family_contract(const ColimitTower& t, std::size_t n) {
  if (t.family() != ColimitTower::Family::counterexample) return validate_tower(t.prefix(n));
  TowerReport report;
  auto add = [&](std::size_t level, std::string check, std::string detail, std::optional<GroupElement> w) {
    report.violations.push_back(TowerViolation{level, std::move(check), std::move(detail), std::move(w)});
  };
  for (std::size_t k = 1; k <= n; ++k) {
    const auto l = t.level(k);
    const auto r = exactness_report(l.f, l.g);
    if (!r.exact()) add(k, "exact", r.failure, std::nullopt);
  }
  for (std::size_t k = 1; k < n; ++k) {
    const auto lo = t.level(k), hi = t.level(k + 1);
    const auto s = t.step(k);
    if (!(compose(s.gamma, lo.g) == compose(hi.g, s.beta))) add(k, "square-right", "eta o g != g o psi", std::nullopt);
    if (!(compose(s.beta, lo.f) == compose(hi.f, s.alpha))) add(k, "square-left", "psi does not restrict to phi", std::nullopt);
  }
  return report;
}

Section level_section(const ColimitTower& t, std::size_t n) {
  if (t.family() == ColimitTower::Family::counterexample) {
    const auto l = t.level(n);
    const ShortExactSequence seq(l.f, l.g);
    return Section(seq, Homomorphism(seq.c(), seq.b(), IntMatrix::from_columns(n, {unit_vector(n, n - 1)})));
  }
  return tower_split(t.prefix(n));
}

namespace {

const FgAbGroup& column_group(const TowerLevel& l, Column c) {
  switch (c) {
    case Column::A:
      return l.f.source();
    case Column::B:
      return l.f.target();
    default:
      return l.g.target();
  }
}

const Homomorphism& column_map(const TowerStep& s, Column c) {
  switch (c) {
    case Column::A:
      return s.alpha;
    case Column::B:
      return s.beta;
    default:
      return s.gamma;
  }
}

Homomorphism transition(const ColimitTower& t, Column c, std::size_t from, std::size_t to) {
  Homomorphism h = Homomorphism::identity(column_group(t.level(from), c));
  for (std::size_t k = from; k < to; ++k) h = compose(column_map(t.step(k), c), h);
  return h;
}

}  // namespace

GroupElement push_forward(const ColimitTower& t, const ColimitElement& e, std::size_t to_level) {
  if (to_level < e.level) throw InputError("cannot push an element to a lower level");
  GroupElement x = e.value;
  for (std::size_t k = e.level; k < to_level; ++k) x = column_map(t.step(k), e.column)(x);
  return x;
}

ColimitElement canonicalize(const ColimitTower& t, const ColimitElement& e) {
  for (std::size_t j = 1; j < e.level; ++j)
    if (auto y = preimage(transition(t, e.column, j, e.level), e.value)) return ColimitElement{e.column, j, *y};
  return e;
}

Integer colimit_order(const ColimitTower&, const ColimitElement& e) {
  const auto o = e.value.order();
  if (!o) throw UnsupportedError("element of infinite order in a torsion colimit");
  return *o;
}

std::string Height::to_string() const { return (at_least ? ">= " : "") + std::to_string(value); }

Height colimit_height_probe(const ColimitTower& t, const ColimitElement& e, unsigned long depth) {
  if (e.value.is_zero()) return Height{depth, true};
  const std::size_t top = e.level + depth;
  const GroupElement x = push_forward(t, e, top);
  const FgAbGroup& g = x.parent();
  for (unsigned long h = depth + 1; h-- > 0;) {
    const IntMatrix m = IntMatrix::scalar(g.generator_count(), power(t.p(), h));
    if (solve_integer_system(m, x.coords(), g.relations())) return Height{h, h == depth};
  }
  return Height{0, depth == 0};
}

Height colimit_height(const ColimitTower& t, const ColimitElement& e, unsigned long depth) {
  if (t.family() != ColimitTower::Family::counterexample || e.column == Column::A)
    return colimit_height_probe(t, e, depth);
  if (e.value.is_zero() || e.column == Column::C) return Height{depth, true};
  // Coordinates of B_n are residues mod p^k; psi appends zeros, so the height is level-free.
  unsigned long v = depth;
  for (const auto& x : e.value.coords())
    if (x != 0) v = std::min<unsigned long>(v, valuation(x, t.p()));
  return Height{v, v >= depth};
}

bool NoSectionCertificate::valid() const {
  auto all = [](const std::vector<bool>& v) {
    for (bool b : v)
      if (!b) return false;
    return !v.empty();
  };
  return depth > 0 && all(divisible) && heights_match && all(level_sections) && all(compatibility_unsolvable);
}

bool compatibility_solvable(const ColimitTower& t, std::size_t n) {
  const auto hi = t.level(n + 1);
  const std::size_t bh = n + 1, bl = n;
  // unknowns (u, v): g_{n+1} u = 1 in C_{n+1}, p u - psi v = 0 in B_{n+1}
  IntMatrix sys(1 + bh, bh + bl);
  for (std::size_t j = 0; j < bh; ++j) sys(0, j) = hi.g.matrix()(0, j);
  for (std::size_t i = 0; i < bh; ++i) sys(1 + i, i) = t.p();
  for (std::size_t i = 0; i < bl; ++i) sys(1 + i, bh + i) = -1;
  IntVector rhs(1 + bh, 0);
  rhs[0] = 1;
  return solve_integer_system(sys, rhs, block_diagonal(hi.g.target().relations(), hi.f.target().relations())).has_value();
}

NoSectionCertificate limit_no_section_certificate(const ColimitTower& t, std::size_t depth) {
  if (t.family() != ColimitTower::Family::counterexample)
    throw UnsupportedError("no-section certificate is defined for the counterexample family only, got " + t.tag());
  if (depth == 0) throw InputError("depth must be positive");
  NoSectionCertificate cert;
  cert.p = t.p();
  cert.depth = depth;
  const ColimitElement c{Column::C, 1, t.level(1).g.target().generator(0)};
  for (std::size_t h = 1; h <= depth; ++h) {
    const auto x = push_forward(t, c, 1 + h);
    const IntMatrix m{{1}};
    cert.divisible.push_back(solve_integer_system(power(t.p(), h) * m, x.coords(), x.parent().relations()).has_value());
  }
  cert.heights_match = true;
  const std::size_t probe_levels = std::min<std::size_t>(depth, t.p() == 2 ? 3 : 2);
  for (std::size_t n = 1; n <= probe_levels; ++n)
    for (const auto& b : t.level(n).f.target().elements()) {
      const ColimitElement e{Column::B, n, b};
      cert.heights_match = cert.heights_match && colimit_height(t, e, depth) == colimit_height_probe(t, e, depth);
      ++cert.heights_checked;
    }
  for (std::size_t n = 1; n <= depth; ++n) {
    bool ok = true;
    try {
      level_section(t, n);
    } catch (const std::exception&) {
      ok = false;
    }
    cert.level_sections.push_back(ok);
    cert.compatibility_unsolvable.push_back(!compatibility_solvable(t, n));
  }
  cert.inference =
      "a section s would send the p-divisible class c of C_inf to an element of B_inf of the same "
      "divisibility, but every nonzero element of B_inf at level n has height at most n - 1";
  return cert;
}

ColimitElement limit_purity_witness(const ColimitTower& t, const ColimitElement& c) {
  if (c.column != Column::C) throw InputError("limit_purity_witness expects an element of C");
  if (c.value.is_zero()) return ColimitElement{Column::B, c.level, t.level(c.level).f.target().zero()};
  const Integer order = colimit_order(t, c);
  const std::size_t j = valuation(order, t.p());
  if (power(t.p(), j) != order) throw InputError("element order is not a power of p");
  const auto canon = canonicalize(t, c);
  const std::size_t level = std::max(canon.level, j);
  const GroupElement at = push_forward(t, canon, level);
  const auto l = t.level(level);
  GroupElement b = t.family() == ColimitTower::Family::counterexample
                       ? level_section(t, level).map()(at)
                       : *preimage(l.g, at);
  if (b.order() != at.order()) throw ValidationError("lift at level " + std::to_string(level) + " has the wrong order");
  return ColimitElement{Column::B, level, b};
}

FgAbGroup decomposition_target(const Integer& p, std::size_t d, const FgAbGroup& m, std::size_t precision) {
  return FgAbGroup(d + m.generator_count(), block_diagonal(IntMatrix::scalar(d, power(p, precision)), m.relations()));
}

namespace {

// Compatible maps r_k : B_k -> X (k = 1..n) with r_k f_k = theta_k and r_{k+1} beta_k = r_k.
std::optional<std::vector<IntMatrix>> solve_retraction_family(const std::vector<TowerLevel>& levels,
                                                              const std::vector<TowerStep>& steps,
                                                              const std::vector<IntMatrix>& theta,
                                                              const FgAbGroup& x) {
  const std::size_t n = levels.size(), t = x.generator_count();
  std::vector<std::size_t> offset{0};
  for (const auto& l : levels) offset.push_back(offset.back() + t * l.f.target().generator_count());
  if (t == 0) {
    std::vector<IntMatrix> zero;
    for (const auto& l : levels) zero.emplace_back(0, l.f.target().generator_count());
    return zero;
  }
  const IntMatrix& rx = x.relations();
  const IntMatrix it = IntMatrix::identity(t);
  IntMatrix sys(0, offset.back()), mod(0, 0);
  IntVector rhs;
  auto add = [&](const std::vector<std::pair<std::size_t, IntMatrix>>& blocks, const IntVector& b, const IntMatrix& m) {
    const std::size_t rows = m.rows();
    IntMatrix block(rows, offset.back());
    for (const auto& [k, coef] : blocks)
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < coef.cols(); ++j) block(i, offset[k] + j) = coef(i, j);
    sys = vconcat(sys, block);
    mod = block_diagonal(mod, m);
    rhs.insert(rhs.end(), b.begin(), b.end());
  };
  for (std::size_t k = 0; k < n; ++k) {
    const IntMatrix& f = levels[k].f.matrix();
    IntVector vec_theta;
    for (std::size_t j = 0; j < theta[k].cols(); ++j)
      for (std::size_t i = 0; i < t; ++i) vec_theta.push_back(theta[k](i, j));
    if (f.cols() > 0) add({{k, kronecker(f.transpose(), it)}}, vec_theta, kronecker(IntMatrix::identity(f.cols()), rx));
    const IntMatrix& rel = levels[k].f.target().relations();
    if (rel.cols() > 0)
      add({{k, kronecker(rel.transpose(), it)}}, IntVector(t * rel.cols(), 0), kronecker(IntMatrix::identity(rel.cols()), rx));
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const IntMatrix& beta = steps[k].beta.matrix();
    const std::size_t bk = beta.cols();
    add({{k + 1, kronecker(beta.transpose(), it)}, {k, Integer(-1) * IntMatrix::identity(t * bk)}}, IntVector(t * bk, 0),
        kronecker(IntMatrix::identity(bk), rx));
  }
  const auto sol = solve_integer_system(sys, rhs, mod);
  if (!sol) return std::nullopt;
  std::vector<IntMatrix> out;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t b = levels[k].f.target().generator_count();
    IntMatrix r(t, b);
    for (std::size_t j = 0; j < b; ++j)
      for (std::size_t i = 0; i < t; ++i) r(i, j) = (*sol)[offset[k] + j * t + i];
    out.push_back(std::move(r));
  }
  return out;
}

DirectLimitSplit split_case2(const ColimitTower& t, std::size_t n) {
  const auto gamma = t.step(n).gamma;
  if (!gamma.is_surjective())
    throw InputError("case 2 hypothesis fails: C[p^" + std::to_string(n + 1) + "] != C[p^" + std::to_string(n) +
                     "], C[p^inf] is not bounded at this level");
  const auto report = validate_tower(t.prefix(n + 1));
  if (!report.valid()) throw InputError("case 2 hypothesis fails: not a Kummer tower: " + report.summary());
  DirectLimitSplit out{2, n, n, 0, tower_split(t.prefix(n)).map(), {}, {}};
  out.checks.push_back("gamma_" + std::to_string(n) + " is onto, so C[p^inf] = C[p^" + std::to_string(n) + "]");
  out.checks.push_back("section of S_" + std::to_string(n) + " verified");
  return out;
}

DirectLimitSplit split_case1(const ColimitTower& t, const DirectLimitHypothesis& h) {
  if (!h.decomposition) throw InputError("case 1 hypothesis fails: no decomposition lim A = D + M supplied");
  const auto& dec = *h.decomposition;
  const Integer& p = t.p();
  const std::size_t n = h.n;
  if (!dec.bounded.is_finite()) throw InputError("case 1: M must be finite");
  const Integer exp_m = dec.bounded.exponent();
  const std::size_t e = exp_m == 1 ? 0 : valuation(exp_m, p);
  if (power(p, e) != exp_m) throw InputError("case 1: M is not a p-group");
  const std::size_t level = h.precision.value_or(n + e + 2);
  if (level < n + e) throw InputError("case 1: precision " + std::to_string(level) + " is below n + v_p(exp M)");

  const KummerTower pre = t.prefix(level);
  const auto report = validate_tower(pre);
  if (!report.valid()) throw InputError("case 1 hypothesis fails: not a Kummer tower: " + report.summary());

  const std::size_t d = dec.divisible_rank;
  const FgAbGroup target = decomposition_target(p, d, dec.bounded, level);
  std::vector<Homomorphism> theta;
  for (std::size_t k = 1; k <= level; ++k) {
    theta.push_back(dec.theta(k, level));
    if (!theta.back().source().same_presentation(pre.levels[k - 1].f.source()) ||
        !theta.back().target().same_presentation(target))
      throw InputError("case 1: theta_" + std::to_string(k) + " has the wrong source or target");
  }
  for (std::size_t k = 1; k < level; ++k)
    if (!(compose(theta[k], pre.maps[k - 1].alpha) == theta[k - 1]))
      throw InputError("case 1: theta is not compatible with alpha at level " + std::to_string(k));
  const Homomorphism& theta_top = theta.back();
  if (!theta_top.is_injective()) throw InputError("case 1: theta at the precision level is not injective");
  const Subgroup img = Subgroup::image_of(theta_top);
  for (std::size_t i = 0; i < target.generator_count(); ++i) {
    const Integer scale_by = i < d ? power(p, level - n) : Integer(1);
    if (!img.contains(scale_by * target.generator(i)))
      throw InputError("case 1: the image of A does not cover D[p^n] + M at the declared precision");
  }

  // The two pushed-out sequences: D-part by injectivity, M-part through the bounded levels.
  const std::vector<TowerLevel> levels(pre.levels.begin(), pre.levels.begin() + static_cast<long>(n));
  const std::vector<TowerStep> steps(pre.maps.begin(), pre.maps.begin() + static_cast<long>(n - 1));
  std::vector<std::size_t> d_rows, m_rows;
  for (std::size_t i = 0; i < d; ++i) d_rows.push_back(i);
  for (std::size_t i = d; i < target.generator_count(); ++i) m_rows.push_back(i);
  std::vector<IntMatrix> theta_d, theta_m;
  for (std::size_t k = 0; k < n; ++k) {
    theta_d.push_back(theta[k].matrix().select_rows(d_rows));
    theta_m.push_back(theta[k].matrix().select_rows(m_rows));
  }
  const auto rd = solve_retraction_family(levels, steps, theta_d, FgAbGroup::from_orders(std::vector<Integer>(d, power(p, level))));
  if (!rd) throw ValidationError("case 1: no extension into the divisible part at the declared precision");
  const auto rm = solve_retraction_family(levels, steps, theta_m, dec.bounded);
  if (!rm) throw ValidationError("case 1: the bounded part does not split");

  DirectLimitSplit out{1, n, level, level, Homomorphism::zero(FgAbGroup(), FgAbGroup()), {}, {}};
  for (std::size_t k = 0; k < n; ++k)
    out.retractions.emplace_back(levels[k].f.target(), target, vconcat((*rd)[k], (*rm)[k]));

  const ShortExactSequence sn(levels[n - 1].f, levels[n - 1].g);
  const TowerLevel& top = pre.levels[level - 1];
  Homomorphism push_b = Homomorphism::identity(sn.b());
  Homomorphism push_c = Homomorphism::identity(sn.c());
  for (std::size_t k = n; k < level; ++k) {
    push_b = compose(pre.maps[k - 1].beta, push_b);
    push_c = compose(pre.maps[k - 1].gamma, push_c);
  }
  std::vector<IntVector> cols;
  for (std::size_t j = 0; j < sn.c().generator_count(); ++j) {
    const auto b = *preimage(sn.g(), sn.c().generator(j));
    const auto a = preimage(theta_top, out.retractions.back()(b));
    if (!a) throw ValidationError("case 1: retraction value outside the image of A");
    cols.push_back((push_b(b) - top.f(*a)).coords());
  }
  out.section = Homomorphism(sn.c(), top.f.target(), IntMatrix::from_columns(top.f.target().generator_count(), cols));
  if (!(compose(top.g, out.section) == push_c)) throw ValidationError("case 1: g o s is not the inclusion");
  out.checks.push_back("tower valid up to level " + std::to_string(level));
  out.checks.push_back("theta compatible and injective at precision " + std::to_string(level));
  out.checks.push_back("retractions r_k f_k = theta_k, r_{k+1} beta_k = r_k for k <= " + std::to_string(n));
  out.checks.push_back("g o s = inclusion of C[p^" + std::to_string(n) + "]");
  return out;
}

}  // namespace

DirectLimitSplit direct_limit_split(const ColimitTower& t, const DirectLimitHypothesis& h) {
  if (h.n == 0) throw InputError("direct_limit_split: level must be positive");
  if (h.which == 2) return split_case2(t, h.n);
  if (h.which == 1) return split_case1(t, h);
  throw InputError("direct_limit_split: case must be 1 or 2");
}

ColimitTower stabilizing_tower(const Integer& p) {
  auto c_exp = [](std::size_t k) { return std::min<std::size_t>(k, 2); };
  auto level = [p, c_exp](std::size_t k) {
    const auto s = direct_sum(FgAbGroup::cyclic(power(p, k)), FgAbGroup::cyclic(power(p, c_exp(k))));
    return TowerLevel{s.inject_first, s.project_second};
  };
  auto step = [p, c_exp](std::size_t k, const TowerLevel& lo, const TowerLevel& hi) {
    const Integer gamma = k == 1 ? p : Integer(1);
    const Integer twist = power(p, k + 1 - c_exp(k));
    return TowerStep{Homomorphism(lo.f.source(), hi.f.source(), IntMatrix::scalar(1, p)),
                     Homomorphism(lo.f.target(), hi.f.target(), square2(p, twist, 0, gamma)),
                     Homomorphism(lo.g.target(), hi.g.target(), IntMatrix::scalar(1, gamma))};
  };
  return ColimitTower::user(p, "stabilizing", level, step);
}

ColimitTower divisible_kernel_tower(const Integer& p) {
  auto level = [p](std::size_t k) {
    const auto s = direct_sum(FgAbGroup::cyclic(power(p, k)), FgAbGroup::cyclic(p));
    return TowerLevel{s.inject_first, s.project_second};
  };
  auto step = [p](std::size_t k, const TowerLevel& lo, const TowerLevel& hi) {
    return TowerStep{Homomorphism(lo.f.source(), hi.f.source(), IntMatrix::scalar(1, p)),
                     Homomorphism(lo.f.target(), hi.f.target(), square2(p, power(p, k), 0, 1)),
                     Homomorphism::identity(lo.g.target())};
  };
  return ColimitTower::user(p, "divisible-kernel", level, step);
}

DivisibleDecomposition divisible_kernel_decomposition(const Integer& p) {
  DivisibleDecomposition d;
  d.divisible_rank = 1;
  d.theta = [p](std::size_t k, std::size_t precision) {
    if (k > precision) throw InputError("theta: level above precision");
    return Homomorphism(FgAbGroup::cyclic(power(p, k)), decomposition_target(p, 1, FgAbGroup(), precision),
                        IntMatrix::scalar(1, power(p, precision - k)));
  };
  return d;
}

}  // namespace kummer
