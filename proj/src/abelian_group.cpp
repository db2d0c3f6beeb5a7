#include "kummer/abelian_group.hpp"

#include <sstream>

#include "kummer/errors.hpp"

namespace kummer {

namespace {

constexpr long kMaxEnumeration = 1L << 24;

// Basis of {x : h x ∈ colspan(relations)} for an integer matrix h.
IntMatrix lattice_preimage(const IntMatrix& h, const IntMatrix& relations) {
  const IntMatrix kernel = integer_kernel(hconcat(h, relations));
  return column_hermite_form(kernel.block(0, h.cols(), 0, kernel.cols())).lattice_basis();
}

}  // namespace

struct FgAbGroup::Data {
  std::size_t generators = 0;
  IntMatrix relations;
  SmithDecomposition snf;
  HermiteForm hnf;
  std::vector<Integer> invariants;
  std::size_t free_rank = 0;
  std::vector<Integer> moduli;
  IntMatrix to_smith;
  IntMatrix from_smith;
};

FgAbGroup::FgAbGroup() : FgAbGroup(0, IntMatrix(0, 0)) {}

FgAbGroup::FgAbGroup(std::size_t generators, IntMatrix relations) {
  if (relations.rows() != generators && !(relations.rows() == 0 && relations.cols() == 0)) {
    throw InputError("relation matrix has " + std::to_string(relations.rows()) + " rows for " +
                     std::to_string(generators) + " generators");
  }
  auto d = std::make_shared<Data>();
  d->generators = generators;
  d->relations = relations.rows() == generators ? std::move(relations) : IntMatrix(generators, 0);
  d->snf = smith_normal_form(d->relations);
  d->hnf = column_hermite_form(d->relations);
  std::vector<std::size_t> finite_rows, free_rows;
  for (std::size_t i = 0; i < generators; ++i) {
    if (i < d->snf.rank) {
      if (d->snf.S(i, i) != 1) {
        finite_rows.push_back(i);
        d->invariants.push_back(d->snf.S(i, i));
      }
    } else {
      free_rows.push_back(i);
    }
  }
  d->free_rank = free_rows.size();
  std::vector<std::size_t> kept = finite_rows;
  kept.insert(kept.end(), free_rows.begin(), free_rows.end());
  d->moduli = d->invariants;
  d->moduli.resize(kept.size(), 0);
  d->to_smith = d->snf.U.select_rows(kept);
  d->from_smith = d->snf.U_inverse.select_columns(kept);
  d_ = std::move(d);
}

FgAbGroup FgAbGroup::cyclic(const Integer& n) {
  if (n == 0) return free(1);
  return FgAbGroup(1, IntMatrix(1, 1, {abs(n)}));
}

FgAbGroup FgAbGroup::free(std::size_t rank) { return FgAbGroup(rank, IntMatrix(rank, 0)); }

FgAbGroup FgAbGroup::from_orders(const std::vector<Integer>& orders) {
  std::vector<IntVector> cols;
  for (std::size_t i = 0; i < orders.size(); ++i)
    if (orders[i] != 0) cols.push_back(scale(orders[i], unit_vector(orders.size(), i)));
  return FgAbGroup(orders.size(), IntMatrix::from_columns(orders.size(), cols));
}

FgAbGroup FgAbGroup::from_orders(std::initializer_list<long> orders) {
  std::vector<Integer> v;
  for (long o : orders) v.emplace_back(o);
  return from_orders(v);
}

std::size_t FgAbGroup::generator_count() const { return d_->generators; }
const IntMatrix& FgAbGroup::relations() const { return d_->relations; }
const SmithDecomposition& FgAbGroup::smith() const { return d_->snf; }
const HermiteForm& FgAbGroup::hermite() const { return d_->hnf; }
const std::vector<Integer>& FgAbGroup::invariant_factors() const { return d_->invariants; }
std::size_t FgAbGroup::free_rank() const { return d_->free_rank; }
const std::vector<Integer>& FgAbGroup::smith_moduli() const { return d_->moduli; }
const IntMatrix& FgAbGroup::to_smith_matrix() const { return d_->to_smith; }
const IntMatrix& FgAbGroup::from_smith_matrix() const { return d_->from_smith; }

Integer FgAbGroup::order() const {
  if (!is_finite()) throw UnsupportedError("order of infinite group " + describe());
  Integer n = 1;
  for (const auto& d : d_->invariants) n *= d;
  return n;
}

Integer FgAbGroup::exponent() const {
  if (!is_finite()) return 0;
  return d_->invariants.empty() ? Integer(1) : d_->invariants.back();
}

IntVector FgAbGroup::to_smith(const IntVector& x) const {
  IntVector y = d_->to_smith * std::span<const Integer>(x);
  for (std::size_t i = 0; i < y.size(); ++i)
    if (d_->moduli[i] != 0) y[i] = mod(y[i], d_->moduli[i]);
  return y;
}

IntVector FgAbGroup::from_smith(const IntVector& y) const {
  return canonical(d_->from_smith * std::span<const Integer>(y));
}

IntVector FgAbGroup::canonical(IntVector coords) const {
  if (coords.size() != d_->generators) {
    throw InputError("element has " + std::to_string(coords.size()) + " coordinates, group has " +
                     std::to_string(d_->generators) + " generators");
  }
  return d_->hnf.reduce(std::move(coords));
}

GroupElement FgAbGroup::element(IntVector coords) const { return GroupElement(*this, canonical(std::move(coords))); }
GroupElement FgAbGroup::zero() const { return GroupElement(*this, IntVector(d_->generators)); }
GroupElement FgAbGroup::generator(std::size_t i) const { return element(unit_vector(d_->generators, i)); }

std::vector<GroupElement> FgAbGroup::elements() const {
  const Integer n = order();
  if (n > kMaxEnumeration) throw UnsupportedError("refusing to enumerate group of order " + n.get_str());
  const auto& m = d_->moduli;
  std::vector<GroupElement> out;
  out.reserve(n.get_ui());
  IntVector y(m.size());
  for (unsigned long idx = 0; idx < n.get_ui(); ++idx) {
    out.push_back(GroupElement(*this, from_smith(y)));
    for (std::size_t i = m.size(); i-- > 0;) {
      if (++y[i] < m[i]) break;
      y[i] = 0;
    }
  }
  return out;
}

bool FgAbGroup::same_presentation(const FgAbGroup& other) const {
  return d_ == other.d_ || (d_->generators == other.d_->generators && d_->relations == other.d_->relations);
}

std::string FgAbGroup::describe() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& d : d_->invariants) {
    os << (first ? "" : " + ") << "Z/" << d.get_str();
    first = false;
  }
  if (d_->free_rank > 0) {
    os << (first ? "" : " + ") << "Z";
    if (d_->free_rank > 1) os << '^' << d_->free_rank;
    first = false;
  }
  return first ? "0" : os.str();
}

// ---------------------------------------------------------------------------

GroupElement::GroupElement(FgAbGroup parent, IntVector canonical_coords)
    : parent_(std::move(parent)), coords_(std::move(canonical_coords)) {}

std::optional<Integer> GroupElement::order() const {
  const IntVector y = parent_.to_smith(coords_);
  const auto& m = parent_.smith_moduli();
  Integer n = 1;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 0) continue;
    if (m[i] == 0) return std::nullopt;
    n = lcm(n, m[i] / gcd(m[i], y[i]));
  }
  return n;
}

std::optional<Integer> element_order(const GroupElement& x) { return x.order(); }

namespace {
void require_same_parent(const GroupElement& a, const GroupElement& b) {
  if (!a.parent().same_presentation(b.parent())) throw InputError("elements of different groups");
}
}  // namespace

GroupElement GroupElement::operator+(const GroupElement& o) const {
  require_same_parent(*this, o);
  return parent_.element(add(coords_, o.coords_));
}

GroupElement GroupElement::operator-(const GroupElement& o) const {
  require_same_parent(*this, o);
  return parent_.element(sub(coords_, o.coords_));
}

GroupElement GroupElement::operator-() const { return parent_.element(scale(-1, coords_)); }

GroupElement operator*(const Integer& n, const GroupElement& x) { return x.parent_.element(scale(n, x.coords_)); }

bool GroupElement::operator==(const GroupElement& o) const {
  return parent_.same_presentation(o.parent_) && coords_ == o.coords_;
}

std::string GroupElement::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < coords_.size(); ++i) os << (i ? "," : "") << coords_[i].get_str();
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------------------

Homomorphism::Homomorphism(FgAbGroup source, FgAbGroup target, IntMatrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
  if (matrix_.rows() == 0 && matrix_.cols() == 0) matrix_ = IntMatrix(target_.generator_count(), source_.generator_count());
  if (matrix_.rows() != target_.generator_count() || matrix_.cols() != source_.generator_count()) {
    throw InputError("homomorphism matrix is " + std::to_string(matrix_.rows()) + "x" + std::to_string(matrix_.cols()) +
                     ", expected " + std::to_string(target_.generator_count()) + "x" +
                     std::to_string(source_.generator_count()));
  }
  const IntMatrix& rel = source_.relations();
  for (std::size_t j = 0; j < rel.cols(); ++j) {
    const IntVector image = matrix_ * std::span<const Integer>(rel.column(j));
    if (!target_.hermite().contains(image)) {
      throw ValidationError("map is not well defined: relator " + std::to_string(j) + " of the source maps to " +
                            GroupElement(target_, target_.canonical(image)).to_string() + " != 0");
    }
  }
}

Homomorphism Homomorphism::identity(const FgAbGroup& g) {
  return Homomorphism(g, g, IntMatrix::identity(g.generator_count()));
}

Homomorphism Homomorphism::zero(const FgAbGroup& source, const FgAbGroup& target) {
  return Homomorphism(source, target, IntMatrix(target.generator_count(), source.generator_count()));
}

Homomorphism Homomorphism::multiplication(const FgAbGroup& g, const Integer& n) {
  return Homomorphism(g, g, IntMatrix::scalar(g.generator_count(), n));
}

GroupElement Homomorphism::operator()(const GroupElement& x) const {
  if (!x.parent().same_presentation(source_)) throw InputError("element is not in the source group");
  return apply(x.coords());
}

GroupElement Homomorphism::apply(const IntVector& coords) const {
  return target_.element(matrix_ * std::span<const Integer>(coords));
}

bool Homomorphism::operator==(const Homomorphism& o) const {
  if (!source_.same_presentation(o.source_) || !target_.same_presentation(o.target_)) return false;
  for (std::size_t j = 0; j < source_.generator_count(); ++j) {
    if (!target_.hermite().contains(sub(matrix_.column(j), o.matrix_.column(j)))) return false;
  }
  return true;
}

bool Homomorphism::is_zero() const { return *this == zero(source_, target_); }
bool Homomorphism::is_injective() const { return kernel(*this).group.is_trivial(); }
bool Homomorphism::is_surjective() const { return cokernel(*this).group.is_trivial(); }

IntMatrix Homomorphism::smith_matrix() const {
  IntMatrix t = target_.to_smith_matrix() * matrix_ * source_.from_smith_matrix();
  const auto& m = target_.smith_moduli();
  for (std::size_t i = 0; i < t.rows(); ++i)
    if (m[i] != 0)
      for (std::size_t j = 0; j < t.cols(); ++j) t(i, j) = mod(t(i, j), m[i]);
  return t;
}

Homomorphism compose(const Homomorphism& after, const Homomorphism& before) {
  if (!before.target().same_presentation(after.source())) {
    throw InputError("cannot compose: target " + before.target().describe() + " does not match source " +
                     after.source().describe());
  }
  return Homomorphism(before.source(), after.target(), after.matrix() * before.matrix());
}

Homomorphism operator+(const Homomorphism& a, const Homomorphism& b) {
  if (!a.source().same_presentation(b.source()) || !a.target().same_presentation(b.target()))
    throw InputError("cannot add homomorphisms with different source or target");
  return Homomorphism(a.source(), a.target(), a.matrix() + b.matrix());
}

Homomorphism operator-(const Homomorphism& a, const Homomorphism& b) { return a + Integer(-1) * b; }

Homomorphism operator*(const Integer& n, const Homomorphism& h) {
  return Homomorphism(h.source(), h.target(), n * h.matrix());
}

std::optional<GroupElement> preimage(const Homomorphism& h, const GroupElement& y) {
  if (!y.parent().same_presentation(h.target())) throw InputError("element is not in the target group");
  auto x = solve_integer_system(h.matrix(), y.coords(), h.target().relations());
  if (!x) return std::nullopt;
  return h.source().element(std::move(*x));
}

Homomorphism inverse(const Homomorphism& h) {
  if (!h.is_isomorphism()) throw InputError("inverse of a map that is not an isomorphism");
  const FgAbGroup& t = h.target();
  std::vector<IntVector> cols;
  for (std::size_t j = 0; j < t.generator_count(); ++j) cols.push_back(preimage(h, t.generator(j))->coords());
  return Homomorphism(t, h.source(), IntMatrix::from_columns(h.source().generator_count(), cols));
}

// ---------------------------------------------------------------------------

Subgroup::Subgroup(FgAbGroup ambient, IntMatrix generators)
    : ambient_(std::move(ambient)), generators_(std::move(generators)) {
  if (generators_.rows() == 0 && generators_.cols() == 0) generators_ = IntMatrix(ambient_.generator_count(), 0);
  if (generators_.rows() != ambient_.generator_count()) throw InputError("subgroup generators have wrong length");
  span_ = column_hermite_form(hconcat(generators_, ambient_.relations()));
}

Subgroup Subgroup::image_of(const Homomorphism& h) { return Subgroup(h.target(), h.matrix()); }

bool Subgroup::contains(const GroupElement& x) const {
  if (!x.parent().same_presentation(ambient_)) throw InputError("element is not in the ambient group");
  return span_.contains(x.coords());
}

std::optional<GroupElement> Subgroup::first_outside(const Subgroup& other) const {
  for (std::size_t j = 0; j < other.generators_.cols(); ++j) {
    const IntVector v = other.generators_.column(j);
    if (!span_.contains(v)) return ambient_.element(v);
  }
  return std::nullopt;
}

bool Subgroup::contains(const Subgroup& other) const { return !first_outside(other).has_value(); }

Subgroup Subgroup::intersect(const Subgroup& other) const {
  const IntMatrix k = integer_kernel(hconcat(hconcat(generators_, other.generators_), ambient_.relations()));
  const IntMatrix coeffs = k.block(0, generators_.cols(), 0, k.cols());
  return Subgroup(ambient_, generators_ * coeffs);
}

Subgroup Subgroup::scaled(const Integer& n) const { return Subgroup(ambient_, n * generators_); }

Homomorphism Subgroup::inclusion() const {
  return image(Homomorphism(FgAbGroup::free(generators_.cols()), ambient_, generators_)).map;
}

// ---------------------------------------------------------------------------

Simplification simplify(const FgAbGroup& g) {
  const auto& m = g.smith_moduli();
  FgAbGroup s = FgAbGroup::from_orders(m);
  return Simplification{s, Homomorphism(s, g, g.from_smith_matrix()), Homomorphism(g, s, g.to_smith_matrix())};
}

SubgroupMap kernel(const Homomorphism& h) {
  const FgAbGroup& a = h.source();
  const IntMatrix basis = lattice_preimage(h.matrix(), h.target().relations());
  const IntMatrix rel = lattice_preimage(basis, a.relations());
  const FgAbGroup raw(basis.cols(), rel);
  const auto s = simplify(raw);
  return {s.group, Homomorphism(s.group, a, basis * s.to_original.matrix())};
}

SubgroupMap image(const Homomorphism& h) {
  const IntMatrix rel = lattice_preimage(h.matrix(), h.target().relations());
  const FgAbGroup raw(h.source().generator_count(), rel);
  const auto s = simplify(raw);
  return {s.group, Homomorphism(s.group, h.target(), h.matrix() * s.to_original.matrix())};
}

SubgroupMap cokernel(const Homomorphism& h) {
  const FgAbGroup& b = h.target();
  const FgAbGroup raw(b.generator_count(), hconcat(b.relations(), h.matrix()));
  const auto s = simplify(raw);
  return {s.group, Homomorphism(b, s.group, s.from_original.matrix())};
}

DirectSum direct_sum(const FgAbGroup& a, const FgAbGroup& b) {
  const std::size_t ga = a.generator_count(), gb = b.generator_count();
  FgAbGroup sum(ga + gb, block_diagonal(a.relations(), b.relations()));
  const IntMatrix i1 = vconcat(IntMatrix::identity(ga), IntMatrix(gb, ga));
  const IntMatrix i2 = vconcat(IntMatrix(ga, gb), IntMatrix::identity(gb));
  return DirectSum{sum,
                   Homomorphism(a, sum, i1),
                   Homomorphism(b, sum, i2),
                   Homomorphism(sum, a, i1.transpose()),
                   Homomorphism(sum, b, i2.transpose())};
}

Homomorphism direct_sum(const Homomorphism& h1, const Homomorphism& h2) {
  const auto src = direct_sum(h1.source(), h2.source());
  const auto dst = direct_sum(h1.target(), h2.target());
  return Homomorphism(src.group, dst.group, block_diagonal(h1.matrix(), h2.matrix()));
}

SubgroupMap primary_component(const FgAbGroup& g, const Integer& p) {
  if (!g.is_finite()) throw UnsupportedError("primary component of infinite group " + g.describe());
  if (!is_prime(p)) throw InputError(p.get_str() + " is not prime");
  const auto& m = g.smith_moduli();
  std::vector<Integer> orders;
  std::vector<IntVector> cols;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const unsigned v = valuation(m[i], p);
    if (v == 0) continue;
    const Integer pv = power(p, v);
    orders.push_back(pv);
    cols.push_back(g.from_smith_matrix() * std::span<const Integer>(scale(m[i] / pv, unit_vector(m.size(), i))));
  }
  const FgAbGroup comp = FgAbGroup::from_orders(orders);
  return {comp, Homomorphism(comp, g, IntMatrix::from_columns(g.generator_count(), cols))};
}

SubgroupMap torsion_subgroup(const FgAbGroup& g, const Integer& n) {
  return kernel(Homomorphism::multiplication(g, n));
}

}  // namespace kummer
