#include "kummer/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <limits>
#include <numeric>

#include "kummer/errors.hpp"

namespace kummer::kernels {

namespace {

constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();

Scan finish(std::uint64_t checked, std::uint64_t defects, std::uint64_t first) {
  Scan s{checked, defects, std::nullopt};
  if (first != kNone) s.first_defect = first;
  return s;
}

// Coordinates live on the stack; groups here have few Smith coordinates.
constexpr std::size_t kMaxCoords = 64;

void check_width(const FiniteCoords& c) {
  if (c.moduli().size() > kMaxCoords) throw UnsupportedError("too many Smith coordinates for the kernels");
}

}  // namespace

FiniteCoords::FiniteCoords(const FgAbGroup& g, std::uint64_t limit) {
  for (const auto& m : g.smith_moduli()) {
    if (m == 0) throw UnsupportedError("kernels need a finite group, got " + g.describe());
    if (m == 1) {
      moduli_.push_back(1);
      continue;
    }
    if (!m.fits_slong_p() || m > Integer(std::to_string(limit)) || size_ > limit / m.get_ui())
      throw UnsupportedError("group too large for the kernels: " + g.describe());
    moduli_.push_back(m.get_si());
    size_ *= m.get_ui();
  }
  check_width(*this);
}

void FiniteCoords::decode(std::uint64_t index, std::int64_t* coords) const {
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    const auto m = static_cast<std::uint64_t>(moduli_[i]);
    coords[i] = static_cast<std::int64_t>(index % m);
    index /= m;
  }
}

std::uint64_t FiniteCoords::encode(const std::int64_t* coords) const {
  std::uint64_t index = 0;
  for (std::size_t i = moduli_.size(); i-- > 0;) index = index * static_cast<std::uint64_t>(moduli_[i]) + static_cast<std::uint64_t>(coords[i]);
  return index;
}

std::int64_t FiniteCoords::order(const std::int64_t* coords) const {
  std::int64_t n = 1;
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    if (coords[i] == 0) continue;
    const std::int64_t k = moduli_[i] / std::gcd(moduli_[i], coords[i]);
    n = std::lcm(n, k);
  }
  return n;
}

GroupElement FiniteCoords::element(const FgAbGroup& g, std::uint64_t index) const {
  std::int64_t c[kMaxCoords];
  decode(index, c);
  IntVector y;
  for (std::size_t i = 0; i < moduli_.size(); ++i) y.emplace_back(static_cast<long>(c[i]));
  return g.element(g.from_smith(y));
}

DenseHom::DenseHom(const Homomorphism& h) : src_(h.source()), dst_(h.target()) {
  const IntMatrix t = h.smith_matrix();
  for (const auto& x : t.data()) m_.push_back(x.get_si());
}

std::uint64_t DenseHom::apply(std::uint64_t index) const {
  std::int64_t x[kMaxCoords], y[kMaxCoords];
  src_.decode(index, x);
  const std::size_t rows = dst_.moduli().size(), cols = src_.moduli().size();
  for (std::size_t i = 0; i < rows; ++i) {
    const std::int64_t q = dst_.moduli()[i];
    std::int64_t acc = 0;
    for (std::size_t j = 0; j < cols; ++j) acc = (acc + (m_[i * cols + j] % q) * (x[j] % q)) % q;
    y[i] = acc;
  }
  return dst_.encode(y);
}

Scan elementwise_purity(const ShortExactSequence& seq, Mode mode) {
  const DenseHom g(seq.g());
  const auto& B = g.source();
  const auto& C = g.target();
  std::vector<std::uint8_t> lifted(C.size(), 0);
  const auto nb = static_cast<std::int64_t>(B.size());
  if (mode == Mode::serial) {
    for (std::int64_t b = 0; b < nb; ++b) {
      std::int64_t x[kMaxCoords], y[kMaxCoords];
      const std::uint64_t c = g.apply(static_cast<std::uint64_t>(b));
      B.decode(static_cast<std::uint64_t>(b), x);
      C.decode(c, y);
      if (B.order(x) == C.order(y)) lifted[c] = 1;
    }
  } else {
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < nb; ++b) {
      std::int64_t x[kMaxCoords], y[kMaxCoords];
      const std::uint64_t c = g.apply(static_cast<std::uint64_t>(b));
      B.decode(static_cast<std::uint64_t>(b), x);
      C.decode(c, y);
      if (B.order(x) == C.order(y)) {
#pragma omp atomic write
        lifted[c] = 1;
      }
    }
  }
  std::uint64_t defects = 0, first = kNone;
  for (std::uint64_t c = 0; c < C.size(); ++c)
    if (!lifted[c]) {
      ++defects;
      first = std::min(first, c);
    }
  return finish(C.size(), defects, first);
}

Scan section_check(const ShortExactSequence& seq, const Homomorphism& s, Mode mode) {
  const Homomorphism gs = compose(seq.g(), s);
  const DenseHom h(gs);
  const auto nc = static_cast<std::int64_t>(h.source().size());
  std::uint64_t defects = 0, first = kNone;
  if (mode == Mode::serial) {
    for (std::int64_t c = 0; c < nc; ++c)
      if (h.apply(static_cast<std::uint64_t>(c)) != static_cast<std::uint64_t>(c)) {
        ++defects;
        first = std::min(first, static_cast<std::uint64_t>(c));
      }
  } else {
#pragma omp parallel for schedule(static) reduction(+ : defects) reduction(min : first)
    for (std::int64_t c = 0; c < nc; ++c)
      if (h.apply(static_cast<std::uint64_t>(c)) != static_cast<std::uint64_t>(c)) {
        ++defects;
        first = std::min(first, static_cast<std::uint64_t>(c));
      }
  }
  return finish(h.source().size(), defects, first);
}

std::vector<std::uint8_t> divisible_by(const FgAbGroup& g, std::int64_t n, Mode mode) {
  const FiniteCoords G(g);
  std::vector<std::uint8_t> flags(G.size(), 0);
  const auto ng = static_cast<std::int64_t>(G.size());
  const std::size_t w = G.moduli().size();
  const auto times_n = [&](std::int64_t idx) {
    std::int64_t x[kMaxCoords];
    G.decode(static_cast<std::uint64_t>(idx), x);
    for (std::size_t i = 0; i < w; ++i) x[i] = ((n % G.moduli()[i]) * x[i]) % G.moduli()[i];
    for (std::size_t i = 0; i < w; ++i) x[i] = (x[i] + G.moduli()[i]) % G.moduli()[i];
    return G.encode(x);
  };
  if (mode == Mode::serial) {
    for (std::int64_t i = 0; i < ng; ++i) flags[times_n(i)] = 1;
  } else {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < ng; ++i) {
      const auto j = times_n(i);
#pragma omp atomic write
      flags[j] = 1;
    }
  }
  return flags;
}

Scan subgroup_criterion(const ShortExactSequence& seq, std::int64_t n, Mode mode) {
  const DenseHom f(seq.f());
  const auto& A = f.source();
  const auto& B = f.target();
  const auto nB = divisible_by(seq.b(), n, mode);
  std::vector<std::uint8_t> in_fa(B.size(), 0), in_nfa(B.size(), 0);
  const auto na = static_cast<std::int64_t>(A.size());
  const std::size_t w = A.moduli().size();
  const auto scaled = [&](std::int64_t idx) {
    std::int64_t x[kMaxCoords];
    A.decode(static_cast<std::uint64_t>(idx), x);
    for (std::size_t i = 0; i < w; ++i) x[i] = (((n % A.moduli()[i]) * x[i]) % A.moduli()[i] + A.moduli()[i]) % A.moduli()[i];
    return A.encode(x);
  };
  if (mode == Mode::serial) {
    for (std::int64_t a = 0; a < na; ++a) {
      in_fa[f.apply(static_cast<std::uint64_t>(a))] = 1;
      in_nfa[f.apply(scaled(a))] = 1;
    }
  } else {
#pragma omp parallel for schedule(static)
    for (std::int64_t a = 0; a < na; ++a) {
      const auto u = f.apply(static_cast<std::uint64_t>(a)), v = f.apply(scaled(a));
#pragma omp atomic write
      in_fa[u] = 1;
#pragma omp atomic write
      in_nfa[v] = 1;
    }
  }
  std::uint64_t defects = 0, first = kNone;
  const auto nb = static_cast<std::int64_t>(B.size());
  if (mode == Mode::serial) {
    for (std::int64_t b = 0; b < nb; ++b)
      if (in_fa[b] && nB[b] && !in_nfa[b]) {
        ++defects;
        first = std::min(first, static_cast<std::uint64_t>(b));
      }
  } else {
#pragma omp parallel for schedule(static) reduction(+ : defects) reduction(min : first)
    for (std::int64_t b = 0; b < nb; ++b)
      if (in_fa[b] && nB[b] && !in_nfa[b]) {
        ++defects;
        first = std::min(first, static_cast<std::uint64_t>(b));
      }
  }
  return finish(B.size(), defects, first);
}

void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace kummer::kernels
