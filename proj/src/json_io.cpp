#include "kummer/json_io.hpp"

namespace kummer::json_io {

SchemaError::SchemaError(std::string path, const std::string& what)
    : InputError(path + ": " + what), path_(std::move(path)) {}

Json encode(const Integer& x) { return x.get_str(); }

Json encode(const IntMatrix& m) {
  Json data = Json::array();
  for (const auto& x : m.data()) data.push_back(x.get_str());
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Json encode(const FgAbGroup& g) {
  return Json{{"generators", g.generator_count()},
              {"relations", encode(g.relations())},
              {"invariant_factors", encode_factors(g.invariant_factors())},
              {"free_rank", g.free_rank()}};
}

Json encode(const GroupElement& x) {
  Json out = Json::array();
  for (const auto& c : x.coords()) out.push_back(c.get_str());
  return out;
}

Json encode(const Homomorphism& h) {
  return Json{{"source", encode(h.source())}, {"target", encode(h.target())}, {"matrix", encode(h.matrix())}};
}

Json encode(const ShortExactSequence& seq) { return Json{{"f", encode(seq.f())}, {"g", encode(seq.g())}}; }

namespace {

template <class Tower>
Json encode_tower(const Tower& t, const char* kind) {
  Json levels = Json::array(), maps = Json::array();
  for (const auto& l : t.levels) levels.push_back(Json{{"f", encode(l.f)}, {"g", encode(l.g)}});
  for (const auto& s : t.maps)
    maps.push_back(Json{{"alpha", encode(s.alpha)}, {"beta", encode(s.beta)}, {"gamma", encode(s.gamma)}});
  return Json{{"kind", kind}, {"p", encode(t.p)}, {"n", t.levels.size()}, {"levels", levels}, {"maps", maps}};
}

std::string at(const std::string& path, const std::string& key) { return path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

// Library errors raised while building an object are reported at the object's path.
template <class F>
auto guarded(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SchemaError&) {
    throw;
  } catch (const std::exception& e) {
    throw SchemaError(path, e.what());
  }
}

}  // namespace

Json encode(const KummerTower& t) { return encode_tower(t, "kummer"); }
Json encode(const CoKummerTower& t) { return encode_tower(t, "cokummer"); }

Json encode(const CyclicGroupModule& m) {
  return Json{{"d", m.d()}, {"group", encode(m.group())}, {"sigma", encode(m.sigma())}};
}

Json encode(const TowerReport& r) {
  Json v = Json::array();
  for (const auto& x : r.violations) {
    Json e{{"level", x.level}, {"check", x.check}, {"detail", x.detail}};
    e["witness"] = x.witness ? encode(*x.witness) : Json(nullptr);
    v.push_back(e);
  }
  return Json{{"valid", r.valid()}, {"violations", v}};
}

Json encode_factors(const std::vector<Integer>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(x.get_str());
  return out;
}

const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw SchemaError(at(path, key), "missing field");
  return *it;
}

Integer decode_integer(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Integer(j.dump());
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    Integer x;
    const bool digits = !s.empty() && s.find_first_not_of("-0123456789") == std::string::npos &&
                        s.find('-', 1) == std::string::npos && s != "-";
    if (!digits || x.set_str(s, 10) != 0) throw SchemaError(path, "expected a decimal integer, got \"" + s + "\"");
    return x;
  }
  throw SchemaError(path, "expected an integer (decimal string or number)");
}

std::size_t decode_size(const Json& j, const std::string& path) {
  const Integer x = decode_integer(j, path);
  if (x < 0 || !x.fits_ulong_p()) throw SchemaError(path, "expected a non-negative size");
  return x.get_ui();
}

IntMatrix decode_matrix(const Json& j, const std::string& path) {
  if (j.is_array()) {
    const std::size_t rows = j.size();
    std::size_t cols = 0;
    std::vector<Integer> data;
    for (std::size_t i = 0; i < rows; ++i) {
      const auto& row = j[i];
      if (!row.is_array()) throw SchemaError(at(path, i), "expected a row array");
      if (i == 0) cols = row.size();
      if (row.size() != cols) throw SchemaError(at(path, i), "ragged matrix rows");
      for (std::size_t c = 0; c < cols; ++c) data.push_back(decode_integer(row[c], at(at(path, i), c)));
    }
    return IntMatrix(rows, cols, std::move(data));
  }
  const std::size_t rows = decode_size(field(j, "rows", path), at(path, "rows"));
  const std::size_t cols = decode_size(field(j, "cols", path), at(path, "cols"));
  const auto& data = field(j, "data", path);
  if (!data.is_array() || data.size() != rows * cols)
    throw SchemaError(at(path, "data"), "expected an array of rows*cols = " + std::to_string(rows * cols) + " entries");
  std::vector<Integer> v;
  for (std::size_t i = 0; i < data.size(); ++i) v.push_back(decode_integer(data[i], at(at(path, "data"), i)));
  return IntMatrix(rows, cols, std::move(v));
}

FgAbGroup decode_group(const Json& j, const std::string& path) {
  if (j.is_object() && j.contains("orders")) {
    const auto& o = j["orders"];
    if (!o.is_array()) throw SchemaError(at(path, "orders"), "expected an array");
    std::vector<Integer> orders;
    for (std::size_t i = 0; i < o.size(); ++i) {
      orders.push_back(decode_integer(o[i], at(at(path, "orders"), i)));
      if (orders.back() < 0) throw SchemaError(at(at(path, "orders"), i), "orders must be >= 0");
    }
    return FgAbGroup::from_orders(orders);
  }
  const std::size_t g = decode_size(field(j, "generators", path), at(path, "generators"));
  IntMatrix rel = j.contains("relations") ? decode_matrix(j["relations"], at(path, "relations")) : IntMatrix(g, 0);
  if (rel.rows() != g && !(rel.rows() == 0 && rel.cols() == 0))
    throw SchemaError(at(path, "relations"), "relation matrix must have one row per generator");
  if (rel.rows() == 0) rel = IntMatrix(g, 0);
  return guarded(path, [&] { return FgAbGroup(g, rel); });
}

GroupElement decode_element(const Json& j, const FgAbGroup& parent, const std::string& path) {
  if (!j.is_array() || j.size() != parent.generator_count())
    throw SchemaError(path, "expected " + std::to_string(parent.generator_count()) + " coordinates");
  IntVector v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(decode_integer(j[i], at(path, i)));
  return parent.element(v);
}

Homomorphism decode_hom(const Json& j, const std::string& path) {
  const FgAbGroup s = decode_group(field(j, "source", path), at(path, "source"));
  const FgAbGroup t = decode_group(field(j, "target", path), at(path, "target"));
  return decode_hom(j, s, t, path);
}

Homomorphism decode_hom(const Json& j, const FgAbGroup& source, const FgAbGroup& target, const std::string& path) {
  const bool bare = j.is_array() || (j.is_object() && j.contains("rows"));
  const std::string mpath = bare ? path : at(path, "matrix");
  const IntMatrix m = decode_matrix(bare ? j : field(j, "matrix", path), mpath);
  if (m.rows() != target.generator_count() || m.cols() != source.generator_count())
    throw SchemaError(mpath, "expected a " + std::to_string(target.generator_count()) + "x" +
                                 std::to_string(source.generator_count()) + " matrix");
  return guarded(path, [&] { return Homomorphism(source, target, m); });
}

ShortExactSequence decode_sequence(const Json& j, const std::string& path) {
  const auto f = decode_hom(field(j, "f", path), at(path, "f"));
  const auto g = decode_hom(field(j, "g", path), at(path, "g"));
  if (!f.target().same_presentation(g.source())) throw SchemaError(at(path, "g.source"), "must equal f.target");
  return guarded(path, [&] { return ShortExactSequence(f, g); });
}

bool decode_tower(const Json& j, KummerTower& kummer, CoKummerTower& cokummer, const std::string& path) {
  const bool co = j.is_object() && j.value("kind", std::string("kummer")) == "cokummer";
  const Integer p = decode_integer(field(j, "p", path), at(path, "p"));
  const auto& levels = field(j, "levels", path);
  const auto& maps = j.contains("maps") ? j["maps"] : Json::array();
  if (!levels.is_array() || levels.empty()) throw SchemaError(at(path, "levels"), "expected a non-empty array");
  if (!maps.is_array() || maps.size() + 1 != levels.size())
    throw SchemaError(at(path, "maps"), "expected levels - 1 = " + std::to_string(levels.size() - 1) + " steps");
  if (j.contains("n") && decode_size(j["n"], at(path, "n")) != levels.size())
    throw SchemaError(at(path, "n"), "does not match the number of levels");
  std::vector<TowerLevel> ls;
  std::vector<TowerStep> ms;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto lp = at(at(path, "levels"), i);
    ls.push_back(TowerLevel{decode_hom(field(levels[i], "f", lp), at(lp, "f")), decode_hom(field(levels[i], "g", lp), at(lp, "g"))});
  }
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const auto mp = at(at(path, "maps"), i);
    ms.push_back(TowerStep{decode_hom(field(maps[i], "alpha", mp), at(mp, "alpha")),
                           decode_hom(field(maps[i], "beta", mp), at(mp, "beta")),
                           decode_hom(field(maps[i], "gamma", mp), at(mp, "gamma"))});
  }
  if (co) {
    cokummer = CoKummerTower{p, std::move(ls), std::move(ms)};
  } else {
    kummer = KummerTower{p, std::move(ls), std::move(ms)};
  }
  return co;
}

SigmaModel decode_sigma(const Json& j, const std::string& path) {
  const Integer p = decode_integer(field(j, "p", path), at(path, "p"));
  const IntMatrix m = decode_matrix(field(j, "M", path), at(path, "M"));
  if (j.contains("r") && decode_size(j["r"], at(path, "r")) != m.rows())
    throw SchemaError(at(path, "r"), "does not match the size of M");
  return guarded(path, [&] { return SigmaModel::make(p, m); });
}

CyclicGroupModule decode_gmodule(const Json& j, const std::string& path) {
  const std::size_t d = decode_size(field(j, "d", path), at(path, "d"));
  const FgAbGroup g = decode_group(field(j, "group", path), at(path, "group"));
  const auto& s = field(j, "sigma", path);
  const Homomorphism sigma =
      s.is_object() && s.contains("source") ? decode_hom(s, at(path, "sigma")) : decode_hom(s, g, g, at(path, "sigma"));
  if (!sigma.source().same_presentation(g) || !sigma.target().same_presentation(g))
    throw SchemaError(at(path, "sigma"), "source and target must equal the module group");
  return guarded(path, [&] { return CyclicGroupModule(d, sigma); });
}

GModuleSequence decode_gmodule_sequence(const Json& j, Integer& p, const std::string& path) {
  p = decode_integer(field(j, "p", path), at(path, "p"));
  const auto& mods = field(j, "modules", path);
  if (!mods.is_array() || mods.size() != 3) throw SchemaError(at(path, "modules"), "expected [A, B, C]");
  std::vector<CyclicGroupModule> m;
  for (std::size_t i = 0; i < 3; ++i) m.push_back(decode_gmodule(mods[i], at(at(path, "modules"), i)));
  const auto f = decode_hom(field(j, "f", path), m[0].group(), m[1].group(), at(path, "f"));
  const auto g = decode_hom(field(j, "g", path), m[1].group(), m[2].group(), at(path, "g"));
  return guarded(path, [&] { return GModuleSequence(GModuleMap(m[0], m[1], f), GModuleMap(m[1], m[2], g)); });
}

}  // namespace kummer::json_io
