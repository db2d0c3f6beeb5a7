#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "kummer/colimit.hpp"
#include "kummer/cyclic_cohomology.hpp"
#include "kummer/errors.hpp"
#include "kummer/json_io.hpp"
#include "kummer/kernels.hpp"
#include "kummer/kummer_tower.hpp"

namespace kummer::cli {

namespace {

using json_io::Json;
using json_io::encode;
using json_io::encode_factors;

constexpr int kOk = 0, kNegative = 1, kInputError = 2;
// Exhaustive element checks run up to this many elements.
constexpr long kEnumerationLimit = 1 << 20;

struct Options {
  std::string verb;
  std::string target;  // inline JSON, path, "-" or demo name
  std::string input;
  std::string sigma;
  bool pretty = false;
  int jobs = 0;
  std::size_t depth = 4;
  std::optional<std::size_t> precision;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n;
  std::optional<long> p;
};

struct Outcome {
  int code = kOk;
  Json report;
};

// Raised for usage errors that are not schema problems.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool looks_inline(const std::string& s) { return !s.empty() && (s.front() == '{' || s.front() == '['); }

Json parse_text(const std::string& text) { return Json::parse(text); }

Json load(const std::string& source, std::istream& in) {
  if (source.empty() || source == "-") {
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
  }
  if (looks_inline(source)) return parse_text(source);
  std::ifstream f(source);
  if (!f) throw UsageError("cannot open input file " + source);
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_text(buf.str());
}

Json input_of(const Options& o, std::istream& in) { return load(!o.input.empty() ? o.input : o.target, in); }

kernels::Mode mode(const Options& o) { return o.jobs == 1 ? kernels::Mode::serial : kernels::Mode::parallel; }

bool small(const FgAbGroup& g) { return g.is_finite() && g.order() <= kEnumerationLimit; }

Json element_or_null(const std::optional<GroupElement>& x) { return x ? encode(*x) : Json(nullptr); }

// Exhaustive g o s = id check when C is small enough; null otherwise.
Json exhaustive_section_check(const ShortExactSequence& seq, const Homomorphism& s, const Options& o) {
  if (!small(seq.c())) return nullptr;
  const auto scan = kernels::section_check(seq, s, mode(o));
  return Json{{"elements", scan.checked}, {"failures", scan.defects}};
}

Json purity_json(const PurityReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back(Json{{"n", encode(c.n)}, {"equal", c.equal}, {"witness", element_or_null(c.witness)}});
  return Json{{"pure", r.pure}, {"exhaustive", r.exhaustive}, {"checks", checks}, {"unliftable", element_or_null(r.unliftable)}};
}

Json smith_json(const IntMatrix& m) {
  const auto s = smith_normal_form(m);
  return Json{{"diagonal", encode_factors(s.diagonal())},
              {"rank", s.rank},
              {"U", encode(s.U)},
              {"V", encode(s.V)},
              {"S", encode(s.S)},
              {"verified", s.U * m * s.V == s.S}};
}

Outcome verb_snf(const Options& o, std::istream& in) {
  const Json j = input_of(o, in);
  const IntMatrix m = json_io::decode_matrix(j.is_object() && j.contains("matrix") ? j["matrix"] : j,
                                             j.is_object() && j.contains("matrix") ? "$.matrix" : "$");
  return {kOk, smith_json(m)};
}

Json group_summary(const FgAbGroup& g) {
  Json r{{"group", encode(g)}, {"description", g.is_trivial() ? "0" : g.describe()}};
  if (g.is_finite()) {
    r["order"] = encode(g.order());
    r["exponent"] = encode(g.exponent());
    r["primary_orders"] = encode_factors(pruefer_decompose(g, true).orders);
  }
  return r;
}

Outcome verb_group(const Options& o, std::istream& in) { return {kOk, group_summary(json_io::decode_group(input_of(o, in)))}; }

std::pair<Homomorphism, Homomorphism> raw_sequence(const Json& j) {
  auto f = json_io::decode_hom(json_io::field(j, "f", "$"), "$.f");
  auto g = json_io::decode_hom(json_io::field(j, "g", "$"), "$.g");
  if (!f.target().same_presentation(g.source())) throw json_io::SchemaError("$.g.source", "must equal f.target");
  return {f, g};
}

Outcome verb_seq_check(const Options& o, std::istream& in) {
  const auto [f, g] = raw_sequence(input_of(o, in));
  const auto check = check_exact(f, g);
  Json r{{"exact", check.report.exact()}};
  if (!check.sequence) {
    Json w = Json::array();
    for (const auto& x : check.report.witnesses) w.push_back(encode(x));
    r["failure"] = check.report.failure;
    r["witnesses"] = w;
    r["pure"] = false;
    r["split"] = false;
    r["section"] = nullptr;
    return {kNegative, r};
  }
  const auto& seq = *check.sequence;
  Json witnesses = Json::array();
  try {
    const auto pr = is_pure(seq);
    r["pure"] = pr.pure;
    r["purity"] = purity_json(pr);
    if (pr.unliftable) witnesses.push_back(encode(*pr.unliftable));
  } catch (const UnsupportedError&) {
    r["pure"] = "unknown";
  }
  const auto s = section_exists(seq);
  r["split"] = s.has_value();
  r["section"] = s ? encode(s->map()) : Json(nullptr);
  r["witnesses"] = witnesses;
  return {s ? kOk : kNegative, r};
}

Outcome verb_seq_split(const Options& o, std::istream& in) {
  const auto seq = json_io::decode_sequence(input_of(o, in));
  Json r;
  if (seq.b().is_finite()) {
    const auto pr = is_pure(seq);
    if (!pr.pure) {
      r = Json{{"split", false}, {"witness", element_or_null(pr.unliftable)}, {"purity", purity_json(pr)}};
      return {kNegative, r};
    }
    const auto s = section_from_purity(seq);
    r = Json{{"split", true}, {"method", "same-order lifts"}, {"section", encode(s.map())}};
    r["verified"] = exhaustive_section_check(seq, s.map(), o);
    return {kOk, r};
  }
  const auto s = section_exists(seq);
  r = Json{{"split", s.has_value()}, {"method", "linear system"}, {"section", s ? encode(s->map()) : Json(nullptr)}};
  if (!s) r["witness"] = "g X = id has no integral solution";
  return {s ? kOk : kNegative, r};
}

Outcome verb_tower_validate(const Options& o, std::istream& in) {
  KummerTower k;
  CoKummerTower c;
  const bool co = json_io::decode_tower(input_of(o, in), k, c);
  const auto rep = co ? validate_tower(c) : validate_tower(k);
  Json r = encode(rep);
  r["kind"] = co ? "cokummer" : "kummer";
  return {rep.valid() ? kOk : kNegative, r};
}

Outcome verb_tower_split(const Options& o, std::istream& in) {
  KummerTower k;
  CoKummerTower c;
  const bool co = json_io::decode_tower(input_of(o, in), k, c);
  const auto rep = co ? validate_tower(c) : validate_tower(k);
  if (!rep.valid()) {
    Json r = encode(rep);
    r["error"] = "validation";
    return {kInputError, r};
  }
  Json r{{"kind", co ? "cokummer" : "kummer"}};
  if (co) {
    const auto seq = c.top();
    const auto s = dual_tower_split(c);
    r["section"] = encode(s.map());
    r["verified"] = exhaustive_section_check(seq, s.map(), o);
  } else {
    const auto seq = k.top();
    Json lifts = Json::array();
    for (const auto& [cc, b] : tower_purity(k).witnesses) lifts.push_back(Json{{"c", encode(cc)}, {"b", encode(b)}});
    const auto s = tower_split(k);
    r["lifts"] = lifts;
    r["section"] = encode(s.map());
    r["verified"] = exhaustive_section_check(seq, s.map(), o);
  }
  r["split"] = true;
  return {kOk, r};
}

SigmaModel sigma_from(const Options& o, std::istream& in) {
  if (!o.sigma.empty()) return json_io::decode_sigma(load(o.sigma, in), "$sigma");
  return json_io::decode_sigma(input_of(o, in));
}

Outcome verb_tower_generate(const Options& o, std::istream& in) {
  const auto model = sigma_from(o, in);
  const auto t = sigma_kummer_tower(model, o.n.value_or(3));
  Json r = encode(t);
  r["sigma"] = Json{{"p", encode(model.p)}, {"r", model.r}, {"M", encode(model.M)}, {"s", model.s}};
  return {kOk, r};
}

Json certificate_json(const NoSectionCertificate& c) {
  return Json{{"p", encode(c.p)},
              {"depth", c.depth},
              {"divisible", c.divisible},
              {"heights_checked", c.heights_checked},
              {"heights_match", c.heights_match},
              {"level_sections", c.level_sections},
              {"compatibility_unsolvable", c.compatibility_unsolvable},
              {"inference", c.inference},
              {"valid", c.valid()}};
}

Outcome verb_counterexample(const Options& o) {
  const Integer p = o.p.value_or(2);
  if (!is_prime(p)) throw UsageError("--p must be prime");
  const auto t = counterexample_tower(p);
  const auto cert = limit_no_section_certificate(t, o.depth);
  Json r = certificate_json(cert);
  Json lifts = Json::array();
  for (std::size_t k = 1; k <= o.depth; ++k) {
    const ColimitElement c{Column::C, k, t.level(k).g.target().generator(0)};
    const auto b = limit_purity_witness(t, c);
    lifts.push_back(Json{{"level", k}, {"c", encode(c.value)}, {"b_level", b.level}, {"b", encode(b.value)},
                         {"order", encode(colimit_order(t, c))}});
  }
  r["purity_witnesses"] = lifts;
  return {cert.valid() ? kOk : kNegative, r};
}

Outcome verb_limit_split(const Options& o, std::istream& in) {
  Json j = o.input.empty() && o.target.empty() ? Json::object() : input_of(o, in);
  if (!j.is_object()) throw json_io::SchemaError("$", "expected an object");
  const std::string fixture = j.value("fixture", std::string("stabilizing"));
  const Integer p = o.p ? Integer(*o.p) : j.contains("p") ? json_io::decode_integer(j["p"], "$.p") : Integer(2);
  if (!is_prime(p)) throw json_io::SchemaError("$.p", "must be prime");
  DirectLimitHypothesis h;
  h.which = j.contains("which") ? static_cast<int>(json_io::decode_size(j["which"], "$.which")) : (fixture == "stabilizing" ? 2 : 1);
  if (h.which != 1 && h.which != 2) throw json_io::SchemaError("$.which", "must be 1 or 2");
  h.n = o.n.value_or(j.contains("n") ? json_io::decode_size(j["n"], "$.n") : 2);
  h.precision = o.precision;
  std::optional<ColimitTower> t;
  if (fixture == "stabilizing") {
    t = stabilizing_tower(p);
  } else if (fixture == "divisible-kernel") {
    t = divisible_kernel_tower(p);
    if (h.which == 1) h.decomposition = divisible_kernel_decomposition(p);
  } else if (fixture == "counterexample") {
    t = counterexample_tower(p);
  } else {
    throw json_io::SchemaError("$.fixture", "expected stabilizing, divisible-kernel or counterexample");
  }
  Json r{{"fixture", fixture}, {"p", encode(p)}, {"which", h.which}, {"n", h.n}};
  try {
    const auto s = direct_limit_split(*t, h);
    r["split"] = true;
    r["level"] = s.level;
    r["precision"] = s.precision;
    r["section"] = encode(s.section);
    r["checks"] = s.checks;
    Json rs = Json::array();
    for (const auto& x : s.retractions) rs.push_back(encode(x));
    r["retractions"] = rs;
    return {kOk, r};
  } catch (const InputError& e) {
    r["split"] = false;
    r["rejected"] = e.what();
    return {kNegative, r};
  }
}

Outcome verb_dual(const Options& o, std::istream& in) {
  const Json j = input_of(o, in);
  if (j.is_object() && j.contains("levels")) {
    KummerTower k;
    CoKummerTower c;
    const bool co = json_io::decode_tower(j, k, c);
    return {kOk, co ? encode(dualize_tower(c)) : encode(dualize_tower(k))};
  }
  if (j.is_object() && j.contains("f") && j.contains("g"))
    return {kOk, encode(dualize_sequence(json_io::decode_sequence(j)))};
  if (j.is_object() && j.contains("source")) return {kOk, Json{{"hom", encode(pontryagin_dual(json_io::decode_hom(j)))}}};
  return {kOk, Json{{"group", encode(pontryagin_dual(json_io::decode_group(j)))}}};
}

Json tate_json(const TateGroups& t) {
  return Json{{"H_minus1", encode_factors(t.H_minus1.group.invariant_factors())},
              {"H_0", encode_factors(t.H_0.group.invariant_factors())},
              {"H_1", encode_factors(t.H_1.group.invariant_factors())},
              {"H_2", encode_factors(t.H_2.group.invariant_factors())},
              {"periodicity", t.periodicity_1.is_isomorphism() && t.periodicity_2.is_isomorphism()},
              {"cohomologically_trivial", t.all_zero()}};
}

Outcome verb_gmod_cohomology(const Options& o, std::istream& in) {
  const auto m = json_io::decode_gmodule(input_of(o, in));
  const auto t = tate_cohomology(m);
  Json r = tate_json(t);
  r["d"] = m.d();
  if (m.group().is_finite()) r["herbrand"] = t.H_0.group.order() == t.H_1.group.order();
  return {kOk, r};
}

// Elements of C^G with no G-fixed preimage: each one rules out an equivariant section.
std::optional<GroupElement> invariant_obstruction(const GModuleSequence& seq) {
  const auto& B = seq.g().source();
  const auto& C = seq.g().target();
  const auto fixed_b = kernel(B.sigma_minus_one());
  const auto fixed_c = kernel(C.sigma_minus_one());
  const auto img = Subgroup::image_of(compose(seq.g().map(), fixed_b.map));
  for (std::size_t i = 0; i < fixed_c.group.generator_count(); ++i) {
    const auto c = fixed_c.map(fixed_c.group.generator(i));
    if (!img.contains(c)) return c;
  }
  return std::nullopt;
}

Outcome verb_gmod_split(const Options& o, std::istream& in) {
  Integer p;
  const auto seq = json_io::decode_gmodule_sequence(input_of(o, in), p);
  const auto s = equivariant_section_exists(seq, p);
  const auto plain = section_exists(seq.underlying());
  Json r{{"equivariant_split", s.has_value()}, {"plain_split", plain.has_value()}};
  r["section"] = s ? encode(s->map()) : Json(nullptr);
  if (!s) {
    const auto w = invariant_obstruction(seq);
    r["witness"] = w ? Json{{"fixed_element_without_fixed_lift", encode(*w)}}
                     : Json{{"note", "equivariant linear system over F_p has no solution"}};
  }
  return {s ? kOk : kNegative, r};
}

Json steps_json(const ChrisReport& c) {
  Json steps = Json::array();
  for (const auto& s : c.steps) steps.push_back(Json{{"name", s.name}, {"ok", s.ok}, {"detail", s.detail}});
  return steps;
}

Json chris_json(const ChrisReport& c) {
  Json r{{"p", encode(c.p)},
         {"inside_hypothesis", c.inside_hypothesis},
         {"H1_X", encode_factors(c.h1_model)},
         {"H2_X", encode_factors(c.h2_model)},
         {"H1_X_mod_p", encode_factors(c.h1_quotient)},
         {"Hminus1_X_mod_p", encode_factors(c.hminus1_quotient)},
         {"norm_kernel", encode_factors(c.norm_kernel)},
         {"steps", steps_json(c)},
         {"inference", c.inference},
         {"valid", c.valid()}};
  if (!c.inside_hypothesis) r["flag"] = "outside hypothesis: p odd";
  return r;
}

IntMatrix random_sigma(std::uint64_t seed, const Integer& p) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> dim(1, 3), entry(-3, 3);
  const auto r = static_cast<std::size_t>(dim(rng));
  for (;;) {
    IntMatrix m(r, r);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) m(i, j) = entry(rng);
    try {
      SigmaModel::make(p, m);
      return m;
    } catch (const InputError&) {
    }
  }
}

Outcome demo_main_lemma(const Options& o, std::istream& in) {
  SigmaModel model = o.sigma.empty() ? SigmaModel::make(o.p.value_or(3), IntMatrix{{1, 0, 0}, {0, 4, 0}, {0, 0, 7}})
                                     : sigma_from(o, in);
  if (o.seed) model = SigmaModel::make(model.p, random_sigma(*o.seed, model.p));
  const auto t = sigma_kummer_tower(model, o.n.value_or(3));
  const auto rep = validate_tower(t);
  const auto s = tower_split(t);
  const auto seq = t.top();
  Json r{{"claim", "Then the exact sequence S_n splits."},
         {"sigma", Json{{"p", encode(model.p)}, {"M", encode(model.M)}}},
         {"n", t.n()},
         {"tower_valid", rep.valid()},
         {"A", group_summary(seq.a())["description"]},
         {"B", group_summary(seq.b())["description"]},
         {"C", group_summary(seq.c())["description"]},
         {"section", encode(s.map())}};
  const auto v = exhaustive_section_check(seq, s.map(), o);
  r["verified"] = v;
  const bool ok = rep.valid() && (v.is_null() || v["failures"] == 0);
  return {ok ? kOk : kNegative, r};
}

Outcome demo_counterexample(const Options& o) {
  auto out = verb_counterexample(o);
  out.report["claim"] = "there is no compatible family of sections";
  return out;
}

Outcome demo_dual_lemma(const Options& o) {
  const auto model = SigmaModel::make(o.p.value_or(2), IntMatrix{{1, 0}, {0, 3}});
  const auto t = sigma_kummer_tower(model, o.n.value_or(3));
  const auto co = dualize_tower(t);
  const auto rep = validate_tower(co);
  const auto s = dual_tower_split(co);
  const auto seq = co.top();
  const auto dual = dualize_sequence(seq);
  const auto retraction = pontryagin_dual(s.map());
  const bool retracts = compose(retraction, dual.f()) == Homomorphism::identity(dual.a());
  Json r{{"claim", "applying the functor Hom(-,Q/Z)"},
         {"cotower_valid", rep.valid()},
         {"section", encode(s.map())},
         {"dual_retraction", encode(retraction)},
         {"retraction_verified", retracts}};
  r["verified"] = exhaustive_section_check(seq, s.map(), o);
  return {rep.valid() && retracts ? kOk : kNegative, r};
}

Outcome demo_direct_limit(const Options& o) {
  const Integer p = o.p.value_or(2);
  Json r{{"claim", "the exact sequence of direct limits splits"}};
  const auto stab = direct_limit_split(stabilizing_tower(p), DirectLimitHypothesis{2, 2, std::nullopt, std::nullopt});
  r["case2"] = Json{{"level", stab.level}, {"section", encode(stab.section)}, {"checks", stab.checks}};
  const auto div = direct_limit_split(divisible_kernel_tower(p),
                                      DirectLimitHypothesis{1, o.n.value_or(2), divisible_kernel_decomposition(p), o.precision});
  r["case1"] = Json{{"level", div.level}, {"precision", div.precision}, {"section", encode(div.section)}, {"checks", div.checks}};
  bool rejected = true;
  Json rej = Json::array();
  const auto ce = counterexample_tower(p);
  for (auto h : {DirectLimitHypothesis{2, 3, std::nullopt, std::nullopt},
                 DirectLimitHypothesis{1, 2, divisible_kernel_decomposition(p), std::nullopt}}) {
    try {
      direct_limit_split(ce, h);
      rejected = false;
    } catch (const InputError& e) {
      rej.push_back(Json{{"which", h.which}, {"reason", e.what()}});
    }
  }
  r["counterexample_rejected"] = rej;
  return {rejected ? kOk : kNegative, r};
}

Outcome demo_chris(const Options& o) {
  const auto c = chris_verify(o.p.value_or(3));
  Json r = chris_json(c);
  r["claim"] = "isomorphic to (Z/p)^2";
  const auto seq = augmentation_sequence(c.p);
  r["augmentation_fixture"] = Json{{"equivariant_split", equivariant_section_exists(seq, c.p).has_value()},
                                   {"plain_split", section_exists(seq.underlying()).has_value()}};
  return {c.valid() ? kOk : kNegative, r};
}

Outcome verb_demo(const Options& o, std::istream& in) {
  if (o.target == "main-lemma") return demo_main_lemma(o, in);
  if (o.target == "counterexample") return demo_counterexample(o);
  if (o.target == "dual-lemma") return demo_dual_lemma(o);
  if (o.target == "direct-limit") return demo_direct_limit(o);
  if (o.target == "chris") return demo_chris(o);
  throw UsageError("unknown demo '" + o.target + "' (main-lemma, counterexample, dual-lemma, direct-limit, chris)");
}

Outcome dispatch(const Options& o, std::istream& in) {
  if (o.verb == "snf") return verb_snf(o, in);
  if (o.verb == "group") return verb_group(o, in);
  if (o.verb == "seq-check") return verb_seq_check(o, in);
  if (o.verb == "seq-split") return verb_seq_split(o, in);
  if (o.verb == "tower-validate") return verb_tower_validate(o, in);
  if (o.verb == "tower-split") return verb_tower_split(o, in);
  if (o.verb == "tower-generate") return verb_tower_generate(o, in);
  if (o.verb == "counterexample") return verb_counterexample(o);
  if (o.verb == "limit-split") return verb_limit_split(o, in);
  if (o.verb == "dual") return verb_dual(o, in);
  if (o.verb == "gmod-cohomology") return verb_gmod_cohomology(o, in);
  if (o.verb == "gmod-split") return verb_gmod_split(o, in);
  if (o.verb == "demo") return verb_demo(o, in);
  throw UsageError("unknown verb " + o.verb);
}

const std::vector<std::string> kVerbs{"snf",         "group",          "seq-check",   "seq-split", "tower-validate",
                                      "tower-split", "tower-generate", "counterexample", "limit-split", "dual",
                                      "gmod-cohomology", "gmod-split", "demo"};

void emit(std::ostream& out, const Json& report, bool pretty) {
  out << (pretty ? report.dump(2) : report.dump()) << '\n';
}

Json error_report(const std::string& verb, const std::string& kind, const std::string& message) {
  return Json{{"schema", 1}, {"verb", verb}, {"error", kind}, {"message", message}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Splitting of exact sequences, Kummer towers and cyclic cohomology", "kummer"};
  app.add_option("verb", o.verb, "Operation")->required()->check(CLI::IsMember(kVerbs));
  app.add_option("target", o.target, "Inline JSON, input path, '-' for stdin, or demo name");
  app.add_option("--input", o.input, "Input JSON file, or - for stdin");
  app.add_flag("--pretty", o.pretty, "Indented output");
  app.add_option("--jobs", o.jobs, "Threads for verification passes (1 = serial reference)")->check(CLI::NonNegativeNumber);
  app.add_option("--depth", o.depth, "Colimit probe depth")->check(CLI::PositiveNumber);
  app.add_option("--precision", o.precision, "Precision level for the divisible-kernel case");
  app.add_option("--seed", o.seed, "Seed for randomized fixtures");
  app.add_option("--sigma", o.sigma, "Sigma model JSON or path");
  app.add_option("--n", o.n, "Tower height or certified level")->check(CLI::PositiveNumber);
  app.add_option("--p", o.p, "Prime")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "kummer: " << e.what() << '\n';
    emit(out, error_report(o.verb, "usage", e.what()), o.pretty);
    return kInputError;
  }
  kernels::set_threads(o.jobs);

  try {
    Outcome r = dispatch(o, in);
    r.report["schema"] = 1;
    r.report["verb"] = o.verb;
    r.report["exit"] = r.code;
    emit(out, r.report, o.pretty);
    return r.code;
  } catch (const Json::parse_error& e) {
    Json rep = error_report(o.verb, "parse", e.what());
    rep["position"] = e.byte;
    err << "kummer: malformed JSON at byte " << e.byte << '\n';
    emit(out, rep, o.pretty);
  } catch (const json_io::SchemaError& e) {
    Json rep = error_report(o.verb, "schema", e.what());
    rep["path"] = e.path();
    err << "kummer: " << e.what() << '\n';
    emit(out, rep, o.pretty);
  } catch (const std::exception& e) {
    err << "kummer: " << e.what() << '\n';
    emit(out, error_report(o.verb, "input", e.what()), o.pretty);
  }
  return kInputError;
}

}  // namespace kummer::cli
