#include "hsd/cli.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "hsd/canonical_basis.hpp"
#include "hsd/poly_text.hpp"
#include "hsd/wronskian_field.hpp"
#include "json.hpp"

namespace hsd::cli {

namespace {

using json = nlohmann::json;

/// Raised while reading the config; carries the exit code to use.
struct ConfigError {
  int code;
  std::string kind;
  std::string message;
};

[[noreturn]] void malformed(const std::string& msg) { throw ConfigError{kMalformed, "ParseError", msg}; }

const json& require(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) malformed(std::string("missing field '") + key + "'");
  return obj.at(key);
}

std::uint64_t get_uint(const json& obj, const char* key, std::optional<std::uint64_t> fallback = std::nullopt) {
  if (!obj.is_object() || !obj.contains(key)) {
    if (fallback) return *fallback;
    malformed(std::string("missing field '") + key + "'");
  }
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) malformed(std::string("field '") + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::vector<std::string> get_strings(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_array()) malformed(std::string("field '") + key + "' must be an array of strings");
  std::vector<std::string> out;
  for (const auto& s : v) {
    if (!s.is_string()) malformed(std::string("field '") + key + "' must be an array of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

MultiIndex get_index(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_array()) malformed(std::string("field '") + key + "' must be an array of integers");
  MultiIndex out;
  for (const auto& x : v) {
    if (!x.is_number_integer() || x.get<long long>() < 0) malformed(std::string("field '") + key + "' must hold non-negative integers");
    out.push_back(x.get<std::uint32_t>());
  }
  return out;
}

Fq get_scalar(const Field& k, const json& v) {
  if (v.is_number_integer()) return k.from_int(v.get<long long>());
  if (v.is_string()) {
    MultiPoly c = parse_multipoly(v.get<std::string>(), k, make_vars(std::vector<std::string>{}));
    return c.constant_term();
  }
  malformed("scalars must be integers or strings such as \"g^2\"");
}

std::uint64_t checked_pow(std::uint64_t b, std::uint64_t n) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < n; ++i) {
    r *= b;
    if (r > (1ull << 40)) return r;
  }
  return r;
}

struct Context {
  const Field* field = nullptr;
  unsigned e = 0;
  unsigned m = 1;
  bool e_given = false;
};

LawPtr build_law(const json& spec, const Context& ctx, unsigned default_e);

unsigned natural_e(const json& spec, unsigned fallback) {
  std::string type = require(spec, "type").is_string() ? spec.at("type").get<std::string>() : "";
  if (type == "multiplicative") return 1;
  if (type == "witt2") return 2;
  if (type == "additive") return static_cast<unsigned>(get_uint(spec, "e", fallback));
  if (type == "custom") return static_cast<unsigned>(get_uint(spec, "e", fallback));
  if (type == "product") {
    const json& fs = require(spec, "factors");
    if (!fs.is_array() || fs.empty()) malformed("product needs a non-empty 'factors' array");
    unsigned total = 0;
    for (const auto& f : fs) total += natural_e(f, 1);
    return total;
  }
  malformed("unknown law type '" + type + "'");
}

LawPtr build_law(const json& spec, const Context& ctx, unsigned default_e) {
  const Field& k = *ctx.field;
  if (!require(spec, "type").is_string()) malformed("law type must be a string");
  std::string type = spec.at("type").get<std::string>();
  if (type == "additive") return FormalGroupLaw::additive(k, static_cast<unsigned>(get_uint(spec, "e", default_e)), ctx.m);
  if (type == "multiplicative") return FormalGroupLaw::multiplicative(k, ctx.m);
  if (type == "witt2") {
    std::vector<Fq> alphas;
    if (spec.contains("alphas")) {
      if (!spec.at("alphas").is_array()) malformed("'alphas' must be an array");
      for (const auto& a : spec.at("alphas")) alphas.push_back(get_scalar(k, a));
    }
    return FormalGroupLaw::witt2(k, ctx.m, std::move(alphas));
  }
  if (type == "product") {
    std::vector<LawPtr> factors;
    for (const auto& f : require(spec, "factors")) factors.push_back(build_law(f, ctx, 1));
    return FormalGroupLaw::product(std::move(factors));
  }
  if (type == "custom") {
    bool weak = spec.contains("weak") && spec.at("weak").is_boolean() && spec.at("weak").get<bool>();
    return FormalGroupLaw::custom(k, static_cast<unsigned>(get_uint(spec, "e", default_e)), ctx.m,
                                  get_strings(spec, "components"), weak);
  }
  malformed("unknown law type '" + type + "'");
}

void guard_model(const Context& ctx) {
  std::uint64_t dim = checked_pow(ctx.field->p(), static_cast<std::uint64_t>(ctx.e) * ctx.m);
  if (dim > kMaxModelDim)
    throw ConfigError{kResource, "ResourceLimit",
                      "model dimension p^(e m) = " + std::to_string(dim) + " exceeds " + std::to_string(kMaxModelDim)};
}

HSDerivation build_derivation(const json& cfg, const LawPtr& law, const Context& ctx) {
  guard_model(ctx);
  json spec = cfg.contains("derivation") ? cfg.at("derivation") : json{{"type", "canonical"}};
  if (!require(spec, "type").is_string()) malformed("derivation type must be a string");
  std::string type = spec.at("type").get<std::string>();
  if (type == "canonical") return HSDerivation::canonical(law);
  auto model = ArtinianModel::make(*ctx.field, ctx.e, ctx.m);
  if (type == "images") return HSDerivation::from_images(model, get_strings(spec, "images"), law);
  if (type == "trivial") return HSDerivation::trivial(model, law);
  if (type == "twist") {
    auto phi = get_strings(spec, "phi");
    auto base = HSDerivation::canonical(law);
    // parse problems are config errors, the rest is a domain result
    for (const auto& s : phi) model->parse(s);
    return twist_by_automorphism(base, phi);
  }
  malformed("unknown derivation type '" + type + "'");
}

std::vector<std::string> texts(const std::vector<Poly>& ps) {
  std::vector<std::string> out;
  for (const auto& p : ps) out.push_back(to_string(p));
  return out;
}

json table_json(const ArtinianModel& a, const std::vector<TableEntry>& t) {
  json out = json::array();
  for (const auto& e : t) out.push_back({{"index", index_text(e.index)}, {"value", a.format(e.value)}});
  return out;
}

json report_json(const BasisReport& r) {
  json out;
  out["pass"] = r.pass;
  out["embedding_ok"] = r.embedding_ok;
  out["ambient_dim"] = r.ambient_dim;
  out["constants_dim"] = r.constants_dim;
  out["degree_ok"] = r.degree_ok;
  out["independent"] = r.independent;
  if (r.bad_generator) {
    out["bad_generator"] = *r.bad_generator;
    out["first_bad_index"] = index_text(*r.first_bad_index);
    out["expected"] = r.expected;
    out["actual"] = r.actual;
  }
  return out;
}

/// Compares printed values against optional expectations given as text in
/// the same layout; returns false on any difference.
bool compare_expected(const json& cfg, const std::vector<Poly>& actual, const Field& k, json& result) {
  if (!cfg.contains("expected")) return true;
  auto exp = get_strings(cfg, "expected");
  if (exp.size() != actual.size()) malformed("'expected' has the wrong number of components");
  bool ok = true;
  for (std::size_t i = 0; i < exp.size(); ++i) ok = ok && parse_poly(exp[i], k, actual[i].layout()) == actual[i];
  result["matches_expected"] = ok;
  return ok;
}

struct Outcome {
  bool pass = true;
  json result = json::object();
  std::vector<std::string> lines;
};

Outcome cmd_law_check(const json& cfg, const LawPtr& law) {
  Outcome o;
  LawAxiomsReport ax = check_axioms(*law);
  o.result["kind"] = to_string(law->kind());
  o.result["e"] = law->e();
  o.result["m"] = law->m();
  o.result["components"] = texts(law->components());
  o.result["axioms"] = {{"unit_left", ax.unit_left},
                        {"unit_right", ax.unit_right},
                        {"associative", ax.associative},
                        {"commutative", ax.commutative}};
  bool need_comm = cfg.contains("require_commutative") && cfg.at("require_commutative").is_boolean() &&
                   cfg.at("require_commutative").get<bool>();
  o.pass = ax.unit_left && ax.unit_right && ax.associative && (!need_comm || ax.commutative);
  o.lines.push_back(std::string("axioms: unit ") + (ax.unit_left && ax.unit_right ? "ok" : "FAIL") + ", associative " +
                    (ax.associative ? "ok" : "FAIL") + ", commutative " + (ax.commutative ? "yes" : "no"));
  return o;
}

Outcome cmd_pseries(const json& cfg, const LawPtr& law) {
  Outcome o;
  const Field& k = law->field();
  unsigned n = static_cast<unsigned>(get_uint(cfg, "N", law->p()));
  if (n > 4096) malformed("N too large");
  auto series = n_series(*law, n);
  o.result["N"] = n;
  o.result["series"] = texts(series);
  o.pass = compare_expected(cfg, series, k, o.result);
  if (law->kind() == LawKind::Witt2 && n == law->p()) {
    // (-sum alpha_n v2^(p^(n+1)), 0)
    const LayoutPtr& vl = law->v_layout();
    Poly first = zero_poly(vl, k);
    Poly v2 = variable_poly(vl, k, 1);
    std::uint64_t pp = 1;
    for (int l = 0; l <= law->top_alpha(); ++l) {
      pp *= law->p();
      first = first - v2.pow(pp) * law->alpha(static_cast<unsigned>(l));
    }
    std::vector<Poly> closed{first, zero_poly(vl, k)};
    bool same = closed[0] == series[0] && closed[1] == series[1];
    o.result["closed_form"] = texts(closed);
    o.result["matches_closed_form"] = same;
    o.pass = o.pass && same;
  }
  o.lines.push_back("[" + std::to_string(n) + "]_F = (" + [&] {
    std::string s;
    for (std::size_t i = 0; i < series.size(); ++i) s += (i ? ", " : "") + to_string(series[i]);
    return s;
  }() + ")");
  return o;
}

Outcome cmd_hn(const json& cfg, const Context& ctx) {
  Outcome o;
  unsigned n = static_cast<unsigned>(get_uint(cfg, "n", 0));
  if (checked_pow(ctx.field->p(), n + 1) > kMaxBox) throw ConfigError{kResource, "ResourceLimit", "p^(n+1) too large"};
  MultiPoly h = h_n(ctx.field->p(), n);
  o.result["p"] = ctx.field->p();
  o.result["n"] = n;
  o.result["h"] = to_string(h);
  if (cfg.contains("expected")) {
    if (!cfg.at("expected").is_string()) malformed("'expected' must be a string");
    bool same = parse_multipoly(cfg.at("expected").get<std::string>(), Field::get(ctx.field->p()), h.vars()) == h;
    o.result["matches_expected"] = same;
    o.pass = same;
  }
  o.lines.push_back("H_" + std::to_string(n) + " = " + to_string(h));
  return o;
}

Outcome cmd_iterativity(const json& cfg, const HSDerivation& d) {
  Outcome o;
  std::string scope = cfg.contains("scope") && cfg.at("scope").is_string() ? cfg.at("scope").get<std::string>() : "all";
  if (scope != "all" && scope != "generators") malformed("scope must be \"all\" or \"generators\"");
  auto r = check_iterativity(d, d.require_law(), scope == "all" ? IterativityScope::AllBasis : IterativityScope::Generators);
  o.pass = r.pass;
  o.result["scope"] = scope;
  o.result["iterative"] = r.pass;
  if (r.failing_element) o.result["failing_element"] = *r.failing_element;
  if (!r.difference.empty()) o.result["difference"] = r.difference;
  o.lines.push_back(std::string("iterativity (") + scope + "): " + (r.pass ? "holds" : "FAILS " + r.difference));
  return o;
}

Outcome cmd_evp(const HSDerivation& d) {
  Outcome o;
  auto ev = p_fold_evP(d);
  const std::uint32_t p = d.model()->p();
  json bad = json::array();
  for (std::size_t i = 0; i < ev.size(); ++i)
    if (ev[i] != d.component(i).pow(p)) bad.push_back(index_text(d.indices()[i]));
  o.result["indices_checked"] = ev.size();
  o.result["mismatches"] = bad;
  o.pass = bad.empty();
  o.lines.push_back("D_i^(p) from the p-series vs. p-fold composition: " + std::to_string(ev.size() - bad.size()) + "/" +
                    std::to_string(ev.size()) + " agree");
  return o;
}

Outcome cmd_structure(const json& cfg, const HSDerivation& d) {
  Outcome o;
  const FormalGroupLaw& law = d.require_law();
  MultiIndex i = get_index(cfg, "i"), j = get_index(cfg, "j");
  if (i.size() != law.e() || j.size() != law.e() || !law.indices().contains(i) || !law.indices().contains(j))
    malformed("indices must have e entries below p^m");
  auto sc = law.structure_constants(i, j);
  json cs = json::array();
  Matrix combo(d.model()->field(), d.model()->dim(), d.model()->dim());
  for (const auto& [k, c] : sc) {
    cs.push_back({{"k", index_text(law.indices()[k])}, {"c", to_string(c)}});
    combo.axpy(c, d.component(k));
  }
  bool same = compose(d, j, i) == combo;
  o.result["constants"] = cs;
  o.result["compose_matches"] = same;
  o.pass = same;
  o.lines.push_back("D_" + index_text(j) + " o D_" + index_text(i) + " = sum c^k D_k over " + std::to_string(sc.size()) +
                    " terms: " + (same ? "holds" : "FAILS"));
  return o;
}

Outcome cmd_tower(const HSDerivation& d) {
  Outcome o;
  ConstantsTower t = tower(d);
  json ratios = json::array();
  for (const auto& r : t.ratios) ratios.push_back(r ? json(*r) : json(nullptr));
  o.result["dims"] = t.dims;
  o.result["model_degrees"] = ratios;
  o.result["multiplicatively_closed"] = t.multiplicatively_closed;
  o.result["degenerate"] = t.degenerate;
  bool closed = true;
  for (bool b : t.multiplicatively_closed) closed = closed && b;
  o.pass = !t.degenerate && closed;
  std::string dims;
  for (auto v : t.dims) dims += (dims.empty() ? "" : " > ") + std::to_string(v);
  o.lines.push_back("tower dims " + dims + (t.degenerate ? " (degenerate)" : ""));
  return o;
}

json tables(const HSDerivation& d, const BasisCandidate& z) {
  json out = json::array();
  for (const auto& v : z) out.push_back(table_json(*d.model(), derivation_table(d, v)));
  return out;
}

Outcome cmd_basis_verify(const json& cfg, const HSDerivation& d) {
  Outcome o;
  BasisCandidate z;
  for (const auto& s : get_strings(cfg, "basis")) z.push_back(d.model()->parse(s));
  BasisReport r = verify_canonical_basis(d, d.require_law(), z);
  o.result["verification"] = report_json(r);
  o.result["tables"] = tables(d, z);
  o.pass = r.pass;
  o.lines.push_back(std::string("canonical basis check: ") + (r.pass ? "pass" : "FAIL"));
  return o;
}

Outcome cmd_basis_find(const HSDerivation& d) {
  Outcome o;
  BasisCandidate z = find_canonical_basis(d);
  json b = json::array();
  for (const auto& v : z) b.push_back(d.model()->format(v));
  BasisReport r = verify_canonical_basis(d, d.require_law(), z);
  o.result["basis"] = b;
  o.result["verification"] = report_json(r);
  o.result["tables"] = tables(d, z);
  o.pass = r.pass;
  o.lines.push_back("found basis " + b.dump());
  return o;
}

Outcome cmd_wronskian(const json& cfg, const LawPtr& law) {
  Outcome o;
  FieldDerivationContext ctx(law);
  std::vector<RationalFunc> elems;
  for (const auto& s : get_strings(cfg, "elements")) elems.push_back(ctx.parse(s));
  if (elems.empty()) malformed("'elements' is empty");
  RatMatrix w = wronskian_matrix(ctx, elems);
  DependenceResult dep = dependence_test(ctx, elems);
  json mat = json::array();
  for (const auto& row : w) {
    json r = json::array();
    for (const auto& x : row) r.push_back(to_string(x));
    mat.push_back(r);
  }
  json wit = json::array();
  for (const auto& x : dep.witness) wit.push_back(to_string(x));
  o.result["matrix"] = mat;
  o.result["rank"] = dep.rank;
  o.result["verdict"] = dep.dependent ? "dependent" : "independent";
  o.result["witness"] = wit;
  if (cfg.contains("expect")) {
    if (!cfg.at("expect").is_string()) malformed("'expect' must be \"dependent\" or \"independent\"");
    std::string e = cfg.at("expect").get<std::string>();
    if (e != "dependent" && e != "independent") malformed("'expect' must be \"dependent\" or \"independent\"");
    o.pass = (e == "dependent") == dep.dependent;
  }
  o.lines.push_back("wronskian rank " + std::to_string(dep.rank) + " of " + std::to_string(elems.size()) + ": " +
                    (dep.dependent ? "dependent" : "independent"));
  return o;
}

Outcome cmd_selftest(unsigned threads) {
  Outcome o;
  json checks = json::array();
  std::size_t passed = 0;
  auto results = run_selftest(threads);
  for (const auto& c : results) {
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    if (c.pass) ++passed;
    else o.lines.push_back("FAIL " + c.name + ": " + c.detail);
  }
  o.result["checks"] = checks;
  o.pass = passed == results.size();
  o.lines.push_back("selftest: " + std::to_string(passed) + "/" + std::to_string(results.size()) + " checks pass");
  return o;
}

int setup_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::ResourceLimit:
      return kResource;
    case ErrorKind::ParseError:
    case ErrorKind::UnknownVariable:
    case ErrorKind::NotPrime:
    case ErrorKind::ReducibleModulus:
    case ErrorKind::UnsupportedDegree:
    case ErrorKind::InvalidArgument:
    case ErrorKind::IndexRange:
    case ErrorKind::ContextMismatch:
    case ErrorKind::TooManyElements:
      return kMalformed;
    default:
      return kFail;
  }
}

JobResult finish(json report, int code, const std::vector<std::string>& lines) {
  JobResult r;
  r.exit_code = code;
  report["schema_version"] = kSchemaVersion;
  report["pass"] = code == kPass;
  r.report = report.dump(2) + "\n";
  std::ostringstream s;
  for (const auto& l : lines) s << l << "\n";
  r.summary = s.str();
  return r;
}

}  // namespace

JobResult run_job(const std::string& config_text, unsigned threads) {
  json report;
  json cfg;
  try {
    cfg = json::parse(config_text);
  } catch (const json::parse_error& e) {
    report["error"] = {{"kind", "ParseError"}, {"message", e.what()}};
    return finish(report, kMalformed, {"malformed config: " + std::string(e.what())});
  }
  report["config"] = cfg;

  std::string command;
  Context ctx;
  LawPtr law;
  std::optional<HSDerivation> d;
  bool setup_done = false;
  try {
    if (!cfg.is_object()) malformed("config must be a JSON object");
    const json& c = require(cfg, "command");
    if (!c.is_string()) malformed("'command' must be a string");
    command = c.get<std::string>();
    report["command"] = command;
    static const std::vector<std::string> known{"law-check", "pseries", "hn", "iterativity", "evp-check",
                                                "structure-constants", "tower", "basis-verify", "basis-find",
                                                "wronskian", "selftest"};
    if (std::find(known.begin(), known.end(), command) == known.end()) malformed("unknown command '" + command + "'");

    if (command != "selftest") {
      json cx = cfg.contains("context") ? cfg.at("context") : json::object();
      if (!cx.is_object()) malformed("'context' must be an object");
      std::uint64_t p = get_uint(cx, "p");
      std::uint64_t dd = get_uint(cx, "d", 1);
      if (p > (1u << 22) || dd > 64) malformed("p or d out of range");
      std::vector<std::uint32_t> modulus;
      if (cx.contains("modulus")) {
        if (!cx.at("modulus").is_array()) malformed("'modulus' must list coefficients low to high");
        for (const auto& x : cx.at("modulus")) {
          if (!x.is_number_integer() || x.get<long long>() < 0) malformed("modulus coefficients must be non-negative");
          modulus.push_back(x.get<std::uint32_t>());
        }
      }
      ctx.field = &Field::get(static_cast<std::uint32_t>(p), static_cast<unsigned>(dd), modulus);
      ctx.m = static_cast<unsigned>(get_uint(cx, "m", 1));
      if (ctx.m == 0) malformed("m must be positive");
      if (ctx.m > 3) throw ConfigError{kResource, "ResourceLimit", "m must lie in 1..3"};
      ctx.e_given = cx.contains("e");
      unsigned e_ctx = static_cast<unsigned>(get_uint(cx, "e", 1));
      if (command != "hn") {
        json lspec = cfg.contains("law") ? cfg.at("law") : json{{"type", "additive"}};
        ctx.e = natural_e(lspec, e_ctx);
        if (ctx.e == 0) malformed("e must be positive");
        if (ctx.e_given && ctx.e != e_ctx) malformed("context e differs from the law's dimension");
        if (checked_pow(p, static_cast<std::uint64_t>(ctx.e) * ctx.m) > kMaxBox)
          throw ConfigError{kResource, "ResourceLimit", "p^(e m) exceeds 65536"};
        law = build_law(lspec, ctx, ctx.e);
      }
      static const std::vector<std::string> with_derivation{"iterativity", "evp-check", "structure-constants", "tower",
                                                            "basis-verify", "basis-find"};
      if (std::find(with_derivation.begin(), with_derivation.end(), command) != with_derivation.end())
        d = build_derivation(cfg, law, ctx);
    }
    setup_done = true;

    Outcome o;
    if (command == "law-check") o = cmd_law_check(cfg, law);
    else if (command == "pseries") o = cmd_pseries(cfg, law);
    else if (command == "hn") o = cmd_hn(cfg, ctx);
    else if (command == "iterativity") o = cmd_iterativity(cfg, *d);
    else if (command == "evp-check") o = cmd_evp(*d);
    else if (command == "structure-constants") o = cmd_structure(cfg, *d);
    else if (command == "tower") o = cmd_tower(*d);
    else if (command == "basis-verify") o = cmd_basis_verify(cfg, *d);
    else if (command == "basis-find") o = cmd_basis_find(*d);
    else if (command == "wronskian") o = cmd_wronskian(cfg, law);
    else o = cmd_selftest(threads);
    report["result"] = o.result;
    o.lines.insert(o.lines.begin(), command + ": " + (o.pass ? "PASS" : "FAIL"));
    return finish(report, o.pass ? kPass : kFail, o.lines);
  } catch (const ConfigError& e) {
    report["error"] = {{"kind", e.kind}, {"message", e.message}};
    return finish(report, e.code, {command + ": " + e.message});
  } catch (const Error& e) {
    int code = setup_done ? kFail : setup_code(e.kind());
    report["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
    return finish(report, code, {command + ": " + e.what()});
  } catch (const json::exception& e) {
    report["error"] = {{"kind", "ParseError"}, {"message", e.what()}};
    return finish(report, kMalformed, {command + ": " + e.what()});
  }
}

}  // namespace hsd::cli
