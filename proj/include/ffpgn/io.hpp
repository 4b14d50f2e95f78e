#pragma once

// JSON interchange ("schema": "ffpgn/1") and the small text grammars used on
// the command line: polynomials such as "2*T^3 - T + 1/2", comma lists and
// series generator tags such as "exp:0,1,2".
//
// Coefficients are strings ("a" or "a/b" over Q, the residue in [0, p) over
// F_p). Polynomials are listed from the leading coefficient down to T^0;
// Laurent series carry "lead_exp", "prec" and "exact" next to the same list.

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ffpgn/adelic.hpp"
#include "ffpgn/construct.hpp"
#include "ffpgn/errors.hpp"
#include "ffpgn/field.hpp"
#include "ffpgn/laurent.hpp"
#include "ffpgn/minima.hpp"
#include "ffpgn/nsystem.hpp"
#include "ffpgn/pade.hpp"
#include "ffpgn/poly.hpp"

namespace ffpgn::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "ffpgn/1";

inline Json with_schema(Json body, const std::optional<FieldSpec>& field = std::nullopt) {
  Json j;
  j["schema"] = kSchema;
  if (field) j["field"] = field->str();
  for (auto& [k, v] : body.items()) j[k] = std::move(v);
  return j;
}

/// Parses JSON text, mapping syntax errors to ParseError and checking the schema tag.
inline Json parse_document(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("schema")) throw ParseError("document has no \"schema\" field");
  if (j["schema"] != kSchema) throw ParseError("unsupported schema " + j["schema"].dump() + ", expected ffpgn/1");
  return j;
}

/// The field named by a document, or `fallback` when it names none.
inline FieldSpec document_field(const Json& doc, const FieldSpec& fallback) {
  if (!doc.contains("field")) return fallback;
  if (!doc["field"].is_string()) throw ParseError("\"field\" must be a string");
  return FieldSpec::parse(doc["field"].get<std::string>());
}

namespace detail {

// nlohmann reports type mismatches through its own exceptions.
template <class Fn>
auto guarded(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

inline const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing key \"") + key + "\"");
  return j[key];
}

}  // namespace detail

// ---- scalars, polynomials, series ----

template <ExactField F>
Json to_json(const F& f, const Poly<F>& p) {
  Json a = Json::array();
  for (int d = p.deg(); d >= 0; --d) a.push_back(f.to_string(p.coeff(d)));
  return a;
}

template <ExactField F>
typename F::Elem elem_from_json(const F& f, const Json& j) {
  if (j.is_string()) return f.parse(j.get<std::string>());
  if (j.is_number_integer()) return f.from_int(j.get<long>());
  throw ParseError("coefficient must be a string or an integer, got " + j.dump());
}

template <ExactField F>
Poly<F> poly_from_json(const F& f, const Json& j) {
  if (!j.is_array()) throw ParseError("polynomial must be an array of coefficients");
  std::vector<typename F::Elem> c;
  for (auto it = j.rbegin(); it != j.rend(); ++it) c.push_back(elem_from_json(f, *it));
  return Poly<F>(f, std::move(c));
}

template <ExactField F>
Json to_json(const F& f, const PolyVec<F>& v) {
  Json a = Json::array();
  for (const auto& p : v) a.push_back(to_json(f, p));
  return a;
}

template <ExactField F>
PolyVec<F> polyvec_from_json(const F& f, const Json& j) {
  if (!j.is_array()) throw ParseError("polynomial vector must be an array");
  PolyVec<F> v;
  for (const auto& p : j) v.push_back(poly_from_json(f, p));
  return v;
}

template <ExactField F>
Json to_json(const F& f, const PolyMat<F>& m) {
  Json a = Json::array();
  for (const auto& r : m) a.push_back(to_json(f, r));
  return a;
}

template <ExactField F>
PolyMat<F> polymat_from_json(const F& f, const Json& j) {
  if (!j.is_array()) throw ParseError("polynomial matrix must be an array of rows");
  PolyMat<F> m;
  for (const auto& r : j) m.push_back(polyvec_from_json(f, r));
  return m;
}

template <ExactField F>
Json to_json(const F& f, const LaurentSeries<F>& s) {
  Json j;
  j["lead_exp"] = s.lead_exp();
  j["prec"] = s.prec();
  j["exact"] = s.exact();
  Json c = Json::array();
  for (const auto& x : s.coeffs()) c.push_back(f.to_string(x));
  j["coeffs"] = std::move(c);
  return j;
}

template <ExactField F>
LaurentSeries<F> series_from_json(const F& f, const Json& j) {
  return detail::guarded("Laurent series", [&] {
    const int prec = detail::member(j, "prec").get<int>();
    const bool exact = j.value("exact", false);
    const Json& c = detail::member(j, "coeffs");
    if (!c.is_array()) throw ParseError("\"coeffs\" must be an array");
    if (c.empty()) return LaurentSeries<F>(f, prec, exact);
    const int lead = detail::member(j, "lead_exp").get<int>();
    std::vector<typename F::Elem> v;
    for (const auto& x : c) v.push_back(elem_from_json(f, x));
    if (static_cast<int>(v.size()) != lead + prec + 1)
      throw ParseError("series with lead_exp " + std::to_string(lead) + " and prec " + std::to_string(prec) +
                       " needs " + std::to_string(lead + prec + 1) + " coefficients, got " + std::to_string(v.size()));
    return LaurentSeries<F>(f, lead, std::move(v), prec, exact);
  });
}

template <ExactField F>
Json to_json(const F& f, const LaurentVec<F>& u) {
  Json a = Json::array();
  for (const auto& s : u) a.push_back(to_json(f, s));
  return a;
}

template <ExactField F>
LaurentVec<F> laurentvec_from_json(const F& f, const Json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("point must be a nonempty array of series");
  LaurentVec<F> u;
  for (const auto& s : j) u.push_back(series_from_json(f, s));
  return u;
}

/// Point file: {"schema", "field", "u": [series...]}.
template <ExactField F>
Json point_document(const F& f, const LaurentVec<F>& u) {
  Json body;
  body["u"] = to_json(f, u);
  return with_schema(std::move(body), spec_of(f));
}

template <ExactField F>
LaurentVec<F> point_from_document(const F& f, const Json& doc) {
  return laurentvec_from_json(f, detail::member(doc, "u"));
}

// ---- n-systems ----

inline Json to_json(const SwitchData& s) {
  Json j;
  j["n"] = s.n;
  j["horizon"] = s.horizon ? Json(*s.horizon) : Json(nullptr);
  Json sw = Json::array();
  for (const auto& r : s.records) sw.push_back(Json{{"q", r.q}, {"k", r.k}, {"l", r.l}});
  j["switches"] = std::move(sw);
  return with_schema(std::move(j));
}

inline SwitchData switch_data_from_json(const Json& j) {
  return detail::guarded("switch data", [&] {
    SwitchData s;
    s.n = detail::member(j, "n").get<std::size_t>();
    if (j.contains("horizon") && !j["horizon"].is_null()) s.horizon = j["horizon"].get<int>();
    for (const auto& r : detail::member(j, "switches")) {
      const long k = detail::member(r, "k").get<long>(), l = detail::member(r, "l").get<long>();
      if (k < 1 || l < 1) throw ParseError("switch indices are 1-based");
      s.records.push_back({detail::member(r, "q").get<int>(), static_cast<std::size_t>(k), static_cast<std::size_t>(l)});
    }
    if (s.records.empty()) throw ParseError("switch data must list the initial record (0, n, n)");
    return s;
  });
}

inline Json to_json(const Profile& p) {
  return with_schema(Json{{"n", p.n}, {"Q", p.Q}, {"values", p.values}});
}

inline Profile profile_from_json(const Json& j) {
  return detail::guarded("profile", [&] {
    Profile p{detail::member(j, "n").get<std::size_t>(), detail::member(j, "Q").get<int>(),
              detail::member(j, "values").get<std::vector<std::vector<int>>>()};
    if (p.values.size() != static_cast<std::size_t>(p.Q) + 1) throw ParseError("profile needs Q + 1 rows");
    for (const auto& r : p.values)
      if (r.size() != p.n) throw ParseError("profile rows need n entries");
    return p;
  });
}

// ---- minima ----

template <ExactField F>
Json to_json(const F& f, const MinimaResult<F>& r) {
  Json j = to_json(r.profile);
  if (!r.certificates.empty()) {
    Json c = Json::array();
    for (const auto& cert : r.certificates)
      c.push_back(Json{{"q", cert.q}, {"values", cert.values}, {"basis", to_json(f, cert.basis)}});
    j["certificates"] = std::move(c);
  }
  return j;
}

// ---- construction ----

template <ExactField F>
Json to_json(const F& f, const RationalPoint<F>& r) {
  return Json{{"num", to_json(f, r.num)}, {"den", to_json(f, r.den)}};
}

/// {"schema", "field", "N", "records": [{"q", "k", "l", "basis", "u_i", "dist_log"}...],
///  "final": {"u", "exact", "rational_form"}}
template <ExactField F>
Json to_json(const F& f, const Construction<F>& c) {
  Json recs = Json::array();
  for (const auto& s : c.steps) {
    Json r;
    r["q"] = s.q;
    r["k"] = s.k;
    r["l"] = s.l;
    r["basis"] = to_json(f, s.basis);
    r["u_i"] = to_json(f, s.u);
    r["dist_log"] = s.dist_log ? Json(*s.dist_log) : Json(nullptr);
    recs.push_back(std::move(r));
  }
  Json fin;
  fin["u"] = to_json(f, c.u);
  fin["exact"] = c.exact;
  fin["rational_form"] = c.rational_form ? to_json(f, *c.rational_form) : Json(nullptr);
  Json body;
  body["N"] = c.N;
  body["records"] = std::move(recs);
  body["final"] = std::move(fin);
  return with_schema(std::move(body), spec_of(f));
}

inline Json to_json(const UniversalityReport& r, std::uint64_t p) {
  return with_schema(Json{{"p", p},
                          {"integral", r.integral},
                          {"unimodular", r.unimodular},
                          {"unit_leading", r.unit_leading},
                          {"monic", r.monic},
                          {"equal", r.equal},
                          {"mismatches", r.mismatches}});
}

// ---- Pade ----

template <ExactField F>
Json system_json(const F& f, const SeriesSystem<F>& s) {
  Json params = Json::array();
  for (const auto& x : s.params) params.push_back(f.to_string(x));
  return Json{{"tag", s.tag}, {"n", s.n()}, {"params", std::move(params)}};
}

template <ExactField F>
Json to_json(const F& f, const SeriesSystem<F>& s, const std::vector<int>& rho, const PadeSolution<F>& sol,
             bool normal) {
  Json body;
  body["system"] = system_json(f, s);
  body["rho"] = rho;
  body["a"] = to_json(f, sol.a);
  body["order"] = sol.order ? Json(*sol.order) : Json(nullptr);
  body["nullity"] = sol.nullity;
  body["normal"] = normal;
  return with_schema(std::move(body), spec_of(f));
}

inline const char* mode_name(ScanMode m) {
  switch (m) {
    case ScanMode::All: return "all";
    case ScanMode::Diagonal: return "diagonal";
    case ScanMode::Sorted: return "sorted";
  }
  return "all";
}

inline ScanMode parse_mode(std::string_view s) {
  if (s == "all") return ScanMode::All;
  if (s == "diagonal") return ScanMode::Diagonal;
  if (s == "sorted") return ScanMode::Sorted;
  throw ParseError("unknown scan mode '" + std::string(s) + "' (all, diagonal, sorted)");
}

template <ExactField F>
Json scan_json(const F& f, const SeriesSystem<F>& s, int R, ScanMode mode,
               const std::vector<std::vector<int>>& non_normal) {
  return with_schema(
      Json{{"system", system_json(f, s)}, {"R", R}, {"mode", mode_name(mode)}, {"non_normal", non_normal}},
      spec_of(f));
}

template <ExactField F>
Json to_json(const F& f, const SeriesSystem<F>& s, const RealizerReport<F>& r) {
  Json es = Json::array();
  for (const auto& e : r.entries) {
    Json j;
    j["i"] = e.i;
    j["rho"] = e.rho;
    j["y"] = to_json(f, e.y);
    j["norm_log"] = e.norm_log;
    j["pairing_log"] = e.pairing_log;
    j["det_deg"] = e.det_deg ? Json(*e.det_deg) : Json(nullptr);
    j["ok"] = e.norm_ok && e.pairing_ok && e.det_ok;
    es.push_back(std::move(j));
  }
  Json body;
  body["system"] = system_json(f, s);
  body["realizers"] = std::move(es);
  body["non_normal"] = r.non_normal ? Json(*r.non_normal) : Json(nullptr);
  body["ok"] = r.ok();
  return with_schema(std::move(body), spec_of(f));
}

// ---- adelic ----

template <ExactField F>
Json to_json(const F& f, const LocalData<F>& d) {
  return Json{{"alpha", f.to_string(d.alpha)}, {"ord_a", d.ord_a},         {"ord_af", d.ord_af},
              {"norm_log", d.norm_log},        {"ord_delta", d.ord_delta}, {"steps_ok", d.steps_ok}};
}

template <ExactField F>
Json to_json(const F& f, const AdelicReport<F>& r) {
  auto strs = [&](const std::vector<typename F::Elem>& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(f.to_string(x));
    return a;
  };
  Json local = Json::array();
  for (const auto& d : r.local) local.push_back(to_json(f, d));
  Json body;
  body["n"] = r.n;
  body["omega"] = strs(r.omega);
  body["S"] = strs(r.S);
  body["margin"] = r.margin;
  body["local"] = std::move(local);
  body["delta_deg"] = r.delta_deg;
  body["lhs_log"] = r.lhs_log;
  body["remark_margin"] = r.remark_margin;
  body["ok"] = r.ok();
  return with_schema(std::move(body), spec_of(f));
}

template <ExactField F>
Json to_json(const CorollaryReport<F>& r) {
  return Json{{"first_margin", r.first_margin},
              {"baker_margin", r.baker_margin},
              {"pairwise_margin", r.pairwise_margin},
              {"ok", r.ok()}};
}

// ---- text grammars ----

/// Splits on `sep`, trimming blanks; an empty input gives an empty list.
inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  auto trim = [](std::string_view t) {
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.remove_prefix(1);
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.remove_suffix(1);
    return std::string(t);
  };
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

inline std::vector<int> parse_ints(std::string_view s) {
  std::vector<int> out;
  for (const auto& t : split(s, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (t.empty() || used != t.size()) throw ParseError("bad integer '" + t + "'");
    out.push_back(v);
  }
  return out;
}

template <ExactField F>
std::vector<typename F::Elem> parse_elems(const F& f, std::string_view s) {
  std::vector<typename F::Elem> out;
  for (const auto& t : split(s, ',')) out.push_back(f.parse(t));
  return out;
}

/// Polynomial in T: sums of terms c, c*T, c T^k, T^k with c = a or a/b.
template <ExactField F>
Poly<F> parse_poly(const F& f, std::string_view text) {
  const std::string orig(text);
  auto fail = [&]() -> ParseError { return ParseError("bad polynomial '" + orig + "'"); };
  std::string s;
  bool gap = false;  // blanks may not split a number
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      gap = !s.empty();
      continue;
    }
    if (gap && std::isdigit(static_cast<unsigned char>(ch)) && std::isdigit(static_cast<unsigned char>(s.back())))
      throw fail();
    gap = false;
    s.push_back(ch);
  }
  if (s.empty()) throw ParseError("empty polynomial");
  std::size_t i = 0;
  auto digits = [&]() {
    const std::size_t b = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    return s.substr(b, i - b);
  };
  Poly<F> out(f);
  bool first = true;
  while (i < s.size()) {
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') {
      neg = s[i] == '-';
      ++i;
    } else if (!first) {
      throw fail();
    }
    first = false;
    typename F::Elem c = f.one();
    bool has_coeff = false;
    if (const std::string num = digits(); !num.empty()) {
      has_coeff = true;
      c = f.parse(num);
      if (i < s.size() && s[i] == '/') {
        ++i;
        const std::string den = digits();
        if (den.empty()) throw fail();
        const auto d = f.parse(den);
        if (d.is_zero()) throw ParseError("zero denominator in '" + orig + "'");
        c = c / d;
      }
    }
    int e = 0;
    if (has_coeff && i < s.size() && s[i] == '*') ++i;
    if (i < s.size() && (s[i] == 'T' || s[i] == 't')) {
      ++i;
      e = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        const std::string ex = digits();
        if (ex.empty()) throw fail();
        e = std::stoi(ex);
      }
    } else if (!has_coeff) {
      throw fail();
    }
    out += Poly<F>::monomial(f, neg ? -c : c, e);
  }
  return out;
}

/// Generator tags: "exp:w1,w2,..", "binomial:w1,w2,..", "log:n". Each
/// series gets N known coefficients (log powers are known through T^{N-1}).
template <ExactField F>
SeriesSystem<F> parse_generator(const F& f, std::string_view tag, int N) {
  const auto colon = tag.find(':');
  if (colon == std::string_view::npos) throw ParseError("generator '" + std::string(tag) + "' needs the form kind:params");
  const std::string_view kind = tag.substr(0, colon), rest = tag.substr(colon + 1);
  if (kind == "exp") return exp_system(f, parse_elems(f, rest), N);
  if (kind == "binomial") return binomial_system(f, parse_elems(f, rest), N);
  if (kind == "log") {
    const auto n = parse_ints(rest);
    if (n.size() != 1 || n[0] < 1) throw ParseError("log generator takes one positive size, e.g. log:3");
    return log_system(f, static_cast<std::size_t>(n[0]), N - 1);
  }
  throw ParseError("unknown generator kind '" + std::string(kind) + "' (exp, binomial, log)");
}

}  // namespace ffpgn::io
