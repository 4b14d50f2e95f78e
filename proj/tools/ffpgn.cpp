// ffpgn: command-line front end.
//
// Exit codes: 0 ok, 2 precision, 3 parse, 4 verification failure,
// 5 precondition. The field comes from --field, else FFPGN_FIELD, else Q.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "ffpgn/ffpgn.hpp"

using namespace ffpgn;
using io::Json;

namespace {

enum Exit { kOk = 0, kOther = 1, kPrecision = 2, kParse = 3, kVerify = 4, kPrecondition = 5 };

struct Common {
  std::string field;
  bool json = false;
  unsigned jobs = 1;
  std::string out;
};

FieldSpec resolve_field(const Common& c) {
  if (!c.field.empty()) return FieldSpec::parse(c.field);
  if (const char* env = std::getenv("FFPGN_FIELD"); env && *env) return FieldSpec::parse(env);
  return FieldSpec::rationals();
}

// The field named by a document wins over the default; an explicit --field
// that disagrees with it is an error.
FieldSpec resolve_field(const Common& c, const Json& doc) {
  const FieldSpec dflt = resolve_field(c);
  const FieldSpec f = io::document_field(doc, dflt);
  if (!c.field.empty() && !(f == dflt))
    throw PreconditionError("--field " + dflt.str() + " conflicts with the document field " + f.str());
  return f;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PreconditionError("cannot write " + path);
  out << text;
}

// JSON goes to --out when given, and to stdout under --json.
void emit(const Common& c, const Json& j, const std::string& text) {
  const std::string dumped = j.dump(2) + "\n";
  if (!c.out.empty()) write_text(c.out, dumped);
  std::cout << (c.json ? dumped : text);
}

std::string profile_table(const Profile& p) {
  std::ostringstream s;
  for (int q = 0; q <= p.Q; ++q) {
    s << q << ':';
    for (int v : p.at(q)) s << ' ' << v;
    s << '\n';
  }
  return s.str();
}

std::string vec_str(const auto& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].str();
  return s + ")";
}

// ---- minima ----

struct MinimaOpts {
  std::string gen, u_file, cf;
  bool cf_prefix = false;
  int Q = 0;
  int prec = -1;
  bool certify = false;
  std::string method = "linear";
};

int cmd_minima(const Common& c, const MinimaOpts& o) {
  const int given = !o.gen.empty() + !o.u_file.empty() + !o.cf.empty();
  if (given != 1) throw ParseError("minima needs exactly one of --gen, --u, --cf");
  std::optional<Json> doc;
  if (!o.u_file.empty()) doc = io::parse_document(read_file(o.u_file));
  const FieldSpec spec = doc ? resolve_field(c, *doc) : resolve_field(c);
  return with_field(spec, [&](const auto& f) {
    using F = std::decay_t<decltype(f)>;
    LaurentVec<F> u;
    const int N = o.prec >= 0 ? o.prec : o.Q + 1;  // series known down to T^{-N}
    if (doc) {
      u = io::point_from_document(f, *doc);
    } else if (!o.gen.empty()) {
      u = io::parse_generator(f, o.gen, N + 1).point();
    } else {
      std::vector<Poly<F>> qs;
      for (const auto& t : io::split(o.cf, ',')) qs.push_back(io::parse_poly(f, t));
      u = cf_point(f, Poly<F>(f), qs, N, !o.cf_prefix).u;
    }
    MinimaResult<F> r;
    if (o.method == "linear") r = minima_profile(u, o.Q, o.certify, c.jobs);
    else if (o.method == "reduction") r = reduced_minima_profile(u, o.Q, o.certify);
    else throw ParseError("unknown method '" + o.method + "' (linear, reduction)");
    emit(c, io::to_json(f, r), profile_table(r.profile));
    return kOk;
  });
}

// ---- construct ----

struct ConstructOpts {
  std::string switches, point_out;
  int N = 0;
  bool verify = false;
  std::uint64_t modp = 0;
};

int cmd_construct(const Common& c, const ConstructOpts& o) {
  const Json doc = io::parse_document(read_file(o.switches));
  const SwitchData s = io::switch_data_from_json(doc);
  const FieldSpec spec = resolve_field(c, doc);
  return with_field(spec, [&](const auto& f) {
    const auto con = construct_point(f, s, o.N);
    Json cert = io::to_json(f, con);
    std::ostringstream text;
    text << "n = " << s.n << ", N = " << o.N << ", records used: " << con.steps.size() << '\n';
    text << "u = " << vec_str(con.u) << (con.exact ? " (exact)" : "") << '\n';
    int code = kOk;
    if (o.verify) {
      const int Q = o.N - 1;
      const bool same = minima_profile(con.u, Q, false, c.jobs).profile == eval_switches(s, Q);
      cert["verified"] = same;
      text << "round trip on [0, " << Q << "]: " << (same ? "agrees" : "DIFFERS") << '\n';
      if (!same) code = kVerify;
    }
    if (o.modp) {
      const auto rep = universality_reduce(s, o.modp, o.N);
      cert["reduction"] = io::to_json(rep, o.modp);
      const bool agrees = rep.integral && rep.unimodular && rep.unit_leading && rep.equal;
      text << "reduction mod " << o.modp << ": " << (agrees ? "reduction agrees" : "reduction DIFFERS")
           << (rep.monic ? "" : " (some det(M_i) has leading coefficient -1)") << '\n';
      for (const auto& m : rep.mismatches) text << "  " << m << '\n';
      if (!agrees) code = kVerify;
    }
    if (!o.point_out.empty()) write_text(o.point_out, io::point_document(f, con.u).dump(2) + "\n");
    emit(c, cert, text.str());
    return code;
  });
}

// ---- pade / scan ----

struct PadeOpts {
  std::string gen, rho;
  int realizers = 0;
  int extremal_q = -1;
  int N = -1;
};

int cmd_pade(const Common& c, const PadeOpts& o) {
  const int modes = !o.rho.empty() + (o.realizers > 0) + (o.extremal_q >= 0);
  if (modes != 1) throw ParseError("pade needs exactly one of --rho, --realizers, --extremal");
  return with_field(resolve_field(c), [&](const auto& f) {
    std::ostringstream text;
    if (!o.rho.empty()) {
      const auto rho = io::parse_ints(o.rho);
      const int N = o.N >= 0 ? o.N : sigma(rho) + kPadeGuard;
      const auto sys = io::parse_generator(f, o.gen, N);
      const auto sol = pade_solve(sys, rho);
      const bool normal = is_normal(sys, rho).normal;
      text << "a = " << vec_str(sol.a) << '\n';
      text << "ord_0(a.f) = " << (sol.order ? std::to_string(*sol.order) : "inf") << ", nullity " << sol.nullity
           << (normal ? ", normal" : ", not normal") << '\n';
      emit(c, io::to_json(f, sys, rho, sol, normal), text.str());
      return kOk;
    }
    if (o.realizers > 0) {
      // solutions up to i_max + n - 1, each with sigma = i
      const auto probe = io::parse_generator(f, o.gen, 1);
      const int N = o.N >= 0 ? o.N : o.realizers + static_cast<int>(probe.n()) - 1 + kPadeGuard;
      const auto sys = io::parse_generator(f, o.gen, N);
      const auto rep = realizer_sequence(sys, o.realizers);
      for (const auto& e : rep.entries)
        text << "y_" << e.i << " = " << vec_str(e.y) << "  log|y| = " << e.norm_log
             << ", log|y.u| = " << e.pairing_log << '\n';
      text << (rep.ok() ? "all norm, pairing and determinant checks pass" : "realizer checks FAIL") << '\n';
      emit(c, io::to_json(f, sys, rep), text.str());
      return rep.ok() ? kOk : kVerify;
    }
    const auto sys = io::parse_generator(f, o.gen, 1);
    if (sys.tag != "exp") throw PreconditionError("--extremal needs an exp generator");
    const auto rep = extremal_profile_check(f, sys.params, o.extremal_q, c.jobs);
    Json j = io::with_schema(Json{{"system", io::system_json(f, sys)},
                                  {"Q", o.extremal_q},
                                  {"profile", io::to_json(rep.profile)["values"]},
                                  {"equals_extremal", rep.equals_extremal},
                                  {"gap_ok", rep.gap_ok},
                                  {"lower_bound_ok", rep.lower_bound_ok},
                                  {"diagonal_checked", rep.diagonal_checked},
                                  {"diagonal_normal", rep.diagonal_normal},
                                  {"ok", rep.ok()}},
                             spec_of(f));
    text << profile_table(rep.profile) << (rep.ok() ? "extremal profile confirmed" : "extremal check FAILS") << '\n';
    emit(c, j, text.str());
    return rep.ok() ? kOk : kVerify;
  });
}

struct ScanOpts {
  std::string gen, mode = "all";
  int R = 0;
  int N = -1;
  bool expect_perfect = false;
};

int cmd_scan(const Common& c, const ScanOpts& o) {
  return with_field(resolve_field(c), [&](const auto& f) {
    const auto sys = io::parse_generator(f, o.gen, o.N >= 0 ? o.N : o.R + kPadeGuard);
    const ScanMode mode = io::parse_mode(o.mode);
    const auto bad = perfect_scan(sys, o.R, mode, c.jobs);
    std::ostringstream text;
    text << "non-normal index tuples with sigma <= " << o.R << " (" << io::mode_name(mode) << "): " << bad.size()
         << '\n';
    for (const auto& rho : bad) {
      text << " ";
      for (int r : rho) text << ' ' << r;
      text << '\n';
    }
    emit(c, io::scan_json(f, sys, o.R, mode, bad), text.str());
    return o.expect_perfect && !bad.empty() ? kVerify : kOk;
  });
}

// ---- adelic ----

struct AdelicOpts {
  std::vector<std::string> a;  // each occurrence may hold several ';'-separated entries
  std::string omega, S;
  bool corollaries = false;
  int p_loc = -1;
};

int cmd_adelic(const Common& c, const AdelicOpts& o) {
  return with_field(resolve_field(c), [&](const auto& f) {
    using F = std::decay_t<decltype(f)>;
    PolyVec<F> a;
    for (const auto& part : o.a)
      for (const auto& t : io::split(part, ';')) a.push_back(io::parse_poly(f, t));
    const auto omega = io::parse_elems(f, o.omega);
    const auto S = io::parse_elems(f, o.S);
    const std::optional<int> p_loc = o.p_loc >= 0 ? std::optional<int>(o.p_loc) : std::nullopt;
    const auto rep = adelic_margin(a, omega, S, p_loc);
    Json j = io::to_json(f, rep);
    std::ostringstream text;
    text << "margin = " << rep.margin << " (log LHS = " << rep.lhs_log << "), deg Delta = " << rep.delta_deg << '\n';
    for (const auto& ld : rep.local)
      text << "  alpha = " << f.to_string(ld.alpha) << ": ord(a.f) = " << ld.ord_af << ", ord(Delta) = " << ld.ord_delta
           << '\n';
    bool ok = rep.ok();
    if (o.corollaries) {
      const auto cr = corollary_checks(a, omega, p_loc);
      j["corollaries"] = io::to_json(cr);
      text << "corollary margins: " << cr.first_margin << ", " << cr.baker_margin << ", " << cr.pairwise_margin << '\n';
      ok = ok && cr.ok();
    }
    emit(c, j, text.str());
    return ok ? kOk : kVerify;
  });
}

// ---- graph ----

struct GraphOpts {
  int extremal = 0;
  int random = 0;
  std::string switches, profile;
  int Q = -1;
  std::uint64_t seed = 1;
  std::string format = "svg";
};

int cmd_graph(const Common& c, const GraphOpts& o) {
  const int given = (o.extremal > 0) + (o.random > 0) + !o.switches.empty() + !o.profile.empty();
  if (given != 1) throw ParseError("graph needs exactly one of --extremal, --random, --switches, --profile");
  Profile p;
  if (!o.profile.empty()) {
    p = io::profile_from_json(io::parse_document(read_file(o.profile)));
    if (o.Q >= 0) throw ParseError("--Q does not apply to --profile input");
  } else {
    if (o.Q < 0) throw ParseError("--Q is required");
    if (o.extremal > 0) {
      p = extremal(static_cast<std::size_t>(o.extremal), o.Q);
    } else if (o.random > 0) {
      std::mt19937_64 rng(o.seed);
      p = random_profile(static_cast<std::size_t>(o.random), o.Q, rng);
    } else {
      p = eval_switches(io::switch_data_from_json(io::parse_document(read_file(o.switches))), o.Q);
    }
  }
  std::string body;
  if (o.format == "svg") body = combined_graph_svg(p);
  else if (o.format == "csv") body = combined_graph_csv(p);
  else if (o.format == "json") body = io::to_json(p).dump(2) + "\n";
  else if (o.format == "switches") {
    SwitchData sd = to_switches(p);
    sd.horizon = p.Q;
    body = io::to_json(sd).dump(2) + "\n";
  }
  else throw ParseError("unknown format '" + o.format + "' (svg, csv, json, switches)");
  if (!c.out.empty()) write_text(c.out, body);
  else std::cout << body;
  return kOk;
}

int run(int argc, char** argv) {
  CLI::App app{"ffpgn: successive minima over F(T), n-systems, Hermite-Pade and adelic checks"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  Common common;
  app.add_option("--field", common.field, "Q or Fp:<prime> (default: FFPGN_FIELD, else Q)");
  app.add_flag("--json", common.json, "print the JSON report instead of text");
  app.add_option("--jobs", common.jobs, "worker threads for parallel sweeps")->check(CLI::PositiveNumber);
  app.add_option("--out", common.out, "also write the JSON report (graph: the rendered output) to this file");

  MinimaOpts mo;
  auto* minima = app.add_subcommand("minima", "successive minima L_u(q) for q = 0..Q");
  minima->add_option("--gen", mo.gen, "series generator, e.g. exp:0,1,2 (u_i = f_i(1/T))");
  minima->add_option("--u", mo.u_file, "point file {\"schema\",\"field\",\"u\"}");
  minima->add_option("--cf", mo.cf, "continued fraction quotients a_1,a_2,... of xi; u = (-xi, 1)");
  minima->add_flag("--cf-prefix", mo.cf_prefix, "treat --cf as a prefix of an infinite expansion");
  minima->add_option("--Q", mo.Q, "horizon")->required();
  minima->add_option("--prec", mo.prec, "generated series known down to T^{-prec} (default Q + 1)");
  minima->add_flag("--certify", mo.certify, "include a realizing basis for every q");
  minima->add_option("--method", mo.method, "linear (default) or reduction");

  ConstructOpts co;
  auto* construct = app.add_subcommand("construct", "point u whose minima follow given switch data");
  construct->add_option("--switches", co.switches, "switch data file")->required();
  construct->add_option("--N", co.N, "precision: u is known down to T^{-N}")->required();
  construct->add_flag("--verify", co.verify, "recompute the minima of u on [0, N-1] and compare");
  construct->add_option("--modp", co.modp, "rerun over F_p and compare with the reduction of the Q construction");
  construct->add_option("--point-out", co.point_out, "write u as a point file");

  PadeOpts po;
  auto* pade = app.add_subcommand("pade", "type I Hermite-Pade approximants at T = 0");
  pade->add_option("--gen", po.gen, "series generator: exp:.., binomial:.., log:n")->required();
  pade->add_option("--rho", po.rho, "index tuple, e.g. 2,2");
  pade->add_option("--realizers", po.realizers, "minima realizers y_1..y_i from Pade solutions");
  pade->add_option("--extremal", po.extremal_q, "check that exp points have the extremal profile up to Q");
  pade->add_option("--N", po.N, "series coefficients to use");

  ScanOpts so;
  auto* scan = app.add_subcommand("scan", "normality of all index tuples with sigma <= R");
  scan->add_option("--gen", so.gen, "series generator")->required();
  scan->add_option("--R", so.R, "bound on sigma(rho)")->required();
  scan->add_option("--mode", so.mode, "all, diagonal or sorted");
  scan->add_option("--N", so.N, "series coefficients to use (default R + 2)");
  scan->add_flag("--expect-perfect", so.expect_perfect, "exit 4 when some tuple is not normal");

  AdelicOpts ao;
  auto* adelic = app.add_subcommand("adelic", "product inequality for a.f with f = (e^{omega_i T})");
  adelic->add_option("--a", ao.a, "polynomials a_i, repeated or separated by ';', e.g. \"-1;1\"")
      ->required()
      ->allow_extra_args(false);
  adelic->add_option("--omega", ao.omega, "distinct exponents, e.g. 0,1")->required();
  adelic->add_option("--S", ao.S, "distinct points alpha")->required();
  adelic->add_flag("--corollaries", ao.corollaries, "also check the inequalities at infinity");
  adelic->add_option("--p-loc", ao.p_loc, "local series precision");

  GraphOpts go;
  auto* graph = app.add_subcommand("graph", "combined graph of an n-system");
  graph->add_option("--extremal", go.extremal, "the extremal n-system");
  graph->add_option("--random", go.random, "a random n-system (see --seed)");
  graph->add_option("--switches", go.switches, "switch data file");
  graph->add_option("--profile", go.profile, "profile file");
  graph->add_option("--Q", go.Q, "horizon");
  graph->add_option("--seed", go.seed, "seed for --random");
  graph->add_option("--format", go.format, "svg, csv, json or switches");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  if (*minima) return cmd_minima(common, mo);
  if (*construct) return cmd_construct(common, co);
  if (*pade) return cmd_pade(common, po);
  if (*scan) return cmd_scan(common, so);
  if (*adelic) return cmd_adelic(common, ao);
  return cmd_graph(common, go);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const PrecisionError& e) {
    std::cerr << "ffpgn: precision: " << e.what() << '\n';
    return kPrecision;
  } catch (const ParseError& e) {
    std::cerr << "ffpgn: parse error: " << e.what() << '\n';
    return kParse;
  } catch (const PreconditionError& e) {
    std::cerr << "ffpgn: precondition: " << e.what() << '\n';
    return kPrecondition;
  } catch (const VerificationFailure& e) {
    std::cerr << "ffpgn: verification failed: " << e.what() << '\n';
    return kVerify;
  } catch (const InvariantError& e) {
    std::cerr << "ffpgn: verification failed: " << e.what() << '\n';
    return kVerify;
  } catch (const std::exception& e) {
    std::cerr << "ffpgn: " << e.what() << '\n';
    return kOther;
  }
}
