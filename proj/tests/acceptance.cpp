// Acceptance run: one PASS/FAIL line per criterion, exact integer comparisons.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "ffpgn/adelic.hpp"
#include "ffpgn/construct.hpp"
#include "ffpgn/minima.hpp"
#include "ffpgn/nsystem.hpp"
#include "ffpgn/pade.hpp"
#include "ffpgn/reduction.hpp"
#include "test_support.hpp"

using namespace ffpgn;
using namespace ffpgn::testing;

namespace {

const RationalField QQ{};
const PrimeField F5{5};

struct Outcome {
  bool pass = true;
  std::string summary;
  std::vector<std::string> notes;  // first failures, printed under the line

  void fail(const std::string& why) {
    pass = false;
    if (notes.size() < 3) notes.push_back(why);
  }
};

// Criterion 1's corpus, reused by criterion 9.
struct Corpus {
  std::vector<LaurentVec<PrimeField>> fp;
  std::vector<LaurentVec<RationalField>> q;
};

Corpus make_corpus() {
  Rng rng(2024);
  Corpus c;
  for (int i = 0; i < 200; ++i) c.fp.push_back(rand_unit_point(F5, rng, 2 + static_cast<std::size_t>(i % 3), 21));
  for (int i = 0; i < 50; ++i) c.q.push_back(rand_unit_point(QQ, rng, 2 + static_cast<std::size_t>(i % 3), 21));
  return c;
}

Outcome criterion1(const Corpus& c) {
  Outcome o;
  int checked = 0;
  auto run = [&](const auto& u) {
    const auto p = minima_profile(u, 20).profile;
    if (auto v = validate_profile(p)) o.fail("violation " + v->condition + " at q=" + std::to_string(v->q) + ": " + v->detail);
    ++checked;
  };
  for (const auto& u : c.fp) run(u);
  for (const auto& u : c.q) run(u);
  o.summary = std::to_string(checked) + " random unit points (200 over F_5, 50 over Q, n in {2,3,4}) give valid n-systems on [0, 20]";
  return o;
}

std::vector<SwitchData> random_switch_corpus(std::uint64_t seed, int count, int N_lo, int N_hi) {
  Rng rng(seed);
  std::vector<SwitchData> out;
  for (int i = 0; i < count; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(i % 3);
    const int N = static_cast<int>(rand_int(rng, N_lo, N_hi));
    out.push_back(random_switch_data(n, N, 6, rng));
  }
  return out;
}

Outcome criterion2() {
  Outcome o;
  int steps = 0, literal5 = 0, signed5 = 0;
  for (const auto& S : random_switch_corpus(77, 100, 6, 24)) {
    const int N = *S.horizon;
    const std::size_t n = S.n;
    const auto con = construct_point(QQ, S, N);
    const Profile P = eval_switches(S, N);
    if (minima_profile(con.u, N - 1).profile != eval_switches(S, N - 1)) o.fail("round trip differs for " + std::to_string(n) + "-system, N=" + std::to_string(N));
    const PolyVec<RationalField> en = unit_vec(QQ, n, n - 1);
    for (std::size_t i = 1; i < con.steps.size(); ++i) {
      const auto& r = S.records[i];
      const auto& x = con.steps[i - 1].basis;
      const auto& y = con.steps[i].basis;
      const std::size_t h = S.records[i - 1].k;
      ++steps;
      if (auto bad = basis_step_violation(x, y, h, r.k, r.l, P.at(r.q)[r.l - 1], en)) {
        ++signed5;
        o.fail("postcondition " + *bad + " fails at q=" + std::to_string(r.q));
      }
      // condition 5 as stated: the two leading coefficients are equal
      if (!(determinant_lc_ratio(x, y, h, r.k, en) == Rational(1))) {
        ++literal5;
        o.fail("condition 5 as stated fails at q=" + std::to_string(r.q) + " (k=" + std::to_string(r.k) +
               ", l=" + std::to_string(r.l) + "): lc ratio -1");
      }
      const LogNorm d = projective_distance(con.steps[i].u, con.steps[i - 1].u);
      if (!d.is_finite() || d.value != -r.q) o.fail("dist(u_i, u_{i-1}) = " + d.str() + " at q=" + std::to_string(r.q));
    }
  }
  o.summary = "100 random switch data: round trip, distances, conditions 1-4 on " + std::to_string(steps) +
              " steps; condition 5 as stated fails on " + std::to_string(literal5) + " steps (holds up to the sign (-1)^(l-k-1) on all but " +
              std::to_string(signed5) + ")";
  return o;
}

Outcome criterion3() {
  Outcome o;
  const std::vector<std::vector<Rational>> sets{{0, 1}, {0, 1, 2}, {0, 1, -1}, {0, 1, 2, 3}};
  for (const auto& w : sets) {
    const auto u = exp_system(QQ, w, 18).point();
    const auto p = minima_profile(u, 16).profile;
    std::string name = "{";
    for (std::size_t i = 0; i < w.size(); ++i) name += (i ? "," : "") + w[i].get().get_str();
    name += "}";
    if (p != extremal(w.size(), 16)) o.fail("omega " + name + " is not extremal");
    for (int q = 0; q <= 16; ++q)
      if (p.at(q).back() - p.at(q).front() > 1) o.fail("omega " + name + ": gap above 1 at q=" + std::to_string(q));
  }
  o.summary = "exp points for 4 exponent sets equal extremal(n, 16) with L_n - L_1 <= 1";
  return o;
}

Outcome criterion4() {
  Outcome o;
  Rng rng(4);
  for (int it = 0; it < 50; ++it) {
    const std::size_t n = 2 + static_cast<std::size_t>(it % 2);
    auto check = [&](const auto& u) {
      const auto p = minima_profile(u, 12).profile;
      const auto d = dual_profile(u, 12);
      for (int q = 0; q <= 12; ++q) {
        std::vector<int> e(p.at(q).rbegin(), p.at(q).rend());
        for (int& x : e) x = -x;
        if (d.at(q) != e) o.fail("dual differs at q=" + std::to_string(q));
      }
    };
    if (it % 5 == 0) check(rand_unit_point(QQ, rng, n, 13));
    else check(rand_unit_point(F5, rng, n, 13));
  }
  o.summary = "dual minima equal reversed negated minima for 50 random points, q <= 12";
  return o;
}

Outcome criterion5() {
  Outcome o;
  Rng rng(5);
  int changes = 0;
  const std::vector<std::pair<std::size_t, std::size_t>> shapes{{3, 2}, {4, 2}, {4, 3}};
  for (int it = 0; it < 20; ++it) {
    for (const auto& [n, m] : shapes) {
      if (n == 3 && it % 2) continue;  // n = 3 uses every other point
      const auto u = rand_unit_point(F5, rng, n, 11);
      const auto p = minima_profile(u, 10).profile;
      const auto c = compound_direct(u, m, 10);
      const int M = static_cast<int>(binomial(n - 1, m - 1));
      for (int q = 0; q <= 10; ++q) {
        const auto& L = p.at(q);
        const auto& C = c.at(q);
        if (C != compound_profile(L, m)) o.fail("compound differs from subset sums at q=" + std::to_string(q));
        int sum = 0, first = 0;
        for (int x : C) sum += x;
        for (std::size_t j = 0; j < m; ++j) first += L[j];
        if (sum != M * q) o.fail("(i) fails at q=" + std::to_string(q));
        if (C[0] != first) o.fail("(ii) fails at q=" + std::to_string(q));
        if (C[1] - C[0] != L[m] - L[m - 1]) o.fail("(iii) fails at q=" + std::to_string(q));
      }
      for (int q = 1; q < 10; ++q) {
        if (c.at(q)[0] - c.at(q - 1)[0] == 1 && c.at(q + 1)[0] == c.at(q)[0]) {
          ++changes;
          if (p.at(q)[m - 1] != p.at(q)[m]) o.fail("slope change at q=" + std::to_string(q) + " without L_m = L_{m+1}");
        }
      }
    }
  }
  o.summary = "compound minima for (n,m) in {(3,2),(4,2),(4,3)}, q <= 10: subset sums, (i)-(iii), " +
              std::to_string(changes) + " slope changes 1 -> 0 with L_m = L_{m+1}";
  if (changes == 0) o.fail("no slope change observed");
  return o;
}

// Coefficient strings of a polynomial in F_p after reducing from Q.
std::string reduced_poly(const PrimeField& fp, const Poly<RationalField>& p) {
  std::string s;
  for (int d = std::max(0, p.deg()); d >= 0; --d) s += fp.to_string(fp.from_mpq(p.coeff(d).get())) + ",";
  return s;
}

std::string native_poly(const PrimeField& fp, const Poly<PrimeField>& p) {
  std::string s;
  for (int d = std::max(0, p.deg()); d >= 0; --d) s += fp.to_string(p.coeff(d)) + ",";
  return s;
}

// Series rendered on the window T^0 .. T^{-prec}.
template <class Conv>
std::string window(const auto& s, int prec, Conv conv) {
  std::string out;
  for (int e = 0; e >= -prec; --e) out += conv(s.coeff(e)) + ",";
  return out;
}

std::string reduced_text(const PrimeField& fp, const Construction<RationalField>& c) {
  auto conv = [&](const Rational& x) { return fp.to_string(fp.from_mpq(x.get())); };
  std::ostringstream s;
  for (const auto& st : c.steps) {
    for (const auto& row : st.basis)
      for (const auto& p : row) s << reduced_poly(fp, p) << '|';
    s << reduced_poly(fp, st.det_m) << '|';
    for (const auto& x : st.u) s << window(x, x.prec(), conv) << '|';
    s << '\n';
  }
  for (const auto& x : c.u) s << window(x, c.N, conv) << '|';
  return s.str();
}

std::string native_text(const PrimeField& fp, const Construction<PrimeField>& c) {
  auto conv = [&](const ModP& x) { return fp.to_string(x); };
  std::ostringstream s;
  for (const auto& st : c.steps) {
    for (const auto& row : st.basis)
      for (const auto& p : row) s << native_poly(fp, p) << '|';
    s << native_poly(fp, st.det_m) << '|';
    for (const auto& x : st.u) s << window(x, x.prec(), conv) << '|';
    s << '\n';
  }
  for (const auto& x : c.u) s << window(x, c.N, conv) << '|';
  return s.str();
}

Outcome criterion6() {
  Outcome o;
  int non_monic = 0, dets = 0;
  for (const auto& S : random_switch_corpus(66, 30, 6, 20)) {
    const int N = *S.horizon;
    const auto cq = construct_point(QQ, S, N);
    for (const auto& st : cq.steps) {
      ++dets;
      if (!(st.det_m.lc() == Rational(1))) {
        ++non_monic;
        o.fail("det(M_i) = " + st.det_m.str() + " at q=" + std::to_string(st.q) + " is not monic");
      }
    }
    for (std::uint64_t p : {2u, 5u, 101u}) {
      const auto rep = universality_reduce(S, p, N);
      if (!rep.integral) o.fail("non-integral coefficients");
      if (!rep.unimodular) o.fail("basis determinant is not +-1");
      const PrimeField fp(p);
      if (reduced_text(fp, cq) != native_text(fp, construct_point(fp, S, N)) || !rep.equal)
        o.fail("reduction mod " + std::to_string(p) + " differs from the native construction");
    }
  }
  o.summary = "30 random switch data: integral, reduction mod 2, 5, 101 equal to the native construction; " +
              std::to_string(non_monic) + " of " + std::to_string(dets) +
              " det(M_i) have leading coefficient -1 (monic as stated fails)";
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto s = exp_system(QQ, {Rational(0), Rational(1)}, 8);
  const auto sol = pade_solve(s, {2, 2});
  const Rational half(-1, 2);  // canonical scaling of (-(2+T), 2-T)
  const PolyVec<RationalField> expect{Poly<RationalField>::from_ints(QQ, {-2, -1}).scaled(half),
                                      Poly<RationalField>::from_ints(QQ, {2, -1}).scaled(half)};
  if (sol.a != expect) o.fail("Pade solution for (1, e^T), rho=(2,2) differs");
  if (sol.order != std::optional<int>(3)) o.fail("order is not 3");
  if (!perfect_scan(exp_system(QQ, {Rational(0), Rational(1), Rational(2)}, 11), 9).empty())
    o.fail("exp{0,1,2} has a non-normal index tuple with sigma <= 9");
  if (!perfect_scan(log_system(QQ, 2, 9), 8, ScanMode::Sorted).empty())
    o.fail("log powers n=2 have a non-normal sorted tuple with sigma <= 8");
  const auto rep = realizer_sequence(exp_system(QQ, {Rational(0), Rational(1)}, 12), 8);
  if (rep.entries.size() != 8 || !rep.ok()) o.fail("realizer formulas fail for exp{0,1}, i <= 8");
  o.summary = "Pade (1,e^T) rho=(2,2) ord 3; exp{0,1,2} perfect to R=9; log n=2 sorted perfect to R=8; realizers i <= 8";
  return o;
}

Outcome criterion8() {
  Outcome o;
  const auto tight = adelic_margin(PolyVec<RationalField>{Poly<RationalField>::from_ints(QQ, {-1}),
                                                          Poly<RationalField>::from_ints(QQ, {1})},
                                   {Rational(0), Rational(1)}, {Rational(0)});
  if (tight.margin != 0) o.fail("tight case margin " + std::to_string(tight.margin));
  if (!tight.delta_ok) o.fail("delta report fails in the tight case");
  Rng rng(8);
  int lowest = INT_MAX;
  for (int it = 0; it < 200; ++it) {
    const std::size_t n = 2 + static_cast<std::size_t>(it % 2);
    PolyVec<RationalField> a;
    while (a.size() < n) {
      auto p = rand_poly(QQ, rng, static_cast<int>(rand_int(rng, 0, 6)));
      if (!p.is_zero()) a.push_back(p);
    }
    auto distinct = [&](std::size_t k) {
      std::vector<Rational> v;
      while (v.size() < k) {
        Rational c(rand_int(rng, -6, 6), rand_int(rng, 1, 3));
        if (std::find(v.begin(), v.end(), c) == v.end()) v.push_back(c);
      }
      return v;
    };
    const auto w = distinct(n);
    const auto S = distinct(static_cast<std::size_t>(rand_int(rng, 1, 3)));
    const auto r = adelic_margin(a, w, S);
    lowest = std::min(lowest, r.margin);
    if (r.margin < 0) o.fail("negative margin " + std::to_string(r.margin));
    if (!r.delta_ok) o.fail("delta report fails");
  }
  o.summary = "tight case margin 0; 200 random instances with margin >= 0 (lowest " + std::to_string(lowest) +
              ") and the Vandermonde delta report";
  return o;
}

Outcome criterion9(const Corpus& c) {
  Outcome o;
  for (const auto& u : c.fp)
    if (reduced_minima_profile(u, 20).profile != minima_profile(u, 20).profile) o.fail("accelerator differs over F_5");
  for (const auto& u : c.q)
    if (reduced_minima_profile(u, 20).profile != minima_profile(u, 20).profile) o.fail("accelerator differs over Q");
  o.summary = "incremental reduction equals the linear-system minima on the 250 points of criterion 1";
  return o;
}

}  // namespace

int main() {
  const Corpus corpus = make_corpus();
  const std::vector<std::function<Outcome()>> criteria{
      [&] { return criterion1(corpus); }, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, [&] { return criterion9(corpus); }};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream t;
    t.precision(1);
    t << std::fixed << secs;
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.summary << " [" << t.str()
              << "s]" << std::endl;
    for (const auto& n : o.notes) std::cout << "    " << n << '\n';
    failed += !o.pass;
  }
  std::cout << (criteria.size() - failed) << " of " << criteria.size() << " criteria pass" << std::endl;
  return failed ? 1 : 0;
}
