#pragma once

// The inverse construction: from switch data of an integer n-system to a
// point u of norm 1 whose minima profile is that system. Bases of A^n are
// updated one switch at a time by the basis step, and each basis determines
// a rational approximation u_i of u. Also the mod-p universality check and
// the continued-fraction parametrization for n = 2.

#include <optional>
#include <string>
#include <vector>

#include "ffpgn/errors.hpp"
#include "ffpgn/exterior.hpp"
#include "ffpgn/field.hpp"
#include "ffpgn/laurent.hpp"
#include "ffpgn/linalg.hpp"
#include "ffpgn/nsystem.hpp"
#include "ffpgn/poly.hpp"

namespace ffpgn {

/// A violated basis-step precondition. `condition()` is one of "dimension",
/// "index-range", "not-a-basis", "a-not-large-enough", "a-below-norm",
/// "not-orthogonal".
class BasisStepError : public PreconditionError {
 public:
  BasisStepError(std::string condition, const std::string& detail)
      : PreconditionError("basis step precondition " + condition + ": " + detail), condition_(std::move(condition)) {}
  const std::string& condition() const { return condition_; }

 private:
  std::string condition_;
};

template <ExactField F>
std::string basis_str(const PolyMat<F>& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    s += i ? ", (" : "(";
    for (std::size_t j = 0; j < m[i].size(); ++j) s += (j ? ", " : "") + m[i][j].str();
    s += ")";
  }
  return s + "]";
}

namespace detail {

// Rows of m without the 1-based row i, followed by `extra` when given.
template <ExactField F>
PolyMat<F> drop_row(const PolyMat<F>& m, std::size_t i, const PolyVec<F>* extra = nullptr) {
  PolyMat<F> r;
  for (std::size_t j = 0; j < m.size(); ++j)
    if (j + 1 != i) r.push_back(m[j]);
  if (extra) r.push_back(*extra);
  return r;
}

template <ExactField F>
bool is_unit_det(const F& f, const PolyMat<F>& m) {
  return det(f, m).deg() == 0;
}

}  // namespace detail

/// (-1)^{l-k-1}: in (y_1, .., y^_k, .., y_n, u) the new row y_l sits in
/// position l-1 instead of position k, so the determinant relation
/// det(y^_k, u) = (T^b + c_k) det(x^_h, u) holds only after moving it there.
inline int step_sign(std::size_t k, std::size_t l) { return (l - k - 1) % 2 == 0 ? 1 : -1; }

/// lc det(y_1, .., y^_k, .., y_n, u) / lc det(x_1, .., x^_h, .., x_n, u).
template <ExactField F>
typename F::Elem determinant_lc_ratio(const PolyMat<F>& x, const PolyMat<F>& y, std::size_t h, std::size_t k,
                                      const PolyVec<F>& u) {
  const F& f = u[0].field();
  const Poly<F> dy = det(f, detail::drop_row(y, k, &u)), dx = det(f, detail::drop_row(x, h, &u));
  if (dy.is_zero() || dx.is_zero()) return f.zero();
  return dy.lc() / dx.lc();
}

/// Which of the five basis-step conditions fails for y, or nullopt. A
/// failing "basis" means y is not a basis of A^n. Condition 5 is checked in
/// the signed form: the leading-coefficient ratio is step_sign(k, l).
template <ExactField F>
std::optional<std::string> basis_step_violation(const PolyMat<F>& x, const PolyMat<F>& y, std::size_t h,
                                                std::size_t k, std::size_t l, int a, const PolyVec<F>& u) {
  const F& f = u[0].field();
  const std::size_t n = x.size();
  if (y.size() != n) return "1";
  if (!detail::is_unit_det(f, y)) return "basis";
  if (detail::drop_row(y, l) != detail::drop_row(x, h)) return "1";
  // coordinates of y_l - x_h in the basis x must vanish at h and beyond l
  PolyVec<F> diff = y[l - 1];
  for (std::size_t j = 0; j < n; ++j) diff[j] -= x[h - 1][j];
  const PolyMat<F> dual = unimodular_dual(f, x);
  for (std::size_t i = 1; i <= n; ++i)
    if ((i == h || i > l) && !dot(dual[i - 1], diff).is_zero()) return "2";
  if (vec_deg(y[l - 1]) != a) return "3";
  const PolyMat<F> my = detail::drop_row(y, k, &u);
  if (hadamard_defect(my) != std::optional<int>(0)) return "4";
  if (!(determinant_lc_ratio(x, y, h, k, u) == f.from_int(step_sign(k, l)))) return "5";
  return std::nullopt;
}

/// One basis step with 1-based indices: the rows other than l are the rows
/// of x other than h, in order, and y_l = x_h + T^b y_k with
/// b = a - log|y_k|. Every precondition and all five postconditions are
/// checked on every call.
template <ExactField F>
PolyMat<F> basis_step(const PolyMat<F>& x, std::size_t h, std::size_t k, std::size_t l, int a,
                      const PolyVec<F>& u) {
  const std::size_t n = x.size();
  const std::string state = " (h=" + std::to_string(h) + ", k=" + std::to_string(k) + ", l=" + std::to_string(l) +
                            ", a=" + std::to_string(a) + ", basis " + (n ? basis_str(x) : "[]") + ")";
  if (n < 2 || u.size() != n) throw BasisStepError("dimension", "need n >= 2 rows of length n" + state);
  for (const auto& r : x)
    if (r.size() != n) throw BasisStepError("dimension", "need n >= 2 rows of length n" + state);
  if (!(1 <= h && h <= l && l <= n && 1 <= k && k < l))
    throw BasisStepError("index-range", "need h <= l, k < l within 1..n" + state);
  const F& f = u[0].field();
  if (!detail::is_unit_det(f, x)) throw BasisStepError("not-a-basis", "determinant is not a unit" + state);
  if (!(a > vec_deg(x[h - 1]))) throw BasisStepError("a-not-large-enough", "need e^a > |x_h|" + state);
  for (std::size_t j = 1; j <= l; ++j)
    if (a < vec_deg(x[j - 1])) throw BasisStepError("a-below-norm", "need e^a >= |x_" + std::to_string(j) + "|" + state);
  if (hadamard_defect(detail::drop_row(x, h, &u)) != std::optional<int>(0))
    throw BasisStepError("not-orthogonal", "rows without x_h, together with u, are not orthogonal" + state);

  PolyMat<F> y = detail::drop_row(x, h);
  const PolyVec<F>& yk = y[k - 1];
  const int b = a - vec_deg(yk);
  PolyVec<F> yl = x[h - 1];
  for (std::size_t j = 0; j < n; ++j) yl[j] += yk[j].shifted(b);
  y.insert(y.begin() + static_cast<std::ptrdiff_t>(l - 1), std::move(yl));
  if (auto bad = basis_step_violation(x, y, h, k, l, a, u))
    throw InvariantError("basis step postcondition " + *bad + " failed" + state + " -> " + basis_str(y));
  return y;
}

/// Basis step relative to u = e_n, the case used by the construction.
template <ExactField F>
PolyMat<F> basis_step(const F& f, const PolyMat<F>& x, std::size_t h, std::size_t k, std::size_t l, int a) {
  return basis_step(x, h, k, l, a, unit_vec(f, x.size(), x.size() - 1));
}

/// A vector of rational functions num / den.
template <ExactField F>
struct RationalPoint {
  PolyVec<F> num;
  Poly<F> den;
};

/// State after switch i.
template <ExactField F>
struct ConstructionStep {
  int q = 0;
  std::size_t k = 0;
  std::size_t l = 0;
  PolyMat<F> basis;
  Poly<F> det_m;                  // det of (basis without row k, e_n)
  int det_sign = 1;               // lc(det_m), the product of the step signs
  RationalPoint<F> u_exact;       // u_i as rational functions
  LaurentVec<F> u;                // u_i at working precision N + 1
  std::optional<int> dist_log;    // log dist(u_i, u_{i-1}), i >= 1
  std::optional<int> tail_log;    // log |u_i - u| when above the working floor
};

template <ExactField F>
struct Construction {
  int N = 0;
  LaurentVec<F> u;  // known down to T^{-N} (exact when `exact`)
  bool exact = false;
  std::optional<RationalPoint<F>> rational_form;
  std::vector<ConstructionStep<F>> steps;
};

namespace detail {

template <ExactField F>
LaurentVec<F> expand(const RationalPoint<F>& r, int prec) {
  LaurentVec<F> v;
  for (const auto& p : r.num) v.push_back(LaurentSeries<F>::from_rational(p, r.den, prec));
  return v;
}

}  // namespace detail

/// Deterministic construction of u with L_u = P on q <= N - 1, where P is
/// the system described by S. Uses the switches with q_i <= N. When every
/// record is used, u is the rational point u_{s-1} and is returned exactly.
template <ExactField F>
Construction<F> construct_point(const F& f, const SwitchData& S, int N) {
  if (N < 1) throw PreconditionError("construction needs N >= 1");
  const std::size_t n = S.n;
  const Profile P = eval_switches(S, N);  // validates the records up to N
  const int work = N + 1;
  const PolyVec<F> en = unit_vec(f, n, n - 1);

  std::size_t used = 0;
  while (used < S.records.size() && S.records[used].q <= N) ++used;

  Construction<F> out;
  out.N = N;
  PolyMat<F> basis;
  for (std::size_t j = 0; j < n; ++j) basis.push_back(unit_vec(f, n, j));
  int sign = 1;
  for (std::size_t i = 0; i < used; ++i) {
    const auto& r = S.records[i];
    if (i > 0) {
      const std::size_t h = S.records[i - 1].k;
      basis = basis_step(basis, h, r.k, r.l, P.at(r.q)[r.l - 1], en);
      sign *= step_sign(r.k, r.l);
    }
    ConstructionStep<F> st{r.q, r.k, r.l, basis, Poly<F>(f), sign, {{}, Poly<F>(f)}, {}, std::nullopt, std::nullopt};
    const PolyMat<F> m = detail::drop_row(basis, r.k, &en);
    st.det_m = det(f, m);
    const std::string where = " at switch q=" + std::to_string(r.q);
    if (st.det_m.is_zero() || !(st.det_m.lc() == f.from_int(sign)))
      throw InvariantError("det(M_i) has leading coefficient other than " + std::to_string(sign) + where + ": " +
                           st.det_m.str());
    for (std::size_t j = 0; j < n; ++j)
      if (vec_deg(basis[j]) != P.at(r.q)[j])
        throw InvariantError("row norms differ from P(q_i)" + where + ": " + basis_str(basis));
    if (hadamard_defect(m) != std::optional<int>(0))
      throw InvariantError("rows without x_k and e_n are not orthogonal" + where + ": " + basis_str(basis));
    st.u_exact = {cofactor_row(f, m, n - 1), st.det_m};
    for (std::size_t j = 0; j < n; ++j)
      if (j + 1 != r.k && !dot(st.u_exact.num, basis[j]).is_zero())
        throw InvariantError("u_i is not orthogonal to x_" + std::to_string(j + 1) + where);
    st.u = detail::expand(st.u_exact, work);
    const LogNorm un = log_norm(st.u);
    if (!un.is_finite() || un.value != 0) throw InvariantError("u_i does not have norm 1" + where);
    if (i > 0) {
      const LogNorm d = projective_distance(st.u, out.steps.back().u);
      if (!d.is_finite() || d.value != -r.q)
        throw InvariantError("dist(u_i, u_{i-1}) is " + d.str() + ", expected " + std::to_string(-r.q) + where);
      st.dist_log = d.value;
    }
    out.steps.push_back(std::move(st));
  }

  const auto& last = out.steps.back();
  out.exact = used == S.records.size();
  if (out.exact) {
    out.rational_form = last.u_exact;
    out.u = detail::expand(last.u_exact, N);
  } else {
    for (const auto& s : last.u) out.u.push_back(s.with_prec(N));
  }
  // |u_i - u| = e^{-q_{i+1}}, measured against the working-precision limit
  for (std::size_t i = 0; i + 1 < out.steps.size(); ++i) {
    LaurentVec<F> diff;
    for (std::size_t j = 0; j < n; ++j) diff.push_back(out.steps[i].u[j] - last.u[j]);
    const LogNorm t = log_norm(diff);
    const int expect = -out.steps[i + 1].q;
    if (!t.is_finite() || t.value != expect)
      throw InvariantError("|u_i - u| is " + t.str() + ", expected " + std::to_string(expect) + " at switch q=" +
                           std::to_string(out.steps[i].q));
    out.steps[i].tail_log = t.value;
  }
  return out;
}

namespace detail {

template <ExactField F>
bool same_coefficients(const LaurentSeries<F>& a, const LaurentSeries<F>& b) {
  return a.prec() == b.prec() && a.lead_exp() == b.lead_exp() && a.coeffs() == b.coeffs();
}

inline bool integral(const Poly<RationalField>& p) {
  for (int i = 0; i <= p.deg(); ++i)
    if (!p.coeff(i).is_integer()) return false;
  return true;
}

inline bool integral(const LaurentSeries<RationalField>& s) {
  for (const auto& c : s.coeffs())
    if (!c.is_integer()) return false;
  return true;
}

}  // namespace detail

struct UniversalityReport {
  bool integral = true;      // bases, u_i and u have integer coefficients
  bool unimodular = true;    // every basis has determinant +-1
  bool unit_leading = true;  // every det(M_i) has leading coefficient +-1
  bool monic = true;         // every det(M_i) has leading coefficient 1
  bool equal = true;         // reduction mod p agrees with the native construction
  std::vector<std::string> mismatches;
  bool ok() const { return integral && unimodular && monic && equal; }
};

/// Runs the construction over Q and over F_p and compares the reduction of
/// the first with the second. Series are compared by precision and
/// coefficients; the exactness flag is not, since a terminating expansion
/// mod p need not terminate over Q.
inline UniversalityReport universality_reduce(const SwitchData& S, std::uint64_t p, int N) {
  const PrimeField fp(p);
  const RationalField fq;
  const Construction<RationalField> cq = construct_point(fq, S, N);
  const Construction<PrimeField> cp = construct_point(fp, S, N);
  UniversalityReport rep;
  auto red = [&](const Rational& x) { return fp.from_mpq(x.get()); };
  auto red_poly = [&](const Poly<RationalField>& x) { return x.map(fp, red); };
  auto red_series = [&](const LaurentSeries<RationalField>& x) { return x.map(fp, red); };
  auto fail = [&](bool& flag, std::string what) {
    flag = false;
    rep.mismatches.push_back(std::move(what));
  };

  if (cq.steps.size() != cp.steps.size()) fail(rep.equal, "different number of steps");
  for (std::size_t i = 0; i < cq.steps.size(); ++i) {
    const auto& a = cq.steps[i];
    const std::string at = " at switch q=" + std::to_string(a.q);
    for (const auto& row : a.basis)
      for (const auto& e : row)
        if (!detail::integral(e)) fail(rep.integral, "basis entry " + e.str() + " is not integral" + at);
    for (const auto& s : a.u)
      if (!detail::integral(s)) fail(rep.integral, "u_i has a non-integral coefficient" + at);
    const Rational& lc = a.det_m.lc();
    if (!(lc == fq.one() || lc == -fq.one())) fail(rep.unit_leading, "det(M_i) = " + a.det_m.str() + at);
    if (!(lc == fq.one())) fail(rep.monic, "det(M_i) = " + a.det_m.str() + " is not monic" + at);
    const Poly<RationalField> db = det(fq, a.basis);
    if (db.deg() != 0 || !(db.lc() == fq.one() || db.lc() == -fq.one()))
      fail(rep.unimodular, "basis determinant " + db.str() + " is not +-1" + at);
    if (i >= cp.steps.size()) continue;
    const auto& b = cp.steps[i];
    bool same = a.q == b.q && a.k == b.k && a.l == b.l && red_poly(a.det_m) == b.det_m;
    for (std::size_t r = 0; same && r < a.basis.size(); ++r)
      for (std::size_t c = 0; c < a.basis[r].size(); ++c) same = same && red_poly(a.basis[r][c]) == b.basis[r][c];
    for (std::size_t c = 0; same && c < a.u.size(); ++c)
      same = red_poly(a.u_exact.num[c]) == b.u_exact.num[c] && detail::same_coefficients(red_series(a.u[c]), b.u[c]);
    if (!same) fail(rep.equal, "reduction differs from the native construction" + at);
  }
  for (const auto& s : cq.u)
    if (!detail::integral(s)) fail(rep.integral, "u has a non-integral coefficient");
  for (std::size_t c = 0; c < cq.u.size() && c < cp.u.size(); ++c)
    if (!detail::same_coefficients(red_series(cq.u[c]), cp.u[c])) fail(rep.equal, "u differs after reduction");
  return rep;
}

/// The point (-xi, 1) with xi = [a_0, a_1, a_2, ...] and the convergents
/// y_{-1} = (0, 1), y_0 = (1, a_0), y_i = a_i y_{i-1} + y_{i-2}.
template <ExactField F>
struct CfPoint {
  LaurentVec<F> u;
  bool exact = false;
  std::vector<PolyVec<F>> convergents;  // y_{-1}, y_0, y_1, ...
  std::vector<int> d;                   // d_0 = 0, d_i = deg of the i-th denominator
};

/// n = 2 point from explicit partial quotients. With complete = true the
/// list is the whole expansion and xi is rational; otherwise it is a prefix
/// of an infinite expansion and must determine xi down to T^{-N}.
template <ExactField F>
CfPoint<F> cf_point(const F& f, const Poly<F>& a0, const std::vector<Poly<F>>& quotients, int N, bool complete = true) {
  if (N < 0) throw PreconditionError("negative precision");
  if (a0.deg() > 0) throw PreconditionError("a_0 must be a constant, got " + a0.str());
  CfPoint<F> out;
  out.convergents = {{Poly<F>(f), Poly<F>::constant(f, f.one())}, {Poly<F>::constant(f, f.one()), a0}};
  out.d = {0};
  for (std::size_t i = 0; i < quotients.size(); ++i) {
    const Poly<F>& a = quotients[i];
    if (a.deg() < 1)
      throw PreconditionError("partial quotient a_" + std::to_string(i + 1) + " = " + a.str() + " has degree < 1");
    const auto& y1 = out.convergents[out.convergents.size() - 1];
    const auto& y2 = out.convergents[out.convergents.size() - 2];
    PolyVec<F> y{a * y1[0] + y2[0], a * y1[1] + y2[1]};
    out.convergents.push_back(std::move(y));
    out.d.push_back(out.d.back() + a.deg());
  }
  // |xi - P_k/Q_k| = e^{-d_k - d_{k+1}} <= e^{-2 d_k - 1} for an unknown continuation
  if (!complete && 2 * out.d.back() + 1 < N + 1)
    throw PrecisionError("partial quotients of total degree " + std::to_string(out.d.back()) +
                         " do not determine xi to precision " + std::to_string(N));
  const auto& last = out.convergents.back();
  LaurentSeries<F> xi = LaurentSeries<F>::from_rational(last[1], last[0], N);
  if (!complete) xi = LaurentSeries<F>(f, xi.lead_exp(), xi.coeffs(), N, false);
  out.exact = xi.exact();
  out.u = {-xi, LaurentSeries<F>::monomial(f, f.one(), 0, N)};
  return out;
}

/// n = 2 point with partial quotients T^{d_i - d_{i-1}} for 0 < d_1 < d_2 < ...
template <ExactField F>
CfPoint<F> cf_point_degrees(const F& f, const std::vector<int>& d, int N, bool complete = false) {
  std::vector<Poly<F>> qs;
  int prev = 0;
  for (int di : d) {
    if (di <= prev) throw PreconditionError("degree sequence must be strictly increasing from d_0 = 0");
    qs.push_back(Poly<F>::t_pow(f, di - prev));
    prev = di;
  }
  return cf_point(f, Poly<F>(f), qs, N, complete);
}

/// Partial quotients a_1, ..., a_depth of xi = [0, a_1, a_2, ...], |xi| < 1.
/// Stops early when the expansion terminates.
template <ExactField F>
std::vector<Poly<F>> cf_expand(const LaurentSeries<F>& xi, int depth) {
  if (xi.log_norm().is_indeterminate()) throw PrecisionError("xi is not certified nonzero");
  if (xi.norm_bound() >= 0) throw PreconditionError("cf_expand needs |xi| < 1");
  std::vector<Poly<F>> out;
  LaurentSeries<F> x = xi;
  for (int i = 1; i <= depth; ++i) {
    if (x.exact() && x.stored_zero()) break;
    if (x.stored_zero())
      throw PrecisionError("precision exhausted before partial quotient " + std::to_string(i));
    const LaurentSeries<F> inv = x.inverse();
    if (!inv.exact() && inv.prec() < 0)
      throw PrecisionError("precision exhausted inside partial quotient " + std::to_string(i));
    out.push_back(inv.polynomial_part());
    x = inv.fractional_part();
  }
  return out;
}

}  // namespace ffpgn
