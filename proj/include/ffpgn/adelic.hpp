#pragma once

// The product inequality for a.f with f = (e^{omega_1 T}, .., e^{omega_n T})
// at finitely many points alpha: Wronskian matrices, the determinant Delta,
// local orders, integer log-scale margins and the two corollaries at infinity.
//
// Exponential symbols: the expansion of e^{omega T} at alpha carries the
// constant e^{omega alpha}. Constants with equal exponent omega*alpha are the
// same symbol, distinct exponents are treated as linearly independent
// transcendentals. For rational omega and alpha this is the
// Lindemann-Weierstrass theorem; the exponents only coincide at alpha = 0.

#include <algorithm>
#include <climits>
#include <optional>
#include <string>
#include <vector>

#include "ffpgn/errors.hpp"
#include "ffpgn/field.hpp"
#include "ffpgn/linalg.hpp"
#include "ffpgn/poly.hpp"

namespace ffpgn {

namespace detail {

template <ExactField F>
void check_exp_input(const PolyVec<F>& a, const std::vector<typename F::Elem>& omega) {
  if constexpr (!F::kCharZero) throw PreconditionError("exponential systems need a field of characteristic 0");
  if (a.empty() || a.size() != omega.size()) throw PreconditionError("a and omega must have the same nonzero length");
  for (const auto& p : a)
    if (p.is_zero()) throw PreconditionError("entries of a must be nonzero polynomials");
  for (std::size_t i = 0; i < omega.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (omega[i] == omega[j]) throw PreconditionError("exponents omega must be pairwise distinct");
}

inline int binom2(std::size_t n) { return static_cast<int>(n * (n - 1) / 2); }

}  // namespace detail

/// Row k, column i holds (omega_i + d/dT)^k a_i for 0 <= k < n.
template <ExactField F>
PolyMat<F> wronskian_matrix(const PolyVec<F>& a, const std::vector<typename F::Elem>& omega) {
  detail::check_exp_input(a, omega);
  const std::size_t n = a.size();
  PolyMat<F> m{a};
  for (std::size_t k = 1; k < n; ++k) {
    PolyVec<F> row;
    for (std::size_t i = 0; i < n; ++i) row.push_back(m.back()[i].scaled(omega[i]) + m.back()[i].derivative());
    m.push_back(std::move(row));
  }
  return m;
}

template <ExactField F>
struct DeltaReport {
  Poly<F> delta;
  int expected_deg = 0;               // sum of deg a_i
  typename F::Elem expected_lc;       // prod c_i times det(omega_i^k)
  bool deg_ok = false;
  bool lc_ok = false;
  bool ok() const { return deg_ok && lc_ok; }
};

/// det(omega_i^k) with 0^0 = 1.
template <ExactField F>
typename F::Elem vandermonde(const F& f, const std::vector<typename F::Elem>& omega) {
  PolyMat<F> v;
  typename F::Elem one = f.one();
  std::vector<typename F::Elem> pw(omega.size(), one);
  for (std::size_t k = 0; k < omega.size(); ++k) {
    PolyVec<F> row;
    for (std::size_t i = 0; i < omega.size(); ++i) {
      row.push_back(Poly<F>::constant(f, pw[i]));
      pw[i] = pw[i] * omega[i];
    }
    v.push_back(std::move(row));
  }
  return det(f, v).coeff(0);
}

template <ExactField F>
DeltaReport<F> delta_report(const PolyVec<F>& a, const std::vector<typename F::Elem>& omega) {
  const F& f = a.at(0).field();
  DeltaReport<F> r{det(f, wronskian_matrix(a, omega)), 0, vandermonde(f, omega)};
  for (const auto& p : a) {
    r.expected_deg += p.deg();
    r.expected_lc = r.expected_lc * p.lc();
  }
  r.deg_ok = r.delta.deg() == r.expected_deg;
  r.lc_ok = r.deg_ok && r.delta.lc() == r.expected_lc;
  return r;
}

/// Delta = det(wronskian_matrix); throws InvariantError when the degree or
/// leading coefficient differs from the Vandermonde factorization.
template <ExactField F>
Poly<F> delta(const PolyVec<F>& a, const std::vector<typename F::Elem>& omega) {
  auto r = delta_report(a, omega);
  if (!r.ok())
    throw InvariantError("Delta = " + r.delta.str() + " does not have degree " + std::to_string(r.expected_deg) +
                         " and leading coefficient " + r.delta.field().to_string(r.expected_lc));
  return r.delta;
}

/// ord_alpha(p), INT_MAX for the zero polynomial.
template <ExactField F>
int ord_at(const Poly<F>& p, const typename F::Elem& alpha) {
  return p.is_zero() ? INT_MAX : p.taylor_shift(alpha).ord0();
}

/// ord_alpha(a.f) in the exponential-symbol model: the first power of
/// (T - alpha) whose coefficient, a linear form in the symbols
/// e^{omega_i alpha}, does not vanish. Throws PrecisionError when nothing
/// is found below p_loc.
template <ExactField F>
int ord_exp_combination(const PolyVec<F>& a, const std::vector<typename F::Elem>& omega,
                        const typename F::Elem& alpha, int p_loc) {
  const F& f = a.at(0).field();
  std::vector<typename F::Elem> symbols;  // distinct omega_i * alpha
  std::vector<std::size_t> sym_of;
  for (const auto& w : omega) {
    const auto b = w * alpha;
    auto it = std::find(symbols.begin(), symbols.end(), b);
    sym_of.push_back(static_cast<std::size_t>(it - symbols.begin()));
    if (it == symbols.end()) symbols.push_back(b);
  }
  std::vector<Poly<F>> shifted;
  for (const auto& p : a) shifted.push_back(p.taylor_shift(alpha));
  for (int m = 0; m < p_loc; ++m) {
    std::vector<typename F::Elem> c(symbols.size(), f.zero());
    for (std::size_t i = 0; i < a.size(); ++i) {
      // coefficient of (T-alpha)^m in a_i(T) sum_j omega_i^j/j! (T-alpha)^j
      typename F::Elem term = f.one();  // omega^j / j!
      for (int j = 0; j <= m; ++j) {
        c[sym_of[i]] += shifted[i].coeff(m - j) * term;
        term = term * omega[i] / f.from_int(j + 1);
      }
    }
    if (std::any_of(c.begin(), c.end(), [](const auto& x) { return !x.is_zero(); })) return m;
  }
  throw PrecisionError("a.f vanishes at alpha = " + f.to_string(alpha) + " through order " + std::to_string(p_loc - 1) +
                       "; raise p_loc");
}

/// Default local precision. Exponential systems are perfect, so
/// ord_0(a.f) <= sum (deg a_i + 1) - 1.
template <ExactField F>
int default_p_loc(const PolyVec<F>& a) {
  int s = 0;
  for (const auto& p : a) s += std::max(0, p.deg()) + 1;
  return s + 1;
}

template <ExactField F>
struct LocalData {
  typename F::Elem alpha;
  std::vector<int> ord_a;  // ord_alpha(a_i)
  int ord_af = 0;          // ord_alpha(a.f)
  int norm_log = 0;        // log ||a||_alpha = -min_i ord_alpha(a_i)
  int ord_delta = 0;       // ord_alpha(Delta)
  // proof steps: ord(a_{k,i}) >= ord(a_i) - k, ord(a_k.f) >= ord(a.f) - k,
  // ord(Delta) >= -n(n-1)/2 + ord(a.f) + sum_{i != l} ord(a_i)
  bool steps_ok = false;
};

template <ExactField F>
LocalData<F> local_data(const PolyVec<F>& a, const std::vector<typename F::Elem>& omega,
                        const typename F::Elem& alpha, std::optional<int> p_loc = std::nullopt) {
  detail::check_exp_input(a, omega);
  const int P = p_loc.value_or(default_p_loc(a));
  const std::size_t n = a.size();
  LocalData<F> ld{alpha, {}, 0, 0, 0, true};
  for (const auto& p : a) ld.ord_a.push_back(ord_at(p, alpha));
  ld.ord_af = ord_exp_combination(a, omega, alpha, P);
  const auto lo = std::min_element(ld.ord_a.begin(), ld.ord_a.end());
  ld.norm_log = -*lo;
  const PolyMat<F> w = wronskian_matrix(a, omega);
  ld.ord_delta = ord_at(det(a[0].field(), w), alpha);
  for (std::size_t k = 1; k < n; ++k) {
    const int kk = static_cast<int>(k);
    for (std::size_t i = 0; i < n; ++i) ld.steps_ok = ld.steps_ok && ord_at(w[k][i], alpha) >= ld.ord_a[i] - kk;
    // a_k.f is the k-th derivative of a.f; below order k the bound is vacuous
    if (ld.ord_af >= kk)
      ld.steps_ok = ld.steps_ok && ord_exp_combination(w[k], omega, alpha, ld.ord_af + 1) >= ld.ord_af - kk;
  }
  int bound = -detail::binom2(n) + ld.ord_af;
  for (std::size_t i = 0; i < n; ++i)
    if (i != static_cast<std::size_t>(lo - ld.ord_a.begin())) bound += ld.ord_a[i];
  ld.steps_ok = ld.steps_ok && ld.ord_delta >= bound;
  return ld;
}

template <ExactField F>
struct AdelicReport {
  std::size_t n = 0;
  std::vector<typename F::Elem> omega;
  std::vector<typename F::Elem> S;
  int lhs_log = 0;        // log of the product on the left
  int margin = 0;         // lhs_log + s n(n-1)/2
  int remark_margin = 0;  // sum deg a_i - sum ord(a.f) + s(n-1)
  std::vector<LocalData<F>> local;
  int delta_deg = 0;
  bool delta_ok = false;
  bool product_formula_ok = false;  // deg Delta >= sum_alpha ord_alpha(Delta)
  bool steps_ok = false;
  bool ok() const { return margin >= 0 && remark_margin >= 0 && delta_ok && product_formula_ok && steps_ok; }
};

/// Integer log-scale margin of the product inequality over the points S.
template <ExactField F>
AdelicReport<F> adelic_margin(const PolyVec<F>& a, const std::vector<typename F::Elem>& omega,
                              const std::vector<typename F::Elem>& S, std::optional<int> p_loc = std::nullopt) {
  detail::check_exp_input(a, omega);
  if (S.empty()) throw PreconditionError("the point set S must have at least one element");
  for (std::size_t i = 0; i < S.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (S[i] == S[j]) throw PreconditionError("points of S must be distinct");
  const std::size_t n = a.size();
  const int s = static_cast<int>(S.size());
  AdelicReport<F> r;
  r.n = n;
  r.omega = omega;
  r.S = S;
  const auto dr = delta_report(a, omega);
  r.delta_deg = dr.delta.deg();
  r.delta_ok = dr.ok();
  int sum_deg = 0;
  for (const auto& p : a) sum_deg += p.deg();
  r.lhs_log = sum_deg;
  r.remark_margin = sum_deg + s * (static_cast<int>(n) - 1);
  int sum_ord_delta = 0;
  r.steps_ok = true;
  for (const auto& alpha : S) {
    auto ld = local_data(a, omega, alpha, p_loc);
    int sum_ord = 0;
    for (int o : ld.ord_a) sum_ord += o;
    r.lhs_log += -ld.norm_log - sum_ord - ld.ord_af;  // ||a||^{-1} contributes min ord
    r.remark_margin -= ld.ord_af;
    sum_ord_delta += ld.ord_delta;
    r.steps_ok = r.steps_ok && ld.steps_ok;
    r.local.push_back(std::move(ld));
  }
  r.margin = r.lhs_log + s * detail::binom2(n);
  r.product_formula_ok = r.delta_deg >= sum_ord_delta;
  return r;
}

/// log |a.u|_inf for u = (e^{omega_i / T}): with d = max deg a_i and
/// x_i = T^d a_i(1/T), |a.u|_inf = e^d |x.f|_0.
template <ExactField F>
int log_abs_at_infinity(const PolyVec<F>& a, const std::vector<typename F::Elem>& omega,
                        std::optional<int> p_loc = std::nullopt) {
  detail::check_exp_input(a, omega);
  const int d = vec_deg(a);
  PolyVec<F> x;
  for (const auto& p : a) x.push_back(p.reversed(d));
  const F& f = a[0].field();
  return d - ord_exp_combination(x, omega, f.zero(), p_loc.value_or(default_p_loc(x)));
}

template <ExactField F>
struct CorollaryReport {
  int first_margin = 0;     // |a_i|_0 |a_i|_inf |a.u|_inf >= C(n)^-1 ||a||_inf
  int baker_margin = 0;     // |a.u|_inf prod_{i>=2} |a_i|_inf >= C(n)^-1
  int pairwise_margin = 0;  // |a_1|_inf prod_{i>=2} |a_1 u_i - a_i u_1|_inf >= C(n)^-(n-1)
  bool ok() const { return first_margin >= 0 && baker_margin >= 0 && pairwise_margin >= 0; }
};

template <ExactField F>
CorollaryReport<F> corollary_checks(const PolyVec<F>& a, const std::vector<typename F::Elem>& omega,
                                    std::optional<int> p_loc = std::nullopt) {
  detail::check_exp_input(a, omega);
  const std::size_t n = a.size();
  const int c = detail::binom2(n);
  const int au = log_abs_at_infinity(a, omega, p_loc);
  CorollaryReport<F> r;
  int lhs = au;
  for (const auto& p : a) lhs += p.deg() - p.ord0();
  r.first_margin = lhs + c - vec_deg(a);
  r.baker_margin = au + c;
  for (std::size_t i = 1; i < n; ++i) r.baker_margin += a[i].deg();
  r.pairwise_margin = a[0].deg() + static_cast<int>(n - 1) * c;
  for (std::size_t i = 1; i < n; ++i)
    r.pairwise_margin += log_abs_at_infinity(PolyVec<F>{-a[i], a[0]}, {omega[0], omega[i]}, p_loc);
  return r;
}

}  // namespace ffpgn
