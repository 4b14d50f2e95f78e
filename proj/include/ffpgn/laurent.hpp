#pragma once

// Truncated Laurent series in 1/T (elements of F((1/T)) known to a finite
// precision) and integer log-scale norms.

#include <algorithm>
#include <climits>
#include <string>
#include <utility>
#include <vector>

#include "ffpgn/errors.hpp"
#include "ffpgn/field.hpp"
#include "ffpgn/poly.hpp"

namespace ffpgn {

/// Absolute value e^k stored as k. Zero is NegInf; a series whose stored
/// coefficients all vanish has Indeterminate norm: the true value is at most
/// `value` (= -prec - 1) and cannot be certified.
struct LogNorm {
  enum class Kind { NegInf, Finite, Indeterminate };
  Kind kind = Kind::NegInf;
  int value = 0;

  static LogNorm neg_inf() { return {Kind::NegInf, 0}; }
  static LogNorm finite(int k) { return {Kind::Finite, k}; }
  static LogNorm indeterminate(int bound) { return {Kind::Indeterminate, bound}; }

  bool is_neg_inf() const { return kind == Kind::NegInf; }
  bool is_finite() const { return kind == Kind::Finite; }
  bool is_indeterminate() const { return kind == Kind::Indeterminate; }
  /// Certified value; NegInf maps to kNegInfDeg.
  int get() const {
    if (kind == Kind::Indeterminate)
      throw PrecisionError("norm not certified at current precision (<= " + std::to_string(value) + ")");
    return kind == Kind::Finite ? value : kNegInfDeg;
  }
  std::string str() const {
    switch (kind) {
      case Kind::NegInf: return "-inf";
      case Kind::Finite: return std::to_string(value);
      default: return "indeterminate(<=" + std::to_string(value) + ")";
    }
  }
  friend bool operator==(const LogNorm& a, const LogNorm& b) {
    return a.kind == b.kind && (a.kind == Kind::NegInf || a.value == b.value);
  }
};

/// Max of two log norms; indeterminate only when the answer is not certified.
inline LogNorm max(const LogNorm& a, const LogNorm& b) {
  if (a.is_neg_inf()) return b;
  if (b.is_neg_inf()) return a;
  if (a.is_finite() && b.is_finite()) return LogNorm::finite(std::max(a.value, b.value));
  if (a.is_indeterminate() && b.is_indeterminate()) return LogNorm::indeterminate(std::max(a.value, b.value));
  const LogNorm& f = a.is_finite() ? a : b;
  const LogNorm& u = a.is_finite() ? b : a;
  if (f.value >= u.value) return f;
  return u;
}

template <ExactField F>
class LaurentSeries {
 public:
  using Elem = typename F::Elem;

  /// Zero known down to T^{-prec}.
  LaurentSeries(F field, int prec, bool exact = false)
      : field_(std::move(field)), lead_(-prec - 1), prec_(prec), exact_(exact) {}
  /// Coefficients for exponents lead, lead-1, ..., -prec.
  LaurentSeries(F field, int lead, std::vector<Elem> descending, int prec, bool exact = false)
      : field_(std::move(field)), lead_(lead), c_(std::move(descending)), prec_(prec), exact_(exact) {
    if (static_cast<int>(c_.size()) != std::max(0, lead_ + prec_ + 1))
      throw PreconditionError("Laurent series coefficient count does not match lead_exp and prec");
    normalize();
  }

  /// Exact image of a polynomial, stored down to T^{-prec}.
  static LaurentSeries from_poly(const Poly<F>& p, int prec = 0) {
    LaurentSeries s(p.field(), prec, true);
    if (p.is_zero()) return s;
    s.lead_ = p.deg();
    s.c_.assign(static_cast<std::size_t>(s.lead_ + prec + 1), p.field().zero());
    for (int e = -prec; e <= s.lead_; ++e)
      if (e >= 0) s.c_[static_cast<std::size_t>(s.lead_ - e)] = p.coeff(e);
    s.normalize();
    return s;
  }

  /// Expansion of num/den down to T^{-prec}; exact when the division terminates.
  static LaurentSeries from_rational(const Poly<F>& num, const Poly<F>& den, int prec) {
    if (den.is_zero()) throw DivisionByZero();
    if (prec < 0) throw PreconditionError("negative precision");
    auto [q, r] = num.shifted(prec).divmod(den);
    LaurentSeries s(num.field(), prec, r.is_zero());
    if (q.is_zero()) return s;
    s.lead_ = q.deg() - prec;
    s.c_.reserve(static_cast<std::size_t>(q.deg()) + 1);
    for (int i = q.deg(); i >= 0; --i) s.c_.push_back(q.coeff(i));
    s.normalize();
    return s;
  }

  /// c T^e, exact.
  static LaurentSeries monomial(const F& f, Elem c, int e, int prec) {
    if (c.is_zero() || e < -prec) return LaurentSeries(f, prec, true);
    std::vector<Elem> v(static_cast<std::size_t>(e + prec + 1), f.zero());
    v[0] = std::move(c);
    return LaurentSeries(f, e, std::move(v), prec, true);
  }

  const F& field() const { return field_; }
  int prec() const { return prec_; }
  bool exact() const { return exact_; }
  /// Largest exponent with a (nonzero) stored coefficient, or -prec-1.
  int lead_exp() const { return lead_; }
  const std::vector<Elem>& coeffs() const { return c_; }
  bool stored_zero() const { return c_.empty(); }

  LogNorm log_norm() const {
    if (!c_.empty()) return LogNorm::finite(lead_);
    return exact_ ? LogNorm::neg_inf() : LogNorm::indeterminate(-prec_ - 1);
  }
  /// Upper bound for the norm exponent (kNegInfDeg for exact zero).
  int norm_bound() const {
    if (!c_.empty()) return lead_;
    return exact_ ? kNegInfDeg : -prec_ - 1;
  }

  Elem coeff(int e) const {
    if (e < -prec_) {
      if (exact_) return field_.zero();
      throw PrecisionError("coefficient of T^" + std::to_string(e) + " is below the precision floor " +
                           std::to_string(-prec_));
    }
    if (e > lead_) return field_.zero();
    return c_[static_cast<std::size_t>(lead_ - e)];
  }

  /// Same series known down to T^{-n}; raising precision is allowed only when exact.
  LaurentSeries with_prec(int n) const {
    if (n > prec_ && !exact_) throw PrecisionError("cannot raise the precision of an inexact series");
    LaurentSeries r(field_, n, exact_);
    if (c_.empty() || lead_ < -n) {
      r.exact_ = exact_ && c_.empty();
      return r;
    }
    r.lead_ = lead_;
    r.c_.reserve(static_cast<std::size_t>(lead_ + n + 1));
    for (int e = lead_; e >= -n; --e) r.c_.push_back(coeff(e));
    bool dropped_nonzero = false;
    for (int e = -n - 1; e >= -prec_ && e <= lead_; --e)
      if (!c_[static_cast<std::size_t>(lead_ - e)].is_zero()) dropped_nonzero = true;
    r.exact_ = exact_ && !dropped_nonzero;
    r.normalize();
    return r;
  }

  LaurentSeries operator-() const {
    LaurentSeries r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) { return combine(a, b, false); }
  friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return combine(a, b, true); }

  friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
    // An exact zero annihilates; otherwise the coefficient at s is certified
    // when every unknown term a_i b_{s-i} (i below a's floor) has s - i above
    // b's norm bound, and symmetrically.
    if ((a.exact_ && a.c_.empty()) || (b.exact_ && b.c_.empty()))
      return LaurentSeries(a.field_, std::max(a.prec_, b.prec_), true);
    int p;
    bool exact = a.exact_ && b.exact_;
    if (exact) p = a.prec_ + b.prec_;
    else if (a.exact_) p = b.prec_ - a.norm_bound();
    else if (b.exact_) p = a.prec_ - b.norm_bound();
    else p = std::min(a.prec_ - b.norm_bound(), b.prec_ - a.norm_bound());
    LaurentSeries r(a.field_, p, exact);
    if (a.c_.empty() || b.c_.empty()) return r;
    int lead = a.lead_ + b.lead_;
    if (lead < -p) return r;
    std::vector<Elem> v(static_cast<std::size_t>(lead + p + 1), a.field_.zero());
    for (std::size_t i = 0; i < a.c_.size() && i < v.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size() && i + j < v.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
    }
    r.lead_ = lead;
    r.c_ = std::move(v);
    r.normalize();
    return r;
  }
  friend LaurentSeries operator*(const LaurentSeries& a, const Poly<F>& p) { return a * from_poly(p, 0); }
  friend LaurentSeries operator*(const Poly<F>& p, const LaurentSeries& a) { return a * p; }

  LaurentSeries scaled(const Elem& s) const {
    if (s.is_zero()) return LaurentSeries(field_, prec_, exact_);
    LaurentSeries r = *this;
    for (auto& x : r.c_) x *= s;
    return r;
  }
  /// Multiplication by T^k (any integer k); precision moves with the series.
  LaurentSeries shifted(int k) const {
    LaurentSeries r = *this;
    r.lead_ += k;
    r.prec_ -= k;
    return r;
  }

  /// Multiplicative inverse; requires a certified nonzero leading term.
  LaurentSeries inverse() const {
    if (c_.empty()) {
      if (exact_) throw DivisionByZero();
      throw PrecisionError("cannot invert a series with no certified nonzero coefficient");
    }
    const int e = lead_;
    const int avail = prec_ + e;  // relative precision of b / (c T^e)
    const int out_prec = prec_ + 2 * e;
    if (exact_ && std::all_of(c_.begin() + 1, c_.end(), [](const Elem& x) { return x.is_zero(); }))
      return monomial(field_, field_.one() / c_[0], -e, out_prec);
    // Solve (c0 + c1 X + ...)(d0 + d1 X + ...) = 1 with X = 1/T.
    const int terms = std::max(0, avail + 1);
    std::vector<Elem> d(static_cast<std::size_t>(terms), field_.zero());
    const Elem inv0 = field_.one() / c_[0];
    for (int k = 0; k < terms; ++k) {
      Elem s = k == 0 ? field_.one() : field_.zero();
      for (int j = 1; j <= k && j < static_cast<int>(c_.size()); ++j) s -= c_[static_cast<std::size_t>(j)] * d[static_cast<std::size_t>(k - j)];
      d[static_cast<std::size_t>(k)] = s * inv0;
    }
    return LaurentSeries(field_, -e, std::move(d), out_prec, false);
  }
  friend LaurentSeries operator/(const LaurentSeries& a, const LaurentSeries& b) { return a * b.inverse(); }

  /// Sum of the terms with exponent >= 0.
  Poly<F> polynomial_part() const {
    std::vector<Elem> v;
    for (int e = 0; e <= lead_; ++e) v.push_back(coeff(e));
    return Poly<F>(field_, std::move(v));
  }
  /// Sum of the terms with negative exponent.
  LaurentSeries fractional_part() const {
    if (lead_ < 0) return *this;
    LaurentSeries r(field_, prec_, exact_);
    if (-1 < -prec_) return r;
    std::vector<Elem> v;
    for (int e = -1; e >= -prec_; --e) v.push_back(coeff(e));
    return LaurentSeries(field_, -1, std::move(v), prec_, exact_);
  }

  /// Equality of all coefficients down to T^{-n}.
  bool agrees_with(const LaurentSeries& o, int n) const {
    for (int e = std::max(lead_, o.lead_); e >= -n; --e)
      if (!(coeff(e) == o.coeff(e))) return false;
    return true;
  }
  friend bool operator==(const LaurentSeries& a, const LaurentSeries& b) {
    return a.prec_ == b.prec_ && a.exact_ == b.exact_ && a.lead_ == b.lead_ && a.c_ == b.c_;
  }

  template <ExactField G, class Fn>
  LaurentSeries<G> map(const G& g, Fn&& fn) const {
    std::vector<typename G::Elem> v;
    v.reserve(c_.size());
    for (const auto& x : c_) v.push_back(fn(x));
    if (v.empty()) return LaurentSeries<G>(g, prec_, exact_);
    return LaurentSeries<G>(g, lead_, std::move(v), prec_, exact_);
  }

  std::string str() const {
    std::string s;
    for (int e = lead_; e >= -prec_ && !c_.empty(); --e) {
      const Elem& a = c_[static_cast<std::size_t>(lead_ - e)];
      if (a.is_zero()) continue;
      if (!s.empty()) s += " + ";
      s += field_.to_string(a);
      if (e != 0) s += "*T^" + std::to_string(e);
    }
    if (s.empty()) s = "0";
    if (!exact_) s += " + O(T^" + std::to_string(-prec_ - 1) + ")";
    return s;
  }

 private:
  static LaurentSeries combine(const LaurentSeries& a, const LaurentSeries& b, bool sub) {
    int p;
    bool exact = a.exact_ && b.exact_;
    if (exact) p = std::max(a.prec_, b.prec_);
    else if (a.exact_) p = b.prec_;
    else if (b.exact_) p = a.prec_;
    else p = std::min(a.prec_, b.prec_);
    int lead = std::max(a.lead_, b.lead_);
    LaurentSeries r(a.field_, p, exact);
    if (lead < -p) return r;
    std::vector<Elem> v;
    v.reserve(static_cast<std::size_t>(lead + p + 1));
    for (int e = lead; e >= -p; --e) {
      Elem x = a.coeff_or_zero(e);
      Elem y = b.coeff_or_zero(e);
      v.push_back(sub ? x - y : x + y);
    }
    r.lead_ = lead;
    r.c_ = std::move(v);
    r.normalize();
    return r;
  }
  // Coefficient, treating positions below an exact series' floor as zero.
  Elem coeff_or_zero(int e) const {
    if (e > lead_ || e < -prec_) return field_.zero();
    return c_[static_cast<std::size_t>(lead_ - e)];
  }
  void normalize() {
    std::size_t z = 0;
    while (z < c_.size() && c_[z].is_zero()) ++z;
    if (z == c_.size()) {
      c_.clear();
      lead_ = -prec_ - 1;
      return;
    }
    if (z > 0) {
      c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(z));
      lead_ -= static_cast<int>(z);
    }
  }

  F field_;
  int lead_;
  std::vector<Elem> c_;
  int prec_;
  bool exact_;
};

template <ExactField F>
using LaurentVec = std::vector<LaurentSeries<F>>;

/// Max of the entry norms.
template <ExactField F>
LogNorm log_norm(const LaurentVec<F>& v) {
  LogNorm r = LogNorm::neg_inf();
  for (const auto& s : v) r = max(r, s.log_norm());
  return r;
}

template <ExactField F>
LogNorm log_norm(const PolyVec<F>& v) {
  int d = vec_deg(v);
  return d == kNegInfDeg ? LogNorm::neg_inf() : LogNorm::finite(d);
}

/// u . x for a series vector u and a polynomial vector x.
template <ExactField F>
LaurentSeries<F> dot(const LaurentVec<F>& u, const PolyVec<F>& x) {
  if (u.size() != x.size() || u.empty()) throw PreconditionError("dot product of vectors of different length");
  LaurentSeries<F> s = u[0] * x[0];
  for (std::size_t i = 1; i < u.size(); ++i) s = s + u[i] * x[i];
  return s;
}

template <ExactField F>
LaurentVec<F> to_series(const PolyVec<F>& v, int prec) {
  LaurentVec<F> r;
  r.reserve(v.size());
  for (const auto& p : v) r.push_back(LaurentSeries<F>::from_poly(p, prec));
  return r;
}

/// Minimum precision over the inexact entries (INT_MAX if all exact).
template <ExactField F>
int common_prec(const LaurentVec<F>& u) {
  int p = INT_MAX;
  for (const auto& s : u)
    if (!s.exact()) p = std::min(p, s.prec());
  return p;
}

}  // namespace ffpgn
