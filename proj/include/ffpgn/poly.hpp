#pragma once

// Dense univariate polynomials over an exact field.

#include <algorithm>
#include <climits>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ffpgn/errors.hpp"
#include "ffpgn/field.hpp"

namespace ffpgn {

/// Degree reported for the zero polynomial.
inline constexpr int kNegInfDeg = INT_MIN;

template <ExactField F>
class Poly {
 public:
  using Field = F;
  using Elem = typename F::Elem;

  explicit Poly(F field) : field_(std::move(field)) {}
  /// Coefficients in ascending powers of T.
  Poly(F field, std::vector<Elem> ascending) : field_(std::move(field)), c_(std::move(ascending)) { trim(); }

  static Poly constant(const F& f, Elem c) { return Poly(f, {std::move(c)}); }
  static Poly monomial(const F& f, Elem c, int k) {
    std::vector<Elem> v(static_cast<std::size_t>(k) + 1, f.zero());
    v.back() = std::move(c);
    return Poly(f, std::move(v));
  }
  static Poly from_ints(const F& f, std::initializer_list<long> ascending) {
    std::vector<Elem> v;
    for (long a : ascending) v.push_back(f.from_int(a));
    return Poly(f, std::move(v));
  }
  /// T^k.
  static Poly t_pow(const F& f, int k) { return monomial(f, f.one(), k); }

  const F& field() const { return field_; }
  bool is_zero() const { return c_.empty(); }
  int deg() const { return c_.empty() ? kNegInfDeg : static_cast<int>(c_.size()) - 1; }
  const std::vector<Elem>& coeffs() const { return c_; }
  Elem coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return field_.zero();
    return c_[static_cast<std::size_t>(i)];
  }
  const Elem& lc() const {
    if (c_.empty()) throw PreconditionError("leading coefficient of the zero polynomial");
    return c_.back();
  }
  /// Lowest power of T with a nonzero coefficient; kNegInfDeg for zero.
  int ord0() const {
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (!c_[i].is_zero()) return static_cast<int>(i);
    return kNegInfDeg;
  }
  bool is_constant() const { return c_.size() <= 1; }

  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), field_.zero());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), field_.zero());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  Poly operator-() const {
    Poly r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly(a.field_);
    std::vector<Elem> r(a.c_.size() + b.c_.size() - 1, a.field_.zero());
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(a.field_, std::move(r));
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  Poly scaled(const Elem& s) const {
    if (s.is_zero()) return Poly(field_);
    Poly r = *this;
    for (auto& x : r.c_) x *= s;
    return r;
  }
  /// Multiplication by T^k, k >= 0.
  Poly shifted(int k) const {
    if (k < 0) throw PreconditionError("negative shift of a polynomial");
    if (is_zero()) return *this;
    std::vector<Elem> r(static_cast<std::size_t>(k), field_.zero());
    r.insert(r.end(), c_.begin(), c_.end());
    return Poly(field_, std::move(r));
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  /// Euclidean division: *this = q * d + r with deg r < deg d.
  std::pair<Poly, Poly> divmod(const Poly& d) const {
    if (d.is_zero()) throw DivisionByZero();
    Poly r = *this;
    if (deg() < d.deg()) return {Poly(field_), r};
    std::vector<Elem> q(static_cast<std::size_t>(deg() - d.deg()) + 1, field_.zero());
    const Elem inv = field_.one() / d.lc();
    while (!r.is_zero() && r.deg() >= d.deg()) {
      int s = r.deg() - d.deg();
      Elem f = r.lc() * inv;
      q[static_cast<std::size_t>(s)] = f;
      for (std::size_t j = 0; j < d.c_.size(); ++j) r.c_[j + static_cast<std::size_t>(s)] -= f * d.c_[j];
      r.trim();
    }
    return {Poly(field_, std::move(q)), r};
  }
  /// Division that must leave no remainder.
  Poly exact_div(const Poly& d) const {
    auto [q, r] = divmod(d);
    if (!r.is_zero()) throw InvariantError("inexact polynomial division");
    return q;
  }

  Elem eval(const Elem& x) const {
    Elem acc = field_.zero();
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly(field_);
    std::vector<Elem> r;
    r.reserve(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) r.push_back(c_[i] * field_.from_int(static_cast<long>(i)));
    return Poly(field_, std::move(r));
  }

  /// g(S) = f(S + alpha): coefficients of f in powers of (T - alpha).
  Poly taylor_shift(const Elem& alpha) const {
    std::vector<Elem> a = c_;
    const std::size_t n = a.size();
    // repeated synthetic division (Horner scheme)
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = n - 1; j > i; --j) a[j - 1] += alpha * a[j];
    return Poly(field_, std::move(a));
  }

  /// T^d f(1/T); requires d >= deg f.
  Poly reversed(int d) const {
    if (is_zero()) return *this;
    if (d < deg()) throw PreconditionError("reversal degree below polynomial degree");
    std::vector<Elem> r(static_cast<std::size_t>(d) + 1, field_.zero());
    for (std::size_t i = 0; i < c_.size(); ++i) r[static_cast<std::size_t>(d) - i] = c_[i];
    return Poly(field_, std::move(r));
  }

  Poly monic() const {
    if (is_zero()) return *this;
    return scaled(field_.one() / lc());
  }

  /// Coefficient-wise image in another field (e.g. reduction Q -> F_p).
  template <ExactField G, class Fn>
  Poly<G> map(const G& g, Fn&& fn) const {
    std::vector<typename G::Elem> r;
    r.reserve(c_.size());
    for (const auto& x : c_) r.push_back(fn(x));
    return Poly<G>(g, std::move(r));
  }

  std::string str(const std::string& var = "T") const {
    if (is_zero()) return "0";
    std::string s;
    for (int i = deg(); i >= 0; --i) {
      const Elem& a = c_[static_cast<std::size_t>(i)];
      if (a.is_zero()) continue;
      std::string cs = field_.to_string(a);
      bool neg = !cs.empty() && cs[0] == '-';
      if (neg) cs = cs.substr(1);
      if (!s.empty()) s += neg ? " - " : " + ";
      else if (neg) s += "-";
      if (i == 0) s += cs;
      else {
        if (cs != "1") s += cs + "*";
        s += var;
        if (i > 1) s += "^" + std::to_string(i);
      }
    }
    return s;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  F field_;
  std::vector<Elem> c_;
};

/// Monic gcd (zero if both inputs are zero).
template <ExactField F>
Poly<F> gcd(Poly<F> a, Poly<F> b) {
  while (!b.is_zero()) {
    auto r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

template <ExactField F>
using PolyVec = std::vector<Poly<F>>;

/// Largest entry degree: log of the max norm of a polynomial vector.
template <ExactField F>
int vec_deg(const PolyVec<F>& v) {
  int d = kNegInfDeg;
  for (const auto& p : v) d = std::max(d, p.deg());
  return d;
}

template <ExactField F>
bool is_zero_vec(const PolyVec<F>& v) {
  return std::all_of(v.begin(), v.end(), [](const Poly<F>& p) { return p.is_zero(); });
}

template <ExactField F>
PolyVec<F> unit_vec(const F& f, std::size_t n, std::size_t i) {
  PolyVec<F> v(n, Poly<F>(f));
  v[i] = Poly<F>::constant(f, f.one());
  return v;
}

template <ExactField F>
Poly<F> dot(const PolyVec<F>& a, const PolyVec<F>& b) {
  if (a.size() != b.size()) throw PreconditionError("dot product of vectors of different length");
  Poly<F> s(a.empty() ? F(b.front().field()) : a.front().field());
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace ffpgn
