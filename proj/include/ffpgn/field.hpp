#pragma once

// Exact coefficient fields: the rationals (GMP backed) and prime fields F_p.
//
// Elements are plain values with the usual arithmetic operators. A field
// descriptor (RationalField or PrimeField) creates elements, parses and
// prints them, and is carried by every container so that zero objects know
// which field they live in.

#include <gmpxx.h>

#include <charconv>
#include <concepts>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>

#include "ffpgn/errors.hpp"

namespace ffpgn {

class Rational {
 public:
  Rational() = default;
  Rational(long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }
  Rational(long num, long den) {
    if (den == 0) throw DivisionByZero();
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }

  const mpq_class& get() const { return v_; }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw DivisionByZero();
    v_ /= o.v_;
    return *this;
  }
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const { return Rational(mpq_class(-v_)); }
  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }

  Rational inverse() const {
    if (is_zero()) throw DivisionByZero();
    return Rational(mpq_class(1 / v_));
  }

 private:
  mpq_class v_{0};
};

/// Residue modulo a prime p < 2^31. The modulus travels with the value.
class ModP {
 public:
  ModP() = default;
  ModP(std::uint32_t v, std::uint32_t p) : v_(v % p), p_(p) {}

  std::uint32_t value() const { return v_; }
  std::uint32_t modulus() const { return p_; }
  bool is_zero() const { return v_ == 0; }

  ModP& operator+=(const ModP& o) {
    check(o);
    v_ += o.v_;
    if (v_ >= p_) v_ -= p_;
    return *this;
  }
  ModP& operator-=(const ModP& o) {
    check(o);
    v_ = v_ >= o.v_ ? v_ - o.v_ : v_ + p_ - o.v_;
    return *this;
  }
  ModP& operator*=(const ModP& o) {
    check(o);
    v_ = static_cast<std::uint32_t>(static_cast<std::uint64_t>(v_) * o.v_ % p_);
    return *this;
  }
  ModP& operator/=(const ModP& o) { return *this *= o.inverse(); }
  friend ModP operator+(ModP a, const ModP& b) { return a += b; }
  friend ModP operator-(ModP a, const ModP& b) { return a -= b; }
  friend ModP operator*(ModP a, const ModP& b) { return a *= b; }
  friend ModP operator/(ModP a, const ModP& b) { return a /= b; }
  ModP operator-() const { return ModP(v_ == 0 ? 0 : p_ - v_, p_); }
  friend bool operator==(const ModP& a, const ModP& b) { return a.v_ == b.v_ && a.p_ == b.p_; }

  ModP inverse() const {
    if (v_ == 0) throw DivisionByZero();
    // extended Euclid on (v, p)
    std::int64_t r0 = p_, r1 = v_, s0 = 0, s1 = 1;
    while (r1 != 0) {
      std::int64_t q = r0 / r1;
      std::tie(r0, r1) = std::pair{r1, r0 - q * r1};
      std::tie(s0, s1) = std::pair{s1, s0 - q * s1};
    }
    std::int64_t s = s0 % static_cast<std::int64_t>(p_);
    if (s < 0) s += p_;
    return ModP(static_cast<std::uint32_t>(s), p_);
  }

 private:
  void check(const ModP& o) const {
    if (o.p_ != p_) throw PreconditionError("mixing residues of different prime fields");
  }
  std::uint32_t v_ = 0;
  std::uint32_t p_ = 2;
};

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

struct RationalField {
  using Elem = Rational;
  static constexpr bool kCharZero = true;

  Elem zero() const { return Rational(0); }
  Elem one() const { return Rational(1); }
  Elem from_int(long v) const { return Rational(v); }
  Elem from_mpq(const mpq_class& q) const { return Rational(q); }
  std::uint64_t characteristic() const { return 0; }

  /// Accepts "a" or "a/b" with optional sign.
  Elem parse(std::string_view s) const {
    mpq_class q;
    std::string str(s);
    if (str.empty() || q.set_str(str, 10) != 0) throw ParseError("bad rational literal '" + str + "'");
    if (q.get_den() == 0) throw ParseError("zero denominator in '" + str + "'");
    q.canonicalize();
    return Rational(q);
  }
  std::string to_string(const Elem& e) const { return e.get().get_str(); }
  std::string name() const { return "Q"; }

  friend bool operator==(const RationalField&, const RationalField&) { return true; }
};

class PrimeField {
 public:
  using Elem = ModP;
  static constexpr bool kCharZero = false;

  explicit PrimeField(std::uint64_t p) : p_(static_cast<std::uint32_t>(p)) {
    if (p >= (1ULL << 31) || !is_prime(p))
      throw PreconditionError("F_p requires a prime p < 2^31, got " + std::to_string(p));
  }

  Elem zero() const { return ModP(0, p_); }
  Elem one() const { return ModP(1, p_); }
  Elem from_int(long v) const {
    long r = v % static_cast<long>(p_);
    if (r < 0) r += p_;
    return ModP(static_cast<std::uint32_t>(r), p_);
  }
  /// Reduction Z_(p) -> F_p; the denominator must be prime to p.
  Elem from_mpq(const mpq_class& q) const {
    mpz_class pz(p_);
    mpz_class num = q.get_num() % pz;
    mpz_class den = q.get_den() % pz;
    if (den == 0) throw DivisionByZero();
    if (num < 0) num += pz;
    return ModP(static_cast<std::uint32_t>(num.get_ui()), p_) /
           ModP(static_cast<std::uint32_t>(den.get_ui()), p_);
  }
  std::uint64_t characteristic() const { return p_; }
  std::uint64_t p() const { return p_; }

  Elem parse(std::string_view s) const {
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw ParseError("bad residue literal '" + std::string(s) + "'");
    return from_int(v);
  }
  std::string to_string(const Elem& e) const { return std::to_string(e.value()); }
  std::string name() const { return "Fp:" + std::to_string(p_); }

  friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

 private:
  std::uint32_t p_;
};

template <class F>
concept ExactField = requires(const F& f, const typename F::Elem& a, long v, std::string_view s) {
  { f.zero() } -> std::same_as<typename F::Elem>;
  { f.one() } -> std::same_as<typename F::Elem>;
  { f.from_int(v) } -> std::same_as<typename F::Elem>;
  { f.parse(s) } -> std::same_as<typename F::Elem>;
  { f.to_string(a) } -> std::convertible_to<std::string>;
  { a + a } -> std::same_as<typename F::Elem>;
  { a - a } -> std::same_as<typename F::Elem>;
  { a * a } -> std::same_as<typename F::Elem>;
  { a / a } -> std::same_as<typename F::Elem>;
  { -a } -> std::same_as<typename F::Elem>;
  { a.is_zero() } -> std::convertible_to<bool>;
  { F::kCharZero } -> std::convertible_to<bool>;
};

/// Runtime field tag: "Q" for the rationals or "Fp:<p>" for a prime field.
struct FieldSpec {
  bool rational = true;
  std::uint64_t p = 0;

  static FieldSpec rationals() { return {}; }
  static FieldSpec prime(std::uint64_t p) {
    PrimeField check(p);
    return {false, p};
  }

  /// Accepts "Q", "QQ", "Fp:5", "F5", "GF(5)".
  static FieldSpec parse(std::string_view s) {
    if (s == "Q" || s == "QQ" || s == "q") return rationals();
    std::string_view digits;
    if (s.starts_with("Fp:")) digits = s.substr(3);
    else if (s.starts_with("GF(") && s.ends_with(")")) digits = s.substr(3, s.size() - 4);
    else if (s.starts_with("F")) digits = s.substr(1);
    std::uint64_t p = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
    if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size())
      throw ParseError("unknown field '" + std::string(s) + "' (expected Q or Fp:<prime>)");
    try {
      return prime(p);
    } catch (const PreconditionError& e) {
      throw ParseError(e.what());
    }
  }

  std::string str() const { return rational ? "Q" : "Fp:" + std::to_string(p); }
  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

inline FieldSpec spec_of(const RationalField&) { return FieldSpec::rationals(); }
inline FieldSpec spec_of(const PrimeField& f) { return FieldSpec::prime(f.p()); }

/// Calls fn with the concrete field named by spec. Both instantiations must
/// return the same type.
template <class Fn>
decltype(auto) with_field(const FieldSpec& spec, Fn&& fn) {
  if (spec.rational) return std::forward<Fn>(fn)(RationalField{});
  return std::forward<Fn>(fn)(PrimeField{spec.p});
}

}  // namespace ffpgn
