#pragma once

// Type I Hermite-Pade approximation at T = 0: the linear system for
// deg a_i <= rho_i - 1 and ord_0(a.f) >= sigma(rho) - 1, normality,
// perfectness scans, the extremal profile of exponential points and the
// sequence of minima realizers built from Pade solutions.

#include <algorithm>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ffpgn/errors.hpp"
#include "ffpgn/field.hpp"
#include "ffpgn/laurent.hpp"
#include "ffpgn/linalg.hpp"
#include "ffpgn/minima.hpp"
#include "ffpgn/nsystem.hpp"
#include "ffpgn/poly.hpp"

namespace ffpgn {

/// Extra known coefficients demanded beyond T^{sigma-1} before an order is
/// certified.
inline constexpr int kPadeGuard = 2;

/// A power series known modulo T^prec, or exactly equal to `p` when `exact`.
template <ExactField F>
struct PowerSeries {
  Poly<F> p;
  int prec = 0;
  bool exact = false;

  typename F::Elem coeff(int j) const {
    if (j >= prec && !exact)
      throw PrecisionError("coefficient of T^" + std::to_string(j) + " is beyond the known " + std::to_string(prec));
    return p.coeff(j);
  }
  static PowerSeries from_poly(const Poly<F>& p) { return {p, std::max(0, p.deg() + 1), true}; }
};

namespace detail {

template <ExactField F>
void require_char_zero(const F&, const char* what) {
  if constexpr (!F::kCharZero) throw PreconditionError(std::string(what) + " needs a field of characteristic 0");
}

template <ExactField F>
Poly<F> mul_trunc(const Poly<F>& a, const Poly<F>& b, int prec) {
  const Poly<F> c = a * b;
  std::vector<typename F::Elem> v;
  for (int j = 0; j < prec && j <= c.deg(); ++j) v.push_back(c.coeff(j));
  return Poly<F>(a.field(), std::move(v));
}

inline int ceil_div(int a, int b) { return a >= 0 ? (a + b - 1) / b : -((-a) / b); }

}  // namespace detail

/// e^{omega T} with the N coefficients of T^0..T^{N-1}.
template <ExactField F>
PowerSeries<F> series_exp(const F& f, const typename F::Elem& omega, int N) {
  detail::require_char_zero(f, "series_exp");
  if (N < 0) throw PreconditionError("negative number of terms");
  std::vector<typename F::Elem> c;
  typename F::Elem term = f.one();
  for (int j = 0; j < N; ++j) {
    c.push_back(term);
    term = term * omega / f.from_int(j + 1);
  }
  return {Poly<F>(f, std::move(c)), N, false};
}

/// (1 + T)^omega with the N coefficients of T^0..T^{N-1}.
template <ExactField F>
PowerSeries<F> series_binomial(const F& f, const typename F::Elem& omega, int N) {
  detail::require_char_zero(f, "series_binomial");
  if (N < 0) throw PreconditionError("negative number of terms");
  std::vector<typename F::Elem> c;
  typename F::Elem term = f.one();
  for (int j = 0; j < N; ++j) {
    c.push_back(term);
    term = term * (omega - f.from_int(j)) / f.from_int(j + 1);
  }
  return {Poly<F>(f, std::move(c)), N, false};
}

/// ((log(1-T))^{n-1}, ..., log(1-T), 1), each known through T^N.
template <ExactField F>
std::vector<PowerSeries<F>> series_log_powers(const F& f, std::size_t n, int N) {
  detail::require_char_zero(f, "series_log_powers");
  if (n < 1 || N < 0) throw PreconditionError("log powers need n >= 1 and N >= 0");
  std::vector<typename F::Elem> c{f.zero()};
  for (int j = 1; j <= N; ++j) c.push_back(-(f.one() / f.from_int(j)));
  const Poly<F> lg(f, std::move(c));
  std::vector<PowerSeries<F>> out;
  Poly<F> power = Poly<F>::constant(f, f.one());
  for (std::size_t k = 0; k < n; ++k) {
    out.push_back({power, N + 1, k == 0});
    power = detail::mul_trunc(power, lg, N + 1);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

/// f(1/T) as a series at infinity: T^{-j} carries the coefficient of T^j.
template <ExactField F>
LaurentSeries<F> at_infinity(const PowerSeries<F>& s) {
  const F& f = s.p.field();
  const int prec = s.exact ? std::max(0, s.p.deg()) : s.prec - 1;
  if (prec < 0) return LaurentSeries<F>(f, prec, false);
  std::vector<typename F::Elem> c;
  for (int j = 0; j <= prec; ++j) c.push_back(s.p.coeff(j));
  return LaurentSeries<F>(f, 0, std::move(c), prec, s.exact);
}

/// The tuple f together with a label describing how it was generated.
template <ExactField F>
struct SeriesSystem {
  std::vector<PowerSeries<F>> f;
  std::string tag;  // "exp", "binomial", "log_powers" or "custom"
  std::vector<typename F::Elem> params;

  std::size_t n() const { return f.size(); }
  const F& field() const { return f.at(0).p.field(); }
  /// Known coefficients shared by all members (INT_MAX when all exact).
  int prec() const {
    int p = INT_MAX;
    for (const auto& s : f)
      if (!s.exact) p = std::min(p, s.prec);
    return p;
  }
  LaurentVec<F> point() const {
    LaurentVec<F> u;
    for (const auto& s : f) u.push_back(at_infinity(s));
    return u;
  }
};

template <ExactField F>
SeriesSystem<F> exp_system(const F& f, const std::vector<typename F::Elem>& omega, int N) {
  for (std::size_t i = 0; i < omega.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (omega[i] == omega[j]) throw PreconditionError("exponents omega must be pairwise distinct");
  SeriesSystem<F> s{{}, "exp", omega};
  for (const auto& w : omega) s.f.push_back(series_exp(f, w, N));
  return s;
}

template <ExactField F>
SeriesSystem<F> binomial_system(const F& f, const std::vector<typename F::Elem>& omega, int N) {
  if constexpr (F::kCharZero) {
    for (std::size_t i = 0; i < omega.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if ((omega[i] - omega[j]).is_integer())
          throw PreconditionError("binomial exponents must be pairwise incongruent modulo Z");
  }
  SeriesSystem<F> s{{}, "binomial", omega};
  for (const auto& w : omega) s.f.push_back(series_binomial(f, w, N));
  return s;
}

template <ExactField F>
SeriesSystem<F> log_system(const F& f, std::size_t n, int N) {
  return {series_log_powers(f, n, N), "log_powers", {}};
}

inline int sigma(const std::vector<int>& rho) {
  int s = 0;
  for (int r : rho) {
    if (r < 0) throw PreconditionError("index tuple entries must be non-negative");
    s += r;
  }
  return s;
}

template <ExactField F>
struct PadeSolution {
  PolyVec<F> a;
  std::optional<int> order;  // ord_0(a.f); nullopt when a.f = 0 exactly
  std::size_t nullity = 0;   // dimension of the solution space of the sigma-1 conditions
};

namespace detail {

template <ExactField F>
void require_pade_precision(const SeriesSystem<F>& sys, const std::vector<int>& rho) {
  if (sys.n() == 0 || rho.size() != sys.n()) throw PreconditionError("index tuple length differs from the system size");
  const int s = sigma(rho);
  if (s < 1) throw PreconditionError("index tuple must be nonzero");
  if (sys.prec() < s + kPadeGuard)
    throw PrecisionError("series known to " + std::to_string(sys.prec()) + " coefficients, sigma(rho) = " +
                         std::to_string(s) + " needs " + std::to_string(s + kPadeGuard));
}

// Conditions "coefficient of T^e in a.f is 0" for e < rows; unknown
// (i, d) sits at column offset_i + d.
template <ExactField F>
FMat<F> pade_matrix(const SeriesSystem<F>& sys, const std::vector<int>& rho, int rows) {
  const F& f = sys.field();
  const int cols = sigma(rho);
  FMat<F> m(static_cast<std::size_t>(rows), std::vector<typename F::Elem>(static_cast<std::size_t>(cols), f.zero()));
  int off = 0;
  for (std::size_t i = 0; i < sys.n(); ++i) {
    for (int d = 0; d < rho[i]; ++d)
      for (int e = d; e < rows; ++e)
        m[static_cast<std::size_t>(e)][static_cast<std::size_t>(off + d)] = sys.f[i].coeff(e - d);
    off += rho[i];
  }
  return m;
}

template <ExactField F>
PolyVec<F> unpack(const F& f, const std::vector<typename F::Elem>& v, const std::vector<int>& rho) {
  PolyVec<F> a;
  std::size_t off = 0;
  for (int r : rho) {
    std::vector<typename F::Elem> c(v.begin() + static_cast<std::ptrdiff_t>(off),
                                    v.begin() + static_cast<std::ptrdiff_t>(off) + r);
    a.emplace_back(f, std::move(c));
    off += static_cast<std::size_t>(r);
  }
  return a;
}

// First nonzero coefficient in (i, degree) order becomes 1.
template <ExactField F>
PolyVec<F> canonical_scaling(PolyVec<F> a) {
  for (const auto& p : a)
    for (int d = 0; d <= p.deg(); ++d)
      if (!p.coeff(d).is_zero()) {
        const auto s = p.field().one() / p.coeff(d);
        for (auto& x : a) x = x.scaled(s);
        return a;
      }
  return a;
}

}  // namespace detail

/// ord_0(a.f), nullopt for an exact zero. Throws when the known
/// coefficients of a.f all vanish.
template <ExactField F>
std::optional<int> order_at_zero(const SeriesSystem<F>& sys, const PolyVec<F>& a) {
  int known = INT_MAX;
  for (std::size_t i = 0; i < sys.n(); ++i)
    if (!a[i].is_zero() && !sys.f[i].exact) known = std::min(known, sys.f[i].prec);
  const F& f = sys.field();
  if (known == INT_MAX) {
    Poly<F> s(f);
    for (std::size_t i = 0; i < sys.n(); ++i) s += a[i] * sys.f[i].p;
    if (s.is_zero()) return std::nullopt;
    return s.ord0();
  }
  for (int e = 0; e < known; ++e) {
    typename F::Elem c = f.zero();
    for (std::size_t i = 0; i < sys.n(); ++i)
      for (int d = 0; d <= std::min(a[i].deg(), e); ++d) c += a[i].coeff(d) * sys.f[i].coeff(e - d);
    if (!c.is_zero()) return e;
  }
  throw PrecisionError("a.f vanishes to the known order " + std::to_string(known) + "; order not certified");
}

/// A nonzero solution with deg a_i <= rho_i - 1 and ord_0(a.f) >= sigma - 1,
/// canonically scaled, with its certified order.
template <ExactField F>
PadeSolution<F> pade_solve(const SeriesSystem<F>& sys, const std::vector<int>& rho) {
  detail::require_pade_precision(sys, rho);
  const F& f = sys.field();
  const int s = sigma(rho);
  auto ns = nullspace_F(f, detail::pade_matrix(sys, rho, s - 1), static_cast<std::size_t>(s));
  if (ns.empty()) throw InvariantError("Pade system with more unknowns than conditions has no solution");
  PadeSolution<F> out{detail::canonical_scaling(detail::unpack(f, ns.front(), rho)), std::nullopt, ns.size()};
  out.order = order_at_zero(sys, out.a);
  return out;
}

template <ExactField F>
struct NormalityResult {
  bool normal = false;
  std::optional<PolyVec<F>> witness;  // nonzero a with ord_0(a.f) >= sigma when not normal
};

/// f is normal for rho exactly when no nonzero a with the degree bounds has
/// ord_0(a.f) >= sigma, i.e. the square sigma x sigma system is regular.
template <ExactField F>
NormalityResult<F> is_normal(const SeriesSystem<F>& sys, const std::vector<int>& rho) {
  detail::require_pade_precision(sys, rho);
  const F& f = sys.field();
  const int s = sigma(rho);
  auto ns = nullspace_F(f, detail::pade_matrix(sys, rho, s), static_cast<std::size_t>(s));
  if (ns.empty()) return {true, std::nullopt};
  return {false, detail::canonical_scaling(detail::unpack(f, ns.front(), rho))};
}

enum class ScanMode { All, Diagonal, Sorted };

/// All nonzero rho with sigma(rho) <= R allowed by the mode, ordered by
/// sigma and then lexicographically.
inline std::vector<std::vector<int>> index_tuples(std::size_t n, int R, ScanMode mode) {
  std::vector<std::vector<int>> out;
  for (int s = 1; s <= R; ++s) {
    std::vector<int> rho(n, 0);
    // compositions of s into n parts, lexicographic
    auto rec = [&](auto&& self, std::size_t i, int left) -> void {
      if (i + 1 == n) {
        rho[i] = left;
        bool keep = true;
        if (mode == ScanMode::Diagonal) keep = std::all_of(rho.begin(), rho.end(), [&](int r) { return r == rho[0]; });
        if (mode == ScanMode::Sorted) keep = std::is_sorted(rho.begin(), rho.end());
        if (keep) out.push_back(rho);
        return;
      }
      for (int r = 0; r <= left; ++r) {
        rho[i] = r;
        self(self, i + 1, left - r);
      }
    };
    rec(rec, 0, s);
  }
  return out;
}

/// Index tuples with sigma <= R at which f is not normal; an empty result
/// certifies perfectness up to R (within the chosen cone).
template <ExactField F>
std::vector<std::vector<int>> perfect_scan(const SeriesSystem<F>& sys, int R, ScanMode mode = ScanMode::All,
                                           unsigned jobs = 1) {
  if (R < 1) throw PreconditionError("scan bound R must be at least 1");
  if (sys.prec() < R + kPadeGuard)
    throw PrecisionError("scan up to R = " + std::to_string(R) + " needs " + std::to_string(R + kPadeGuard) +
                         " known coefficients, have " + std::to_string(sys.prec()));
  const auto tuples = index_tuples(sys.n(), R, mode);
  std::vector<char> bad(tuples.size(), 0);
  auto work = [&](std::size_t start, std::size_t stride) {
    for (std::size_t t = start; t < tuples.size(); t += stride) bad[t] = !is_normal(sys, tuples[t]).normal;
  };
  if (jobs <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(work, j, jobs);
    for (auto& th : pool) th.join();
  }
  std::vector<std::vector<int>> out;
  for (std::size_t t = 0; t < tuples.size(); ++t)
    if (bad[t]) out.push_back(tuples[t]);
  return out;
}

template <ExactField F>
struct ExtremalReport {
  bool unit_norm = false;
  Profile profile;
  bool equals_extremal = false;
  bool gap_ok = false;          // L_n - L_1 <= 1 everywhere
  bool lower_bound_ok = false;  // L_1(q) >= floor(q/n)
  int diagonal_checked = 0;     // normality verified for (m, .., m), m <= this
  bool diagonal_normal = false;
  bool ok() const { return unit_norm && equals_extremal && gap_ok && lower_bound_ok && diagonal_normal; }
};

/// Minima of u = (e^{omega_1/T}, ..., e^{omega_n/T}) on [0, Q] against the
/// extremal system, with the diagonal normality the argument relies on.
template <ExactField F>
ExtremalReport<F> extremal_profile_check(const F& f, const std::vector<typename F::Elem>& omega, int Q,
                                         unsigned jobs = 1) {
  const std::size_t n = omega.size();
  if (n < 2) throw PreconditionError("need at least two exponents");
  if (Q < 0) throw PreconditionError("negative horizon");
  ExtremalReport<F> rep;
  const LaurentVec<F> u = exp_system(f, omega, Q + 2).point();
  const LogNorm un = log_norm(u);
  rep.unit_norm = un.is_finite() && un.value == 0;
  if (!rep.unit_norm) return rep;
  rep.profile = minima_profile(u, Q, false, jobs).profile;
  rep.equals_extremal = rep.profile == extremal(n, Q);
  rep.gap_ok = rep.lower_bound_ok = true;
  const int ni = static_cast<int>(n);
  for (int q = 0; q <= Q; ++q) {
    const auto& v = rep.profile.at(q);
    rep.gap_ok = rep.gap_ok && v.back() - v.front() <= 1;
    rep.lower_bound_ok = rep.lower_bound_ok && v.front() >= q / ni;
  }
  // t = L_1(q) <= q/n, so (t+1, .., t+1) has sigma <= Q + n
  rep.diagonal_checked = Q / ni + 1;
  const auto diag = exp_system(f, omega, ni * rep.diagonal_checked + kPadeGuard);
  rep.diagonal_normal = true;
  for (int m = 1; m <= rep.diagonal_checked; ++m)
    rep.diagonal_normal = rep.diagonal_normal && is_normal(diag, std::vector<int>(n, m)).normal;
  return rep;
}

/// rho_{i,j} = ceil((i + j - n) / n), the sorted tuple with sum i and spread <= 1.
inline std::vector<int> realizer_index(std::size_t n, int i) {
  std::vector<int> rho;
  const int ni = static_cast<int>(n);
  for (int j = 1; j <= ni; ++j) rho.push_back(detail::ceil_div(i + j - ni, ni));
  return rho;
}

template <ExactField F>
struct RealizerEntry {
  int i = 0;
  std::vector<int> rho;
  PolyVec<F> a;
  PolyVec<F> y;                  // T^{rho_n - 1} a(1/T)
  int norm_log = 0;              // log |y_i|
  int pairing_log = 0;           // log |y_i . u|
  std::optional<int> det_deg;    // deg det(a_i, .., a_{i+n-1}); nullopt when zero
  bool norm_ok = false;          // norm_log = ceil(i/n) - 1
  bool pairing_ok = false;       // pairing_log = ceil(i/n) - i
  bool det_ok = false;           // det_deg = i - 1
};

template <ExactField F>
struct RealizerReport {
  std::vector<RealizerEntry<F>> entries;
  std::optional<std::vector<int>> non_normal;  // first index tuple where normality failed
  bool ok() const {
    if (non_normal) return false;
    for (const auto& e : entries)
      if (!e.norm_ok || !e.pairing_ok || !e.det_ok) return false;
    return true;
  }
};

/// Points y_1..y_{i_max} from Pade solutions at rho_{i,.}, with both norm
/// formulas and the determinant degree checked. Solutions up to
/// i_max + n - 1 are computed so every listed i has its determinant.
template <ExactField F>
RealizerReport<F> realizer_sequence(const SeriesSystem<F>& sys, int i_max) {
  if (i_max < 1) throw PreconditionError("i_max must be at least 1");
  const std::size_t n = sys.n();
  const int ni = static_cast<int>(n);
  const F& f = sys.field();
  const LaurentVec<F> u = sys.point();
  RealizerReport<F> rep;
  std::vector<PolyVec<F>> as;
  for (int i = 1; i <= i_max + ni - 1; ++i) {
    const auto rho = realizer_index(n, i);
    if (!is_normal(sys, rho).normal) {
      rep.non_normal = rho;
      break;
    }
    as.push_back(pade_solve(sys, rho).a);
  }
  for (int i = 1; i <= i_max && i <= static_cast<int>(as.size()); ++i) {
    RealizerEntry<F> e;
    e.i = i;
    e.rho = realizer_index(n, i);
    e.a = as[static_cast<std::size_t>(i - 1)];
    for (const auto& p : e.a) e.y.push_back(p.reversed(e.rho.back() - 1));
    e.norm_log = vec_deg(e.y);
    e.pairing_log = dot(u, e.y).log_norm().get();
    const int c = detail::ceil_div(i, ni);
    e.norm_ok = e.norm_log == c - 1;
    e.pairing_ok = e.pairing_log == c - i;
    if (i + ni - 1 <= static_cast<int>(as.size())) {
      PolyMat<F> m(as.begin() + (i - 1), as.begin() + (i - 1 + ni));
      const Poly<F> d = det(f, m);
      if (!d.is_zero()) e.det_deg = d.deg();
      e.det_ok = e.det_deg == std::optional<int>(i - 1);
    }
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

/// Whether the trajectories of y_i..y_{i+n-1} give the sorted minima at
/// q = i - 1 and q = i for every i with a full window and i <= profile.Q.
template <ExactField F>
bool realizers_cover(const RealizerReport<F>& rep, const LaurentVec<F>& u, const Profile& profile) {
  const std::size_t n = u.size();
  for (std::size_t s = 0; s + n <= rep.entries.size(); ++s) {
    const int i = rep.entries[s].i;
    for (int q : {i - 1, i}) {
      if (q > profile.Q) continue;
      std::vector<int> vals;
      for (std::size_t j = 0; j < n; ++j) vals.push_back(trajectory_at(rep.entries[s + j].y, u, q));
      std::sort(vals.begin(), vals.end());
      if (vals != profile.at(q)) return false;
    }
  }
  return true;
}

}  // namespace ffpgn
