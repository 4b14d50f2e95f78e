#pragma once

// Successive minima of the bodies C_u(e^q) on the lattice A^n, computed
// exactly by linear algebra over F, together with the dual, compound and
// renormalized variants.
//
// For fixed q and t the lattice points x with deg x <= t and
// |u.x| <= e^{t-q} form an F-vector space cut out by linear conditions on the
// coefficients of x. The j-th minimum is the least t for which that space
// spans a K-subspace of dimension >= j.

#include <algorithm>
#include <climits>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <thread>
#include <vector>

#include "ffpgn/errors.hpp"
#include "ffpgn/exterior.hpp"
#include "ffpgn/laurent.hpp"
#include "ffpgn/linalg.hpp"
#include "ffpgn/nsystem.hpp"

namespace ffpgn {

/// Throws unless u has certified norm exactly 1.
template <ExactField F>
void require_unit(const LaurentVec<F>& u) {
  if (u.size() < 2) throw PreconditionError("a point needs at least 2 coordinates");
  LogNorm ln = log_norm(u);
  if (ln.is_indeterminate()) throw PrecisionError("norm of u is not certified");
  if (!ln.is_finite() || ln.value != 0) throw PreconditionError("u must have norm 1, got log-norm " + ln.str());
}

/// Largest horizon Q that the stored precision of u supports.
template <ExactField F>
int max_horizon(const LaurentVec<F>& u) {
  int p = common_prec(u);
  return p == INT_MAX ? INT_MAX : p - 1;
}

template <ExactField F>
void require_horizon(const LaurentVec<F>& u, int Q, const char* what = "horizon") {
  if (Q < 0) throw PreconditionError("negative horizon");
  if (Q > max_horizon(u))
    throw PrecisionError(std::string(what) + " " + std::to_string(Q) + " needs u to precision >= " +
                         std::to_string(Q + 1) + ", have " + std::to_string(common_prec(u)));
}

/// A polynomial vector space given by linear conditions on the coefficients
/// of `coords` polynomials of degree <= deg (unknown index c*(deg+1)+d).
template <ExactField F>
struct CoefficientSystem {
  std::size_t coords = 0;
  int deg = -1;
  FMat<F> rows;
};

/// F-basis of the solutions, as polynomial vectors.
template <ExactField F>
std::vector<PolyVec<F>> solve_coefficient_system(const F& f, const CoefficientSystem<F>& sys) {
  if (sys.deg < 0) return {};
  const std::size_t w = static_cast<std::size_t>(sys.deg) + 1;
  auto ns = nullspace_F(f, sys.rows, sys.coords * w);
  std::vector<PolyVec<F>> out;
  out.reserve(ns.size());
  for (const auto& v : ns) {
    PolyVec<F> x;
    for (std::size_t c = 0; c < sys.coords; ++c)
      x.emplace_back(f, std::vector<typename F::Elem>(v.begin() + static_cast<std::ptrdiff_t>(c * w),
                                                      v.begin() + static_cast<std::ptrdiff_t>((c + 1) * w)));
    out.push_back(std::move(x));
  }
  return out;
}

namespace detail {

// Minima search at one q. `build(t)` gives the system at level t; values are
// found by ascending from the supplied lower bounds.
template <ExactField F>
class LevelSearch {
 public:
  LevelSearch(F f, std::size_t width, std::function<CoefficientSystem<F>(int)> build)
      : f_(std::move(f)), width_(width), build_(std::move(build)) {}

  std::size_t kdim(int t) { return level(t).dim; }
  const std::vector<PolyVec<F>>& solutions(int t) { return level(t).sols; }

  std::vector<int> values(std::size_t count, const std::vector<int>& lower, int hi) {
    std::vector<int> out;
    for (std::size_t j = 1; j <= count; ++j) {
      int t = lower[j - 1];
      if (j > 1) t = std::max(t, out.back());
      while (kdim(t) < j) {
        if (++t > hi) throw InvariantError("minimum " + std::to_string(j) + " exceeds its a priori bound");
      }
      out.push_back(t);
    }
    return out;
  }

 private:
  struct Level {
    std::size_t dim = 0;
    std::vector<PolyVec<F>> sols;
  };
  Level& level(int t) {
    auto it = cache_.find(t);
    if (it != cache_.end()) return it->second;
    Level lv;
    lv.sols = solve_coefficient_system(f_, build_(t));
    KRankAccumulator<F> acc(f_, width_);
    for (const auto& s : lv.sols) {
      acc.insert(s);
      if (acc.full()) break;
    }
    lv.dim = acc.rank();
    return cache_.emplace(t, std::move(lv)).first->second;
  }

  F f_;
  std::size_t width_;
  std::function<CoefficientSystem<F>(int)> build_;
  std::map<int, Level> cache_;
};

// Conditions: coefficients of T^s in u.x vanish for s in [t-q+1, t], deg x <= t.
template <ExactField F>
CoefficientSystem<F> minima_system(const LaurentVec<F>& u, int q, int t) {
  const F& f = u[0].field();
  CoefficientSystem<F> sys{u.size(), t, {}};
  if (t < 0) return sys;
  const std::size_t w = static_cast<std::size_t>(t) + 1;
  for (int s = t - q + 1; s <= t; ++s) {
    std::vector<typename F::Elem> row(u.size() * w, f.zero());
    for (std::size_t i = 0; i < u.size(); ++i)
      for (int d = 0; d <= t; ++d) row[i * w + static_cast<std::size_t>(d)] = u[i].coeff(s - d);
    sys.rows.push_back(std::move(row));
  }
  return sys;
}

// Conditions on y with deg y <= q+t: every coordinate u_i y_j - u_j y_i of
// u ^ y has vanishing coefficients at T^s for s in [t+1, q+t].
template <ExactField F>
CoefficientSystem<F> dual_system(const LaurentVec<F>& u, int q, int t) {
  const F& f = u[0].field();
  const int deg = q + t;
  CoefficientSystem<F> sys{u.size(), deg, {}};
  if (deg < 0) return sys;
  const std::size_t w = static_cast<std::size_t>(deg) + 1, n = u.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (int s = t + 1; s <= q + t; ++s) {
        std::vector<typename F::Elem> row(n * w, f.zero());
        for (int d = 0; d <= deg; ++d) {
          row[j * w + static_cast<std::size_t>(d)] += u[i].coeff(s - d);
          row[i * w + static_cast<std::size_t>(d)] -= u[j].coeff(s - d);
        }
        sys.rows.push_back(std::move(row));
      }
  return sys;
}

// Conditions on a grade-m element w with coefficients of degree <= t: the
// contraction of u with w has vanishing coefficients at T^s for s in [t-q+1, t].
template <ExactField F>
CoefficientSystem<F> compound_system(const LaurentVec<F>& u, std::size_t m, int q, int t) {
  const F& f = u[0].field();
  const std::size_t n = u.size();
  const auto high = subsets(n, m);
  SubsetIndex low(n, m - 1);
  CoefficientSystem<F> sys{high.size(), t, {}};
  if (t < 0) return sys;
  const std::size_t w = static_cast<std::size_t>(t) + 1;
  sys.rows.assign(low.size() * static_cast<std::size_t>(q),
                  std::vector<typename F::Elem>(high.size() * w, f.zero()));
  for (std::size_t a = 0; a < high.size(); ++a) {
    const Subset& I = high[a];
    for (std::size_t j = 0; j < I.size(); ++j) {
      Subset rest;
      for (std::size_t r = 0; r < I.size(); ++r)
        if (r != j) rest.push_back(I[r]);
      const std::size_t b = low.at(rest);
      const bool neg = j % 2 == 1;
      for (int s = t - q + 1; s <= t; ++s) {
        auto& row = sys.rows[b * static_cast<std::size_t>(q) + static_cast<std::size_t>(s - (t - q + 1))];
        for (int d = 0; d <= t; ++d) {
          auto c = u[I[j]].coeff(s - d);
          if (neg) row[a * w + static_cast<std::size_t>(d)] -= c;
          else row[a * w + static_cast<std::size_t>(d)] += c;
        }
      }
    }
  }
  return sys;
}

// Runs `one(q, lower)` for q = 0..Q, warm-starting from the previous q when
// sequential, or from scratch across `jobs` threads.
template <class One>
std::vector<std::vector<int>> sweep(int Q, unsigned jobs, std::size_t count, int drift, int floor_at_zero,
                                    One&& one) {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(Q) + 1);
  if (jobs <= 1) {
    std::vector<int> prev;
    for (int q = 0; q <= Q; ++q) {
      std::vector<int> lower(count, floor_at_zero ? 0 : -q);
      if (q > 0)
        for (std::size_t j = 0; j < count; ++j) lower[j] = std::max(lower[j], prev[j] + drift);
      out[static_cast<std::size_t>(q)] = one(q, lower);
      prev = out[static_cast<std::size_t>(q)];
    }
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(jobs);
  for (unsigned w = 0; w < jobs; ++w)
    pool.emplace_back([&, w] {
      try {
        for (int q = static_cast<int>(w); q <= Q; q += static_cast<int>(jobs))
          out[static_cast<std::size_t>(q)] = one(q, std::vector<int>(count, floor_at_zero ? 0 : -q));
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace detail

/// Basis of A^n realizing the minima at q: row j lies in C_u(e^q) dilated by T^{values[j]}.
template <ExactField F>
struct MinimaCertificate {
  int q = 0;
  std::vector<int> values;
  PolyMat<F> basis;
};

template <ExactField F>
struct MinimaResult {
  Profile profile;
  std::vector<MinimaCertificate<F>> certificates;  // empty unless requested
};

/// Minima (L_1(q), ..., L_n(q)) at one q, with an optional realizing basis.
template <ExactField F>
std::vector<int> minima_at(const LaurentVec<F>& u, int q, const std::vector<int>& lower,
                           MinimaCertificate<F>* cert = nullptr) {
  const F& f = u[0].field();
  const std::size_t n = u.size();
  detail::LevelSearch<F> search(f, n, [&](int t) { return detail::minima_system(u, q, t); });
  auto vals = search.values(n, lower, q);
  if (cert) {
    cert->q = q;
    cert->values = vals;
    cert->basis.clear();
    KRankAccumulator<F> acc(f, n);
    for (std::size_t j = 1; j <= n; ++j) {
      for (const auto& s : search.solutions(vals[j - 1])) {
        if (cert->basis.size() >= j) break;
        if (acc.insert(s)) cert->basis.push_back(s);
      }
      if (cert->basis.size() < j) throw InvariantError("could not extract a realizing basis");
    }
    // a K-independent realizing family has |det| <= 1, so det is a nonzero constant
    if (det(f, cert->basis).deg() != 0) throw InvariantError("realizing family is not a basis of A^n");
  }
  return vals;
}

/// Profile q -> (L_{u,1}(q), ..., L_{u,n}(q)) for q = 0..Q.
template <ExactField F>
MinimaResult<F> minima_profile(const LaurentVec<F>& u, int Q, bool certify = false, unsigned jobs = 1) {
  require_unit(u);
  require_horizon(u, Q);
  const std::size_t n = u.size();
  MinimaResult<F> res;
  res.profile = Profile{n, Q, {}};
  if (certify) res.certificates.resize(static_cast<std::size_t>(Q) + 1);
  res.profile.values = detail::sweep(Q, jobs, n, 0, true, [&](int q, const std::vector<int>& lower) {
    return minima_at(u, q, lower, certify ? &res.certificates[static_cast<std::size_t>(q)] : nullptr);
  });
  return res;
}

/// Minima of the dual bodies: ||y|| <= e^{q+t}, ||u ^ y|| <= e^t; values lie in [-q, 0].
template <ExactField F>
Profile dual_profile(const LaurentVec<F>& u, int Q, unsigned jobs = 1) {
  require_unit(u);
  require_horizon(u, Q);
  const F& f = u[0].field();
  const std::size_t n = u.size();
  Profile p{n, Q, {}};
  p.values = detail::sweep(Q, jobs, n, -1, false, [&](int q, const std::vector<int>& lower) {
    detail::LevelSearch<F> search(f, n, [&](int t) { return detail::dual_system(u, q, t); });
    return search.values(n, lower, 0);
  });
  return p;
}

/// Sorted m-subset sums of the minima values.
inline std::vector<int> compound_profile(const std::vector<int>& values, std::size_t m) {
  if (m < 1 || m > values.size()) throw PreconditionError("compound grade must satisfy 1 <= m <= n");
  std::vector<int> out;
  for (const auto& s : subsets(values.size(), m)) {
    int sum = 0;
    for (auto i : s) sum += values[i];
    out.push_back(sum);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Minima of the grade-m compound bodies, computed directly on exterior coordinates.
template <ExactField F>
Profile compound_direct(const LaurentVec<F>& u, std::size_t m, int Q, unsigned jobs = 1) {
  require_unit(u);
  require_horizon(u, Q);
  const std::size_t n = u.size();
  if (m < 1 || m > n) throw PreconditionError("compound grade must satisfy 1 <= m <= n");
  if (n > 6) throw PreconditionError("compound_direct supports n <= 6");
  const F& f = u[0].field();
  const std::size_t N = binomial(n, m);
  const int M = static_cast<int>(binomial(n - 1, m - 1));
  Profile p{N, Q, {}};
  p.values = detail::sweep(Q, jobs, N, 0, true, [&](int q, const std::vector<int>& lower) {
    detail::LevelSearch<F> search(f, N, [&](int t) { return detail::compound_system(u, m, q, t); });
    return search.values(N, lower, M * q);
  });
  return p;
}

/// q -> q + L*_{u,j}(nq) for q = 0..q_max.
template <ExactField F>
std::vector<std::vector<int>> tilde_profile(const LaurentVec<F>& u, int q_max, unsigned jobs = 1) {
  const int n = static_cast<int>(u.size());
  require_unit(u);
  require_horizon(u, n * q_max, "n*q_max");
  Profile d = dual_profile(u, n * q_max, jobs);
  std::vector<std::vector<int>> out;
  for (int q = 0; q <= q_max; ++q) {
    std::vector<int> v = d.at(n * q);
    for (int& x : v) x += q;
    out.push_back(std::move(v));
  }
  return out;
}

/// L_x(q) = max(log||x||, q + log|u.x|): slope 0, then slope 1 from the breakpoint on.
struct Trajectory {
  int level = 0;
  std::optional<int> breakpoint;  // none when u.x = 0
  int at(int q) const { return breakpoint && q > *breakpoint ? level + (q - *breakpoint) : level; }
};

template <ExactField F>
Trajectory trajectory(const PolyVec<F>& x, const LaurentVec<F>& u) {
  if (is_zero_vec(x)) throw PreconditionError("trajectory of the zero vector");
  Trajectory tr;
  tr.level = vec_deg(x);
  LogNorm ux = dot(u, x).log_norm();
  if (ux.is_indeterminate()) throw PrecisionError("|u.x| is not certified at the stored precision");
  if (ux.is_finite()) tr.breakpoint = tr.level - ux.value;
  return tr;
}

/// L_x(q) alone; needs |u.x| only up to the bound that decides the maximum.
template <ExactField F>
int trajectory_at(const PolyVec<F>& x, const LaurentVec<F>& u, int q) {
  if (is_zero_vec(x)) throw PreconditionError("trajectory of the zero vector");
  const int level = vec_deg(x);
  LogNorm ux = dot(u, x).log_norm();
  if (ux.is_neg_inf()) return level;
  if (ux.is_indeterminate()) {
    if (q + ux.value <= level) return level;
    throw PrecisionError("|u.x| is not certified at the stored precision");
  }
  return std::max(level, q + ux.value);
}

}  // namespace ffpgn
