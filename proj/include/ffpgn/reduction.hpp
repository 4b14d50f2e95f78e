#pragma once

// Incremental minima by basis reduction.
//
// A lattice point x is embedded as (x, T^q u.x) in K_inf^{n+1} with the max
// norm, so that L_x(q) is the norm of the image. A basis of A^n whose images
// have F-linearly independent leading vectors realizes the minima as its
// sorted row norms. Dependent leading vectors are removed one row at a time
// by the weak-Popov style step x_k <- sum_i (c_i/c_k) T^{nu_k - nu_i} x_i,
// which strictly lowers the norm of row k. The reduced basis for q is the
// starting point for q+1.

#include <algorithm>
#include <vector>

#include "ffpgn/errors.hpp"
#include "ffpgn/laurent.hpp"
#include "ffpgn/linalg.hpp"
#include "ffpgn/minima.hpp"
#include "ffpgn/nsystem.hpp"

namespace ffpgn {

template <ExactField F>
class ReducedLattice {
 public:
  explicit ReducedLattice(LaurentVec<F> u) : u_(std::move(u)), f_(u_[0].field()) {
    require_unit(u_);
    for (std::size_t i = 0; i < u_.size(); ++i) rows_.push_back(unit_vec(f_, u_.size(), i));
  }

  /// Reduces the basis for parameter q and returns the sorted minima.
  std::vector<int> reduce_at(int q) {
    require_horizon(u_, q);
    const std::size_t n = u_.size();
    while (true) {
      std::vector<int> nu(n);
      FMat<F> lead(n + 1, std::vector<typename F::Elem>(n, f_.zero()));  // columns are leading vectors
      for (std::size_t k = 0; k < n; ++k) {
        const LaurentSeries<F> s = dot(u_, rows_[k]);
        nu[k] = trajectory_at(rows_[k], u_, q);
        for (std::size_t i = 0; i < n; ++i) lead[i][k] = rows_[k][i].coeff(nu[k]);
        lead[n][k] = s.coeff(nu[k] - q);
      }
      auto deps = nullspace_F(f_, lead, n);
      if (deps.empty()) {
        last_norms_ = nu;
        std::vector<int> vals = nu;
        std::sort(vals.begin(), vals.end());
        return vals;
      }
      const auto& c = deps.front();
      std::size_t top = n;
      for (std::size_t k = 0; k < n; ++k)
        if (!c[k].is_zero() && (top == n || nu[k] > nu[top])) top = k;
      const auto inv = f_.one() / c[top];
      PolyVec<F> next(n, Poly<F>(f_));
      for (std::size_t k = 0; k < n; ++k) {
        if (c[k].is_zero()) continue;
        const auto scale = c[k] * inv;
        for (std::size_t i = 0; i < n; ++i) next[i] += rows_[k][i].shifted(nu[top] - nu[k]).scaled(scale);
      }
      rows_[top] = std::move(next);
    }
  }

  /// Current basis, rows ordered by the norms of the last reduction.
  PolyMat<F> sorted_basis() const {
    std::vector<std::size_t> idx(rows_.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return last_norms_[a] < last_norms_[b]; });
    PolyMat<F> out;
    for (auto i : idx) out.push_back(rows_[i]);
    return out;
  }

 private:
  LaurentVec<F> u_;
  F f_;
  PolyMat<F> rows_;
  std::vector<int> last_norms_;
};

/// Minima profile from the incremental reduction.
template <ExactField F>
MinimaResult<F> reduced_minima_profile(const LaurentVec<F>& u, int Q, bool certify = false) {
  require_unit(u);
  require_horizon(u, Q);
  ReducedLattice<F> lat(u);
  MinimaResult<F> res;
  res.profile = Profile{u.size(), Q, {}};
  for (int q = 0; q <= Q; ++q) {
    res.profile.values.push_back(lat.reduce_at(q));
    if (certify) res.certificates.push_back({q, res.profile.values.back(), lat.sorted_basis()});
  }
  return res;
}

}  // namespace ffpgn
