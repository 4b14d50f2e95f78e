#pragma once

// Exterior algebra coordinates. A grade-m element of the exterior power of an
// n-dimensional space is stored by its coordinates on e_I = e_{i1}^...^e_{im}
// for I = {i1 < ... < im}, with the subsets I in lexicographic order.

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "ffpgn/errors.hpp"
#include "ffpgn/laurent.hpp"
#include "ffpgn/poly.hpp"

namespace ffpgn {

using Subset = std::vector<std::size_t>;

/// All m-subsets of {0..n-1} in lexicographic order.
inline std::vector<Subset> subsets(std::size_t n, std::size_t m) {
  std::vector<Subset> out;
  if (m > n) return out;
  Subset s(m);
  for (std::size_t i = 0; i < m; ++i) s[i] = i;
  while (true) {
    out.push_back(s);
    std::size_t i = m;
    while (i > 0 && s[i - 1] == n - m + i - 1) --i;
    if (i == 0) break;
    ++s[i - 1];
    for (std::size_t j = i; j < m; ++j) s[j] = s[j - 1] + 1;
  }
  return out;
}

inline std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Position lookup for the lexicographic m-subsets of {0..n-1}.
class SubsetIndex {
 public:
  SubsetIndex(std::size_t n, std::size_t m) : list_(subsets(n, m)) {
    for (std::size_t i = 0; i < list_.size(); ++i) pos_[list_[i]] = i;
  }
  const std::vector<Subset>& list() const { return list_; }
  std::size_t size() const { return list_.size(); }
  std::size_t at(const Subset& s) const { return pos_.at(s); }

 private:
  std::vector<Subset> list_;
  std::map<Subset, std::size_t> pos_;
};

/// Plucker coordinates of v_1 ^ ... ^ v_m: the m x m minors on the column sets I.
template <class R>
std::vector<R> wedge(const std::vector<std::vector<R>>& vs, std::size_t n) {
  const std::size_t m = vs.size();
  if (m == 0 || m > n) throw PreconditionError("wedge needs 1 <= m <= n vectors");
  for (const auto& v : vs)
    if (v.size() != n) throw PreconditionError("wedge: vector length differs from n");
  std::vector<R> cur = vs[0];
  for (std::size_t g = 1; g < m; ++g) {
    SubsetIndex lower(n, g);
    const auto higher = subsets(n, g + 1);
    std::vector<R> next;
    next.reserve(higher.size());
    for (const auto& J : higher) {
      // (w ^ v)_J = sum over i in J of (-1)^{#{j in J : j > i}} w_{J \ i} v_i
      std::optional<R> acc;
      for (std::size_t pos = 0; pos < J.size(); ++pos) {
        Subset rest;
        for (std::size_t t = 0; t < J.size(); ++t)
          if (t != pos) rest.push_back(J[t]);
        R term = cur[lower.at(rest)] * vs[g][J[pos]];
        const bool neg = (J.size() - 1 - pos) % 2 == 1;
        if (!acc) acc = neg ? -term : term;
        else if (neg) *acc = *acc - term;
        else *acc = *acc + term;
      }
      next.push_back(*acc);
    }
    cur = std::move(next);
  }
  return cur;
}

/// Interior product of a covector u with a grade-m element w:
/// e_I maps to sum_j (-1)^{j+1} u_{i_j} e_{I \ i_j} (j counted from 1).
template <class U, class W>
auto contract(const std::vector<U>& u, const std::vector<W>& w, std::size_t n, std::size_t m) {
  using R = decltype(u[0] * w[0]);
  if (m < 1 || m > n) throw PreconditionError("contract: grade must satisfy 1 <= m <= n");
  if (u.size() != n || w.size() != binomial(n, m)) throw PreconditionError("contract: grade or length mismatch");
  const auto high = subsets(n, m);
  SubsetIndex low(n, m - 1);
  std::vector<std::optional<R>> out(low.size());
  for (std::size_t a = 0; a < high.size(); ++a) {
    const Subset& I = high[a];
    for (std::size_t j = 0; j < I.size(); ++j) {
      Subset rest;
      for (std::size_t t = 0; t < I.size(); ++t)
        if (t != j) rest.push_back(I[t]);
      R term = u[I[j]] * w[a];
      auto& slot = out[low.at(rest)];
      const bool neg = j % 2 == 1;
      if (!slot) slot = neg ? -term : term;
      else if (neg) *slot = *slot - term;
      else *slot = *slot + term;
    }
  }
  std::vector<R> r;
  r.reserve(out.size());
  for (auto& s : out) r.push_back(*s);
  return r;
}

/// Sum of the member norms minus the norm of their wedge (always >= 0);
/// nullopt when the family is dependent.
template <ExactField F>
std::optional<int> hadamard_defect(const std::vector<PolyVec<F>>& xs) {
  if (xs.empty()) throw PreconditionError("hadamard_defect of an empty family");
  const std::size_t n = xs[0].size();
  long total = 0;
  for (const auto& x : xs) {
    if (is_zero_vec(x)) throw PreconditionError("hadamard_defect of a family containing zero");
    total += vec_deg(x);
  }
  auto w = wedge(xs, n);
  int d = vec_deg(w);
  if (d == kNegInfDeg) return std::nullopt;
  return static_cast<int>(total - d);
}

template <ExactField F>
std::optional<int> hadamard_defect(const std::vector<LaurentVec<F>>& xs) {
  if (xs.empty()) throw PreconditionError("hadamard_defect of an empty family");
  const std::size_t n = xs[0].size();
  long total = 0;
  for (const auto& x : xs) {
    LogNorm ln = log_norm(x);
    if (ln.is_neg_inf()) throw PreconditionError("hadamard_defect of a family containing zero");
    total += ln.get();
  }
  LogNorm w = log_norm(wedge(xs, n));
  if (w.is_neg_inf()) return std::nullopt;
  return static_cast<int>(total - w.get());
}

/// log of ||x ^ y|| / (||x|| ||y||); NegInf for proportional exact inputs.
template <ExactField F>
LogNorm projective_distance(const LaurentVec<F>& x, const LaurentVec<F>& y) {
  LogNorm nx = log_norm(x), ny = log_norm(y);
  if (nx.is_neg_inf() || ny.is_neg_inf()) throw PreconditionError("projective distance to the zero vector");
  const int a = nx.get(), b = ny.get();
  LogNorm w = log_norm(wedge(std::vector<LaurentVec<F>>{x, y}, x.size()));
  if (w.is_neg_inf()) return w;
  if (w.is_indeterminate()) return LogNorm::indeterminate(w.value - a - b);
  return LogNorm::finite(w.value - a - b);
}

}  // namespace ffpgn
