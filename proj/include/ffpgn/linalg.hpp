#pragma once

// Exact linear algebra: nullspaces over F, ranks and determinants of
// polynomial matrices over K = F(T), and dual bases of A^n.

#include <cstddef>
#include <utility>
#include <vector>

#include "ffpgn/errors.hpp"
#include "ffpgn/field.hpp"
#include "ffpgn/poly.hpp"

namespace ffpgn {

template <ExactField F>
using FMat = std::vector<std::vector<typename F::Elem>>;

template <ExactField F>
using PolyMat = std::vector<PolyVec<F>>;

/// Basis of {x in F^cols : M x = 0}, one vector per free column of the
/// reduced row echelon form (the free coordinate is 1, other free ones 0).
template <ExactField F>
std::vector<std::vector<typename F::Elem>> nullspace_F(const F& f, FMat<F> m, std::size_t cols) {
  using Elem = typename F::Elem;
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
    std::size_t r = row;
    while (r < m.size() && m[r][c].is_zero()) ++r;
    if (r == m.size()) continue;
    std::swap(m[r], m[row]);
    const Elem inv = f.one() / m[row][c];
    for (std::size_t j = c; j < cols; ++j) m[row][j] *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == row || m[i][c].is_zero()) continue;
      const Elem factor = m[i][c];
      for (std::size_t j = c; j < cols; ++j)
        if (!m[row][j].is_zero()) m[i][j] -= factor * m[row][j];
    }
    pivots.push_back(c);
    ++row;
  }
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Elem>> basis;
  for (std::size_t fc = 0; fc < cols; ++fc) {
    if (is_pivot[fc]) continue;
    std::vector<Elem> v(cols, f.zero());
    v[fc] = f.one();
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][fc];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Incremental rank over K = F(T) of a growing set of polynomial row vectors.
/// Rows are kept in fraction-free echelon form: row k has a nonzero entry at
/// its pivot column and every later row vanishes at that column.
template <ExactField F>
class KRankAccumulator {
 public:
  KRankAccumulator(F field, std::size_t n) : field_(std::move(field)), n_(n) {}

  std::size_t rank() const { return rows_.size(); }
  bool full() const { return rows_.size() == n_; }

  /// Returns true if v is K-independent of the rows inserted so far (and keeps it).
  bool insert(PolyVec<F> v) {
    if (v.size() != n_) throw PreconditionError("row length does not match accumulator width");
    if (full()) return false;
    if (!reduce(v)) return false;
    std::size_t p = 0;
    while (v[p].is_zero()) ++p;
    rows_.push_back(std::move(v));
    pivots_.push_back(p);
    return true;
  }
  /// True if v lies in the K-span of the stored rows.
  bool in_span(PolyVec<F> v) const { return !reduce(v); }

 private:
  // Eliminates v against the stored rows; returns false if it becomes zero.
  bool reduce(PolyVec<F>& v) const {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const std::size_t p = pivots_[k];
      if (v[p].is_zero()) continue;
      const Poly<F> a = rows_[k][p];
      const Poly<F> b = v[p];
      for (std::size_t j = 0; j < n_; ++j) v[j] = a * v[j] - b * rows_[k][j];
      remove_content(v);
    }
    return !is_zero_vec(v);
  }
  static void remove_content(PolyVec<F>& v) {
    Poly<F> g(v.front().field());
    for (const auto& e : v) {
      if (e.is_zero()) continue;
      g = gcd(g, e);
      if (g.deg() == 0) return;
    }
    if (g.is_zero() || g.deg() <= 0) return;
    for (auto& e : v) e = e.exact_div(g);
  }

  F field_;
  std::size_t n_;
  std::vector<PolyVec<F>> rows_;
  std::vector<std::size_t> pivots_;
};

/// Rank over the fraction field of a polynomial matrix (rows as vectors).
template <ExactField F>
std::size_t rank_K(const F& f, const PolyMat<F>& m) {
  if (m.empty()) return 0;
  KRankAccumulator<F> acc(f, m.front().size());
  for (const auto& r : m) acc.insert(r);
  return acc.rank();
}

/// Determinant by Bareiss fraction-free elimination.
template <ExactField F>
Poly<F> det(const F& f, PolyMat<F> m) {
  const std::size_t n = m.size();
  for (const auto& r : m)
    if (r.size() != n) throw PreconditionError("determinant of a non-square matrix");
  if (n == 0) return Poly<F>::constant(f, f.one());
  bool neg = false;
  Poly<F> prev = Poly<F>::constant(f, f.one());
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t r = k;
    while (r < n && m[r][k].is_zero()) ++r;
    if (r == n) return Poly<F>(f);
    if (r != k) {
      std::swap(m[r], m[k]);
      neg = !neg;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]).exact_div(prev);
      m[i][k] = Poly<F>(f);
    }
    prev = m[k][k];
  }
  Poly<F> d = m[n - 1][n - 1];
  return neg ? -d : d;
}

/// Matrix with row i and column j removed.
template <ExactField F>
PolyMat<F> minor_matrix(const PolyMat<F>& m, std::size_t i, std::size_t j) {
  PolyMat<F> r;
  for (std::size_t a = 0; a < m.size(); ++a) {
    if (a == i) continue;
    PolyVec<F> row;
    for (std::size_t b = 0; b < m[a].size(); ++b)
      if (b != j) row.push_back(m[a][b]);
    r.push_back(std::move(row));
  }
  return r;
}

/// Row i of the cofactor matrix: entries (-1)^{i+j} det(minor(i, j)).
template <ExactField F>
PolyVec<F> cofactor_row(const F& f, const PolyMat<F>& m, std::size_t i) {
  PolyVec<F> r;
  for (std::size_t j = 0; j < m.size(); ++j) {
    Poly<F> d = det(f, minor_matrix(m, i, j));
    r.push_back((i + j) % 2 == 0 ? d : -d);
  }
  return r;
}

/// Dual basis of a basis of A^n: rows y_i with y_i . x_j = delta_ij.
template <ExactField F>
PolyMat<F> unimodular_dual(const F& f, const PolyMat<F>& b) {
  Poly<F> d = det(f, b);
  if (d.deg() != 0) throw PreconditionError("determinant " + d.str() + " is not a unit; rows are not a basis of A^n");
  const auto inv = f.one() / d.lc();
  PolyMat<F> r;
  for (std::size_t i = 0; i < b.size(); ++i) {
    PolyVec<F> row = cofactor_row(f, b, i);
    for (auto& e : row) e = e.scaled(inv);
    r.push_back(std::move(row));
  }
  return r;
}

}  // namespace ffpgn
