#include <catch_amalgamated.hpp>

#include "ffpgn/adelic.hpp"
#include "ffpgn/pade.hpp"
#include "test_support.hpp"

using namespace ffpgn;
using namespace ffpgn::testing;

namespace {

const RationalField QQ{};
using P = Poly<RationalField>;
using V = PolyVec<RationalField>;
using W = std::vector<Rational>;

Rational q(long a, long b = 1) { return Rational(a, b); }
P ints(std::initializer_list<long> c) { return P::from_ints(QQ, c); }

// (omega + D)^k a = sum_j C(k, j) omega^{k-j} a^{(j)}
P wronskian_entry(const P& a, const Rational& w, int k) {
  P out(QQ), der = a;
  Rational binom(1);
  for (int j = 0; j <= k; ++j) {
    Rational pw(1);
    for (int e = 0; e < k - j; ++e) pw = pw * w;
    out += der.scaled(binom * pw);
    der = der.derivative();
    binom = binom * Rational(k - j) / Rational(j + 1);
  }
  return out;
}

// ord_alpha(p) as the first k with p^{(k)}(alpha) != 0
int ord_by_derivatives(P p, const Rational& alpha) {
  for (int k = 0;; ++k) {
    if (!p.eval(alpha).is_zero()) return k;
    p = p.derivative();
  }
}

// ord_0(sum a_i e^{omega_i T}) from truncated power series products
int ord0_by_series(const V& a, const W& omega, int N) {
  P s(QQ);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * series_exp(QQ, omega[i], N).p;
  for (int e = 0; e < N; ++e)
    if (!s.coeff(e).is_zero()) return e;
  return -1;
}

Rational vandermonde_product(const W& w) {
  Rational v(1);
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j) v = v * (w[j] - w[i]);
  return v;
}

V rand_nonzero_entries(Rng& rng, std::size_t n, int max_deg) {
  V a;
  while (a.size() < n) {
    P p = rand_poly(QQ, rng, static_cast<int>(rand_int(rng, 0, max_deg)));
    if (!p.is_zero()) a.push_back(p);
  }
  return a;
}

W rand_distinct(Rng& rng, std::size_t n) {
  W w;
  while (w.size() < n) {
    Rational c(rand_int(rng, -5, 5), rand_int(rng, 1, 3));
    if (std::find(w.begin(), w.end(), c) == w.end()) w.push_back(c);
  }
  return w;
}

V binomial_remark(std::size_t n) {
  V a;
  long c = 1;
  for (std::size_t j = 1; j <= n; ++j) {
    a.push_back(ints({((n - j) % 2 ? -c : c)}));
    c = c * static_cast<long>(n - j) / static_cast<long>(j);
  }
  return a;
}

W range_omega(std::size_t n) {
  W w;
  for (std::size_t j = 0; j < n; ++j) w.push_back(Rational(static_cast<long>(j)));
  return w;
}

}  // namespace

TEST_CASE("wronskian examples") {
  CHECK(wronskian_matrix(V{ints({-1}), ints({1})}, W{q(0), q(1)}) ==
        PolyMat<RationalField>{{ints({-1}), ints({1})}, {P(QQ), ints({1})}});
  CHECK(wronskian_matrix(V{ints({0, 1}), ints({1})}, W{q(0), q(1)}) ==
        PolyMat<RationalField>{{ints({0, 1}), ints({1})}, {ints({1}), ints({1})}});
  CHECK_THROWS_AS(wronskian_matrix(V{P(QQ), ints({1})}, W{q(0), q(1)}), PreconditionError);
  CHECK_THROWS_AS(wronskian_matrix(V{ints({1}), ints({1})}, W{q(2), q(2)}), PreconditionError);
  Rng rng(8);
  for (int it = 0; it < 40; ++it) {
    const std::size_t n = 1 + static_cast<std::size_t>(it % 4);
    const auto a = rand_nonzero_entries(rng, n, 5);
    const auto w = rand_distinct(rng, n);
    const auto m = wronskian_matrix(a, w);
    CHECK(m[0] == a);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) CHECK(m[k][i] == wronskian_entry(a[i], w[i], static_cast<int>(k)));
  }
}

TEST_CASE("delta examples and structure") {
  CHECK(delta(V{ints({-1}), ints({1})}, W{q(0), q(1)}) == ints({-1}));
  CHECK(delta(V{ints({0, 1}), ints({1})}, W{q(0), q(1)}) == ints({-1, 1}));
  CHECK(delta(V{ints({1}), ints({1}), ints({1})}, W{q(0), q(1), q(2)}) == ints({2}));
  Rng rng(9);
  for (int it = 0; it < 100; ++it) {
    const std::size_t n = 2 + static_cast<std::size_t>(it % 3);
    const auto a = rand_nonzero_entries(rng, n, 6);
    const auto w = rand_distinct(rng, n);
    const auto r = delta_report(a, w);
    CHECK(r.ok());
    CHECK(vandermonde(QQ, w) == vandermonde_product(w));
    Rational lc = vandermonde_product(w);
    int d = 0;
    for (const auto& p : a) {
      lc = lc * p.lc();
      d += p.deg();
    }
    CHECK(r.delta.deg() == d);
    CHECK(r.delta.lc() == lc);
  }
}

TEST_CASE("local data") {
  auto ld = local_data(V{ints({-1}), ints({1})}, W{q(0), q(1)}, q(0));
  CHECK(ld.ord_af == 1);
  CHECK(ld.ord_a == std::vector<int>{0, 0});
  CHECK(ld.norm_log == 0);
  CHECK(ld.steps_ok);
  CHECK(local_data(V{ints({1}), ints({0, 0, 1})}, W{q(3), q(1)}, q(0)).ord_af == 0);
  for (std::size_t n = 2; n <= 6; ++n) CHECK(local_data(binomial_remark(n), range_omega(n), q(0)).ord_af == int(n) - 1);
  // away from 0 the symbols are independent: the order is min ord(a_i)
  auto off = local_data(V{ints({-1}), ints({1})}, W{q(0), q(1)}, q(2));
  CHECK(off.ord_af == 0);
  auto sq = local_data(V{ints({4, -4, 1}), ints({-2, 1})}, W{q(0), q(1, 2)}, q(2));
  CHECK(sq.ord_a == std::vector<int>{2, 1});
  CHECK(sq.ord_af == 1);
  CHECK(sq.norm_log == -1);
  CHECK_THROWS_AS(local_data(binomial_remark(4), range_omega(4), q(0), 3), PrecisionError);

  Rng rng(10);
  for (int it = 0; it < 150; ++it) {
    const std::size_t n = 2 + static_cast<std::size_t>(it % 3);
    const auto a = rand_nonzero_entries(rng, n, 5);
    const auto w = rand_distinct(rng, n);
    const Rational alpha(rand_int(rng, -3, 3), rand_int(rng, 1, 2));
    const auto d = local_data(a, w, alpha);
    CHECK(d.steps_ok);
    int lo = INT_MAX;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(d.ord_a[i] == ord_by_derivatives(a[i], alpha));
      lo = std::min(lo, d.ord_a[i]);
    }
    if (alpha.is_zero()) CHECK(d.ord_af == ord0_by_series(a, w, default_p_loc(a) + 4));
    else CHECK(d.ord_af == lo);
  }
}

TEST_CASE("adelic margin") {
  const auto tight = adelic_margin(V{ints({-1}), ints({1})}, W{q(0), q(1)}, W{q(0)});
  CHECK(tight.lhs_log == -1);
  CHECK(tight.margin == 0);
  CHECK(tight.ok());
  CHECK(adelic_margin(V{ints({1}), ints({1})}, W{q(0), q(1)}, W{q(0)}).margin == 1);
  CHECK_THROWS_AS(adelic_margin(V{ints({1}), ints({1})}, W{q(0), q(1)}, W{}), PreconditionError);
  CHECK_THROWS_AS(adelic_margin(V{ints({1}), ints({1})}, W{q(0), q(1)}, W{q(1), q(1)}), PreconditionError);
  // the weaker constant exp(n-1) is attained at alpha = 0
  for (std::size_t n = 2; n <= 5; ++n) {
    const auto r = adelic_margin(binomial_remark(n), range_omega(n), W{q(0)});
    CHECK(r.remark_margin == 0);
    CHECK(r.ok());
  }
  Rng rng(11);
  int min_margin = INT_MAX;
  for (int it = 0; it < 200; ++it) {
    const std::size_t n = 2 + static_cast<std::size_t>(it % 2);
    const auto a = rand_nonzero_entries(rng, n, 6);
    const auto w = rand_distinct(rng, n);
    W S;
    const auto s = static_cast<std::size_t>(rand_int(rng, 1, 3));
    while (S.size() < s) {
      Rational c(rand_int(rng, -3, 3), rand_int(rng, 1, 2));
      if (std::find(S.begin(), S.end(), c) == S.end()) S.push_back(c);
    }
    const auto r = adelic_margin(a, w, S);
    CHECK(r.ok());
    // recompute the left side from the per-point data
    int lhs = 0;
    for (const auto& p : a) lhs += p.deg();
    for (const auto& ld : r.local) {
      int m = INT_MAX;
      for (int o : ld.ord_a) {
        lhs -= o;
        m = std::min(m, o);
      }
      lhs += m - ld.ord_af;
    }
    CHECK(r.lhs_log == lhs);
    CHECK(r.margin == lhs + static_cast<int>(s * n * (n - 1) / 2));
    min_margin = std::min(min_margin, r.margin);
  }
  CHECK(min_margin >= 0);
}

TEST_CASE("corollaries at infinity") {
  CHECK(corollary_checks(V{ints({1}), ints({1})}, W{q(0), q(1)}).ok());
  const auto tt = corollary_checks(V{ints({0, 1}), ints({0, 1})}, W{q(0), q(1)});
  CHECK(tt.ok());
  CHECK(tt.first_margin == 1);
  // a_1 constant: the first display is the adelic bound at S = {0} for x
  const V a{ints({1}), ints({-1, 0, 2})};
  const W w{q(0), q(1)};
  const V x{a[0].reversed(2), a[1].reversed(2)};
  CHECK(corollary_checks(a, w).first_margin == adelic_margin(x, w, W{q(0)}).margin);

  Rng rng(12);
  for (int it = 0; it < 80; ++it) {
    const std::size_t n = 2 + static_cast<std::size_t>(it % 3);
    const auto a = rand_nonzero_entries(rng, n, 4);
    const auto w = rand_distinct(rng, n);
    CHECK(corollary_checks(a, w).ok());
    // |a.u|_inf straight from Laurent series at infinity
    const int N = default_p_loc(a) + vec_deg(a) + 6;
    LaurentVec<RationalField> u;
    for (const auto& wi : w) u.push_back(at_infinity(series_exp(QQ, wi, N)));
    CHECK(log_abs_at_infinity(a, w) == dot(u, a).log_norm().get());
  }
}
