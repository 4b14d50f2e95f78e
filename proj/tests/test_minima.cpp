#include <catch_amalgamated.hpp>

#include "ffpgn/minima.hpp"
#include "ffpgn/reduction.hpp"
#include "test_support.hpp"

using namespace ffpgn;
using namespace ffpgn::testing;

namespace {

const RationalField QQ{};
const PrimeField F2{2};
const PrimeField F3{3};
const PrimeField F5{5};

template <ExactField F>
LaurentVec<F> e_n(const F& f, std::size_t n) {
  LaurentVec<F> u;
  for (std::size_t i = 0; i < n; ++i)
    u.push_back(LaurentSeries<F>::from_poly(Poly<F>::constant(f, i + 1 == n ? f.one() : f.zero()), 0));
  return u;
}

// (e^{w_1/T}, ..., e^{w_n/T}) from the factorial series, to precision N.
LaurentVec<RationalField> exp_point(const std::vector<long>& omega, int N) {
  LaurentVec<RationalField> u;
  for (long w : omega) {
    std::vector<Rational> c;
    mpq_class term(1);
    for (int j = 0; j <= N; ++j) {
      c.emplace_back(term);
      term = term * w / (j + 1);
    }
    u.emplace_back(QQ, 0, std::move(c), N);
  }
  return u;
}

std::vector<int> floor_ceil(int q) { return {q / 2, (q + 1) / 2}; }

// Independent enumeration oracle over a tiny field: list every x with
// deg x <= t, test |u.x| <= e^{t-q} with series arithmetic, and measure the
// K-rank of the survivors.
template <ExactField F>
std::vector<int> enumerate_minima(const LaurentVec<F>& u, int q) {
  const F& f = u[0].field();
  const std::size_t n = u.size();
  const long p = static_cast<long>(f.characteristic());
  std::vector<int> vals;
  for (int t = 0; vals.size() < n; ++t) {
    const std::size_t len = n * static_cast<std::size_t>(t + 1);
    std::vector<long> digits(len, 0);
    KRankAccumulator<F> acc(f, n);
    while (true) {
      std::size_t k = 0;
      while (k < len && ++digits[k] == p) digits[k++] = 0;
      if (k == len) break;
      PolyVec<F> x;
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<typename F::Elem> c;
        for (int d = 0; d <= t; ++d) c.push_back(f.from_int(digits[i * static_cast<std::size_t>(t + 1) + static_cast<std::size_t>(d)]));
        x.emplace_back(f, std::move(c));
      }
      LogNorm ln = dot(u, x).log_norm();
      bool inside = ln.is_neg_inf() || (ln.is_finite() && ln.value <= t - q) ||
                    (ln.is_indeterminate() && ln.value <= t - q);
      if (inside) acc.insert(x);
    }
    while (vals.size() < acc.rank()) vals.push_back(t);
  }
  return vals;
}

}  // namespace

TEST_CASE("minima of the coordinate point") {
  for (std::size_t n = 2; n <= 4; ++n) {
    auto res = minima_profile(e_n(F5, n), 8, true);
    for (int q = 0; q <= 8; ++q) {
      std::vector<int> expect(n, 0);
      expect.back() = q;
      CHECK(res.profile.at(q) == expect);
    }
  }
}

TEST_CASE("minima of the continued fraction point with quotients T, T, ...") {
  for (int N : {10, 14}) {
    auto xi = golden_root(F5, N);
    // xi = 1/T - 1/T^3 + 2/T^5 - 5/T^7 + ...
    CHECK(xi.coeff(-1) == F5.from_int(1));
    CHECK(xi.coeff(-3) == F5.from_int(-1));
    CHECK(xi.coeff(-5) == F5.from_int(2));
    CHECK(xi.coeff(-7) == F5.from_int(-5));
    LaurentVec<PrimeField> u{-xi, LaurentSeries<PrimeField>::from_poly(Poly<PrimeField>::constant(F5, F5.one()), N)};
    auto res = minima_profile(u, N - 1);
    for (int q = 0; q < N; ++q) CHECK(res.profile.at(q) == floor_ceil(q));
  }
}

TEST_CASE("minima of the exponential point are extremal") {
  auto u = exp_point({0, 1}, 13);
  CHECK(minima_profile(u, 12).profile == extremal(2, 12));
}

TEST_CASE("precision contract") {
  Rng rng(1);
  auto u = rand_unit_point(F5, rng, 3, 6);
  CHECK_NOTHROW(minima_profile(u, 5));
  CHECK_THROWS_AS(minima_profile(u, 6), PrecisionError);
  LaurentVec<PrimeField> big{LaurentSeries<PrimeField>::from_poly(Poly<PrimeField>::t_pow(F5, 1), 4),
                             LaurentSeries<PrimeField>::from_poly(Poly<PrimeField>::constant(F5, F5.one()), 4)};
  CHECK_THROWS_AS(minima_profile(big, 2), PreconditionError);
}

TEST_CASE("trajectories") {
  auto u = e_n(F5, 3);
  auto tr = trajectory(unit_vec(F5, 3, 0), u);
  CHECK(tr.at(0) == 0);
  CHECK(tr.at(9) == 0);
  auto tn = trajectory(unit_vec(F5, 3, 2), u);
  for (int q = 0; q < 6; ++q) CHECK(tn.at(q) == q);
  auto xi = golden_root(QQ, 10);
  LaurentVec<RationalField> v{-xi, LaurentSeries<RationalField>::from_poly(Poly<RationalField>::constant(QQ, Rational(1)), 10)};
  PolyVec<RationalField> x{Poly<RationalField>::t_pow(QQ, 1), Poly<RationalField>::constant(QQ, Rational(1))};
  auto t = trajectory(x, v);
  CHECK(t.level == 1);
  REQUIRE(t.breakpoint);
  CHECK(*t.breakpoint == 3);
}

TEST_CASE("minima agree with exhaustive enumeration over tiny fields") {
  Rng rng(41);
  for (int it = 0; it < 12; ++it) {
    const PrimeField& f = it % 2 ? F3 : F2;
    std::size_t n = it % 3 == 2 ? 3 : 2;
    int Q = n == 2 ? 6 : 4;
    if (&f == &F3 && n == 3) Q = 3;
    auto u = rand_unit_point(f, rng, n, Q + 1);
    auto prof = minima_profile(u, Q).profile;
    for (int q = 0; q <= Q; ++q) CHECK(prof.at(q) == enumerate_minima(u, q));
  }
}

TEST_CASE("random minima profiles are n-systems with sound certificates") {
  Rng rng(43);
  for (int it = 0; it < 30; ++it) {
    std::size_t n = 2 + static_cast<std::size_t>(it % 3);
    const int Q = 12;
    auto u = rand_unit_point(F5, rng, n, Q + 1);
    auto res = minima_profile(u, Q, true);
    auto v = validate_profile(res.profile);
    CHECK_FALSE(v);
    for (int q = 0; q <= Q; ++q) {
      const auto& cert = res.certificates[static_cast<std::size_t>(q)];
      CHECK(det(F5, cert.basis).deg() == 0);
      std::vector<int> traj;
      for (std::size_t j = 0; j < n; ++j) {
        int val = trajectory_at(cert.basis[j], u, q);
        CHECK(val <= cert.values[j]);
        traj.push_back(val);
      }
      std::sort(traj.begin(), traj.end());
      CHECK(traj == res.profile.at(q));
    }
    // monotonicity: L(q1) <= L(q2) <= (q2 - q1) + L(q1)
    for (int q1 = 0; q1 <= Q; ++q1)
      for (int q2 = q1; q2 <= Q; ++q2)
        for (std::size_t j = 0; j < n; ++j) {
          CHECK(res.profile.at(q1)[j] <= res.profile.at(q2)[j]);
          CHECK(res.profile.at(q2)[j] <= q2 - q1 + res.profile.at(q1)[j]);
        }
  }
}

TEST_CASE("parallel sweep matches the sequential warm start") {
  Rng rng(47);
  for (int it = 0; it < 6; ++it) {
    auto u = rand_unit_point(F5, rng, 3, 11);
    CHECK(minima_profile(u, 10, false, 3).profile == minima_profile(u, 10).profile);
    CHECK(dual_profile(u, 10, 2) == dual_profile(u, 10));
  }
}

TEST_CASE("dual minima") {
  auto d = dual_profile(e_n(F5, 3), 6);
  for (int q = 0; q <= 6; ++q) CHECK(d.at(q) == std::vector<int>{-q, 0, 0});
  auto de = dual_profile(exp_point({0, 1}, 11), 10);
  for (int q = 0; q <= 10; ++q) CHECK(de.at(q) == std::vector<int>{-((q + 1) / 2), -(q / 2)});
}

TEST_CASE("dual minima are the reversed negated minima") {
  Rng rng(53);
  for (int it = 0; it < 12; ++it) {
    std::size_t n = 2 + static_cast<std::size_t>(it % 2);
    auto u = rand_unit_point(F5, rng, n, 11);
    auto p = minima_profile(u, 10).profile;
    auto d = dual_profile(u, 10);
    for (int q = 0; q <= 10; ++q) {
      std::vector<int> expect;
      for (auto it2 = p.at(q).rbegin(); it2 != p.at(q).rend(); ++it2) expect.push_back(-*it2);
      CHECK(d.at(q) == expect);
    }
  }
}

TEST_CASE("compound subset sums") {
  CHECK(compound_profile({0, 0, 5}, 2) == std::vector<int>{0, 5, 5});
  CHECK(compound_profile({1, 2, 3}, 2) == std::vector<int>{3, 4, 5});
  CHECK(compound_profile({1, 1, 2, 2}, 2) == std::vector<int>{2, 3, 3, 3, 3, 4});
}

TEST_CASE("compound minima computed directly") {
  auto c = compound_direct(e_n(F5, 3), 2, 4);
  CHECK(c.at(4) == std::vector<int>{0, 4, 4});
  Rng rng(59);
  auto u = rand_unit_point(F5, rng, 3, 9);
  CHECK(compound_direct(u, 1, 8) == minima_profile(u, 8).profile);
  auto top = compound_direct(u, 3, 8);
  for (int q = 0; q <= 8; ++q) CHECK(top.at(q) == std::vector<int>{q});
}

TEST_CASE("compound minima equal subset sums of the minima") {
  Rng rng(61);
  for (int it = 0; it < 6; ++it) {
    std::size_t n = 3 + static_cast<std::size_t>(it % 2);
    auto u = rand_unit_point(F5, rng, n, 8);
    auto p = minima_profile(u, 7).profile;
    for (std::size_t m = 2; m < n; ++m) {
      auto c = compound_direct(u, m, 7);
      for (int q = 0; q <= 7; ++q) CHECK(c.at(q) == compound_profile(p.at(q), m));
    }
  }
}

TEST_CASE("renormalized dual profile") {
  auto t = tilde_profile(e_n(F5, 2), 1);
  CHECK(t[0] == std::vector<int>{0, 0});
  CHECK(t[1] == std::vector<int>{-1, 1});
  auto te = tilde_profile(exp_point({0, 1}, 7), 3);
  CHECK(te[3] == std::vector<int>{0, 0});
  CHECK_THROWS_AS(tilde_profile(exp_point({0, 1}, 6), 3), PrecisionError);
}

TEST_CASE("incremental reduction agrees with the linear-system minima") {
  Rng rng(67);
  for (int it = 0; it < 40; ++it) {
    std::size_t n = 2 + static_cast<std::size_t>(it % 3);
    const int Q = 14;
    if (it % 4 == 0) CHECK_FALSE(validate_profile(reduced_minima_profile(rand_unit_point(QQ, rng, n, Q + 1), Q).profile));
    else CHECK_FALSE(validate_profile(reduced_minima_profile(rand_unit_point(F5, rng, n, Q + 1), Q).profile));
  }
  for (int it = 0; it < 40; ++it) {
    std::size_t n = 2 + static_cast<std::size_t>(it % 3);
    const int Q = 14;
    auto u = rand_unit_point(F5, rng, n, Q + 1);
    auto red = reduced_minima_profile(u, Q, true);
    CHECK(red.profile == minima_profile(u, Q).profile);
    for (const auto& cert : red.certificates) {
      CHECK(det(F5, cert.basis).deg() == 0);
      for (std::size_t j = 0; j < n; ++j) CHECK(trajectory_at(cert.basis[j], u, cert.q) == cert.values[j]);
    }
  }
  auto xi = golden_root(F5, 12);
  LaurentVec<PrimeField> u{-xi, LaurentSeries<PrimeField>::from_poly(Poly<PrimeField>::constant(F5, F5.one()), 12)};
  CHECK(reduced_minima_profile(u, 11).profile == minima_profile(u, 11).profile);
}
