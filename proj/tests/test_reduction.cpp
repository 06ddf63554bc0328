#include "doctest.h"
#include "frobdyn/errors.hpp"
#include "support.hpp"

using namespace frobdyn;
using namespace fixture;

namespace {

EndoMatrix Zmat(long q, const std::vector<std::vector<long>>& rows) {
  return endo_from_rational(make_integer_ring(Int(q)), rat(rows));
}

CenterPoly poly(const EndoMatrix& A, std::vector<long> c) {
  std::vector<Rat> r;
  for (long x : c) r.push_back(Rat(x));
  return center_poly_from_rational(A.zero().algebra(), r);
}

}  // namespace

TEST_CASE("iterate_normalize examples") {
  auto I = Zmat(3, {{1, 0}, {0, 1}});
  CHECK(iterate_normalize(I).n == 1);

  auto R = Zmat(3, {{0, -1}, {1, 0}});
  auto r = iterate_normalize(R);
  CHECK(r.n == 4);
  CHECK(r.power == endo_identity(R.zero().algebra(), 2));
  CHECK(r.unity_orders == std::vector<unsigned long>{4});

  auto S = Zmat(3, {{0, 3}, {1, 0}});  // x^2 - 3
  auto s = iterate_normalize(S);
  CHECK(s.n == 2);
  CHECK(endo_to_rational(s.power) == rat({{3, 0}, {0, 3}}));

  CHECK_THROWS_AS(iterate_normalize(Zmat(3, {{1, 1}, {1, 1}})), DomainError);
}

TEST_CASE("unity_split examples") {
  auto A = Zmat(3, {{1, 0}, {0, 3}});
  auto u = unity_split(A);
  CHECK(u.h1 == poly(A, {-1, 1}));
  CHECK(u.h2 == poly(A, {-3, 1}));
  CHECK(u.l0 == 2);
  CHECK(u.Q1 * u.h1 + u.Q2 * u.h2 == poly(A, {2}));

  auto J = Zmat(3, {{1, 1}, {0, 1}});
  auto uj = unity_split(J);
  CHECK(uj.s == 2);
  CHECK(uj.h2 == poly(J, {1}));
  CHECK(uj.l0 == 1);

  auto T = Zmat(3, {{3}});
  auto ut = unity_split(T);
  CHECK(ut.s == 0);
  CHECK(ut.h1 == poly(T, {1}));
  CHECK(ut.l0 == 1);
}

TEST_CASE("kill_translation examples") {
  auto K = ff(3);
  auto B = coprime_basis(K, {lit(K, "t1")});
  const Int p = 3;
  auto z = kill_translation(Zmat(3, {{3}}), to_point({lit(K, "t1")}, B), Int(1), p);
  CHECK(z[0].e == std::vector<Rat>{Rat(1, 2)});
  auto z0 = kill_translation(Zmat(3, {{3}}), to_point({lit(K, "1")}, B), Int(1), p);
  CHECK(z0[0].is_identity());
  auto z2 = kill_translation(Zmat(3, {{3, 1}, {0, 3}}), to_point({lit(K, "t1"), lit(K, "1")}, B), Int(1), p);
  // (psi - I) z = beta: 2 z1 + z2 = 1, 2 z2 = 0.
  CHECK(z2[0].e == std::vector<Rat>{Rat(1, 2)});
  CHECK(z2[1].is_identity());
  CHECK_THROWS_AS(kill_translation(Zmat(3, {{1}}), to_point({lit(K, "t1")}, B), Int(1), p), PreconditionViolated);
}

TEST_CASE("frobenius_split examples") {
  auto f1 = frobenius_split(Zmat(3, {{3}}));
  REQUIRE(f1.B1.size() == 1);
  CHECK(f1.exponents == std::vector<long>{1});
  CHECK(f1.B2.rows() == 0);
  CHECK(f1.l2 == 1);

  auto A = Zmat(3, {{0, 2}, {1, 0}});
  auto f2 = frobenius_split(A);
  CHECK(f2.B1.empty());
  CHECK(f2.B2.rows() == 2);
  CHECK(min_poly_over_center(f2.B2) == poly(A, {-2, 0, 1}));

  std::mt19937_64 rng(5);
  RatMatrix P = random_unimodular(2, rng, 4);
  RatMatrix M = P * rat({{3, 0}, {0, 9}}) * *inverse(P);
  auto f3 = frobenius_split(endo_from_rational(make_integer_ring(Int(3)), M), 24, true);
  REQUIRE(f3.B1.size() == 2);
  CHECK(f3.exponents == std::vector<long>{1, 2});
  CHECK(f3.B1[0].alpha.rational() == 3);
  CHECK(f3.B1[1].alpha.rational() == 9);

  CHECK_THROWS_AS(frobenius_split(Zmat(3, {{-1}})), PreconditionViolated);
  CHECK_THROWS_AS(frobenius_split(Zmat(3, {{0, 3}, {1, 0}})), PreconditionViolated);  // needs the square
}

TEST_CASE("normalize_translation clears non-last coordinates") {
  auto K = ff(5);
  auto B = coprime_basis(K, {lit(K, "t1")});
  const Int p = 5;
  auto Z = make_integer_ring(Int(5));
  const Elem one = Elem::scalar(Z, Rat(1));
  auto n1 = normalize_translation({{one, 1}}, to_point({lit(K, "t1")}, B), p);
  CHECK(n1.gamma[0].is_identity());
  CHECK(n1.beta == to_point({lit(K, "t1")}, B));

  auto n2 = normalize_translation({{one, 2}}, to_point({lit(K, "t1"), lit(K, "t1^2")}, B), p);
  CHECK(n2.beta == to_point({lit(K, "1"), lit(K, "t1^2")}, B));

  auto n3 = normalize_translation({{one, 2}}, to_point({lit(K, "1"), lit(K, "1")}, B), p);
  CHECK(n3.beta[0].is_identity());
  CHECK(n3.beta[1].is_identity());
}

TEST_CASE("build_normal_form examples") {
  auto K = ff(3);
  auto S1 = make_torus_map(K, rat({{1}}), {lit(K, "t1")});
  auto N1 = build_normal_form(S1, 1);
  REQUIRE(N1.factors.size() == 1);
  CHECK(N1.factors[0].unipotent.size() == 1);
  CHECK(N1.factors[0].frob.B1.empty());
  CHECK(N1.factors[0].beta_nf == S1.beta);

  auto S2 = make_torus_map(K, rat({{1, 0, 0}, {0, 3, 0}, {0, 0, 3}}), lits(K, {"1", "1", "1"}));
  auto N2 = build_normal_form(S2, 1);
  const auto& f = N2.factors[0];
  CHECK(N2.n_star == 1);
  CHECK(f.unipotent.size() == 1);
  CHECK(f.unipotent[0].size == 1);
  REQUIRE(f.frob.B1.size() == 2);
  CHECK(f.frob.exponents == std::vector<long>{1, 1});
  CHECK(f.dim_n == 0);
  for (const auto& c : f.beta_nf) CHECK(c.is_identity());

  auto S3 = make_torus_map(K, rat({{0, 2}, {1, 0}}), lits(K, {"1", "1"}));
  auto N3 = build_normal_form(S3, 1);
  CHECK(N3.factors[0].dim_u == 0);
  CHECK(N3.factors[0].dim_f == 0);
  CHECK(N3.factors[0].dim_n == 2);
}

TEST_CASE("verify_almost_commutative on the three-coordinate example") {
  auto K = ff(3);
  auto S = make_torus_map(K, rat({{1, 0, 0}, {0, 3, 0}, {0, 0, 3}}), lits(K, {"1", "1", "1"}), {lit(K, "t1")});
  auto NF = build_normal_form(S, 1);
  auto rep = verify_almost_commutative(NF, S, {to_point(lits(K, {"t1", "t1", "t1"}), *S.basis)}, 5);
  CHECK(rep.ok());
  CHECK(rep.point_level);
  CHECK(rep.failures.empty());
}

TEST_CASE("iterate translation matches direct simulation") {
  auto K = ff(3);
  std::mt19937_64 rng(8);
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 1 + t % 3;
    RatMatrix A = random_dominant(n, 3, 9, rng);
    std::vector<RationalFunction> beta;
    for (std::size_t i = 0; i < n; ++i) beta.push_back(random_unit(K, rng));
    auto S = make_torus_map(K, A, beta, {lit(K, "t1"), lit(K, "t1+1")});
    ExpPoint x0 = to_point(std::vector<RationalFunction>(n, lit(K, "t1+1")), *S.basis);
    const long N = 4;
    ExpPoint direct = x0;
    for (long k = 0; k < N; ++k) direct = step(S, direct);
    RatMatrix AN = matrix_power(A, N, Rat(1));
    ExpPoint once = add(iterate_translation(A, S.beta, N, S.p()), apply_matrix(AN, x0, S.p()), S.p());
    CHECK(direct == once);
  }
}

TEST_CASE("property: normal form passes the verifier on random torus systems") {
  std::mt19937_64 rng(2024);
  for (long q : {2L, 3L}) {
    auto K = ff(static_cast<std::uint64_t>(q));
    for (int t = 0; t < 10; ++t) {
      const std::size_t n = 1 + t % 4;
      RatMatrix A = random_dominant(n, q, q * q, rng);
      std::vector<RationalFunction> beta;
      for (std::size_t i = 0; i < n; ++i) beta.push_back(random_unit(K, rng));
      auto S = make_torus_map(K, A, beta, {lit(K, "t1"), lit(K, "t1+1")});
      auto NF = build_normal_form(S, 1);
      const auto& f = NF.factors[0];
      // h1 h2 = g; Bezout; NFP and Frobenius-power checks.
      CHECK(f.unity.h1 * f.unity.h2 == f.unity.g);
      CHECK(f.unity.Q1 * f.unity.h1 + f.unity.Q2 * f.unity.h2 == center_const(Elem::scalar(f.unity.g.zero().algebra(), Rat(f.unity.l0))));
      for (std::size_t b = 0; b < f.frob.B1.size(); ++b) {
        auto g = CenterPoly::linear_root(f.frob.B1[b].alpha, f.unity.g.zero());
        auto r = is_frobenius_power(g, embed(f.frob.B1[b].alpha));
        REQUIRE(r);
        CHECK(r->m == 1);
        CHECK(r->k == f.frob.exponents[b]);
      }
      if (f.dim_n) CHECK(is_nfp(f.frob.B2));
      std::vector<ExpPoint> samples;
      for (int s = 0; s < 3; ++s)
        samples.push_back(to_point(std::vector<RationalFunction>(n, s % 2 ? lit(K, "t1") : lit(K, "t1+1")), *S.basis));
      auto rep = verify_almost_commutative(NF, S, samples, 3);
      CHECK_MESSAGE(rep.ok(), (rep.failures.empty() ? std::string() : rep.failures[0]));
    }
  }
}
