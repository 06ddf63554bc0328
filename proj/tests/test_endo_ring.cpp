#include <random>

#include "doctest.h"
#include "frobdyn/endo_ring.hpp"
#include "frobdyn/errors.hpp"
#include "frobdyn/linalg.hpp"

using namespace frobdyn;

namespace {

Elem random_elem(const std::shared_ptr<const Algebra>& A, std::mt19937_64& rng, int bound = 5) {
  std::uniform_int_distribution<int> d(-bound, bound);
  std::vector<Rat> c;
  for (unsigned i = 0; i < A->dim; ++i) c.push_back(Rat(d(rng)));
  return Elem(A, c);
}

EndoMatrix random_matrix(const std::shared_ptr<const Algebra>& A, std::size_t n, std::mt19937_64& rng) {
  EndoMatrix m = endo_zero(A, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = random_elem(A, rng, 2);
  return m;
}

CenterPoly rational_poly(const std::shared_ptr<const Algebra>& A, std::vector<long> c) {
  std::vector<Rat> r;
  for (long x : c) r.push_back(Rat(x));
  return center_poly_from_rational(A, r);
}

// Norm form x0^2 - a x1^2 - b x2^2 + ab x3^2 has a nontrivial zero in a box.
bool norm_form_isotropic(long a, long b, long box) {
  for (long x0 = -box; x0 <= box; ++x0)
    for (long x1 = -box; x1 <= box; ++x1)
      for (long x2 = -box; x2 <= box; ++x2)
        for (long x3 = -box; x3 <= box; ++x3) {
          if (!x0 && !x1 && !x2 && !x3) continue;
          if (x0 * x0 - a * x1 * x1 - b * x2 * x2 + a * b * x3 * x3 == 0) return true;
        }
  return false;
}

}  // namespace

TEST_CASE("regular representation examples") {
  auto Z = make_integer_ring(Int(3));
  CHECK(regular_representation(Elem::scalar(Z, Rat(1))) == RatMatrix::identity(1, Rat(0), Rat(1)));

  auto Q = make_quadratic_ring(Rat(1), Int(3));
  CHECK(regular_representation(Elem::frobenius(Q)) == RatMatrix{{Rat(0), Rat(-3)}, {Rat(1), Rat(1)}});

  auto H = make_quaternion_ring(Rat(-1), Rat(-1), {Rat(3), Rat(0), Rat(0), Rat(0)}, Int(3));
  // Columns: i*1 = i, i*i = -1, i*j = k, i*k = -j.
  RatMatrix expect{{Rat(0), Rat(-1), Rat(0), Rat(0)},
                   {Rat(1), Rat(0), Rat(0), Rat(0)},
                   {Rat(0), Rat(0), Rat(0), Rat(-1)},
                   {Rat(0), Rat(0), Rat(1), Rat(0)}};
  CHECK(regular_representation(Elem::basis(H, 1)) == expect);
}

TEST_CASE("property: regular representation is multiplicative; Frobenius is central") {
  std::mt19937_64 rng(3);
  std::vector<std::shared_ptr<const Algebra>> rings = {
      make_integer_ring(Int(5)), make_quadratic_ring(Rat(2), Int(5)),
      make_quaternion_ring(Rat(-1), Rat(-3), {Rat(7), Rat(0), Rat(0), Rat(0)}, Int(7))};
  for (const auto& A : rings) {
    const Elem F = Elem::frobenius(A);
    for (int t = 0; t < 50; ++t) {
      Elem x = random_elem(A, rng), y = random_elem(A, rng);
      CHECK(regular_representation(x * y) == regular_representation(x) * regular_representation(y));
      CHECK(F * x == x * F);
      if (!x.zero()) CHECK(x * inv(x) == one_like(x));
    }
  }
}

TEST_CASE("quaternion multiplication table by hand") {
  auto H = make_quaternion_ring(Rat(-1), Rat(-1), {Rat(2), Rat(0), Rat(0), Rat(0)}, Int(2));
  const Elem i = Elem::basis(H, 1), j = Elem::basis(H, 2), k = Elem::basis(H, 3);
  const Elem one = Elem::scalar(H, Rat(1));
  CHECK(i * i == -one);
  CHECK(j * j == -one);
  CHECK(k * k == -one);
  CHECK(i * j == k);
  CHECK(j * i == -k);
  CHECK(j * k == i);
  CHECK(k * i == j);
  CHECK(!i.is_central());
}

TEST_CASE("division quaternion algebras against a norm-form search") {
  CHECK(quaternion_is_division(Rat(-1), Rat(-1)));
  CHECK(!quaternion_is_division(Rat(1), Rat(1)));
  CHECK(!quaternion_is_division(Rat(-1), Rat(2)));  // 1^2 + 1^2 = 2
  for (long a = -7; a <= 7; ++a)
    for (long b = -7; b <= 7; ++b) {
      if (!a || !b) continue;
      // Anisotropic norm form means no zero anywhere; a split algebra has a small zero here.
      CHECK_MESSAGE(quaternion_is_division(Rat(a), Rat(b)) != norm_form_isotropic(a, b, 6),
                    "a=" << a << " b=" << b);
    }
  CHECK_THROWS_AS(make_quaternion_ring(Rat(1), Rat(1), {Rat(2), Rat(0), Rat(0), Rat(0)}, Int(2)),
                  DomainError);
  CHECK_THROWS_AS(make_quaternion_ring(Rat(-1), Rat(-1), {Rat(0), Rat(1), Rat(0), Rat(0)}, Int(2)),
                  DomainError);
}

TEST_CASE("reducible quadratic Frobenius polynomial is rejected") {
  // x^2 - 5x + 4 = (x-1)(x-4)
  CHECK_THROWS_AS(make_quadratic_ring(Rat(5), Int(4)), DomainError);
}

TEST_CASE("min_poly_over_center examples") {
  auto Z = make_integer_ring(Int(3));
  CHECK(min_poly_over_center(endo_identity(Z, 3)) == rational_poly(Z, {-1, 1}));
  EndoMatrix J = endo_from_rational(Z, RatMatrix{{Rat(3), Rat(1)}, {Rat(0), Rat(3)}});
  CHECK(min_poly_over_center(J) == rational_poly(Z, {9, -6, 1}));
  EndoMatrix A = endo_from_rational(Z, RatMatrix{{Rat(0), Rat(2)}, {Rat(1), Rat(0)}});
  auto g = min_poly_over_center(A);
  CHECK(g == rational_poly(Z, {-2, 0, 1}));
  CHECK(to_string(g) == "x^2 - 2");

  // Over Z[F]: the scalar matrix F*I has minimal polynomial x - F.
  auto Q = make_quadratic_ring(Rat(1), Int(2));
  const Elem F = Elem::frobenius(Q);
  EndoMatrix FI = scale_left(F, endo_identity(Q, 2));
  auto gF = min_poly_over_center(FI);
  REQUIRE(gF.degree() == 1);
  CHECK(gF.coeff(0) == -F);
}

TEST_CASE("property: min poly annihilates and is minimal") {
  std::mt19937_64 rng(17);
  std::vector<std::shared_ptr<const Algebra>> rings = {
      make_integer_ring(Int(3)), make_quadratic_ring(Rat(1), Int(3)),
      make_quaternion_ring(Rat(-1), Rat(-1), {Rat(3), Rat(0), Rat(0), Rat(0)}, Int(3))};
  for (const auto& A : rings)
    for (int t = 0; t < 8; ++t) {
      const std::size_t n = 1 + t % 3;
      EndoMatrix M = random_matrix(A, n, rng);
      auto g = min_poly_over_center(M);
      CHECK(eval_center_poly(g, M).is_zero());
      // Minimality: I, M, ..., M^{deg-1} independent over the center, tested
      // on the rational flattening (center is Q or Q(F)).
      RatMatrix cols(M.rows() * M.cols() * A->dim, static_cast<std::size_t>(g.degree()), Rat(0));
      EndoMatrix P = endo_identity(A, n);
      for (long k = 0; k < g.degree(); ++k) {
        std::size_t r = 0;
        for (const auto& e : P.data())
          for (const auto& c : e.coords()) cols(r++, static_cast<std::size_t>(k)) = c;
        P = P * M;
      }
      if (center_is_rational(*A)) {
        CHECK(rank(cols) == static_cast<std::size_t>(g.degree()));
      } else {
        // Over Q(F) a dependence would show up after adjoining F-multiples.
        RatMatrix both(cols.rows(), 2 * cols.cols(), Rat(0));
        P = endo_identity(A, n);
        const Elem F = Elem::frobenius(A);
        for (long k = 0; k < g.degree(); ++k) {
          std::size_t r = 0;
          EndoMatrix FP = scale_left(F, P);
          for (std::size_t idx = 0; idx < P.data().size(); ++idx)
            for (unsigned c = 0; c < A->dim; ++c) {
              both(r, static_cast<std::size_t>(2 * k)) = P.data()[idx].coords()[c];
              both(r, static_cast<std::size_t>(2 * k + 1)) = FP.data()[idx].coords()[c];
              ++r;
            }
          P = P * M;
        }
        CHECK(rank(both) == static_cast<std::size_t>(2 * g.degree()));
      }
    }
}

TEST_CASE("is_frobenius_power examples") {
  auto Z = make_integer_ring(Int(3));
  auto r1 = is_frobenius_power(rational_poly(Z, {-3, 1}), {3.0, 0.0});
  REQUIRE(r1);
  CHECK(r1->m == 1);
  CHECK(r1->k == 1);
  auto r2 = is_frobenius_power(rational_poly(Z, {-3, 0, 1}), {std::sqrt(3.0), 0.0});
  REQUIRE(r2);
  CHECK(r2->m == 2);
  CHECK(r2->k == 1);

  auto Z2 = make_integer_ring(Int(2));
  auto golden = rational_poly(Z2, {-1, -1, 1});
  for (auto z : numeric_roots(golden)) CHECK(!is_frobenius_power(golden, z, 24));
  // Exhaustive exact oracle.
  for (long m = 1; m <= 24; ++m)
    for (long k = -2 * m; k <= 2 * m; ++k) CHECK(!shares_root_with_power(golden, m, k));

  CHECK_THROWS_AS(is_frobenius_power(golden, {0.0, 0.0}), DomainError);
}

TEST_CASE("Frobenius powers in a quadratic center") {
  // F^2 = F - 2 (|F| = sqrt 2); lambda = F^3 satisfies x - F^3.
  auto Q = make_quadratic_ring(Rat(1), Int(2));
  const Elem F = Elem::frobenius(Q);
  auto g = CenterPoly::linear_root(F.pow(3), Elem::scalar(Q, Rat(0)));
  auto r = is_frobenius_power(g, embed(F.pow(3)));
  REQUIRE(r);
  CHECK(r->m == 1);
  CHECK(r->k == 3);
  // Rational 2 = F * conj(F): |2| = |F|^2 but 2 is not a power of F (arguments differ).
  auto g2 = CenterPoly::linear_root(Elem::scalar(Q, Rat(2)), Elem::scalar(Q, Rat(0)));
  CHECK(!is_frobenius_power(g2, {2.0, 0.0}, 24));
}

TEST_CASE("roots of unity are Frobenius powers with k = 0") {
  auto Z = make_integer_ring(Int(5));
  auto g = rational_poly(Z, {1, 0, 1});  // x^2 + 1
  for (auto z : numeric_roots(g)) {
    auto r = is_frobenius_power(g, z);
    REQUIRE(r);
    CHECK(r->m == 4);
    CHECK(r->k == 0);
  }
}

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic(1) == std::vector<Rat>{Rat(-1), Rat(1)});
  CHECK(cyclotomic(6) == std::vector<Rat>{Rat(1), Rat(-1), Rat(1)});
  CHECK(cyclotomic(12) == std::vector<Rat>{Rat(1), Rat(0), Rat(-1), Rat(0), Rat(1)});
  for (unsigned long n = 1; n <= 30; ++n) CHECK(cyclotomic(n).size() - 1 == euler_phi(n));
}

TEST_CASE("order denominators") {
  auto H = make_quaternion_ring(Rat(-1), Rat(-1), {Rat(2), Rat(0), Rat(0), Rat(0)}, Int(2));
  CHECK(Elem(H, {Rat(1, 2), Rat(0), Rat(1, 3), Rat(0)}).order_denominator() == 6);
  // Hurwitz order: basis 1, i, j, (1+i+j+k)/2.
  RatMatrix hur{{Rat(1), Rat(0), Rat(0), Rat(0)},
                {Rat(0), Rat(1), Rat(0), Rat(0)},
                {Rat(0), Rat(0), Rat(1), Rat(0)},
                {Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(1, 2)}};
  auto Hh = make_quaternion_ring(Rat(-1), Rat(-1), {Rat(2), Rat(0), Rat(0), Rat(0)}, Int(2), hur);
  CHECK(Elem(Hh, {Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(1, 2)}).order_denominator() == 1);
  RatMatrix bad{{Rat(1), Rat(0), Rat(0), Rat(0)},
                {Rat(0), Rat(1, 2), Rat(0), Rat(0)},
                {Rat(0), Rat(0), Rat(1), Rat(0)},
                {Rat(0), Rat(0), Rat(0), Rat(1)}};
  CHECK_THROWS_AS(make_quaternion_ring(Rat(-1), Rat(-1), {Rat(2), Rat(0), Rat(0), Rat(0)}, Int(2), bad),
                  DomainError);
}
