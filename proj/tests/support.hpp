#pragma once

// Shared fixtures for unit and acceptance tests.

#include <random>
#include <string>
#include <vector>

#include "frobdyn/fsets.hpp"
#include "frobdyn/linalg.hpp"
#include "frobdyn/reduction.hpp"

namespace fixture {

using namespace frobdyn;

inline std::shared_ptr<const FunctionField> ff(std::uint64_t p, unsigned d = 1, unsigned e = 1) {
  return std::make_shared<const FunctionField>(std::make_shared<const FiniteField>(p, e), d);
}

inline RationalFunction lit(const std::shared_ptr<const FunctionField>& K, const std::string& s) {
  return parse_rational_function(*K, s);
}

inline std::vector<RationalFunction> lits(const std::shared_ptr<const FunctionField>& K,
                                          const std::vector<std::string>& s) {
  std::vector<RationalFunction> out;
  for (const auto& x : s) out.push_back(lit(K, x));
  return out;
}

inline RatMatrix rat(const std::vector<std::vector<long>>& rows) {
  RatMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size(), Rat(0));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = Rat(rows[i][j]);
  return m;
}

// Product of elementary integer matrices with multipliers in [-1, 1].
inline RatMatrix random_unimodular(std::size_t n, std::mt19937_64& rng, int steps = -1) {
  RatMatrix P = RatMatrix::identity(n, Rat(0), Rat(1));
  if (n < 2) return P;
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_int_distribution<int> mult(-1, 1);
  const int k = steps < 0 ? static_cast<int>(2 * n) : steps;
  for (int s = 0; s < k; ++s) {
    const std::size_t i = idx(rng), j = idx(rng);
    if (i == j) continue;
    RatMatrix E = RatMatrix::identity(n, Rat(0), Rat(1));
    E(i, j) = mult(rng);
    P = P * E;
  }
  return P;
}

inline RatMatrix jordan_rat(const std::vector<std::pair<long, std::size_t>>& blocks) {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.second;
  RatMatrix J(n, n, Rat(0));
  std::size_t o = 0;
  for (const auto& [a, s] : blocks) {
    for (std::size_t i = 0; i < s; ++i) {
      J(o + i, o + i) = a;
      if (i + 1 < s) J(o + i, o + i + 1) = 1;
    }
    o += s;
  }
  return J;
}

inline Rat max_abs(const RatMatrix& m) {
  Rat b = 0;
  for (const auto& x : m.data()) b = std::max(b, Rat(abs(x)));
  return b;
}

// Random dominant integer matrix of size n with |entries| <= bound. Mixes
// purely random draws with conjugated unipotent/Frobenius/NFP structure.
inline RatMatrix random_dominant(std::size_t n, long q, long bound, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 2);
  for (;;) {
    RatMatrix A(n, n, Rat(0));
    if (kind(rng) == 0) {
      std::uniform_int_distribution<long> e(-bound, bound);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) A(i, j) = e(rng);
    } else {
      std::vector<std::pair<long, std::size_t>> blocks;
      std::size_t left = n;
      std::uniform_int_distribution<int> pick(0, 3);
      while (left) {
        std::uniform_int_distribution<std::size_t> sz(1, std::min<std::size_t>(left, 2));
        const std::size_t s = sz(rng);
        const int c = pick(rng);
        const long eig = c == 0 ? 1 : c == 1 ? q : c == 2 ? -1 : 2 * q - 1;
        blocks.push_back({eig, s});
        left -= s;
      }
      const RatMatrix P = random_unimodular(n, rng, static_cast<int>(n));
      A = P * jordan_rat(blocks) * *inverse(P);
    }
    if (max_abs(A) > bound) continue;
    if (rank(A) != n) continue;
    return A;
  }
}

inline RationalFunction random_unit(const std::shared_ptr<const FunctionField>& K, std::mt19937_64& rng) {
  static const std::vector<std::string> atoms = {"t1", "t1+1", "t1^2+t1+1", "t1-1"};
  std::uniform_int_distribution<int> ex(-2, 2), c(1, static_cast<int>(K->p()) - 1);
  RationalFunction x = RationalFunction::from_int(*K, c(rng));
  for (const auto& a : atoms) x = x * lit(K, a).pow(ex(rng));
  return x;
}

// Random small F-set over the basis {t1} or {t1, t1+1}, N coordinates.
inline FSet random_fset(long q, std::mt19937_64& rng) {
  auto K = ff(static_cast<std::uint64_t>(q));
  std::uniform_int_distribution<int> coin(0, 1), small(-2, 2), mid(-3, 3);
  FSet S;
  S.q = q;
  S.basis = coin(rng) ? coprime_basis(K, {lit(K, "t1")}) : coprime_basis(K, {lit(K, "t1"), lit(K, "t1+1")});
  const std::size_t s = S.basis.size();
  const std::size_t N = 1 + static_cast<std::size_t>(coin(rng)) + (s == 1 ? static_cast<std::size_t>(coin(rng)) : 0);
  const std::size_t D = N * s;
  auto torsion = [&]() { return q == 2 || coin(rng) ? Rat(0) : Rat(1, 2); };
  auto point = [&](std::uniform_int_distribution<int>& dist) {
    ExpPoint x;
    for (std::size_t i = 0; i < N; ++i) {
      ExpCoord c;
      for (std::size_t b = 0; b < s; ++b) c.e.push_back(Rat(dist(rng)));
      c.tors = torsion_canon(torsion(), Int(q));
      x.push_back(c);
    }
    return x;
  };
  S.gamma = point(mid);
  std::uniform_int_distribution<int> mcount(0, 2), step(1, 2);
  const int m = mcount(rng);
  for (int j = 0; j < m; ++j) {
    S.alphas.push_back(point(small));
    S.steps.push_back(step(rng));
  }
  std::uniform_int_distribution<std::size_t> rows(0, std::min<std::size_t>(D, 3));
  const std::size_t r = rows(rng);
  for (int tries = 0; tries < 20; ++tries) {
    IntMatrix H(r, D, Int(0));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < D; ++j) H(i, j) = small(rng);
    if (rank(to_rat(H)) == r) {
      S.lattice = H;
      break;
    }
  }
  if (S.lattice.rows() != r) S.lattice = IntMatrix(0, D, Int(0));
  S.ell = coin(rng) ? 1 : 2;
  return S;
}

// Point gamma + sum F^{k_j n_j} alpha_j + (1/ell) c H.
inline ExpPoint fset_sample(const FSet& S, const std::vector<long>& n, const std::vector<Int>& c) {
  FSetCertificate cert;
  cert.n = n;
  const std::size_t D = S.rank() * S.basis.size();
  cert.h.assign(D, Rat(0));
  for (std::size_t i = 0; i < S.lattice.rows(); ++i)
    for (std::size_t j = 0; j < D; ++j) cert.h[j] += Rat(c[i] * S.lattice(i, j)) / Rat(S.ell);
  return fset_point(S, cert);
}

// Exhaustive search over n_j <= nmax and lattice elements h with |h|_inf <= hmax.
inline bool fset_brute_force(const ExpPoint& x, const FSet& S, long nmax, long hmax) {
  const std::size_t m = S.alphas.size(), r = S.lattice.rows();
  const std::size_t s = S.basis.size(), D = S.rank() * s;
  const Int p = S.basis.p();
  std::vector<long> n(m, 0);
  for (;;) {
    FSetCertificate base;
    base.n = n;
    base.h.assign(D, Rat(0));
    const ExpPoint y = fset_point(S, base);
    bool ok = true;
    std::vector<Rat> diff;
    for (std::size_t i = 0; i < S.rank() && ok; ++i) {
      if (torsion_canon(x[i].tors - y[i].tors, p) != 0) ok = false;
      for (std::size_t b = 0; b < s; ++b) diff.push_back(x[i].e[b] - y[i].e[b]);
    }
    for (const auto& v : diff)
      if (abs(v) > hmax) ok = false;
    if (ok) {
      if (r == 0) {
        if (std::all_of(diff.begin(), diff.end(), [](const Rat& v) { return v == 0; })) return true;
      } else {
        // Rows are independent, so the coefficients are unique if they exist.
        RatMatrix Ht = to_rat(S.lattice).transpose();
        std::vector<Rat> target(D);
        for (std::size_t j = 0; j < D; ++j) target[j] = diff[j] * Rat(S.ell);
        if (auto sol = solve_right(Ht, target))
          if (std::all_of(sol->begin(), sol->end(), [](const Rat& v) { return is_integer(v); })) return true;
      }
    }
    std::size_t k = 0;
    while (k < m && n[k] == nmax) n[k++] = 0;
    if (k == m) return false;
    ++n[k];
  }
}

}  // namespace fixture
