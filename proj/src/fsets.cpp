#include "frobdyn/fsets.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "frobdyn/errors.hpp"
#include "frobdyn/linalg.hpp"

namespace frobdyn {

std::optional<long> power_index(const Rat& x, const Int& base) {
  if (base < 2) throw PreconditionViolated("power_index: base must be >= 2");
  if (sgn(x) <= 0 || !is_integer(x)) return std::nullopt;
  Int m = x.get_num();
  long n = 0;
  while (m != 1) {
    if (mod(m, base) != 0) return std::nullopt;
    m /= base;
    ++n;
  }
  return n;
}

namespace {

long valuation(const Int& x, const Int& p) {
  Int m = x;
  return static_cast<long>(strip_prime(m, p));
}

long valuation(const Rat& x, const Int& p) {
  return valuation(Int(x.get_num()), p) - valuation(Int(x.get_den()), p);
}

Int qpow(const Int& q, long k) { return ipow(q, static_cast<unsigned long>(k)); }

// Solutions over the active (nonzero-coefficient) terms.
struct Active {
  std::vector<Rat> c;
  std::vector<long> delta;
  std::vector<std::size_t> idx;
};

void dfs_same_sign(const Active& a, const Int& q, std::size_t i, const Rat& rem, std::vector<long>& cur,
                   std::vector<std::vector<long>>& out, std::size_t limit, const Rat& cap, bool capped) {
  if (limit && out.size() >= limit) return;
  const std::size_t t = a.c.size();
  if (i + 1 == t) {
    const Rat X = rem / a.c[i];
    if (auto n = power_index(X, qpow(q, a.delta[i]))) {
      if (capped && abs(a.c[i]) * X > cap) return;
      cur[i] = *n;
      out.push_back(cur);
    }
    return;
  }
  // Each later term contributes at least its coefficient.
  Rat rest = 0;
  for (std::size_t j = i + 1; j < t; ++j) rest += a.c[j];
  const Int step = qpow(q, a.delta[i]);
  Int X = 1;
  for (long n = 0;; ++n, X *= step) {
    const Rat used = a.c[i] * Rat(X);
    if (!capped) {
      // c_i > 0 here (signs normalized), so used grows monotonically.
      if (used + rest > rem) break;
    } else if (abs(used) > cap) {
      break;
    }
    cur[i] = n;
    dfs_same_sign(a, q, i + 1, rem - used, cur, out, limit, cap, capped);
    if (limit && out.size() >= limit) return;
  }
}

std::vector<long> expand(const Active& a, std::size_t total, const std::vector<long>& sol) {
  std::vector<long> full(total, 0);
  for (std::size_t k = 0; k < a.idx.size(); ++k) full[a.idx[k]] = sol[k];
  return full;
}

}  // namespace

PowerSumSolutions solve_power_sum(const PowerSum& E, std::size_t limit) {
  if (E.c.size() != E.delta.size()) throw PreconditionViolated("power sum: coefficient/step length mismatch");
  if (E.q < 2) throw PreconditionViolated("power sum: q must be >= 2");
  for (long d : E.delta)
    if (d < 1) throw PreconditionViolated("power sum: step sizes must be >= 1");
  const std::size_t total = E.c.size();
  PowerSumSolutions out;
  Active a;
  for (std::size_t j = 0; j < total; ++j) {
    if (sgn(E.c[j]) == 0) continue;
    a.c.push_back(E.c[j]);
    a.delta.push_back(E.delta[j]);
    a.idx.push_back(j);
  }
  const std::size_t t = a.c.size();
  if (t == 0) {
    if (sgn(E.target) == 0) out.finite.push_back(std::vector<long>(total, 0));
    return out;
  }
  Rat T = E.target;
  bool pos = false, negs = false;
  for (const auto& c : a.c) (sgn(c) > 0 ? pos : negs) = true;
  if (!pos) {
    for (auto& c : a.c) c = -c;
    T = -T;
  }
  std::vector<long> cur(t, 0);
  if (!(pos && negs)) {
    dfs_same_sign(a, E.q, 0, T, cur, out.finite, limit, Rat(0), false);
    for (auto& s : out.finite) s = expand(a, total, s);
    return out;
  }
  const Int p = prime_factors(E.q).front();
  const long e = valuation(E.q, p);
  if (t == 2) {
    if (sgn(T) != 0) {
      // min(v_p(c_0 X_0), v_p(c_1 X_1)) <= v_p(T), otherwise the difference
      // would be divisible by a higher power of p than T.
      const long v = valuation(T, p);
      std::set<std::vector<long>> seen;
      for (std::size_t j = 0; j < 2; ++j) {
        const std::size_t o = 1 - j;
        const Int step = qpow(E.q, a.delta[j]);
        Int X = 1;
        for (long n = 0; valuation(a.c[j], p) + a.delta[j] * n * e <= v; ++n, X *= step) {
          const Rat Xo = (T - a.c[j] * Rat(X)) / a.c[o];
          if (auto no = power_index(Xo, qpow(E.q, a.delta[o]))) {
            std::vector<long> s(2);
            s[j] = n;
            s[o] = *no;
            if (seen.insert(s).second) out.finite.push_back(s);
          }
        }
      }
      if (limit && out.finite.size() > limit) out.finite.resize(limit);
      for (auto& s : out.finite) s = expand(a, total, s);
      return out;
    }
    // c_0 X_0 = -c_1 X_1: X_0 / X_1 = r must be a power of p.
    const Rat r = -a.c[1] / a.c[0];
    Int num = r.get_num(), den = r.get_den();
    const long kn = static_cast<long>(strip_prime(num, p));
    const long kd = static_cast<long>(strip_prime(den, p));
    if (num != 1 || den != 1) return out;
    const long k = kn - kd;
    if (k % e != 0) return out;
    const long K = k / e;  // d0 n0 - d1 n1 = K
    const long d0 = a.delta[0], d1 = a.delta[1];
    const long g = std::gcd(d0, d1);
    if (K % g != 0) return out;
    for (long n0 = std::max(0L, K >= 0 ? (K + d0 - 1) / d0 : 0L);; ++n0) {
      const long rhs = d0 * n0 - K;
      if (rhs >= 0 && rhs % d1 == 0) {
        std::vector<long> base{n0, rhs / d1}, step{d1 / g, d0 / g};
        std::vector<long> fb(total, 0), fs(total, 0);
        for (std::size_t j = 0; j < 2; ++j) {
          fb[a.idx[j]] = base[j];
          fs[a.idx[j]] = step[j];
        }
        out.family = std::make_pair(fb, fs);
        return out;
      }
    }
  }
  // Three or more terms of mixed sign: S-unit territory. Bounded search only.
  out.complete = false;
  Rat cap = abs(T);
  for (const auto& c : a.c) cap += abs(c);
  long maxd = *std::max_element(a.delta.begin(), a.delta.end());
  cap *= Rat(qpow(E.q, 2 * maxd));
  dfs_same_sign(a, E.q, 0, T, cur, out.finite, limit, cap, true);
  for (auto& s : out.finite) s = expand(a, total, s);
  return out;
}

// ---------------------------------------------------------------- FrobEq

Rat FrobEq::eval(long n) const {
  Rat acc = 0;
  for (std::size_t i = P.size(); i-- > 0;) acc = acc * Rat(n) + P[i];
  return acc;
}

bool FrobEq::constant() const {
  for (std::size_t i = 1; i < P.size(); ++i)
    if (sgn(P[i]) != 0) return false;
  return true;
}

void FrobEq::validate() const {
  if (c.size() != delta.size() + 1) throw PreconditionViolated("FrobEq: need c_0 plus one constant per step");
  for (long d : delta)
    if (d < 1) throw PreconditionViolated("FrobEq: step sizes must be >= 1");
  if (q < 2) throw PreconditionViolated("FrobEq: q must be >= 2");
}

std::optional<std::vector<long>> frob_eq_solve(const FrobEq& E, long n) {
  E.validate();
  PowerSum ps{std::vector<Rat>(E.c.begin() + 1, E.c.end()), E.delta, E.q, E.eval(n) - E.c[0]};
  auto sols = solve_power_sum(ps, 1);
  if (!sols.finite.empty()) return sols.finite.front();
  if (sols.family) return sols.family->first;
  return std::nullopt;
}

namespace {

void fill_curve(FrobEqCount& r, std::size_t t) {
  r.cumulative.assign(r.solvable.size(), 0);
  long acc = 0;
  for (std::size_t n = 0; n < r.solvable.size(); ++n) {
    acc += r.solvable[n];
    r.cumulative[n] = acc;
  }
  r.count = acc;
  r.degenerate = false;
  std::vector<std::pair<double, double>> pts;
  r.C = 0;
  for (long M = 4; M <= r.N; M *= 2) {
    const long cnt = r.cumulative[static_cast<std::size_t>(M)];
    r.density.push_back({M, static_cast<double>(cnt) / static_cast<double>(M)});
    const double lg = std::log(static_cast<double>(M));
    if (M <= 128) r.C = std::max(r.C, cnt / std::pow(lg, static_cast<double>(t)));
    if (cnt > 0) pts.push_back({std::log(lg), std::log(static_cast<double>(cnt))});
  }
  r.bound_holds = true;
  for (long M = 4; M <= r.N; M *= 2) {
    const double lg = std::log(static_cast<double>(M));
    if (r.cumulative[static_cast<std::size_t>(M)] > r.C * std::pow(lg, static_cast<double>(t)) + 1e-9)
      r.bound_holds = false;
  }
  if (pts.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double k = static_cast<double>(pts.size());
    r.growth_exponent = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  }
}

}  // namespace

FrobEqCount frob_eq_count_serial(const FrobEq& E, long N) {
  E.validate();
  if (N < 0) throw PreconditionViolated("frob_eq_count: N must be >= 0");
  FrobEqCount r;
  r.N = N;
  r.solvable.assign(static_cast<std::size_t>(N) + 1, 0);
  for (long n = 0; n <= N; ++n) r.solvable[static_cast<std::size_t>(n)] = frob_eq_solve(E, n).has_value();
  fill_curve(r, E.terms());
  r.degenerate = E.constant();
  return r;
}

FrobEqCount frob_eq_count(const FrobEq& E, long N) {
  E.validate();
  if (N < 0) throw PreconditionViolated("frob_eq_count: N must be >= 0");
  FrobEqCount r;
  r.N = N;
  r.solvable.assign(static_cast<std::size_t>(N) + 1, 0);
#pragma omp parallel for schedule(dynamic, 64)
  for (long n = 0; n <= N; ++n) r.solvable[static_cast<std::size_t>(n)] = frob_eq_solve(E, n).has_value();
  fill_curve(r, E.terms());
  r.degenerate = E.constant();
  return r;
}

// ---------------------------------------------------------------- F-sets

namespace {

struct Flat {
  std::vector<Rat> e;
  std::vector<Rat> tors;
};

Flat flatten(const ExpPoint& x, std::size_t s) {
  Flat f;
  for (const auto& c : x) {
    if (c.e.size() != s) throw DomainError("point is not over the F-set's coprime basis");
    f.e.insert(f.e.end(), c.e.begin(), c.e.end());
    f.tors.push_back(c.tors);
  }
  return f;
}

void check_shape(const ExpPoint& x, std::size_t N, std::size_t s) {
  if (x.size() != N) throw DomainError("point rank does not match the F-set");
  for (const auto& c : x)
    if (c.e.size() != s) throw DomainError("point is not over the F-set's coprime basis");
}

// Smallest M with M * y in the lattice spanned by the HNF rows, for y in its
// rational span (y already scaled by ell).
Int lattice_denominator(const IntMatrix& hnf, const std::vector<Rat>& y) {
  if (hnf.rows() == 0) return 1;
  RatMatrix Ht = to_rat(hnf).transpose();
  auto coords = solve_right(Ht, y);
  if (!coords) throw InvariantViolation("vector not in the rational span of the lattice");
  return den_lcm(*coords);
}

Int torsion_denominator(const std::vector<Rat>& t, const Int& p) {
  Int d = 1;
  for (const auto& x : t) d = lcm(d, Int(torsion_canon(x, p).get_den()));
  return d;
}

// First exponent n per residue class of base^n mod M, in increasing n.
std::vector<long> residue_representatives(const Int& base, const Int& M) {
  if (M == 1) return {0};
  std::vector<long> out;
  std::set<Int> seen;
  Int X = 1;
  for (long n = 0;; ++n) {
    const Int r = mod(X, M);
    if (!seen.insert(r).second) break;
    out.push_back(n);
    X = mod(X * base, M);
  }
  return out;
}

}  // namespace

void FSet::validate() const {
  if (alphas.size() != steps.size()) throw PreconditionViolated("F-set: one step size per orbit generator");
  for (long k : steps)
    if (k < 1) throw PreconditionViolated("F-set: step sizes must be >= 1");
  if (q < 2) throw PreconditionViolated("F-set: q must be >= 2");
  if (ell < 1) throw PreconditionViolated("F-set: ell must be >= 1");
  const std::size_t N = gamma.size(), s = basis.size();
  for (const auto& a : alphas) check_shape(a, N, s);
  check_shape(gamma, N, s);
  if (lattice.rows() > 0 && lattice.cols() != N * s)
    throw PreconditionViolated("F-set: lattice width must be rank * basis size");
  if (frobenius_stable && lattice.rows() > 0) {
    const IntMatrix H = hnf_rows(lattice);
    for (std::size_t i = 0; i < lattice.rows(); ++i) {
      std::vector<Int> v(lattice.row(i).begin(), lattice.row(i).end());
      for (auto& x : v) x *= q;
      if (!in_lattice(H, v)) throw PreconditionViolated("F-set: lattice declared F-stable is not");
    }
  }
}

ExpPoint fset_point(const FSet& S, const FSetCertificate& c) {
  const Int p = S.basis.p();
  ExpPoint x = S.gamma;
  for (std::size_t j = 0; j < S.alphas.size(); ++j)
    x = add(x, frobenius_apply(S.alphas[j], qpow(S.q, S.steps[j] * c.n[j]), p), p);
  const std::size_t s = S.basis.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    ExpCoord h{std::vector<Rat>(c.h.begin() + static_cast<long>(i * s), c.h.begin() + static_cast<long>((i + 1) * s)),
               Rat(0)};
    x[i] = add(x[i], h, p);
  }
  return x;
}

std::optional<FSetCertificate> fset_member(const ExpPoint& x, const FSet& S) {
  S.validate();
  const std::size_t N = S.rank(), s = S.basis.size(), D = N * s, m = S.alphas.size();
  check_shape(x, N, s);
  const Int p = S.basis.p();

  const Flat fx = flatten(x, s), fg = flatten(S.gamma, s);
  std::vector<Rat> c(D), tc(N);
  for (std::size_t i = 0; i < D; ++i) c[i] = fx.e[i] - fg.e[i];
  for (std::size_t i = 0; i < N; ++i) tc[i] = fx.tors[i] - fg.tors[i];
  std::vector<Flat> fa;
  for (const auto& a : S.alphas) fa.push_back(flatten(a, s));

  const IntMatrix L = S.lattice.rows() ? hnf_rows(S.lattice) : IntMatrix(0, D, Int(0));
  // W annihilates span_Q(H).
  RatMatrix W = L.rows() ? to_rat(integer_kernel(L)) : RatMatrix::identity(D, Rat(0), Rat(1));
  if (L.rows() && W.cols() != D) W = RatMatrix(0, D, Rat(0));
  auto project = [&](const std::vector<Rat>& v) { return W.rows() ? W.apply(v) : std::vector<Rat>{}; };
  auto nonzero = [](const std::vector<Rat>& v) {
    return std::any_of(v.begin(), v.end(), [](const Rat& r) { return sgn(r) != 0; });
  };

  const std::vector<Rat> cc = project(c);
  std::vector<std::size_t> J0, J1;
  std::vector<std::vector<Rat>> b(m);
  for (std::size_t j = 0; j < m; ++j) {
    b[j] = project(fa[j].e);
    (nonzero(b[j]) ? J1 : J0).push_back(j);
  }

  bool complete = true;
  // Candidate exponent tuples for J1 from the projected equation.
  std::vector<std::vector<long>> cand1;
  if (J1.empty()) {
    if (nonzero(cc)) return std::nullopt;
    cand1.push_back({});
  } else {
    RatMatrix M(W.rows(), J1.size() + 1, Rat(0));
    for (std::size_t k = 0; k < J1.size(); ++k)
      for (std::size_t r = 0; r < W.rows(); ++r) M(r, k) = b[J1[k]][r];
    for (std::size_t r = 0; r < W.rows(); ++r) M(r, J1.size()) = cc[r];
    const auto E = rref(M);
    if (!E.pivots.empty() && E.pivots.back() == J1.size()) return std::nullopt;
    const std::size_t rk = E.pivots.size();
    if (rk == J1.size()) {
      std::vector<long> tup;
      for (std::size_t k = 0; k < J1.size(); ++k) {
        auto n = power_index(E.reduced(k, J1.size()), qpow(S.q, S.steps[J1[k]]));
        if (!n) return std::nullopt;
        tup.push_back(*n);
      }
      cand1.push_back(tup);
    } else if (rk == 1) {
      PowerSum ps;
      ps.q = S.q;
      ps.target = E.reduced(0, J1.size());
      for (std::size_t k = 0; k < J1.size(); ++k) {
        ps.c.push_back(E.reduced(0, k));
        ps.delta.push_back(S.steps[J1[k]]);
      }
      auto sols = solve_power_sum(ps);
      complete = complete && sols.complete;
      cand1 = sols.finite;
      if (sols.family) {
        // Along the family the J1 contribution moves inside span_Q(H); the
        // residual class depends only on the terms modulo a finite modulus.
        const auto& [base, step] = *sols.family;
        Int Mod = 1;
        std::vector<Rat> u(D, Rat(0));
        const Rat X0 = Rat(qpow(S.q, S.steps[J1[0]] * base[0]));
        const Rat X1 = Rat(qpow(S.q, S.steps[J1[1]] * base[1]));
        for (std::size_t i = 0; i < D; ++i)
          u[i] = (X0 * fa[J1[0]].e[i] + X1 * fa[J1[1]].e[i]) * Rat(S.ell);
        Mod = lcm(lattice_denominator(L, u), torsion_denominator(fa[J1[0]].tors, p));
        Mod = lcm(Mod, torsion_denominator(fa[J1[1]].tors, p));
        std::set<std::pair<Int, Int>> seen;
        const Int g0 = qpow(S.q, S.steps[J1[0]] * step[0]);
        const Int g1 = qpow(S.q, S.steps[J1[1]] * step[1]);
        Int r0 = 1, r1 = 1;  // ratio to the base values, modulo Mod
        for (long k = 0;; ++k) {
          if (!seen.insert({mod(r0, Mod), mod(r1, Mod)}).second) break;
          cand1.push_back({base[0] + k * step[0], base[1] + k * step[1]});
          r0 = mod(r0 * g0, Mod);
          r1 = mod(r1 * g1, Mod);
        }
      }
    } else {
      // Several independent relations among three or more generators:
      // enumerate the free exponents under the norm bound.
      complete = false;
      std::vector<bool> is_piv(J1.size(), false);
      for (auto pc : E.pivots) is_piv[pc] = true;
      std::vector<std::size_t> fr;
      for (std::size_t k = 0; k < J1.size(); ++k)
        if (!is_piv[k]) fr.push_back(k);
      Rat bound = 1;
      for (const auto& v : cc) bound = std::max(bound, Rat(abs(v)));
      bound *= Rat(qpow(S.q, 2)) * Rat(static_cast<long>(J1.size()));
      std::vector<long> nf(fr.size(), 0);
      std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == fr.size()) {
          std::vector<long> tup(J1.size(), 0);
          std::vector<Rat> X(J1.size(), Rat(0));
          for (std::size_t k = 0; k < fr.size(); ++k) {
            tup[fr[k]] = nf[k];
            X[fr[k]] = Rat(qpow(S.q, S.steps[J1[fr[k]]] * nf[k]));
          }
          for (std::size_t r = 0; r < rk; ++r) {
            Rat v = E.reduced(r, J1.size());
            for (auto f : fr) v -= E.reduced(r, f) * X[f];
            auto n = power_index(v, qpow(S.q, S.steps[J1[E.pivots[r]]]));
            if (!n) return;
            tup[E.pivots[r]] = *n;
          }
          cand1.push_back(tup);
          return;
        }
        Rat minb = 0;
        for (const auto& v : b[J1[fr[i]]])
          if (sgn(v) != 0 && (sgn(minb) == 0 || abs(v) < minb)) minb = abs(v);
        Int X = 1;
        for (long n = 0; Rat(X) * minb <= bound; ++n, X *= qpow(S.q, S.steps[J1[fr[i]]])) {
          nf[i] = n;
          rec(i + 1);
        }
      };
      rec(0);
    }
  }

  // Generators invisible modulo span_Q(H) only matter through residues.
  std::vector<std::vector<long>> cand0;
  for (auto j : J0) {
    std::vector<Rat> y(D);
    for (std::size_t i = 0; i < D; ++i) y[i] = fa[j].e[i] * Rat(S.ell);
    const Int M = lcm(lattice_denominator(L, y), torsion_denominator(fa[j].tors, p));
    cand0.push_back(residue_representatives(qpow(S.q, S.steps[j]), M));
  }

  std::vector<long> n(m, 0);
  auto test = [&]() -> std::optional<FSetCertificate> {
    std::vector<Rat> r = c, tr = tc;
    for (std::size_t j = 0; j < m; ++j) {
      const Rat X = Rat(qpow(S.q, S.steps[j] * n[j]));
      for (std::size_t i = 0; i < D; ++i) r[i] -= X * fa[j].e[i];
      for (std::size_t i = 0; i < N; ++i) tr[i] -= X * fa[j].tors[i];
    }
    for (const auto& t : tr)
      if (sgn(torsion_canon(t, p)) != 0) return std::nullopt;
    std::vector<Int> v(D);
    for (std::size_t i = 0; i < D; ++i) {
      const Rat y = r[i] * Rat(S.ell);
      if (!is_integer(y)) return std::nullopt;
      v[i] = y.get_num();
    }
    if (L.rows() == 0) {
      if (std::any_of(v.begin(), v.end(), [](const Int& z) { return sgn(z) != 0; })) return std::nullopt;
    } else if (!in_lattice(L, v)) {
      return std::nullopt;
    }
    return FSetCertificate{n, r, complete};
  };

  std::optional<FSetCertificate> found;
  std::function<void(std::size_t)> rec0 = [&](std::size_t i) {
    if (found) return;
    if (i == J0.size()) {
      found = test();
      return;
    }
    for (long v : cand0[i]) {
      n[J0[i]] = v;
      rec0(i + 1);
      if (found) return;
    }
  };
  for (const auto& tup : cand1) {
    for (std::size_t k = 0; k < J1.size(); ++k) n[J1[k]] = tup[k];
    rec0(0);
    if (found) break;
  }
  if (found) found->complete = complete;
  return found;
}

// ---------------------------------------------------------------- matrix equations

MatrixFrobEqResult matrix_frob_eq_test(const EndoMatrix& A, const std::vector<EndoMatrix>& Bs,
                                       const EndoMatrix& C, const std::vector<Elem>& v,
                                       const std::vector<long>& deltas, long S_bound, long m_bound) {
  if (!A.square()) throw PreconditionViolated("matrix_frob_eq_test: A not square");
  const auto& alg = A.zero().algebra();
  const std::size_t n = A.rows();
  if (Bs.size() != deltas.size()) throw PreconditionViolated("matrix_frob_eq_test: one step per B");
  for (long d : deltas)
    if (d < 1) throw PreconditionViolated("matrix_frob_eq_test: step sizes must be >= 1");
  if (v.size() != n || C.rows() != n || C.cols() != n) throw PreconditionViolated("matrix_frob_eq_test: shape mismatch");
  for (const auto& B : Bs)
    if (B.rows() != n || B.cols() != n) throw PreconditionViolated("matrix_frob_eq_test: shape mismatch");
  if (!endo_invertible(A)) throw PreconditionViolated("matrix_frob_eq_test: A not invertible");
  if (!is_nfp(A, m_bound)) throw PreconditionViolated("matrix_frob_eq_test: A fails the NFP check");
  const Elem F = Elem::frobenius(alg);
  if (!F.is_rational() || sgn(F.rational()) <= 0 || !is_integer(F.rational()) || F.rational() < 2)
    throw Unsupported("matrix Frobenius equations need F to be a rational integer >= 2");
  const Int q = F.rational().get_num();

  auto flat = [&](const std::vector<Elem>& w) {
    std::vector<Rat> out;
    for (const auto& x : w) {
      const auto& cs = x.zero() && x.coords().empty() ? std::vector<Rat>(alg->dim, Rat(0)) : x.coords();
      out.insert(out.end(), cs.begin(), cs.end());
    }
    return out;
  };
  const std::size_t D = n * alg->dim;
  const std::vector<Rat> Cv = flat(C.apply(v));
  std::vector<std::vector<Rat>> w;
  for (const auto& B : Bs) w.push_back(flat(B.apply(v)));

  MatrixFrobEqResult res;
  std::vector<Elem> An = v;
  for (long k = 0; k <= S_bound; ++k) {
    if (k > 0) An = A.apply(An);
    const std::vector<Rat> An_flat = flat(An);
    std::vector<Rat> u(D);
    for (std::size_t i = 0; i < D; ++i) u[i] = An_flat[i] - Cv[i];
    // Nonzero columns only; zero columns take exponent 0.
    std::vector<std::size_t> act;
    for (std::size_t j = 0; j < w.size(); ++j)
      if (std::any_of(w[j].begin(), w[j].end(), [](const Rat& r) { return sgn(r) != 0; })) act.push_back(j);
    RatMatrix M(D, act.size() + 1, Rat(0));
    for (std::size_t j = 0; j < act.size(); ++j)
      for (std::size_t i = 0; i < D; ++i) M(i, j) = w[act[j]][i];
    for (std::size_t i = 0; i < D; ++i) M(i, act.size()) = u[i];
    const auto E = rref(M);
    if (!E.pivots.empty() && E.pivots.back() == act.size()) continue;
    std::vector<long> sol(w.size(), 0);
    bool ok = true;
    const std::size_t rk = E.pivots.size();
    if (rk == act.size()) {
      for (std::size_t j = 0; j < act.size() && ok; ++j) {
        auto e = power_index(E.reduced(j, act.size()), qpow(q, deltas[act[j]]));
        if (e) sol[act[j]] = *e;
        else ok = false;
      }
    } else if (rk == 1) {
      PowerSum ps;
      ps.q = q;
      ps.target = E.reduced(0, act.size());
      for (std::size_t j = 0; j < act.size(); ++j) {
        ps.c.push_back(E.reduced(0, j));
        ps.delta.push_back(deltas[act[j]]);
      }
      auto s = solve_power_sum(ps, 1);
      res.complete = res.complete && s.complete;
      if (!s.finite.empty()) {
        for (std::size_t j = 0; j < act.size(); ++j) sol[act[j]] = s.finite[0][j];
      } else if (s.family) {
        for (std::size_t j = 0; j < act.size(); ++j) sol[act[j]] = s.family->first[j];
      } else {
        ok = false;
      }
    } else {
      // Rank-deficient with several relations: bounded search over the free exponents.
      res.complete = false;
      std::vector<bool> is_piv(act.size(), false);
      for (auto pc : E.pivots) is_piv[pc] = true;
      std::vector<std::size_t> fr;
      for (std::size_t j = 0; j < act.size(); ++j)
        if (!is_piv[j]) fr.push_back(j);
      ok = false;
      std::vector<long> nf(fr.size(), 0);
      std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (ok) return;
        if (i == fr.size()) {
          std::vector<Rat> X(act.size(), Rat(0));
          std::vector<long> s(w.size(), 0);
          for (std::size_t k2 = 0; k2 < fr.size(); ++k2) {
            X[fr[k2]] = Rat(qpow(q, deltas[act[fr[k2]]] * nf[k2]));
            s[act[fr[k2]]] = nf[k2];
          }
          for (std::size_t r = 0; r < rk; ++r) {
            Rat val = E.reduced(r, act.size());
            for (auto f : fr) val -= E.reduced(r, f) * X[f];
            auto e = power_index(val, qpow(q, deltas[act[E.pivots[r]]]));
            if (!e) return;
            s[act[E.pivots[r]]] = *e;
          }
          sol = s;
          ok = true;
          return;
        }
        for (long e = 0; e * deltas[act[fr[i]]] <= 64; ++e) {
          nf[i] = e;
          rec(i + 1);
        }
      };
      rec(0);
    }
    if (ok) {
      res.solvable.push_back(k);
      res.witnesses.push_back(sol);
    }
  }
  return res;
}

}  // namespace frobdyn
