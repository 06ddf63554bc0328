#include "frobdyn/trichotomy.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <random>
#include <set>

#include "frobdyn/errors.hpp"
#include "frobdyn/linalg.hpp"

namespace frobdyn {

namespace {

ExpPoint neg(const ExpPoint& x, const Int& p) {
  ExpPoint out;
  for (const auto& c : x) out.push_back(frobdyn::neg(c, p));
  return out;
}

ExpPoint sub(const ExpPoint& a, const ExpPoint& b, const Int& p) { return add(a, neg(b, p), p); }

ExpCoord dot(const std::vector<Int>& v, const ExpPoint& x, const Int& p) {
  ExpCoord acc = ExpCoord::identity(x.empty() ? 0 : x[0].e.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) acc = add(acc, scale(x[i], Rat(v[i]), p), p);
  return acc;
}

bool exponents_zero(const ExpCoord& c) {
  for (const auto& e : c.e)
    if (e != 0) return false;
  return true;
}

// Exponents vanish and the root of unity is killed by `ell`.
bool trivial_up_to(const ExpCoord& c, const Int& ell, const Int& p) {
  return exponents_zero(c) && torsion_canon(c.tors * Rat(ell), p) == 0;
}

ExpPoint iterate(const SelfMap& S, ExpPoint x, long n) {
  for (long k = 0; k < n; ++k) x = step(S, x);
  return x;
}

ExpCoord pad(ExpCoord c) {
  c.e.push_back(0);
  return c;
}

ExpPoint pad(ExpPoint x) {
  for (auto& c : x) c = pad(c);
  return x;
}

// Samples carry one generator beyond the translation's basis, so defects in
// the exponents show up even when that basis is empty.
SelfMap with_free_generator(const SelfMap& S) {
  SelfMap out = S;
  out.beta = pad(S.beta);
  return out;
}

std::vector<ExpPoint> sample_points(const SelfMap& S, std::size_t count, std::uint64_t seed) {
  const std::size_t k = S.beta.size(), s = S.basis->size() + 1;
  const Int q1 = S.basis->torsion_modulus();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> ex(-3, 3);
  std::vector<ExpPoint> out;
  for (std::size_t i = 0; i < count; ++i) {
    ExpPoint x(k, ExpCoord::identity(s));
    for (auto& c : x) {
      for (auto& e : c.e) e = ex(rng);
      c.tors = torsion_canon(make_rat(Int(static_cast<unsigned long>(rng() % 64)), q1), S.p());
    }
    out.push_back(std::move(x));
  }
  return out;
}

std::size_t block_offset(const FactorNormalForm& f, std::size_t b) {
  std::size_t o = f.dim_u;
  for (std::size_t i = 0; i < b; ++i) o += f.frob.B1[i].size;
  return o;
}

std::vector<std::size_t> unipotent_last(const FactorNormalForm& f) {
  std::vector<std::size_t> out;
  std::size_t o = 0;
  for (const auto& b : f.unipotent) {
    o += b.size;
    out.push_back(o - 1);
  }
  return out;
}

Int correspondence_factor(const SelfMap& S, long n) {
  return S.m == 1 ? Int(1) : ipow(S.m, static_cast<unsigned long>(n));
}

void make_primitive(std::vector<Int>& v) {
  Int g = 0;
  for (const auto& x : v) g = gcd(g, x);
  if (g > 1)
    for (auto& x : v) x /= g;
  for (const auto& x : v) {
    if (x == 0) continue;
    if (x < 0)
      for (auto& y : v) y = -y;
    break;
  }
}

// Monic irreducibles in the variable t_var: t + c first, then higher degree.
RationalFunction pool_value(const FunctionField& K, unsigned var, std::size_t k) {
  const std::uint64_t p = K.p();
  const RationalFunction t = RationalFunction::variable(K, var);
  if (k < p) return t + RationalFunction::from_int(K, static_cast<long>(k));
  std::size_t j = k - p;
  for (unsigned deg = 2;; ++deg) {
    std::uint64_t total = 1;
    for (unsigned i = 0; i < deg; ++i) total *= p;
    for (std::uint64_t code = 0; code < total; ++code) {
      fp::Poly f(deg + 1, 0);
      std::uint64_t c = code;
      for (unsigned i = 0; i < deg; ++i, c /= p) f[i] = c % p;
      f[deg] = 1;
      if (!fp::is_irreducible(f, p)) continue;
      if (j--) continue;
      RationalFunction acc = t.pow(deg);
      for (unsigned i = 0; i < deg; ++i)
        if (f[i]) acc = acc + RationalFunction::from_int(K, static_cast<long>(f[i])) * t.pow(i);
      return acc;
    }
  }
}

}  // namespace

std::vector<FrobeniusClass> frobenius_classes(const NormalForm& NF, const SelfMap& S) {
  std::map<long, FrobeniusClass> by;
  for (const auto& f : NF.factors)
    for (std::size_t b = 0; b < f.frob.B1.size(); ++b) {
      auto& c = by[f.frob.exponents[b]];
      c.exponent = f.frob.exponents[b];
      c.blocks.emplace_back(f.factor, b);
      c.dim += S.factors[f.factor].dim;
    }
  std::vector<FrobeniusClass> out;
  for (auto& [n, c] : by) out.push_back(std::move(c));
  return out;
}

// ---- condition B ----

std::optional<WitnessB> check_condition_B(const NormalForm& NF, const SelfMap& S) {
  const Int p = S.p();
  if (const FactorNormalForm* t = NF.torus_part(); t && !t->unipotent.empty()) {
    const auto last = unipotent_last(*t);
    std::vector<ExpCoord> xs;
    for (auto i : last) xs.push_back(t->beta_nf[i]);
    if (auto sig = mult_dependence(xs, p)) {
      WitnessB W;
      W.factor = t->factor;
      W.point_level = true;
      W.n_iter = NF.n_star;
      const std::size_t N = t->D.rows();
      W.sigma.assign(N, Int(0));
      for (std::size_t k = 0; k < last.size(); ++k) {
        W.sigma[last[k]] = (*sig)[k];
        if ((*sig)[k] != 0) W.coords.push_back(last[k]);
      }
      const RatMatrix H = endo_to_rational(t->H);
      std::vector<Rat> vr(N, Rat(0));
      for (std::size_t i = 0; i < N; ++i)
        if (W.sigma[i] != 0)
          for (std::size_t j = 0; j < N; ++j) vr[j] += Rat(W.sigma[i]) * H(i, j);
      const Int den = den_lcm(vr);
      for (const auto& x : vr) W.v.push_back(Rat(x * Rat(den)).get_num());
      make_primitive(W.v);
      const ExpCoord c = dot(W.v, t->beta_star, p);
      if (!exponents_zero(c)) throw InvariantViolation("invariant character does not kill the translation");
      if (c.tors != 0)
        for (auto& x : W.v) x *= c.tors.get_den();
      const auto& alg = t->H.zero().algebra();
      for (const auto& x : W.v) W.v_ring.push_back(Elem::scalar(alg, Rat(x)));
      W.verified = verify_witness_B(W, NF, S);
      return W;
    }
  }
  // Abstract factors carry no translation: any block-last row is invariant.
  for (const auto& f : NF.factors) {
    if (S.factors[f.factor].torus || f.unipotent.empty()) continue;
    WitnessB W;
    W.factor = f.factor;
    W.n_iter = NF.n_star;
    const std::size_t N = f.D.rows(), i0 = unipotent_last(f)[0];
    W.sigma.assign(N, Int(0));
    W.sigma[i0] = 1;
    W.coords = {i0};
    for (std::size_t j = 0; j < N; ++j) W.v_ring.push_back(f.H(i0, j));
    W.verified = verify_witness_B(W, NF, S);
    return W;
  }
  return std::nullopt;
}

bool verify_witness_B(const WitnessB& W, const NormalForm& NF, const SelfMap& S) {
  const FactorNormalForm* f = nullptr;
  for (const auto& g : NF.factors)
    if (g.factor == W.factor) f = &g;
  if (!f) return false;
  const auto& alg = f->A_star.zero().algebra();
  const std::size_t N = f->A_star.rows();
  if (W.v_ring.size() != N) return false;
  if (std::all_of(W.v_ring.begin(), W.v_ring.end(), [](const Elem& x) { return x.zero(); })) return false;
  EndoMatrix R = endo_zero(alg, 1, N);
  for (std::size_t j = 0; j < N; ++j) R(0, j) = W.v_ring[j];
  if (!(R * f->A_star == R)) return false;
  if (!W.point_level) return true;
  if (W.v.size() != N) return false;
  for (std::size_t j = 0; j < N; ++j)
    if (!(Elem::scalar(alg, Rat(W.v[j])) == W.v_ring[j])) return false;
  const Int p = S.p();
  if (!dot(W.v, f->beta_star, p).is_identity()) return false;
  const Int ell = correspondence_factor(S, W.n_iter);
  const SelfMap S1 = with_free_generator(S);
  for (const auto& x : sample_points(S, 20, 0xB0B))
    if (!trivial_up_to(witness_B_defect(W, S1, x), ell, p)) return false;
  return true;
}

ExpCoord witness_B_defect(const WitnessB& W, const SelfMap& S, const ExpPoint& x) {
  if (!W.point_level) throw Unsupported("witness is matrix-level only");
  const Int p = S.p();
  return add(dot(W.v, iterate(S, x, W.n_iter), p), frobdyn::neg(dot(W.v, x, p), p), p);
}

// ---- condition C ----

std::optional<WitnessC> check_condition_C(const NormalForm& NF, const SelfMap& S, unsigned d) {
  const auto classes = frobenius_classes(NF, S);
  const FrobeniusClass* best = nullptr;
  for (const auto& c : classes)
    if (c.dim > d && (!best || c.dim > best->dim)) best = &c;
  if (!best) return std::nullopt;
  WitnessC W;
  W.exponent = best->exponent;
  W.n0 = NF.n_star;
  W.r = best->exponent;
  W.dimZ = best->dim;
  const Int p = S.p();
  for (const auto& f : NF.factors) {
    QuotientPart part;
    part.factor = f.factor;
    for (const auto& [fi, b] : best->blocks)
      if (fi == f.factor) part.nf_rows.push_back(block_offset(f, b) + f.frob.B1[b].size - 1);
    if (part.nf_rows.empty()) continue;
    part.T = f.H.rows_of(part.nf_rows);
    if (S.factors[f.factor].torus) {
      part.point_level = true;
      Int den = 1;
      part.T_int = scale_to_integer(endo_to_rational(part.T), &den);
      for (auto r : part.nf_rows) part.shift.push_back(scale(f.w[r], Rat(den), p));
      W.ell0 = lcm(lcm(W.ell0, f.l2), den);
      W.ell0 = lcm(W.ell0, correspondence_factor(S, W.n0));
    }
    W.parts.push_back(std::move(part));
  }
  W.verified = verify_witness_C(W, NF, S);
  return W;
}

bool verify_witness_C(const WitnessC& W, const NormalForm& NF, const SelfMap& S) {
  if (W.dimZ <= NF.d) return false;
  unsigned dim = 0;
  for (const auto& part : W.parts) {
    const FactorNormalForm* f = nullptr;
    for (const auto& g : NF.factors)
      if (g.factor == part.factor) f = &g;
    if (!f) return false;
    dim += static_cast<unsigned>(part.T.rows()) * S.factors[part.factor].dim;
    const auto& alg = f->A_star.zero().algebra();
    if (part.T.rows() == 0 || part.T.is_zero()) return false;
    const Elem Fr = Elem::frobenius(alg).pow(W.r);
    if (!(part.T * f->A_star == scale_left(Fr, part.T))) return false;
  }
  if (dim != W.dimZ) return false;
  const bool torus = std::any_of(W.parts.begin(), W.parts.end(), [](const QuotientPart& q) { return q.point_level; });
  if (!torus) return true;
  const Int p = S.p();
  const SelfMap S1 = with_free_generator(S);
  WitnessC W1 = W;
  for (auto& part : W1.parts) part.shift = pad(part.shift);
  for (const auto& x : sample_points(S, 20, 0xC0C))
    for (const auto& c : witness_C_defect(W1, S1, x))
      if (!trivial_up_to(c, W.ell0, p)) return false;
  return true;
}

ExpPoint witness_C_defect(const WitnessC& W, const SelfMap& S, const ExpPoint& x) {
  const QuotientPart* part = nullptr;
  for (const auto& q : W.parts)
    if (q.point_level) part = &q;
  if (!part) throw Unsupported("witness has no torus part");
  const Int p = S.p();
  const RatMatrix T = to_rat(part->T_int);
  auto tau = [&](const ExpPoint& y) { return add(apply_matrix(T, y, p), part->shift, p); };
  const Int q = S.factors[part->factor].ring->q;
  const ExpPoint lhs = tau(iterate(S, x, W.n0));
  ExpPoint rhs;
  for (const auto& c : tau(x)) rhs.push_back(scale(c, Rat(ipow(q, static_cast<unsigned long>(W.r))), p));
  return sub(lhs, rhs, p);
}

// ---- dense point ----

DensePointPlan construct_dense_point(const NormalForm& NF, const SelfMap& S, unsigned d,
                                     const std::vector<RationalFunction>& avoid,
                                     const DensePointOptions& opt) {
  const FactorNormalForm* t = NF.torus_part();
  if (!t) throw Unsupported("dense point construction needs a torus factor");
  if (d == 0) throw DomainError("d must be positive");
  if (opt.require_no_B && check_condition_B(NF, S))
    throw PreconditionViolated("condition B holds; no orbit is dense");
  const auto classes = frobenius_classes(NF, S);
  DensePointPlan plan;
  for (const auto& c : classes)
    if (c.dim > d) plan.oversized = true;
  if (plan.oversized && !opt.allow_oversized)
    throw PreconditionViolated("a Frobenius class has dimension above d (condition C)");
  const FunctionField& K = *S.K;
  const Int p = S.p();

  bool cond1 = !plan.oversized;
  for (const auto& c : classes) {
    unsigned off = 0;
    std::set<unsigned> vars;
    for (const auto& [fi, b] : c.blocks) {
      const auto& f = NF.factors[fi];
      PlannedBlock pb;
      pb.factor = fi;
      pb.block = b;
      pb.exponent = c.exponent;
      pb.size = f.frob.B1[b].size;
      pb.S = off;
      pb.var = off % d;
      if (off + S.factors[fi].dim > d) cond1 = false;
      if (S.factors[fi].torus) {
        if (pb.var >= K.d) throw DomainError("the function field has fewer than d variables");
        if (!vars.insert(pb.var).second) cond1 = false;
        const std::size_t o = block_offset(f, b);
        for (std::size_t i = 0; i < pb.size; ++i) pb.coords.push_back(o + i);
      }
      off += S.factors[fi].dim;
      plan.blocks.push_back(std::move(pb));
    }
  }
  plan.cond1 = cond1;

  plan.avoid = avoid;
  if (plan.avoid.empty())
    for (std::size_t b = 0; b < S.basis->size(); ++b)
      if (std::any_of(S.beta.begin(), S.beta.end(), [&](const ExpCoord& c) { return c.e[b] != 0; }))
        plan.avoid.push_back(RationalFunction::from_poly(S.basis->elems[b]));
  std::vector<RationalFunction> known = plan.avoid;
  for (const auto& e : S.basis->elems) known.push_back(RationalFunction::from_poly(e));

  const std::size_t N = t->D.rows();
  const auto last = unipotent_last(*t);
  for (int retry = 0; retry < opt.max_retries; ++retry) {
    std::map<unsigned, std::size_t> cursor;
    std::vector<RationalFunction> used;
    auto take = [&](unsigned var) {
      auto it = cursor.try_emplace(var, static_cast<std::size_t>(retry)).first;
      for (;;) {
        RationalFunction v = pool_value(K, var, it->second++);
        if (std::find(used.begin(), used.end(), v) == used.end()) {
          used.push_back(v);
          return v;
        }
      }
    };
    std::vector<RationalFunction> y(N, RationalFunction::from_int(K, 1));
    for (auto& pb : plan.blocks) {
      if (pb.coords.empty()) continue;
      pb.value = take(pb.var);
      for (auto i : pb.coords) y[i] = *pb.value;
    }
    std::size_t o = 0;
    for (std::size_t b = 0; b < t->unipotent.size(); ++b) {
      for (std::size_t i = 0; i + 1 < t->unipotent[b].size; ++i) y[o + i] = take(0);
      if (t->beta_nf[last[b]].is_identity()) y[last[b]] = take(0);
      o += t->unipotent[b].size;
    }
    for (std::size_t i = t->dim_u + t->dim_f; i < N; ++i) y[i] = take(0);

    std::vector<RationalFunction> gens = known;
    gens.insert(gens.end(), used.begin(), used.end());
    const CoprimeBasis B = coprime_basis(S.K, gens);
    std::vector<ExpCoord> xs;
    for (const auto& v : used) xs.push_back(to_exponents(v, B));
    plan.cond2 = !mult_dependence(xs, p);
    std::vector<ExpCoord> all = xs;
    for (const auto& g : plan.avoid) all.push_back(to_exponents(g, B));
    const IntMatrix L = relation_lattice(all, p);
    plan.cond3 = true;
    for (std::size_t r = 0; r < L.rows(); ++r)
      for (std::size_t j = 0; j < xs.size(); ++j)
        if (L(r, j) != 0) plan.cond3 = false;
    if (!plan.cond2 || !plan.cond3) continue;

    plan.retries = retry;
    plan.y_values = y;
    plan.fresh = used;
    plan.system = S;
    plan.system.basis = B;
    plan.system.beta.clear();
    for (const auto& c : S.beta) plan.system.beta.push_back(rebase(c, *S.basis, B));
    ExpPoint w;
    for (const auto& c : t->w) w.push_back(rebase(c, *S.basis, B));
    plan.y = to_point(y, B);
    plan.alpha = apply_matrix(endo_to_rational(t->Hinv), sub(plan.y, w, p), p);
    return plan;
  }
  throw DomainError("no independent dense point after " + std::to_string(opt.max_retries) + " retries");
}

// ---- orbits ----

Orbit simulate_orbit(const SelfMap& S, const ExpPoint& x0, long n, TorsionRule rule) {
  if (!S.torus_index()) throw Unsupported("orbit simulation needs a torus factor");
  if (S.factors.size() != 1) throw Unsupported("orbit simulation covers pure torus systems");
  if (mpz_divisible_p(S.m.get_mpz_t(), S.p().get_mpz_t())) throw Unsupported("p divides m: inseparable correspondence");
  if (n < 0) throw DomainError("negative step count");
  if (x0.size() != S.beta.size()) throw DomainError("start point has the wrong dimension");
  for (const auto& c : x0)
    if (c.e.size() != S.basis->size()) throw DomainError("start point not over the system basis");
  Orbit o;
  o.basis = *S.basis;
  o.rule = rule;
  o.points.push_back(x0);
  o.moduli.push_back(Int(1));
  for (long k = 0; k < n; ++k) {
    o.points.push_back(step(S, o.points.back()));
    o.moduli.push_back(S.m);
  }
  return o;
}

// ---- density evidence ----

namespace {

std::vector<Monomial> monomials_upto(std::size_t n, unsigned D) {
  std::vector<Monomial> out;
  Monomial m(n, 0);
  auto rec = [&](auto&& self, std::size_t i, unsigned left) -> void {
    if (i == n) {
      out.push_back(m);
      return;
    }
    for (unsigned k = 0; k <= left; ++k) {
      m[i] = k;
      self(self, i + 1, left - k);
    }
    m[i] = 0;
  };
  rec(rec, 0, D);
  return out;
}

struct SpecContext {
  const CoprimeBasis* basis = nullptr;
  std::unique_ptr<FiniteField> big;
  std::unique_ptr<FieldEmbedding> emb;
  std::vector<Monomial> mons;
  // exps[k][i][b]: exponent of f_b in coordinate i of point k, scaled and reduced.
  std::vector<std::vector<std::vector<Int>>> exps;
};

SpecializationTrial run_trial(const SpecContext& ctx, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const FiniteField& F = *ctx.big;
  const auto& K = *ctx.basis->K;
  const std::size_t s = ctx.basis->size();
  std::vector<FFElem> g;
  for (int attempt = 0;; ++attempt) {
    if (attempt == 100) throw InvariantViolation("specialization keeps hitting zeros of the basis");
    std::vector<FFElem> tv;
    for (unsigned i = 0; i < K.d; ++i) tv.push_back(F.random_nonzero(rng));
    g.clear();
    bool ok = true;
    for (std::size_t b = 0; b < s && ok; ++b) {
      g.push_back(ctx.basis->elems[b].evaluate(tv, *ctx.emb));
      ok = !g.back().zero();
    }
    if (ok) break;
  }
  const std::size_t nm = ctx.mons.size();
  std::vector<std::vector<FFElem>> echelon;
  std::vector<std::size_t> pivots;
  std::set<std::vector<std::vector<std::uint64_t>>> seen;
  SpecializationTrial out;
  for (const auto& pt : ctx.exps) {
    if (echelon.size() == nm) break;
    std::vector<FFElem> val;
    std::vector<std::vector<std::uint64_t>> key;
    for (const auto& coord : pt) {
      FFElem v = F.one();
      for (std::size_t b = 0; b < s; ++b)
        if (coord[b] != 0) v = v * g[b].pow(coord[b]);
      key.push_back(v.coords());
      val.push_back(std::move(v));
    }
    if (!seen.insert(key).second) continue;
    std::vector<FFElem> row;
    for (const auto& m : ctx.mons) {
      FFElem x = F.one();
      for (std::size_t i = 0; i < m.size(); ++i)
        for (std::uint32_t k = 0; k < m[i]; ++k) x = x * val[i];
      row.push_back(std::move(x));
    }
    for (std::size_t r = 0; r < echelon.size(); ++r) {
      const FFElem c = row[pivots[r]];
      if (c.zero()) continue;
      for (std::size_t j = 0; j < nm; ++j) row[j] = row[j] - c * echelon[r][j];
    }
    std::size_t piv = 0;
    while (piv < nm && row[piv].zero()) ++piv;
    if (piv == nm) continue;
    const FFElem s_inv = inv(row[piv]);
    for (auto& x : row) x = s_inv * x;
    echelon.push_back(std::move(row));
    pivots.push_back(piv);
  }
  out.distinct_points = seen.size();
  out.nullity = nm - echelon.size();
  return out;
}

EvidenceReport evidence_impl(const Orbit& orbit, const EvidenceOptions& opt, bool parallel) {
  std::vector<const ExpPoint*> pts;
  if (opt.subset) {
    for (long i : *opt.subset) {
      if (i < 0 || static_cast<std::size_t>(i) >= orbit.points.size())
        throw DomainError("subset index outside the orbit");
      pts.push_back(&orbit.points[static_cast<std::size_t>(i)]);
    }
  } else {
    for (const auto& x : orbit.points) pts.push_back(&x);
  }
  if (pts.empty()) throw DomainError("empty orbit");
  if (opt.degree_bound == 0) throw DomainError("degree bound must be positive");
  const Int p = orbit.basis.p();
  const std::size_t N = pts[0]->size(), s = orbit.basis.size();
  EvidenceReport rep;
  rep.points_used = pts.size();

  // Exact test: x_k^v = x_0^v for every k.
  std::vector<std::vector<ExpCoord>> rows;
  for (std::size_t k = 1; k < pts.size(); ++k) rows.push_back(sub(*pts[k], *pts[0], p));
  const IntMatrix L = joint_relation_lattice(rows, N, p);
  std::optional<std::size_t> best;
  for (std::size_t r = 0; r < L.rows(); ++r) {
    bool small = true;
    for (std::size_t j = 0; j < N; ++j)
      if (abs(L(r, j)) > opt.index_bound) small = false;
    if (small && (!best || norm_sq(L.row(r)) < norm_sq(L.row(*best)))) best = r;
  }
  if (best) {
    std::vector<Int> v(L.row(*best).begin(), L.row(*best).end());
    make_primitive(v);
    rep.relation_value = dot(v, *pts[0], p);
    rep.relation = std::move(v);
  }

  // Specialization test.
  SpecContext ctx;
  ctx.basis = &orbit.basis;
  ctx.mons = monomials_upto(N, opt.degree_bound);
  rep.monomials = ctx.mons.size();
  const FiniteField& F0 = *orbit.basis.K->F;
  const Int bound = Int(static_cast<unsigned long>(10 * rep.monomials));
  unsigned e = 1;
  while (ipow(F0.order(), e) <= bound) ++e;
  e = std::max<unsigned>(e, static_cast<unsigned>(rep.monomials) + 1);
  rep.extension_degree = e;
  ctx.big = std::make_unique<FiniteField>(F0.p(), F0.degree() * e);
  ctx.emb = std::make_unique<FieldEmbedding>(F0, *ctx.big, opt.seed);
  Int scale_den = 1;
  for (const auto* x : pts)
    for (const auto& c : *x) {
      for (const auto& r : c.e) scale_den = lcm(scale_den, r.get_den());
      scale_den = lcm(scale_den, c.tors.get_den());
    }
  const Int G = ctx.big->order() - 1;
  for (const auto* x : pts) {
    std::vector<std::vector<Int>> pt;
    for (const auto& c : *x) {
      std::vector<Int> ex;
      for (std::size_t b = 0; b < s; ++b) ex.push_back(mod(Rat(c.e[b] * Rat(scale_den)).get_num(), G));
      pt.push_back(std::move(ex));
    }
    ctx.exps.push_back(std::move(pt));
  }
  const int T = std::max(0, opt.spec_trials);
  rep.trials.resize(static_cast<std::size_t>(T));
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 0; i < T; ++i) {
    try {
      rep.trials[static_cast<std::size_t>(i)] = run_trial(ctx, opt.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(i));
    } catch (...) {
#pragma omp critical
      err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);

  const bool all_vanish = T > 0 && std::all_of(rep.trials.begin(), rep.trials.end(),
                                               [](const SpecializationTrial& t) { return t.nullity > 0; });
  rep.verdict = rep.relation || all_vanish ? EvidenceVerdict::RelationFound : EvidenceVerdict::DenseEvidence;
  return rep;
}

}  // namespace

EvidenceReport density_evidence(const Orbit& orbit, const EvidenceOptions& opt) {
  return evidence_impl(orbit, opt, true);
}

EvidenceReport density_evidence_serial(const Orbit& orbit, const EvidenceOptions& opt) {
  return evidence_impl(orbit, opt, false);
}

std::string to_string(EvidenceVerdict v) {
  return v == EvidenceVerdict::DenseEvidence ? "DENSE-EVIDENCE" : "RELATION-FOUND";
}

// ---- orchestration ----

Verdict analyze(const SelfMap& S, unsigned d, const AnalyzeOptions& opt) {
  if (d == 0) throw DomainError("d must be at least 1");
  Verdict V;
  V.nf = build_normal_form(S, d, opt.m_bound);
  V.classes = frobenius_classes(V.nf, S);
  V.B = check_condition_B(V.nf, S);
  V.C = check_condition_C(V.nf, S, d);
  if (V.B && !V.B->verified) throw InvariantViolation("condition B witness failed verification");
  if (V.C && !V.C->verified) throw InvariantViolation("condition C witness failed verification");
  if (!V.nf.torus_part()) {
    V.matrix_level_only = true;
    V.notes.push_back("no torus factor: verdict at the matrix level only");
    return V;
  }
  if (S.factors.size() > 1) {
    V.matrix_level_only = true;
    V.notes.push_back("abstract factors present: point construction covers the torus factor only");
  }
  if (V.B) {
    V.notes.push_back("condition B holds: no dense orbit, point construction skipped");
    return V;
  }
  DensePointOptions dp;
  dp.allow_oversized = V.C.has_value();
  V.plan = construct_dense_point(V.nf, S, d, opt.avoid, dp);
  if (V.plan->oversized) V.notes.push_back("Frobenius class above d: variables reused, candidate point only");
  if (S.factors.size() > 1) return V;
  V.orbit = simulate_orbit(V.plan->system, V.plan->alpha, opt.steps);
  V.evidence = density_evidence(*V.orbit, opt.evidence);
  return V;
}

}  // namespace frobdyn
