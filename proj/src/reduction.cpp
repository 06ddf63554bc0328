#include "frobdyn/reduction.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "frobdyn/errors.hpp"
#include "frobdyn/linalg.hpp"

namespace frobdyn {

namespace {

RatMatrix rat_identity(std::size_t n) { return RatMatrix::identity(n, Rat(0), Rat(1)); }

// Bound on [Q(zeta_n) : center] for roots of unity of g.
unsigned long unity_bound(const CenterPoly& g) {
  const auto& alg = *g.zero().algebra();
  return static_cast<unsigned long>(g.degree()) * (center_is_rational(alg) ? 1UL : 2UL);
}

std::vector<unsigned long> unity_orders(const CenterPoly& g) {
  std::vector<unsigned long> out;
  const unsigned long B = unity_bound(g);
  const auto& alg = g.zero().algebra();
  // phi(n) >= sqrt(n / 2), so n <= 2 B^2 covers phi(n) <= B.
  for (unsigned long n = 1; n <= 2 * B * B + 2; ++n) {
    if (euler_phi(n) > B) continue;
    if (gcd(g, center_poly_from_rational(alg, cyclotomic(n))).degree() >= 1) out.push_back(n);
  }
  return out;
}

bool near_any(std::complex<double> z, const std::vector<std::complex<double>>& pts, double tol) {
  for (const auto& w : pts)
    if (std::abs(z - w) < tol) return true;
  return false;
}

double min_separation(const std::vector<std::complex<double>>& r) {
  double sep = 1.0;
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = i + 1; j < r.size(); ++j) sep = std::min(sep, std::abs(r[i] - r[j]));
  return sep;
}

EndoMatrix block_diag(const std::shared_ptr<const Algebra>& alg, const std::vector<EndoMatrix>& parts) {
  std::size_t r = 0, c = 0;
  for (const auto& p : parts) {
    r += p.rows();
    c += p.cols();
  }
  EndoMatrix out = endo_zero(alg, r, c);
  r = c = 0;
  for (const auto& p : parts) {
    out.set_block(r, c, p);
    r += p.rows();
    c += p.cols();
  }
  return out;
}

ExpPoint slice(const ExpPoint& x, std::size_t from, std::size_t len) {
  return ExpPoint(x.begin() + static_cast<long>(from), x.begin() + static_cast<long>(from + len));
}

ExpPoint concat(ExpPoint a, const ExpPoint& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

ExpPoint neg(const ExpPoint& x, const Int& p) {
  ExpPoint out;
  for (const auto& c : x) out.push_back(frobdyn::neg(c, p));
  return out;
}

ExpPoint identity_point(std::size_t n, std::size_t s) { return ExpPoint(n, ExpCoord::identity(s)); }

std::size_t basis_size(const ExpPoint& x) { return x.empty() ? 0 : x[0].e.size(); }

}  // namespace

std::optional<std::size_t> SelfMap::torus_index() const {
  for (std::size_t i = 0; i < factors.size(); ++i)
    if (factors[i].torus) return i;
  return std::nullopt;
}

Int SelfMap::p() const { return K ? Int(static_cast<unsigned long>(K->p())) : Int(0); }

void SelfMap::validate() const {
  if (factors.size() != blocks.size()) throw DomainError("one matrix block per factor is required");
  if (m < 1) throw DomainError("denominator m must be positive");
  std::size_t tori = 0;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto& f = factors[i];
    const auto& B = blocks[i];
    if (!f.ring) throw DomainError("factor without endomorphism ring: " + f.label);
    if (B.rows() != f.k || B.cols() != f.k) throw DomainError("block shape does not match rank of " + f.label);
    if (f.k == 0) throw DomainError("factor multiplicity must be positive");
    for (const auto& e : B.data())
      if (e.algebra()->table != f.ring->table) throw DomainError("block entry over the wrong ring");
    if (!mpz_divisible_p(m.get_mpz_t(), endo_denominator(B).get_mpz_t()))
      throw DomainError("block " + f.label + " is not in (1/m) End");
    if (!endo_invertible(B)) throw DomainError("self-map is not dominant on " + f.label);
    if (f.torus) {
      ++tori;
      if (f.ring->kind != RingKind::Integer) throw DomainError("torus factor needs the integer ring");
      if (!K || !basis) throw DomainError("torus factor needs a function field and coprime basis");
      if (beta.size() != f.k) throw DomainError("translation length does not match the torus rank");
      for (const auto& c : beta)
        if (c.e.size() != basis->size()) throw DomainError("translation not over the coprime basis");
    }
  }
  if (tori > 1) throw DomainError("at most one torus factor (G_m^N is a single simple power)");
  if (tori == 0 && !beta.empty()) throw DomainError("translation given without a torus factor");
}

SelfMap make_torus_map(std::shared_ptr<const FunctionField> K, const RatMatrix& A,
                       const std::vector<RationalFunction>& beta,
                       const std::vector<RationalFunction>& extra) {
  if (!A.square() || A.rows() != beta.size()) throw DomainError("matrix and translation sizes differ");
  SelfMap S;
  S.factors.push_back({"Gm", make_integer_ring(K->F->order()), A.rows(), true, 1});
  S.blocks.push_back(endo_from_rational(S.factors[0].ring, A));
  S.m = 1;
  for (const auto& x : A.data()) S.m = lcm(S.m, Int(x.get_den()));
  std::vector<RationalFunction> gens = beta;
  gens.insert(gens.end(), extra.begin(), extra.end());
  S.basis = coprime_basis(K, gens);
  S.K = std::move(K);
  S.beta = to_point(beta, *S.basis);
  S.validate();
  return S;
}

ExpPoint to_point(const std::vector<RationalFunction>& xs, const CoprimeBasis& B) {
  ExpPoint out;
  for (const auto& x : xs) out.push_back(to_exponents(x, B));
  return out;
}

RatMatrix torus_matrix(const SelfMap& S) {
  auto t = S.torus_index();
  if (!t) throw Unsupported("no torus factor");
  return endo_to_rational(S.blocks[*t]);
}

ExpPoint step(const SelfMap& S, const ExpPoint& x) {
  return add(S.beta, apply_matrix(torus_matrix(S), x, S.p()), S.p());
}

ExpPoint iterate_translation(const RatMatrix& A, const ExpPoint& beta, long n, const Int& p) {
  ExpPoint acc = identity_point(beta.size(), basis_size(beta));
  ExpPoint term = beta;
  for (long j = 0; j < n; ++j) {
    acc = add(acc, term, p);
    term = apply_matrix(A, term, p);
  }
  return acc;
}

IterateResult iterate_normalize(const EndoMatrix& A, long m_bound) {
  if (!endo_invertible(A)) throw DomainError("iterate_normalize: matrix is not dominant");
  IterateResult out;
  const auto& alg = A.zero().algebra();
  if (A.rows() == 0) {
    out.power = A;
    return out;
  }
  const CenterPoly g = min_poly_over_center(A);
  out.unity_orders = unity_orders(g);
  CenterPoly u = center_const(Elem::scalar(alg, Rat(1)));
  for (auto n : out.unity_orders) u = u * gcd(g, center_poly_from_rational(alg, cyclotomic(n)));
  const auto unity_roots = numeric_roots(squarefree_part(u));
  const auto roots = numeric_roots(squarefree_part(g));
  const double sep = min_separation(roots);
  long n = 1;
  for (auto k : out.unity_orders) n = std::lcm(n, static_cast<long>(k));
  for (const auto& z : roots) {
    if (near_any(z, unity_roots, sep / 3)) continue;
    if (auto r = is_frobenius_power(g, z, m_bound)) {
      out.frobenius_m.push_back(r->m);
      n = std::lcm(n, r->m);
    }
  }
  out.n = n;
  out.power = matrix_power(A, static_cast<unsigned long>(n), Elem::scalar(alg, Rat(1)));
  const CenterPoly gs = min_poly_over_center(out.power);
  for (auto k : unity_orders(gs))
    if (k != 1) throw InvariantViolation("iterate still has a nontrivial root of unity");
  return out;
}

UnitySplit unity_split(const EndoMatrix& A) {
  const auto& alg = A.zero().algebra();
  const Elem zero = Elem::scalar(alg, Rat(0)), one = Elem::scalar(alg, Rat(1));
  UnitySplit out;
  out.g = min_poly_over_center(A);
  out.s = root_multiplicity(out.g, one);
  out.h1 = upow(CenterPoly::linear_root(one, zero), out.s);
  auto [h2, rem] = divmod(out.g, out.h1);
  if (!rem.is_zero()) throw InvariantViolation("(x - 1)^s does not divide the minimal polynomial");
  out.h2 = h2;
  const auto bez = xgcd(out.h1, out.h2);
  Int l = 1;
  for (const auto* P : {&bez.u, &bez.v})
    for (const auto& c : P->coeffs()) l = lcm(l, c.order_denominator());
  out.l0 = l;
  out.Q1 = scale(Rat(l) * one, bez.u);
  out.Q2 = scale(Rat(l) * one, bez.v);
  if (!(out.Q1 * out.h1 + out.Q2 * out.h2 == center_const(Rat(l) * one)))
    throw InvariantViolation("Bezout identity fails");
  out.proj_unipotent = eval_center_poly(out.h2, A);
  out.proj_rest = eval_center_poly(out.h1, A);
  return out;
}

ExpPoint kill_translation(const EndoMatrix& psi2, const ExpPoint& beta2, const Int& l0, const Int& p) {
  if (psi2.zero().algebra()->kind != RingKind::Integer)
    throw Unsupported("translation killing needs torus coordinates");
  if (psi2.rows() != beta2.size()) throw DomainError("kill_translation: dimension mismatch");
  const RatMatrix M = endo_to_rational(psi2) - rat_identity(psi2.rows());
  auto Mi = inverse(M);
  if (!Mi) throw PreconditionViolated("psi2 - id is not invertible (eigenvalue 1)");
  ExpPoint b;
  for (const auto& c : beta2) b.push_back(scale(c, Rat(l0), p));
  return apply_matrix(*Mi, b, p);
}

FrobeniusSplit frobenius_split(const EndoMatrix& A2, long m_bound, bool saturate) {
  const auto& alg = A2.zero().algebra();
  const std::size_t n = A2.rows();
  const Elem zero = Elem::scalar(alg, Rat(0)), one = Elem::scalar(alg, Rat(1));
  FrobeniusSplit out;
  if (n == 0) {
    out.P = out.Pinv = out.B2 = endo_zero(alg, 0, 0);
    return out;
  }
  const CenterPoly g = min_poly_over_center(A2);
  if (!unity_orders(g).empty()) throw PreconditionViolated("frobenius_split: root of unity eigenvalue");
  std::map<long, unsigned> mult;
  const Elem F = Elem::frobenius(alg);
  for (const auto& z : numeric_roots(squarefree_part(g))) {
    auto r = is_frobenius_power(g, z, m_bound);
    if (!r) continue;
    if (r->m != 1) throw PreconditionViolated("frobenius_split: matrix is not iterate-normalized");
    if (r->k < 1) throw PreconditionViolated("frobenius_split: non-positive Frobenius exponent");
    mult[r->k] = root_multiplicity(g, F.pow(r->k));
  }
  CenterPoly p1 = center_const(one);
  for (auto [k, m] : mult) p1 = p1 * upow(CenterPoly::linear_root(F.pow(k), zero), m);
  auto [p2, rem] = divmod(g, p1);
  if (!rem.is_zero()) throw InvariantViolation("Frobenius factor does not divide g");
  const CoprimeSplit sp = coprime_split(A2, p1, p2, saturate);

  // Split the Frobenius part eigenvalue by eigenvalue, then Jordan each piece.
  const std::size_t n1 = sp.A1.rows();
  EndoMatrix Pacc = endo_identity(alg, n1);
  EndoMatrix M = sp.A1;
  CenterPoly rest = p1;
  std::size_t offset = 0;
  for (auto [k, m] : mult) {
    const CenterPoly pk = upow(CenterPoly::linear_root(F.pow(k), zero), m);
    rest = rest / pk;
    const CoprimeSplit s = coprime_split(M, pk, rest, saturate);
    const std::size_t nk = s.A1.rows(), nr = s.A2.rows();
    const JordanSpec J = jordan_form_central(s.A1);
    EndoMatrix step = block_diag(alg, {endo_identity(alg, offset), s.P * block_diag(alg, {J.P, endo_identity(alg, nr)})});
    Pacc = Pacc * step;
    for (const auto& b : J.blocks) {
      out.B1.push_back(b);
      out.exponents.push_back(k);
    }
    offset += nk;
    M = s.A2;
  }
  out.B2 = sp.A2;
  out.P = sp.P * block_diag(alg, {Pacc, endo_identity(alg, sp.A2.rows())});
  auto Pinv = inverse(out.P);
  if (!Pinv) throw InvariantViolation("Frobenius split basis is singular");
  out.Pinv = *Pinv;
  if (!(out.Pinv * A2 * out.P == block_diag(alg, {jordan_matrix(alg, out.B1), out.B2})))
    throw InvariantViolation("Frobenius split does not conjugate to J (+) B2");
  if (out.B2.rows() > 0 && !is_nfp(out.B2, m_bound)) throw InvariantViolation("B2 fails the NFP test");
  out.l2 = lcm(lcm(endo_denominator(out.P), endo_denominator(out.Pinv)), endo_denominator(out.B2));
  return out;
}

TranslationNormal normalize_translation(const std::vector<JordanBlock>& unipotent, const ExpPoint& beta,
                                        const Int& p) {
  std::size_t n = 0;
  for (const auto& b : unipotent) {
    if (!(b.alpha == one_like(b.alpha))) throw PreconditionViolated("normalize_translation: block not unipotent");
    n += b.size;
  }
  if (n != beta.size()) throw DomainError("normalize_translation: dimension mismatch");
  const std::size_t s = basis_size(beta);
  TranslationNormal out;
  out.gamma = identity_point(n, s);
  std::size_t o = 0;
  for (const auto& b : unipotent) {
    for (std::size_t i = 0; i + 1 < b.size; ++i) out.gamma[o + i + 1] = frobdyn::neg(beta[o + i], p);
    o += b.size;
  }
  RatMatrix QmI(n, n, Rat(0));
  o = 0;
  for (const auto& b : unipotent) {
    for (std::size_t i = 0; i + 1 < b.size; ++i) QmI(o + i, o + i + 1) = 1;
    o += b.size;
  }
  out.beta = add(beta, apply_matrix(QmI, out.gamma, p), p);
  o = 0;
  for (const auto& b : unipotent) {
    for (std::size_t i = 0; i + 1 < b.size; ++i)
      if (!out.beta[o + i].is_identity()) throw InvariantViolation("translation not cleared off block-last coordinates");
    o += b.size;
  }
  return out;
}

NormalForm build_normal_form(const SelfMap& S, unsigned d, long m_bound) {
  S.validate();
  NormalForm NF;
  NF.d = d;
  long n_star = 1;
  for (const auto& B : S.blocks) n_star = std::lcm(n_star, iterate_normalize(B, m_bound).n);
  NF.n_star = n_star;
  const Int p = S.p();
  for (std::size_t i = 0; i < S.factors.size(); ++i) {
    const auto& alg = S.factors[i].ring;
    FactorNormalForm f;
    f.factor = i;
    f.A_star = matrix_power(S.blocks[i], static_cast<unsigned long>(n_star), Elem::scalar(alg, Rat(1)));
    f.unity = unity_split(f.A_star);
    const bool sat = alg->kind == RingKind::Integer && endo_denominator(f.A_star) == 1;
    const CoprimeSplit sp = coprime_split(f.A_star, f.unity.h1, f.unity.h2, sat);
    const JordanSpec Ju = jordan_form_central(sp.A1);
    f.unipotent = Ju.blocks;
    f.frob = frobenius_split(sp.A2, m_bound, sat);
    f.H = block_diag(alg, {Ju.Pinv, f.frob.Pinv}) * sp.Pinv;
    f.Hinv = sp.P * block_diag(alg, {Ju.P, f.frob.P});
    f.D = block_diag(alg, {jordan_matrix(alg, f.unipotent), jordan_matrix(alg, f.frob.B1), f.frob.B2});
    if (!(f.H * f.Hinv == endo_identity(alg, f.A_star.rows())) || !(f.H * f.A_star * f.Hinv == f.D))
      throw InvariantViolation("normal form conjugation fails");
    f.dim_u = sp.A1.rows();
    f.dim_n = f.frob.B2.rows();
    f.dim_f = sp.A2.rows() - f.dim_n;
    f.l2 = lcm(lcm(endo_denominator(f.H), endo_denominator(f.Hinv)), endo_denominator(f.D));
    if (alg->kind == RingKind::Integer) {
      IntMatrix gens = scale_to_integer(endo_to_rational(f.unity.proj_unipotent)).transpose();
      f.m1 = saturation_exponent(gens);
    }
    if (S.factors[i].torus) {
      f.point_level = true;
      const RatMatrix A = endo_to_rational(S.blocks[i]);
      const RatMatrix H = endo_to_rational(f.H), D = endo_to_rational(f.D);
      const std::size_t s = S.basis->size(), u = f.dim_u, r = f.A_star.rows() - u;
      f.beta_star = iterate_translation(A, S.beta, n_star, p);
      const ExpPoint Hb = apply_matrix(H, f.beta_star, p);
      const TranslationNormal tn = normalize_translation(f.unipotent, slice(Hb, 0, u), p);
      f.gamma = tn.gamma;
      f.z = r ? kill_translation(f.D.block(u, u, r, r), slice(Hb, u, r), Int(1), p) : ExpPoint{};
      f.w = concat(neg(f.gamma, p), f.z);
      f.beta_nf = concat(tn.beta, identity_point(r, s));
      const ExpPoint check = add(Hb, neg(apply_matrix(D - rat_identity(D.rows()), f.w, p), p), p);
      if (!(check == f.beta_nf)) throw InvariantViolation("normal form translation mismatch");
      NF.torus = i;
    }
    NF.factors.push_back(std::move(f));
  }
  return NF;
}

ExpPoint nf_step(const FactorNormalForm& f, const ExpPoint& y, const Int& p) {
  return add(f.beta_nf, apply_matrix(endo_to_rational(f.D), y, p), p);
}

ExpPoint nf_conjugate(const FactorNormalForm& f, const ExpPoint& x, const Int& p) {
  return add(apply_matrix(endo_to_rational(f.H), x, p), f.w, p);
}

VerifyReport verify_almost_commutative(const NormalForm& NF, const SelfMap& S,
                                       const std::vector<ExpPoint>& samples, long iterations) {
  VerifyReport rep;
  for (const auto& f : NF.factors) {
    ++rep.checks;
    const auto& alg = f.A_star.zero().algebra();
    const EndoMatrix l2 = scale_left(Elem::scalar(alg, Rat(f.l2)), endo_identity(alg, f.D.rows()));
    if (!(l2 * f.H * f.A_star == l2 * f.D * f.H)) {
      rep.matrix_ok = false;
      rep.failures.push_back("factor " + S.factors[f.factor].label + ": l2 h A != l2 Phi h");
    }
    if (!mpz_divisible_p(f.l2.get_mpz_t(), endo_denominator(f.H).get_mpz_t()) ||
        !mpz_divisible_p(f.l2.get_mpz_t(), endo_denominator(f.D).get_mpz_t())) {
      rep.matrix_ok = false;
      rep.failures.push_back("factor " + S.factors[f.factor].label + ": [l2] does not clear denominators");
    }
  }
  const FactorNormalForm* t = NF.torus_part();
  if (!t || S.m != 1) return rep;
  rep.point_level = true;
  const Int p = S.p();
  for (std::size_t si = 0; si < samples.size(); ++si) {
    ExpPoint x = samples[si];
    ExpPoint y = nf_conjugate(*t, x, p);
    for (long n = 1; n <= iterations; ++n) {
      for (long k = 0; k < NF.n_star; ++k) x = step(S, x);
      y = nf_step(*t, y, p);
      ++rep.checks;
      const ExpPoint diff = add(nf_conjugate(*t, x, p), neg(y, p), p);
      bool ok = true;
      for (const auto& c : diff) {
        for (const auto& e : c.e)
          if (e != 0) ok = false;
        if (torsion_canon(c.tors * Rat(t->l2), p) != 0) ok = false;
      }
      if (!ok) {
        rep.points_ok = false;
        std::ostringstream os;
        os << "sample " << si << ", n = " << n << ": difference";
        for (const auto& c : diff) os << ' ' << to_string(c);
        rep.failures.push_back(os.str());
      }
    }
  }
  return rep;
}

}  // namespace frobdyn
