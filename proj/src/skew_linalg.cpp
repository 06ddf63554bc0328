#include "frobdyn/skew_linalg.hpp"

#include "frobdyn/errors.hpp"
#include "frobdyn/linalg.hpp"

namespace frobdyn {

EndoMatrix jordan_block(const Elem& alpha, std::size_t s) {
  EndoMatrix J = endo_zero(alpha.algebra(), s, s);
  for (std::size_t i = 0; i < s; ++i) {
    J(i, i) = alpha;
    if (i + 1 < s) J(i, i + 1) = one_like(alpha);
  }
  return J;
}

EndoMatrix direct_sum(const std::vector<EndoMatrix>& parts, std::shared_ptr<const Algebra> alg) {
  std::size_t n = 0;
  for (const auto& p : parts) n += p.rows();
  EndoMatrix out = endo_zero(std::move(alg), n, n);
  std::size_t off = 0;
  for (const auto& p : parts) {
    out.set_block(off, off, p);
    off += p.rows();
  }
  return out;
}

EndoMatrix jordan_matrix(std::shared_ptr<const Algebra> alg, const std::vector<JordanBlock>& blocks) {
  std::vector<EndoMatrix> parts;
  for (const auto& b : blocks) parts.push_back(jordan_block(b.alpha, b.size));
  return direct_sum(parts, std::move(alg));
}

EndoMatrix column_basis(const EndoMatrix& M) {
  const auto piv = pivot_columns(M);
  return M.columns(piv);
}

namespace {

std::size_t col_rank(const std::vector<std::vector<Elem>>& cols, std::size_t n, const Elem& zero) {
  if (cols.empty()) return 0;
  EndoMatrix M(n, cols.size(), zero);
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) M(i, j) = cols[j][i];
  return rank(M);
}

}  // namespace

JordanSpec jordan_form_central(const EndoMatrix& A) {
  if (!A.square()) throw PreconditionViolated("jordan_form_central: matrix not square");
  const auto& alg = A.zero().algebra();
  const std::size_t n = A.rows();
  const Elem zero = A.zero();
  JordanSpec out;
  if (n == 0) {
    out.P = out.Pinv = endo_zero(alg, 0, 0);
    return out;
  }
  const CenterPoly g = min_poly_over_center(A);
  const long r = g.degree();
  const Elem alpha = zero - Rat(1, r) * g.coeff(static_cast<std::size_t>(r - 1));
  if (!(upow(CenterPoly::linear_root(alpha, zero), static_cast<unsigned long>(r)) == g))
    throw PreconditionViolated("minimal polynomial is not a power of a linear factor: " + to_string(g));
  if (!alpha.is_central()) throw PreconditionViolated("eigenvalue is not central");

  const EndoMatrix N = A - scale_left(alpha, endo_identity(alg, n));
  // Kernels of N^j for j = 0..r.
  std::vector<EndoMatrix> K;
  EndoMatrix Nj = endo_identity(alg, n);
  for (long j = 0; j <= r; ++j) {
    K.push_back(right_kernel(Nj));
    Nj = Nj * N;
  }
  std::vector<std::vector<std::vector<Elem>>> chains;  // each chain bottom-up
  std::vector<std::vector<Elem>> carried;              // level-j vectors from longer chains
  for (long j = r; j >= 1; --j) {
    std::vector<std::vector<Elem>> span;
    for (std::size_t c = 0; c < K[static_cast<std::size_t>(j - 1)].cols(); ++c)
      span.push_back(K[static_cast<std::size_t>(j - 1)].column(c));
    for (const auto& v : carried) span.push_back(v);
    std::size_t rk = col_rank(span, n, zero);
    const EndoMatrix& Kj = K[static_cast<std::size_t>(j)];
    std::vector<std::vector<Elem>> tops;
    for (std::size_t c = 0; c < Kj.cols(); ++c) {
      auto v = Kj.column(c);
      span.push_back(v);
      const std::size_t rk2 = col_rank(span, n, zero);
      if (rk2 > rk) {
        rk = rk2;
        tops.push_back(v);
      } else {
        span.pop_back();
      }
    }
    for (const auto& v : tops) {
      std::vector<std::vector<Elem>> chain(static_cast<std::size_t>(j));
      chain[static_cast<std::size_t>(j - 1)] = v;
      for (long k = j - 1; k >= 1; --k)
        chain[static_cast<std::size_t>(k - 1)] = N.apply(chain[static_cast<std::size_t>(k)]);
      chains.push_back(std::move(chain));
      carried.push_back(v);
    }
    for (auto& v : carried) v = N.apply(v);
  }
  out.P = endo_zero(alg, n, n);
  std::size_t col = 0;
  for (const auto& chain : chains) {
    out.blocks.push_back({alpha, chain.size()});
    for (const auto& v : chain) {
      for (std::size_t i = 0; i < n; ++i) out.P(i, col) = v[i];
      ++col;
    }
  }
  if (col != n) throw InvariantViolation("Jordan chains do not span the space");
  auto Pinv = inverse(out.P);
  if (!Pinv) throw InvariantViolation("Jordan basis is singular");
  out.Pinv = *Pinv;
  if (!(out.Pinv * A * out.P == jordan_matrix(alg, out.blocks)))
    throw InvariantViolation("P^-1 A P is not the Jordan matrix");
  return out;
}

RatMatrix saturated_kernel(const RatMatrix& M) {
  return to_rat(integer_kernel(scale_to_integer(M))).transpose();
}

CoprimeSplit coprime_split(const EndoMatrix& A, const CenterPoly& p1, const CenterPoly& p2,
                           bool saturate) {
  if (!A.square()) throw PreconditionViolated("coprime_split: matrix not square");
  const auto& alg = A.zero().algebra();
  const std::size_t n = A.rows();
  const CenterPoly g = min_poly_over_center(A);
  if (p1.is_zero() || p2.is_zero() || !((p1 * p2).monic() == g))
    throw PreconditionViolated("p1 * p2 is not the minimal polynomial");
  const auto bez = xgcd(p1, p2);
  if (bez.g.degree() != 0) throw PreconditionViolated("p1 and p2 are not coprime");
  // u p1 + v p2 = 1: e1 = (v p2)(A) projects onto ker p1(A).
  CoprimeSplit out;
  out.e1 = eval_center_poly(bez.v * p2, A);
  const EndoMatrix e2 = endo_identity(alg, n) - out.e1;
  EndoMatrix B1, B2;
  if (saturate) {
    if (alg->kind != RingKind::Integer) throw DomainError("saturated split needs the integer ring");
    // image e1 = ker e2 and image e2 = ker e1.
    B1 = endo_from_rational(alg, saturated_kernel(endo_to_rational(e2)));
    B2 = endo_from_rational(alg, saturated_kernel(endo_to_rational(out.e1)));
    if (B1.rows() != n) B1 = endo_zero(alg, n, 0);
    if (B2.rows() != n) B2 = endo_zero(alg, n, 0);
  } else {
    B1 = column_basis(out.e1);
    B2 = column_basis(e2);
  }
  out.P = hstack(B1, B2);
  if (out.P.cols() != n) throw InvariantViolation("projector images do not span");
  auto Pinv = inverse(out.P);
  if (!Pinv) throw InvariantViolation("split basis is singular");
  out.Pinv = *Pinv;
  const EndoMatrix D = out.Pinv * A * out.P;
  const std::size_t k = B1.cols();
  out.A1 = D.block(0, 0, k, k);
  out.A2 = D.block(k, k, n - k, n - k);
  if (!D.block(0, k, k, n - k).is_zero() || !D.block(k, 0, n - k, k).is_zero())
    throw InvariantViolation("split is not block diagonal");
  if (!(min_poly_over_center(out.A1) == p1.monic()) || !(min_poly_over_center(out.A2) == p2.monic()))
    throw InvariantViolation("split summands have wrong minimal polynomials");
  return out;
}

}  // namespace frobdyn
