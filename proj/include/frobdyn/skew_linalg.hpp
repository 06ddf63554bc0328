#pragma once

#include <vector>

#include "frobdyn/endo_ring.hpp"

namespace frobdyn {

// Column-vector convention: matrices act on the left of column vectors,
// scalars act on the right. J_{alpha,s} has alpha on the diagonal and 1 on
// the superdiagonal.
struct JordanBlock {
  Elem alpha;
  std::size_t size = 0;
};

struct JordanSpec {
  std::vector<JordanBlock> blocks;  // descending size within an eigenvalue
  EndoMatrix P, Pinv;               // Pinv * A * P = jordan_matrix(blocks)
};

EndoMatrix jordan_block(const Elem& alpha, std::size_t s);
EndoMatrix jordan_matrix(std::shared_ptr<const Algebra> alg, const std::vector<JordanBlock>& blocks);
EndoMatrix direct_sum(const std::vector<EndoMatrix>& parts, std::shared_ptr<const Algebra> alg);

// Requires min poly (x - alpha)^r with alpha central.
JordanSpec jordan_form_central(const EndoMatrix& A);

struct CoprimeSplit {
  EndoMatrix P, Pinv;  // Pinv * A * P = A1 (+) A2
  EndoMatrix A1, A2;
  EndoMatrix e1;  // projector onto ker p1(A) along ker p2(A)
};

// p1 * p2 = min poly of A (up to a unit), gcd(p1, p2) = 1. With `saturate`
// (integer ring only) the columns of P are Z-bases of the saturated
// sublattices ker p_i(A) cap Z^n, so integral A gives integral A1, A2.
CoprimeSplit coprime_split(const EndoMatrix& A, const CenterPoly& p1, const CenterPoly& p2,
                           bool saturate = false);

// Z-basis (as columns) of {v in Z^n : M v = 0} for a rational matrix M.
RatMatrix saturated_kernel(const RatMatrix& M);

// Columns of M forming a basis of its (right) column space.
EndoMatrix column_basis(const EndoMatrix& M);

}  // namespace frobdyn
