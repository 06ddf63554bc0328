#pragma once

#include <optional>
#include <span>
#include <vector>

#include "frobdyn/matrix.hpp"
#include "frobdyn/numeric.hpp"

namespace frobdyn {

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;

// Row-style Hermite normal form of the row lattice; zero rows dropped.
// Pivots are positive, entries above a pivot reduced into [0, pivot).
IntMatrix hnf_rows(IntMatrix m);

// Rows form a basis of {v in Z^n : M v = 0}, n = M.cols().
IntMatrix integer_kernel(const IntMatrix& m);

// LLL reduction (delta = 3/4) of linearly independent rows.
IntMatrix lll(IntMatrix basis);

// Nonzero invariant factors d1 | d2 | ... of M.
std::vector<Int> smith_invariants(IntMatrix m);

// Exponent of the finite group sat(L)/L where L is spanned by the rows
// (the largest invariant factor, 1 for the zero lattice).
Int saturation_exponent(const IntMatrix& gens);

// Coefficients c with c * H = v for H in HNF, or nullopt.
std::optional<std::vector<Int>> hnf_solve(const IntMatrix& hnf, std::vector<Int> v);

inline bool in_lattice(const IntMatrix& hnf, const std::vector<Int>& v) {
  return hnf_solve(hnf, v).has_value();
}

// Multiplies by the lcm of all denominators.
IntMatrix scale_to_integer(const RatMatrix& m, Int* scale_out = nullptr);

RatMatrix to_rat(const IntMatrix& m);

Int norm_sq(std::span<const Int> v);

}  // namespace frobdyn
