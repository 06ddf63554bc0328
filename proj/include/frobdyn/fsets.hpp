#pragma once

#include <optional>
#include <string>
#include <vector>

#include "frobdyn/endo_ring.hpp"
#include "frobdyn/exp_point.hpp"

namespace frobdyn {

// gamma + sum_j F^{k_j n_j}(alpha_j) + H, n_j >= 0. H is the lattice
// (1/ell) * rowspan_Z(lattice) in flattened exponent coordinates
// (coordinate i, basis element b at column i * s + b); it carries no torsion.
struct FSet {
  CoprimeBasis basis;
  Int q = 2;
  ExpPoint gamma;
  std::vector<ExpPoint> alphas;
  std::vector<long> steps;
  IntMatrix lattice;
  Int ell = 1;
  bool frobenius_stable = false;  // declared Z[F]-module: q * H in H is checked

  std::size_t rank() const { return gamma.size(); }
  void validate() const;
};

struct FSetCertificate {
  std::vector<long> n;
  std::vector<Rat> h;  // flattened exponents of the H part
  bool complete = true;  // false when the search fell back to the norm bound
};

std::optional<FSetCertificate> fset_member(const ExpPoint& x, const FSet& S);

// gamma + sum F^{k_j n_j} alpha_j + h, the point a certificate describes.
ExpPoint fset_point(const FSet& S, const FSetCertificate& c);

// sum_j c_j X_j = T with X_j = q^{d_j n_j}, n_j >= 0.
struct PowerSum {
  std::vector<Rat> c;
  std::vector<long> delta;
  Int q = 2;
  Rat target = 0;
};

// All solutions: an explicit finite list plus, for the two-term zero-target
// case, the family base + s * step (s >= 0). `complete` is false when
// three or more terms of mixed sign forced a heuristic bound.
struct PowerSumSolutions {
  std::vector<std::vector<long>> finite;
  std::optional<std::pair<std::vector<long>, std::vector<long>>> family;
  bool complete = true;
  bool empty() const { return finite.empty() && !family; }
};

PowerSumSolutions solve_power_sum(const PowerSum& E, std::size_t limit = 0);

// P(n) = c_0 + sum_{j>=1} c_j q^{delta_j n_j}, coefficients rational.
struct FrobEq {
  std::vector<Rat> P;  // P[i] is the coefficient of n^i
  std::vector<Rat> c;  // c_0 .. c_t
  std::vector<long> delta;  // delta_1 .. delta_t
  Int q = 2;

  std::size_t terms() const { return delta.size(); }
  Rat eval(long n) const;
  bool constant() const;
  void validate() const;
};

std::optional<std::vector<long>> frob_eq_solve(const FrobEq& E, long n);

struct FrobEqCount {
  long N = 0;
  std::vector<unsigned char> solvable;  // per n in 0..N
  std::vector<long> cumulative;         // count of solvable n' <= n
  long count = 0;
  bool degenerate = false;  // P constant
  // Growth against (log N)^t measured at N' = 2^i.
  std::vector<std::pair<long, double>> density;  // (N', count/N')
  double growth_exponent = 0;                    // slope of log count vs log log N'
  double C = 0;                                  // max count/(log N')^t over N' <= 2^7
  bool bound_holds = true;                       // count <= C (log N')^t for all measured N'
};

FrobEqCount frob_eq_count(const FrobEq& E, long N);
FrobEqCount frob_eq_count_serial(const FrobEq& E, long N);

// n <= S_bound with A^n v = C v + sum_i F^{n_i delta_i} B_i v for some n_i >= 0.
// Requires F rational (integer or quaternion rings).
struct MatrixFrobEqResult {
  std::vector<long> solvable;
  std::vector<std::vector<long>> witnesses;  // n_i per solvable n
  bool complete = true;
};

MatrixFrobEqResult matrix_frob_eq_test(const EndoMatrix& A, const std::vector<EndoMatrix>& Bs,
                                       const EndoMatrix& C, const std::vector<Elem>& v,
                                       const std::vector<long>& deltas, long S_bound,
                                       long m_bound = 24);

// Exact n >= 0 with base^n == x.
std::optional<long> power_index(const Rat& x, const Int& base);

}  // namespace frobdyn
