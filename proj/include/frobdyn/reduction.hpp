#pragma once

#include <optional>
#include <string>
#include <vector>

#include "frobdyn/exp_point.hpp"
#include "frobdyn/skew_linalg.hpp"

namespace frobdyn {

// One simple factor C_i^{k_i} of a split reduced group. Torus factors (G_m,
// integer ring) carry point-level data; other factors are matrix-level only.
struct FactorSpec {
  std::string label;
  std::shared_ptr<const Algebra> ring;
  std::size_t k = 1;
  bool torus = false;
  unsigned dim = 1;  // dim C_i
};

// Psi = tau_beta o psi with psi = (+) blocks[i], each k_i x k_i over End(C_i).
// Entries are exact; m is the declared denominator (m * blocks integral).
struct SelfMap {
  std::vector<FactorSpec> factors;
  std::vector<EndoMatrix> blocks;
  Int m = 1;
  std::shared_ptr<const FunctionField> K;  // needed when a torus factor exists
  std::optional<CoprimeBasis> basis;
  ExpPoint beta;  // torus translation, length k of the torus factor

  std::optional<std::size_t> torus_index() const;
  Int p() const;
  void validate() const;
};

// Torus-only self-map x -> beta * x^A on G_m^N. The coprime basis covers
// beta and `extra` (e.g. starting points); m is the denominator of A.
SelfMap make_torus_map(std::shared_ptr<const FunctionField> K, const RatMatrix& A,
                       const std::vector<RationalFunction>& beta,
                       const std::vector<RationalFunction>& extra = {});

ExpPoint to_point(const std::vector<RationalFunction>& xs, const CoprimeBasis& B);

// Psi(x) on torus points: beta + A x.
ExpPoint step(const SelfMap& S, const ExpPoint& x);
RatMatrix torus_matrix(const SelfMap& S);

// sum_{j<n} A^j beta (translation of the n-th iterate).
ExpPoint iterate_translation(const RatMatrix& A, const ExpPoint& beta, long n, const Int& p);

struct IterateResult {
  long n = 1;
  EndoMatrix power;
  std::vector<unsigned long> unity_orders;  // n with gcd(g, Phi_n) != 1
  std::vector<long> frobenius_m;            // minimal m per Frobenius-dependent root
};

IterateResult iterate_normalize(const EndoMatrix& A, long m_bound = 24);

struct UnitySplit {
  CenterPoly g, h1, h2, Q1, Q2;  // Q1 h1 + Q2 h2 = l0
  unsigned s = 0;                 // h1 = (x - 1)^s
  Int l0 = 1;
  EndoMatrix proj_unipotent;      // h2(A)
  EndoMatrix proj_rest;           // h1(A)
};

UnitySplit unity_split(const EndoMatrix& A);

// z with (psi2 - I) z = l0 * beta2 (torus coordinates, rational exponents).
ExpPoint kill_translation(const EndoMatrix& psi2, const ExpPoint& beta2, const Int& l0, const Int& p);

struct FrobeniusSplit {
  EndoMatrix P, Pinv;              // Pinv A2 P = J(B1) (+) B2
  std::vector<JordanBlock> B1;     // eigenvalues F^n, sorted by n then size desc
  std::vector<long> exponents;     // n per block of B1
  EndoMatrix B2;                   // NFP part
  Int l2 = 1;
};

FrobeniusSplit frobenius_split(const EndoMatrix& A2, long m_bound = 24, bool saturate = false);

// Unipotent Jordan matrix Q (blocks given) and beta: returns gamma and
// beta' = beta + (Q - I) gamma supported on block-last coordinates.
struct TranslationNormal {
  ExpPoint gamma, beta;
};
TranslationNormal normalize_translation(const std::vector<JordanBlock>& unipotent, const ExpPoint& beta,
                                        const Int& p);

struct FactorNormalForm {
  std::size_t factor = 0;
  EndoMatrix A_star;  // A^{n*}
  UnitySplit unity;
  std::vector<JordanBlock> unipotent;
  FrobeniusSplit frob;
  EndoMatrix D;        // J_u (+) J(B1) (+) B2
  EndoMatrix H, Hinv;  // H A* Hinv = D
  std::size_t dim_u = 0, dim_f = 0, dim_n = 0;
  Int m1 = 1;  // exponent of sat(h2(A*) Z^N) / h2(A*) Z^N (torus only)
  Int l2 = 1;
  // Torus factor: conjugation c(x) = H x + w gives Phi(y) = beta_nf + D y.
  bool point_level = false;
  ExpPoint beta_star, w, beta_nf, z, gamma;
};

struct NormalForm {
  long n_star = 1;
  unsigned d = 1;
  std::vector<FactorNormalForm> factors;
  std::optional<std::size_t> torus;  // index into factors

  const FactorNormalForm* torus_part() const { return torus ? &factors[*torus] : nullptr; }
};

NormalForm build_normal_form(const SelfMap& S, unsigned d, long m_bound = 24);

// Phi(y) = beta_nf + D y and c(x) = H x + w for the torus factor.
ExpPoint nf_step(const FactorNormalForm& f, const ExpPoint& y, const Int& p);
ExpPoint nf_conjugate(const FactorNormalForm& f, const ExpPoint& x, const Int& p);

struct VerifyReport {
  bool matrix_ok = true;
  bool points_ok = true;
  bool point_level = false;
  std::size_t checks = 0;
  std::vector<std::string> failures;
  bool ok() const { return matrix_ok && points_ok; }
};

VerifyReport verify_almost_commutative(const NormalForm& NF, const SelfMap& S,
                                       const std::vector<ExpPoint>& samples, long iterations);

}  // namespace frobdyn
