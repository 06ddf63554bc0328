#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "frobdyn/errors.hpp"
#include "frobdyn/lattice.hpp"
#include "frobdyn/ratfunc.hpp"

namespace frobdyn {

// Torsion lives in Q/Z[1/p] (the prime-to-p roots of unity). Canonical
// representative: b/D in [0,1) with p not dividing D.
Rat torsion_canon(const Rat& t, const Int& p);

// Pairwise coprime monic non-constant polynomials f_1..f_s.
struct CoprimeBasis {
  std::shared_ptr<const FunctionField> K;
  std::vector<MPoly> elems;

  std::size_t size() const { return elems.size(); }
  Int torsion_modulus() const { return K->F->order() - 1; }
  Int p() const { return Int(static_cast<unsigned long>(K->p())); }
};

CoprimeBasis coprime_basis(std::shared_ptr<const FunctionField> K,
                           const std::vector<RationalFunction>& elems);

// zeta * prod f_i^{e_i}, zeta = exp(2 pi i tors) read as a root of unity.
struct ExpCoord {
  std::vector<Rat> e;
  Rat tors;

  static ExpCoord identity(std::size_t s) { return {std::vector<Rat>(s, Rat(0)), Rat(0)}; }
  bool is_identity() const;
  friend bool operator==(const ExpCoord& a, const ExpCoord& b) {
    return a.e == b.e && a.tors == b.tors;
  }
};

// Group law (multiplication of functions) written additively.
ExpCoord add(const ExpCoord& a, const ExpCoord& b, const Int& p);
ExpCoord neg(const ExpCoord& a, const Int& p);
// a^r for rational r (torsion lifted, so a choice among r-th roots).
ExpCoord scale(const ExpCoord& a, const Rat& r, const Int& p);

class NotInSpan : public DomainError {
 public:
  NotInSpan(const std::string& msg, std::string residual)
      : DomainError(msg), residual_(std::move(residual)) {}
  const std::string& residual() const { return residual_; }

 private:
  std::string residual_;
};

ExpCoord to_exponents(const RationalFunction& x, const CoprimeBasis& B);

// Inverse of to_exponents for integral exponents and torsion of order
// dividing q - 1.
RationalFunction reconstruct(const ExpCoord& x, const CoprimeBasis& B);

// Re-expresses coordinates over a refinement `to` of the basis `from`.
ExpCoord rebase(const ExpCoord& x, const CoprimeBasis& from, const CoprimeBasis& to);

using ExpPoint = std::vector<ExpCoord>;

ExpCoord frobenius_apply(const ExpCoord& x, const Int& q, const Int& p);
ExpPoint frobenius_apply(const ExpPoint& x, const Int& q, const Int& p);
ExpPoint add(const ExpPoint& a, const ExpPoint& b, const Int& p);

// x -> A x (+ beta) with A rational: (A x)_i = sum_j A_ij x_j.
ExpPoint apply_matrix(const RatMatrix& A, const ExpPoint& x, const Int& p);

// Lattice of integer v with prod x_i^{v_i} = 1 (torsion included), LLL-reduced rows.
IntMatrix relation_lattice(const std::vector<ExpCoord>& xs, const Int& p);

// Integer v with sum_i v_i rows[k][i] = 0 for every k (all rows the same length n).
IntMatrix joint_relation_lattice(const std::vector<std::vector<ExpCoord>>& rows, std::size_t n, const Int& p);

std::optional<std::vector<Int>> mult_dependence(const std::vector<ExpCoord>& xs, const Int& p);
std::optional<std::vector<Int>> mult_dependence(std::shared_ptr<const FunctionField> K,
                                                const std::vector<RationalFunction>& xs);

std::string to_string(const ExpCoord& x);

}  // namespace frobdyn
