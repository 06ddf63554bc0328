#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "frobdyn/lattice.hpp"
#include "frobdyn/matrix.hpp"
#include "frobdyn/numeric.hpp"
#include "frobdyn/upoly.hpp"

namespace frobdyn {

enum class RingKind { Integer, Quadratic, Quaternion };

// Finite-dimensional Q-algebra End^0 with a designated central Frobenius.
//   Integer:    basis {1},          F = q.
//   Quadratic:  basis {1, F},       F^2 = a F - q  (a = trace, q = norm).
//   Quaternion: basis {1, i, j, k}, i^2 = a, j^2 = b, k = ij, F rational.
struct Algebra {
  RingKind kind = RingKind::Integer;
  unsigned dim = 1;
  Rat a, b;  // quadratic: trace, norm; quaternion: (a, b)
  Int q;     // Frobenius size
  std::vector<Rat> frob;
  // Z-basis of the order as coordinate rows (dim x dim, invertible).
  RatMatrix order_basis;
  // table[i][j] = coordinates of e_i * e_j.
  std::vector<std::vector<std::vector<Rat>>> table;

  std::string describe() const;
};

std::shared_ptr<const Algebra> make_integer_ring(const Int& q);
std::shared_ptr<const Algebra> make_quadratic_ring(const Rat& trace, const Int& q);
// frob: coordinates of F_C on {1, i, j, k}; must be central.
std::shared_ptr<const Algebra> make_quaternion_ring(const Rat& a, const Rat& b,
                                                    const std::vector<Rat>& frob, const Int& q,
                                                    std::optional<RatMatrix> order_basis = {});
// (a, b / Q) is a division algebra (some local Hilbert symbol is -1).
bool quaternion_is_division(const Rat& a, const Rat& b);

class Elem {
 public:
  Elem() = default;
  Elem(std::shared_ptr<const Algebra> alg, std::vector<Rat> c);
  static Elem scalar(std::shared_ptr<const Algebra> alg, const Rat& r);
  static Elem frobenius(std::shared_ptr<const Algebra> alg);
  static Elem basis(std::shared_ptr<const Algebra> alg, unsigned i);

  const std::shared_ptr<const Algebra>& algebra() const { return alg_; }
  const std::vector<Rat>& coords() const { return c_; }
  bool zero() const;
  bool is_rational() const;  // lies in Q * 1
  Rat rational() const;      // requires is_rational
  bool is_central() const;

  friend Elem operator+(const Elem& x, const Elem& y);
  friend Elem operator-(const Elem& x, const Elem& y);
  friend Elem operator-(const Elem& x);
  friend Elem operator*(const Elem& x, const Elem& y);
  friend Elem operator*(const Rat& r, const Elem& x);
  friend bool operator==(const Elem& x, const Elem& y) { return x.c_ == y.c_; }
  friend bool operator<(const Elem& x, const Elem& y);

  Elem pow(long e) const;
  // Least positive integer d with d*x in the order.
  Int order_denominator() const;
  // Coordinates over the order basis.
  std::vector<Rat> order_coords() const;
  std::string str() const;

 private:
  std::shared_ptr<const Algebra> alg_;
  std::vector<Rat> c_;
};

Elem inv(const Elem& x);
Elem one_like(const Elem& x);
inline bool is_zero(const Elem& x) { return x.zero(); }

using EndoMatrix = Matrix<Elem>;
using CenterPoly = UPoly<Elem>;

// Left multiplication by x on the Q-basis.
RatMatrix regular_representation(const Elem& x);

EndoMatrix endo_zero(std::shared_ptr<const Algebra> alg, std::size_t r, std::size_t c);
EndoMatrix endo_identity(std::shared_ptr<const Algebra> alg, std::size_t n);
EndoMatrix endo_from_rational(std::shared_ptr<const Algebra> alg, const RatMatrix& m);
// Entrywise rational parts; requires every entry to be rational.
RatMatrix endo_to_rational(const EndoMatrix& m);
// Common order denominator of all entries.
Int endo_denominator(const EndoMatrix& m);
// Block matrix of regular representations (dim*n square over Q).
RatMatrix endo_flatten(const EndoMatrix& m);
bool endo_invertible(const EndoMatrix& m);

// The center Q(F_C): the whole algebra for quadratic rings, Q otherwise.
bool center_is_rational(const Algebra& alg);
CenterPoly center_poly_from_rational(std::shared_ptr<const Algebra> alg, const std::vector<Rat>& c);
// Lifts a center polynomial to a rational one when all coefficients are rational.
std::optional<std::vector<Rat>> center_poly_rational(const CenterPoly& p);
CenterPoly center_x(std::shared_ptr<const Algebra> alg);
CenterPoly center_const(const Elem& c);
EndoMatrix eval_center_poly(const CenterPoly& p, const EndoMatrix& A);
std::string to_string(const CenterPoly& p);

CenterPoly min_poly_over_center(const EndoMatrix& A);

// Complex value of a center element under the fixed embedding Q(F) -> C
// (for quadratic F: the root of x^2 - a x + q with positive imaginary part,
// or the larger real root).
std::complex<double> embed(const Elem& z);
// All complex roots (with multiplicity) of a center polynomial.
std::vector<std::complex<double>> numeric_roots(const CenterPoly& p);

struct FrobeniusPower {
  long m = 0;
  long k = 0;
};

// Minimal (m, k) with lambda^m = F^k for the root `lambda` of `g`, verified
// exactly: gcd(g, x^m - F^k) is nontrivial and has lambda as a root.
std::optional<FrobeniusPower> is_frobenius_power(const CenterPoly& g, std::complex<double> lambda,
                                                 long m_bound = 24);

// No root of the minimal polynomial over the center is multiplicatively
// dependent with F (roots of unity included).
bool is_nfp(const EndoMatrix& A, long m_bound = 24);

// True when x^m - F^k and g share a root (exact).
bool shares_root_with_power(const CenterPoly& g, long m, long k);

// Cyclotomic polynomial Phi_n over Q.
std::vector<Rat> cyclotomic(unsigned long n);

// Squarefree part g / gcd(g, g').
CenterPoly squarefree_part(const CenterPoly& g);

// Multiplicity of the root r in g.
unsigned root_multiplicity(const CenterPoly& g, const Elem& r);

// Hilbert symbol (a, b)_v for v a prime or v = 0 meaning the real place.
int hilbert_symbol(Int a, Int b, const Int& v);

}  // namespace frobdyn
