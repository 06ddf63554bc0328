#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace frobdyn {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(const Int& num, const Int& den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int lcm(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

inline Int ipow(const Int& base, unsigned long exp) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

inline Rat rpow(const Rat& base, long exp) {
  if (exp >= 0) {
    Rat r(ipow(base.get_num(), static_cast<unsigned long>(exp)),
          ipow(base.get_den(), static_cast<unsigned long>(exp)));
    r.canonicalize();
    return r;
  }
  return 1 / rpow(base, -exp);
}

// Floor division / modulus with non-negative remainder for positive modulus.
inline Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int mod(const Int& a, const Int& m) {
  Int r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline Int floor(const Rat& r) { return floor_div(r.get_num(), r.get_den()); }

inline Int round_nearest(const Rat& r) { return floor(r + Rat(1, 2)); }

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

// Hooks used by the generic linear algebra and polynomial templates.
inline Rat inv(const Rat& r) {
  if (r == 0) throw std::domain_error("inverse of zero");
  return 1 / r;
}
inline Rat one_like(const Rat&) { return Rat(1); }
inline Int one_like(const Int&) { return Int(1); }
inline bool is_zero(const Rat& r) { return sgn(r) == 0; }
inline bool is_zero(const Int& r) { return sgn(r) == 0; }

inline bool is_prime(const Int& n) {
  return n >= 2 && mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

// Inverse of a modulo m; throws if not invertible.
Int inv_mod(const Int& a, const Int& m);

// Write n = p^k * rest with p not dividing rest; returns k.
unsigned long strip_prime(Int& n, const Int& p);

// True iff n is a positive power p^k (k >= 1) of the prime p.
bool is_power_of(const Int& n, const Int& p, unsigned long* exponent = nullptr);

// Euler's totient for small n.
std::uint64_t euler_phi(std::uint64_t n);

// Prime factors (distinct) by trial division; intended for desk-scale n.
std::vector<Int> prime_factors(Int n);

Int den_lcm(const std::vector<Rat>& v);

inline std::string to_string(const Rat& r) { return r.get_str(); }
inline std::string to_string(const Int& i) { return i.get_str(); }

Rat parse_rational(const std::string& s);

// Integer logarithm: largest k with base^k <= x (x >= 1, base >= 2).
unsigned long ilog(const Int& x, const Int& base);

double log_abs(const Rat& r);

}  // namespace frobdyn
