#include "frobdyn/numeric.hpp"

#include <cmath>
#include <stdexcept>

#include "frobdyn/errors.hpp"

namespace frobdyn {

Int inv_mod(const Int& a, const Int& m) {
  Int r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw DomainError("inv_mod: " + a.get_str() + " not invertible mod " +
                      m.get_str());
  }
  return r;
}

unsigned long strip_prime(Int& n, const Int& p) {
  if (n == 0) return 0;
  unsigned long k = 0;
  while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
    n /= p;
    ++k;
  }
  return k;
}

bool is_power_of(const Int& n, const Int& p, unsigned long* exponent) {
  if (n < p) return false;
  Int m = n;
  unsigned long k = strip_prime(m, p);
  if (m != 1) return false;
  if (exponent) *exponent = k;
  return true;
}

std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t result = n;
  for (std::uint64_t f = 2; f * f <= n; ++f) {
    if (n % f == 0) {
      while (n % f == 0) n /= f;
      result -= result / f;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

std::vector<Int> prime_factors(Int n) {
  std::vector<Int> out;
  if (n < 0) n = -n;
  for (Int f = 2; f * f <= n; ++f) {
    if (mpz_divisible_p(n.get_mpz_t(), f.get_mpz_t())) {
      out.push_back(f);
      while (mpz_divisible_p(n.get_mpz_t(), f.get_mpz_t())) n /= f;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

Int den_lcm(const std::vector<Rat>& v) {
  Int l = 1;
  for (const auto& r : v) l = lcm(l, r.get_den());
  return l;
}

Rat parse_rational(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0) throw DomainError("not a rational number: '" + s + "'");
  if (r.get_den() == 0) throw DomainError("zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

unsigned long ilog(const Int& x, const Int& base) {
  unsigned long k = 0;
  Int acc = base;
  while (acc <= x) {
    acc *= base;
    ++k;
  }
  return k;
}

double log_abs(const Rat& r) {
  long e_num = 0, e_den = 0;
  double m_num = mpz_get_d_2exp(&e_num, r.get_num().get_mpz_t());
  double m_den = mpz_get_d_2exp(&e_den, r.get_den().get_mpz_t());
  return std::log(std::fabs(m_num)) - std::log(m_den) +
         static_cast<double>(e_num - e_den) * std::log(2.0);
}

}  // namespace frobdyn
