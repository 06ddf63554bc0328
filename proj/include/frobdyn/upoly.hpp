#pragma once

// Dense univariate polynomials over a commutative field T (coefficients
// low degree first). T needs + - * ==, inv, one_like, is_zero.

#include <stdexcept>
#include <utility>
#include <vector>

#include "frobdyn/matrix.hpp"
#include "frobdyn/numeric.hpp"

namespace frobdyn {

namespace detail {
template <typename T>
bool coeff_is_zero(const T& a) {
  return is_zero(a);
}
}  // namespace detail

template <typename T>
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(T zero) : zero_(std::move(zero)) {}
  UPoly(std::vector<T> coeffs, T zero) : zero_(std::move(zero)), c_(std::move(coeffs)) {
    trim();
  }

  static UPoly constant(const T& a, const T& zero) { return UPoly({a}, zero); }
  static UPoly x(const T& zero) { return UPoly({zero, one_like(zero)}, zero); }
  static UPoly monomial(const T& a, std::size_t k, const T& zero) {
    std::vector<T> c(k + 1, zero);
    c[k] = a;
    return UPoly(std::move(c), zero);
  }
  // (x - a)
  static UPoly linear_root(const T& a, const T& zero) {
    return UPoly({zero - a, one_like(zero)}, zero);
  }

  bool is_zero() const { return c_.empty(); }
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const std::vector<T>& coeffs() const { return c_; }
  const T& zero() const { return zero_; }
  T coeff(std::size_t i) const { return i < c_.size() ? c_[i] : zero_; }
  const T& lead() const {
    if (c_.empty()) throw std::domain_error("leading coefficient of zero polynomial");
    return c_.back();
  }

  UPoly monic() const {
    if (c_.empty()) return *this;
    const T s = inv(c_.back());
    std::vector<T> out = c_;
    for (auto& a : out) a = s * a;
    return UPoly(std::move(out), zero_);
  }

  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

  friend UPoly operator+(const UPoly& a, const UPoly& b) {
    std::vector<T> out(std::max(a.c_.size(), b.c_.size()), a.zero_);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeff(i) + b.coeff(i);
    return UPoly(std::move(out), a.zero_);
  }
  friend UPoly operator-(const UPoly& a, const UPoly& b) {
    std::vector<T> out(std::max(a.c_.size(), b.c_.size()), a.zero_);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeff(i) - b.coeff(i);
    return UPoly(std::move(out), a.zero_);
  }
  friend UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.c_.empty() || b.c_.empty()) return UPoly(a.zero_);
    std::vector<T> out(a.c_.size() + b.c_.size() - 1, a.zero_);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (detail::coeff_is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] = out[i + j] + a.c_[i] * b.c_[j];
    }
    return UPoly(std::move(out), a.zero_);
  }
  friend UPoly scale(const T& s, const UPoly& a) {
    std::vector<T> out = a.c_;
    for (auto& x : out) x = s * x;
    return UPoly(std::move(out), a.zero_);
  }

  // Euclidean division: a = q b + r with deg r < deg b.
  friend std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    if (a.degree() < b.degree()) return {UPoly(a.zero_), a};
    std::vector<T> r = a.c_;
    std::vector<T> q(a.c_.size() - b.c_.size() + 1, a.zero_);
    const T li = inv(b.c_.back());
    for (long i = static_cast<long>(r.size()) - 1; i >= b.degree(); --i) {
      if (detail::coeff_is_zero(r[i])) continue;
      const T f = r[i] * li;
      const std::size_t s = static_cast<std::size_t>(i - b.degree());
      q[s] = f;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[s + j] = r[s + j] - f * b.c_[j];
    }
    r.resize(static_cast<std::size_t>(b.degree()));
    return {UPoly(std::move(q), a.zero_), UPoly(std::move(r), a.zero_)};
  }
  friend UPoly operator%(const UPoly& a, const UPoly& b) { return divmod(a, b).second; }
  friend UPoly operator/(const UPoly& a, const UPoly& b) { return divmod(a, b).first; }

  T eval(const T& x) const {
    T acc = zero_;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  UPoly derivative() const {
    if (c_.size() <= 1) return UPoly(zero_);
    std::vector<T> out(c_.size() - 1, zero_);
    for (std::size_t i = 1; i < c_.size(); ++i) {
      T k = zero_;
      for (std::size_t j = 0; j < i; ++j) k = k + one_like(zero_);
      out[i - 1] = k * c_[i];
    }
    return UPoly(std::move(out), zero_);
  }

 private:
  void trim() {
    while (!c_.empty() && detail::coeff_is_zero(c_.back())) c_.pop_back();
  }
  T zero_{};
  std::vector<T> c_;
};

// Monic gcd (zero if both are zero).
template <typename T>
UPoly<T> gcd(UPoly<T> a, UPoly<T> b) {
  while (!b.is_zero()) {
    auto r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

template <typename T>
struct XGcd {
  UPoly<T> g, u, v;  // u a + v b = g, g monic
};

template <typename T>
XGcd<T> xgcd(const UPoly<T>& a, const UPoly<T>& b) {
  const T z = a.zero();
  UPoly<T> r0 = a, r1 = b;
  UPoly<T> s0 = UPoly<T>::constant(one_like(z), z), s1(z);
  UPoly<T> t0(z), t1 = UPoly<T>::constant(one_like(z), z);
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    r0 = std::exchange(r1, r);
    s0 = std::exchange(s1, s0 - q * s1);
    t0 = std::exchange(t1, t0 - q * t1);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  const T li = inv(r0.lead());
  return {scale(li, r0), scale(li, s0), scale(li, t0)};
}

template <typename T>
UPoly<T> powmod(UPoly<T> base, Int e, const UPoly<T>& mod) {
  const T z = mod.zero();
  UPoly<T> result = UPoly<T>::constant(one_like(z), z) % mod;
  base = base % mod;
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) result = (result * base) % mod;
    e >>= 1;
    if (e > 0) base = (base * base) % mod;
  }
  return result;
}

template <typename T>
UPoly<T> upow(const UPoly<T>& base, unsigned long e) {
  const T z = base.zero();
  UPoly<T> result = UPoly<T>::constant(one_like(z), z);
  UPoly<T> b = base;
  while (e) {
    if (e & 1UL) result = result * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return result;
}

// p(M) for a square matrix M whose entries commute with the coefficients
// once lifted by `lift`.
template <typename T, typename E, typename Lift>
Matrix<E> eval_matrix(const UPoly<T>& p, const Matrix<E>& m, Lift&& lift) {
  const E z = m.zero();
  Matrix<E> acc(m.rows(), m.cols(), z);
  const auto& c = p.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    acc = acc * m;
    const E a = lift(*it);
    for (std::size_t i = 0; i < m.rows(); ++i) acc(i, i) = acc(i, i) + a;
  }
  return acc;
}

}  // namespace frobdyn
