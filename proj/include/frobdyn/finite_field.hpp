#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "frobdyn/numeric.hpp"
#include "frobdyn/upoly.hpp"

namespace frobdyn {

// Polynomials over F_p as coefficient vectors (low degree first, trimmed).
namespace fp {
using Poly = std::vector<std::uint64_t>;
void trim(Poly& a);
Poly add(const Poly& a, const Poly& b, std::uint64_t p);
Poly sub(const Poly& a, const Poly& b, std::uint64_t p);
Poly mul(const Poly& a, const Poly& b, std::uint64_t p);
Poly mod(Poly a, const Poly& m, std::uint64_t p);
Poly gcd(Poly a, Poly b, std::uint64_t p);
Poly powmod(Poly base, Int e, const Poly& m, std::uint64_t p);
bool is_irreducible(const Poly& f, std::uint64_t p);
std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p);
std::uint64_t invmod(std::uint64_t a, std::uint64_t p);
}  // namespace fp

struct FieldDesc {
  std::uint64_t p = 0;
  unsigned e = 0;
  fp::Poly modulus;  // monic, degree e
  Int order;         // p^e
};

// Element of F_{p^e} in the power basis of the defining polynomial. The
// descriptor pointer must outlive the element (owned by a FiniteField).
class FFElem {
 public:
  FFElem() = default;
  FFElem(const FieldDesc* f, std::vector<std::uint64_t> c) : f_(f), c_(std::move(c)) {}

  const FieldDesc* field() const noexcept { return f_; }
  const std::vector<std::uint64_t>& coords() const noexcept { return c_; }
  bool zero() const;
  bool one() const;

  friend FFElem operator+(const FFElem& a, const FFElem& b);
  friend FFElem operator-(const FFElem& a, const FFElem& b);
  friend FFElem operator-(const FFElem& a);
  friend FFElem operator*(const FFElem& a, const FFElem& b);
  friend bool operator==(const FFElem& a, const FFElem& b) {
    return a.c_ == b.c_;
  }
  friend bool operator<(const FFElem& a, const FFElem& b) { return a.c_ < b.c_; }

  FFElem pow(Int e) const;
  std::string str() const;

 private:
  const FieldDesc* f_ = nullptr;
  std::vector<std::uint64_t> c_;  // length e
};

FFElem inv(const FFElem& a);
FFElem one_like(const FFElem& a);
inline bool is_zero(const FFElem& a) { return a.zero(); }

class FiniteField {
 public:
  // Picks the first irreducible modulus in a fixed enumeration order.
  FiniteField(std::uint64_t p, unsigned e);
  // Uses the given monic irreducible modulus (verified).
  FiniteField(std::uint64_t p, const fp::Poly& modulus);

  std::uint64_t p() const { return desc_->p; }
  unsigned degree() const { return desc_->e; }
  const Int& order() const { return desc_->order; }
  const fp::Poly& modulus() const { return desc_->modulus; }
  const FieldDesc* desc() const { return desc_.get(); }

  FFElem zero() const;
  FFElem one() const;
  FFElem from_int(const Int& n) const;
  FFElem gen() const;  // class of x
  FFElem from_coords(std::vector<std::uint64_t> c) const;
  FFElem from_index(Int idx) const;  // base-p digits as coordinates
  Int index(const FFElem& a) const;
  FFElem random(std::mt19937_64& rng) const;
  FFElem random_nonzero(std::mt19937_64& rng) const;

  // Fixed primitive element (smallest index generating the unit group).
  const FFElem& primitive() const;
  // k in [0, order-1) with primitive^k = a.
  Int dlog(const FFElem& a) const;
  // Element of multiplicative order dividing n given by primitive^((q-1)/n * k).
  FFElem root_of_unity(const Int& n, const Int& k) const;

 private:
  struct Cache {
    std::once_flag once;
    FFElem primitive;
  };
  std::shared_ptr<FieldDesc> desc_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

// Some root in `big` of the polynomial with F_p coefficients `f`
// (all roots must lie in `big`; f squarefree). Deterministic given seed.
FFElem find_root(const FiniteField& big, const fp::Poly& f, std::uint64_t seed);

// Field embedding F_{p^e} -> F_{p^E} sending the generator to a root of the
// small field's modulus.
class FieldEmbedding {
 public:
  FieldEmbedding(const FiniteField& small, const FiniteField& big, std::uint64_t seed = 1);
  FFElem operator()(const FFElem& a) const;
  const FiniteField& target() const { return *big_; }

 private:
  const FiniteField* big_;
  std::vector<FFElem> powers_;  // image of gen^i
};

}  // namespace frobdyn
