#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "frobdyn/finite_field.hpp"

namespace frobdyn {

using Monomial = std::vector<std::uint32_t>;

// Graded lexicographic order with t1 > t2 > ...; true when a > b.
struct GrlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

// Polynomial in t1..td over F_q. Terms are kept in descending grlex order,
// so the first term is the leading one.
class MPoly {
 public:
  using Terms = std::map<Monomial, FFElem, GrlexGreater>;

  MPoly() = default;
  MPoly(std::shared_ptr<const FiniteField> f, unsigned nvars) : f_(std::move(f)), n_(nvars) {}

  static MPoly constant(std::shared_ptr<const FiniteField> f, unsigned nvars, const FFElem& c);
  static MPoly variable(std::shared_ptr<const FiniteField> f, unsigned nvars, unsigned i,
                        std::uint32_t power = 1);

  const std::shared_ptr<const FiniteField>& field() const { return f_; }
  unsigned nvars() const { return n_; }
  const Terms& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  bool is_constant() const;
  FFElem constant_term() const;
  const Monomial& lead_monomial() const;
  const FFElem& lead_coeff() const;
  std::uint32_t degree_in(unsigned var) const;
  std::uint32_t total_degree() const;
  // Smallest variable index that occurs, or nvars if constant.
  unsigned first_variable() const;

  MPoly monic() const;
  void add_term(const Monomial& m, const FFElem& c);

  friend MPoly operator+(const MPoly& a, const MPoly& b);
  friend MPoly operator-(const MPoly& a, const MPoly& b);
  friend MPoly operator-(const MPoly& a);
  friend MPoly operator*(const MPoly& a, const MPoly& b);
  friend MPoly operator*(const FFElem& c, const MPoly& a);
  friend bool operator==(const MPoly& a, const MPoly& b) { return a.t_ == b.t_; }
  friend bool operator<(const MPoly& a, const MPoly& b);

  MPoly pow(unsigned long e) const;

  // a = q * b exactly, or nullopt when b does not divide a.
  friend std::optional<MPoly> exact_divide(const MPoly& a, const MPoly& b);

  // Coefficients as a polynomial in `var`, keyed by degree.
  std::map<std::uint32_t, MPoly> coefficients_in(unsigned var) const;

  // Value at a point of an extension field (coefficients mapped through emb).
  FFElem evaluate(const std::vector<FFElem>& point, const FieldEmbedding& emb) const;
  FFElem evaluate(const std::vector<FFElem>& point) const;

  std::string str(const std::vector<std::string>& names) const;

 private:
  std::shared_ptr<const FiniteField> f_;
  unsigned n_ = 0;
  Terms t_;
};

// Monic gcd (zero only if both inputs are zero).
MPoly gcd(const MPoly& a, const MPoly& b);

}  // namespace frobdyn
