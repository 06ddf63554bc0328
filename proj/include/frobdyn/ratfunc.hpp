#pragma once

#include <memory>
#include <string>
#include <vector>

#include "frobdyn/mpoly.hpp"

namespace frobdyn {

// The function field F_q(t1..td) with printing names.
struct FunctionField {
  std::shared_ptr<const FiniteField> F;
  unsigned d = 1;
  std::vector<std::string> names;  // t1..td unless overridden

  FunctionField(std::shared_ptr<const FiniteField> f, unsigned nvars,
                std::vector<std::string> var_names = {});
  std::uint64_t p() const { return F->p(); }
};

// num/den with gcd removed and den monic.
class RationalFunction {
 public:
  RationalFunction() = default;
  RationalFunction(MPoly num, MPoly den);
  static RationalFunction constant(const FunctionField& K, const FFElem& c);
  static RationalFunction from_int(const FunctionField& K, long n);
  static RationalFunction variable(const FunctionField& K, unsigned i);
  static RationalFunction from_poly(const MPoly& p);

  const MPoly& num() const { return num_; }
  const MPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const;
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  RationalFunction pow(long e) const;

  std::string str(const std::vector<std::string>& names) const;

 private:
  void canonicalize();
  MPoly num_, den_;
};

// Parses literals such as "(t1^2 + g*t1 + 2)/(t1 - 1)". Integers are
// reduced mod p; g is the generator of F_q over F_p. Errors carry the
// 1-based line and column inside `text`.
RationalFunction parse_rational_function(const FunctionField& K, const std::string& text);

}  // namespace frobdyn
