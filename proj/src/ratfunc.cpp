#include "frobdyn/ratfunc.hpp"

#include <cctype>

#include "frobdyn/errors.hpp"

namespace frobdyn {

FunctionField::FunctionField(std::shared_ptr<const FiniteField> f, unsigned nvars,
                             std::vector<std::string> var_names)
    : F(std::move(f)), d(nvars), names(std::move(var_names)) {
  if (d == 0) throw DomainError("transcendence degree must be at least 1");
  if (names.empty())
    for (unsigned i = 0; i < d; ++i) names.push_back("t" + std::to_string(i + 1));
  if (names.size() != d) throw DomainError("variable name count does not match d");
}

RationalFunction::RationalFunction(MPoly num, MPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw DomainError("rational function with zero denominator");
  canonicalize();
}

RationalFunction RationalFunction::constant(const FunctionField& K, const FFElem& c) {
  return {MPoly::constant(K.F, K.d, c), MPoly::constant(K.F, K.d, K.F->one())};
}

RationalFunction RationalFunction::from_int(const FunctionField& K, long n) {
  return constant(K, K.F->from_int(Int(n)));
}

RationalFunction RationalFunction::variable(const FunctionField& K, unsigned i) {
  return {MPoly::variable(K.F, K.d, i), MPoly::constant(K.F, K.d, K.F->one())};
}

RationalFunction RationalFunction::from_poly(const MPoly& p) {
  return {p, MPoly::constant(p.field(), p.nvars(), p.field()->one())};
}

bool RationalFunction::is_one() const { return num_ == den_; }

void RationalFunction::canonicalize() {
  if (num_.is_zero()) {
    den_ = MPoly::constant(den_.field(), den_.nvars(), den_.field()->one());
    return;
  }
  MPoly g = gcd(num_, den_);
  if (!g.is_constant()) {
    num_ = *exact_divide(num_, g);
    den_ = *exact_divide(den_, g);
  }
  const FFElem s = inv(den_.lead_coeff());
  num_ = s * num_;
  den_ = s * den_;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  if (a.den_ == b.den_) return {a.num_ + b.num_, a.den_};
  return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}

RationalFunction operator-(const RationalFunction& a) {
  RationalFunction r = a;
  r.num_ = -r.num_;
  return r;
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  return {a.num_ * b.num_, a.den_ * b.den_};
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  if (b.is_zero()) throw DomainError("division by zero rational function");
  return {a.num_ * b.den_, a.den_ * b.num_};
}

RationalFunction RationalFunction::pow(long e) const {
  if (e < 0) {
    if (is_zero()) throw DomainError("negative power of zero");
    return RationalFunction(den_, num_).pow(-e);
  }
  return {num_.pow(static_cast<unsigned long>(e)), den_.pow(static_cast<unsigned long>(e))};
}

std::string RationalFunction::str(const std::vector<std::string>& names) const {
  const std::string n = num_.str(names);
  if (den_.is_constant()) return n;
  auto wrap = [](const MPoly& p, const std::string& s) {
    return p.terms().size() > 1 ? "(" + s + ")" : s;
  };
  return wrap(num_, n) + "/" + wrap(den_, den_.str(names));
}

namespace {

class Parser {
 public:
  Parser(const FunctionField& K, const std::string& s) : K_(K), s_(s) {}

  RationalFunction parse() {
    skip();
    if (at_end()) fail("empty expression");
    RationalFunction r = expr();
    skip();
    if (!at_end()) fail(std::string("unexpected character '") + s_[pos_] + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < s_.size(); ++i) {
      if (s_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(msg, line, col);
  }
  bool at_end() const { return pos_ >= s_.size(); }
  void skip() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (!at_end() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RationalFunction expr() {
    RationalFunction r = term();
    for (;;) {
      if (accept('+')) r = r + term();
      else if (accept('-')) r = r - term();
      else return r;
    }
  }

  RationalFunction term() {
    RationalFunction r = unary();
    for (;;) {
      if (accept('*')) {
        r = r * unary();
      } else if (accept('/')) {
        const std::size_t at = pos_;
        RationalFunction d = unary();
        if (d.is_zero()) {
          pos_ = at;
          skip();
          fail("division by zero");
        }
        r = r / d;
      } else {
        return r;
      }
    }
  }

  RationalFunction unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  RationalFunction power() {
    RationalFunction base = primary();
    if (accept('^')) {
      skip();
      const std::size_t at = pos_;
      bool neg = false;
      if (accept('-')) neg = true;
      skip();
      if (at_end() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected integer exponent");
      long e = 0;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        e = e * 10 + (s_[pos_] - '0');
        if (e > 1000000) fail("exponent too large");
        ++pos_;
      }
      if (neg && base.is_zero()) {
        pos_ = at;
        fail("negative power of zero");
      }
      return base.pow(neg ? -e : e);
    }
    return base;
  }

  RationalFunction primary() {
    skip();
    if (at_end()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      RationalFunction r = expr();
      if (!accept(')')) fail("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string digits;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) digits += s_[pos_++];
      return RationalFunction::constant(K_, K_.F->from_int(Int(digits)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      std::string name;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        name += s_[pos_++];
      if (name == "g") return RationalFunction::constant(K_, K_.F->gen());
      for (unsigned i = 0; i < K_.d; ++i)
        if (K_.names[i] == name) return RationalFunction::variable(K_, i);
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const FunctionField& K_;
  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

RationalFunction parse_rational_function(const FunctionField& K, const std::string& text) {
  return Parser(K, text).parse();
}

}  // namespace frobdyn
