#include "frobdyn/finite_field.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

#include "frobdyn/errors.hpp"

namespace frobdyn {

namespace fp {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
  if (a % p == 0) throw DomainError("inverse of zero in F_p");
  return powmod(a, p - 2, p);
}

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly add(const Poly& a, const Poly& b, std::uint64_t p) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::uint64_t x = i < a.size() ? a[i] : 0, y = i < b.size() ? b[i] : 0;
    r[i] = (x + y) % p;
  }
  trim(r);
  return r;
}

Poly sub(const Poly& a, const Poly& b, std::uint64_t p) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::uint64_t x = i < a.size() ? a[i] : 0, y = i < b.size() ? b[i] : 0;
    r[i] = (x + p - y) % p;
  }
  trim(r);
  return r;
}

Poly mul(const Poly& a, const Poly& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
  }
  trim(r);
  return r;
}

Poly mod(Poly a, const Poly& m, std::uint64_t p) {
  trim(a);
  if (m.empty()) throw DomainError("F_p polynomial division by zero");
  const std::uint64_t li = invmod(m.back(), p);
  while (a.size() >= m.size()) {
    const std::uint64_t f = mulmod(a.back(), li, p);
    const std::size_t s = a.size() - m.size();
    for (std::size_t j = 0; j < m.size(); ++j)
      a[s + j] = (a[s + j] + p - mulmod(f, m[j], p)) % p;
    trim(a);
  }
  return a;
}

Poly gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const std::uint64_t li = invmod(a.back(), p);
    for (auto& x : a) x = mulmod(x, li, p);
  }
  return a;
}

Poly powmod(Poly base, Int e, const Poly& m, std::uint64_t p) {
  Poly r = mod(Poly{1}, m, p);
  base = mod(base, m, p);
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = mod(mul(r, base, p), m, p);
    e >>= 1;
    if (e > 0) base = mod(mul(base, base, p), m, p);
  }
  return r;
}

bool is_irreducible(const Poly& f, std::uint64_t p) {
  Poly g = f;
  trim(g);
  if (g.size() < 2) return false;
  const std::size_t n = g.size() - 1;
  if (n == 1) return true;
  const Poly x{0, 1};
  Poly xp = x;
  for (std::size_t i = 1; i <= n / 2; ++i) {
    xp = powmod(xp, Int(static_cast<unsigned long>(p)), g, p);
    Poly h = gcd(g, sub(xp, x, p), p);
    if (h.size() > 1) return false;
  }
  return true;
}

}  // namespace fp

namespace {

const FieldDesc& same_field(const FFElem& a, const FFElem& b) {
  if (a.field() != b.field() || a.field() == nullptr)
    throw DomainError("finite field elements from different fields");
  return *a.field();
}

}  // namespace

bool FFElem::zero() const {
  for (auto x : c_)
    if (x) return false;
  return true;
}

bool FFElem::one() const {
  if (c_.empty() || c_[0] != 1) return false;
  for (std::size_t i = 1; i < c_.size(); ++i)
    if (c_[i]) return false;
  return true;
}

FFElem operator+(const FFElem& a, const FFElem& b) {
  const auto& f = same_field(a, b);
  std::vector<std::uint64_t> c(f.e);
  for (unsigned i = 0; i < f.e; ++i) c[i] = (a.c_[i] + b.c_[i]) % f.p;
  return {a.f_, std::move(c)};
}

FFElem operator-(const FFElem& a, const FFElem& b) {
  const auto& f = same_field(a, b);
  std::vector<std::uint64_t> c(f.e);
  for (unsigned i = 0; i < f.e; ++i) c[i] = (a.c_[i] + f.p - b.c_[i]) % f.p;
  return {a.f_, std::move(c)};
}

FFElem operator-(const FFElem& a) {
  std::vector<std::uint64_t> c(a.c_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.c_[i] ? a.f_->p - a.c_[i] : 0;
  return {a.f_, std::move(c)};
}

FFElem operator*(const FFElem& a, const FFElem& b) {
  const auto& f = same_field(a, b);
  const std::uint64_t p = f.p;
  const unsigned e = f.e;
  if (e == 1) return {a.f_, {fp::mulmod(a.c_[0], b.c_[0], p)}};
  std::vector<unsigned __int128> acc(2 * e - 1, 0);
  for (unsigned i = 0; i < e; ++i) {
    if (!a.c_[i]) continue;
    for (unsigned j = 0; j < e; ++j)
      acc[i + j] = (acc[i + j] + static_cast<unsigned __int128>(a.c_[i]) * b.c_[j]) % p;
  }
  // Reduce with the monic modulus x^e = -(m_0 + ... + m_{e-1} x^{e-1}).
  for (unsigned k = 2 * e - 2; k >= e; --k) {
    const std::uint64_t top = static_cast<std::uint64_t>(acc[k] % p);
    acc[k] = 0;
    if (!top) continue;
    for (unsigned j = 0; j < e; ++j) {
      const std::uint64_t m = f.modulus[j];
      if (!m) continue;
      acc[k - e + j] = (acc[k - e + j] + static_cast<unsigned __int128>(p - m) * top) % p;
    }
  }
  std::vector<std::uint64_t> c(e);
  for (unsigned i = 0; i < e; ++i) c[i] = static_cast<std::uint64_t>(acc[i] % p);
  return {a.f_, std::move(c)};
}

FFElem FFElem::pow(Int e) const {
  if (e < 0) return inv(*this).pow(-e);
  std::vector<std::uint64_t> one(c_.size(), 0);
  one[0] = 1;
  FFElem r(f_, std::move(one));
  FFElem b = *this;
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = r * b;
    e >>= 1;
    if (e > 0) b = b * b;
  }
  return r;
}

std::string FFElem::str() const {
  if (c_.size() == 1) return std::to_string(c_[0]);
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? "," : "") << c_[i];
  os << ']';
  return os.str();
}

FFElem inv(const FFElem& a) {
  if (a.zero()) throw DomainError("inverse of zero in finite field");
  const FieldDesc& f = *a.field();
  if (f.e == 1) return {a.field(), {fp::invmod(a.coords()[0], f.p)}};
  return a.pow(f.order - 2);
}

FFElem one_like(const FFElem& a) {
  std::vector<std::uint64_t> c(a.coords().size(), 0);
  if (!c.empty()) c[0] = 1;
  return {a.field(), std::move(c)};
}

FiniteField::FiniteField(std::uint64_t p, unsigned e) : desc_(std::make_shared<FieldDesc>()) {
  if (!is_prime(Int(static_cast<unsigned long>(p)))) throw DomainError("p must be prime");
  if (e == 0) throw DomainError("extension degree must be positive");
  if (p >= (1ULL << 62)) throw Unsupported("characteristic too large");
  desc_->p = p;
  desc_->e = e;
  desc_->order = ipow(Int(static_cast<unsigned long>(p)), e);
  if (e == 1) {
    desc_->modulus = {0, 1};
    return;
  }
  // Enumerate x^e + tail with tail read as base-p digits, constant term first.
  for (Int idx = 1;; ++idx) {
    fp::Poly f(e + 1, 0);
    Int t = idx;
    for (unsigned i = 0; i < e && t > 0; ++i) {
      f[i] = mpz_fdiv_ui(t.get_mpz_t(), p);
      t /= static_cast<unsigned long>(p);
    }
    f[e] = 1;
    if (f[0] == 0) continue;
    if (fp::is_irreducible(f, p)) {
      desc_->modulus = f;
      return;
    }
  }
}

FiniteField::FiniteField(std::uint64_t p, const fp::Poly& modulus)
    : desc_(std::make_shared<FieldDesc>()) {
  if (!is_prime(Int(static_cast<unsigned long>(p)))) throw DomainError("p must be prime");
  fp::Poly m = modulus;
  for (auto& x : m) x %= p;
  fp::trim(m);
  if (m.size() < 2) throw DomainError("defining polynomial must have positive degree");
  const std::uint64_t li = fp::invmod(m.back(), p);
  for (auto& x : m) x = fp::mulmod(x, li, p);
  if (!fp::is_irreducible(m, p)) throw DomainError("defining polynomial is not irreducible");
  desc_->p = p;
  desc_->e = static_cast<unsigned>(m.size() - 1);
  desc_->modulus = m;
  desc_->order = ipow(Int(static_cast<unsigned long>(p)), desc_->e);
}

FFElem FiniteField::zero() const { return {desc_.get(), std::vector<std::uint64_t>(desc_->e, 0)}; }

FFElem FiniteField::one() const {
  std::vector<std::uint64_t> c(desc_->e, 0);
  c[0] = 1;
  return {desc_.get(), std::move(c)};
}

FFElem FiniteField::from_int(const Int& n) const {
  std::vector<std::uint64_t> c(desc_->e, 0);
  c[0] = mpz_fdiv_ui(n.get_mpz_t(), desc_->p);
  return {desc_.get(), std::move(c)};
}

FFElem FiniteField::gen() const {
  if (desc_->e == 1) return from_int(Int(0) - Int(static_cast<unsigned long>(desc_->modulus[0])));
  std::vector<std::uint64_t> c(desc_->e, 0);
  c[1] = 1;
  return {desc_.get(), std::move(c)};
}

FFElem FiniteField::from_coords(std::vector<std::uint64_t> c) const {
  fp::Poly r = fp::mod(std::move(c), desc_->modulus, desc_->p);
  r.resize(desc_->e, 0);
  return {desc_.get(), std::move(r)};
}

FFElem FiniteField::from_index(Int idx) const {
  std::vector<std::uint64_t> c(desc_->e, 0);
  for (unsigned i = 0; i < desc_->e; ++i) {
    c[i] = mpz_fdiv_ui(idx.get_mpz_t(), desc_->p);
    idx /= static_cast<unsigned long>(desc_->p);
  }
  return {desc_.get(), std::move(c)};
}

Int FiniteField::index(const FFElem& a) const {
  Int r = 0;
  for (unsigned i = desc_->e; i-- > 0;) r = r * static_cast<unsigned long>(desc_->p) + a.coords()[i];
  return r;
}

FFElem FiniteField::random(std::mt19937_64& rng) const {
  std::uniform_int_distribution<std::uint64_t> dist(0, desc_->p - 1);
  std::vector<std::uint64_t> c(desc_->e);
  for (auto& x : c) x = dist(rng);
  return {desc_.get(), std::move(c)};
}

FFElem FiniteField::random_nonzero(std::mt19937_64& rng) const {
  for (;;) {
    FFElem a = random(rng);
    if (!a.zero()) return a;
  }
}

const FFElem& FiniteField::primitive() const {
  std::call_once(cache_->once, [this] {
    const Int n = desc_->order - 1;
    const auto primes = prime_factors(n);
    for (Int idx = 1; idx < desc_->order; ++idx) {
      FFElem g = from_index(idx);
      bool ok = true;
      for (const auto& r : primes)
        if (g.pow(n / r).one()) {
          ok = false;
          break;
        }
      if (ok) {
        cache_->primitive = g;
        return;
      }
    }
    throw InvariantViolation("no primitive element found");
  });
  return cache_->primitive;
}

Int FiniteField::dlog(const FFElem& a) const {
  if (a.zero()) throw DomainError("discrete log of zero");
  const FFElem& g = primitive();
  const Int n = desc_->order - 1;
  if (n <= 64) {
    FFElem x = one();
    for (Int k = 0; k < n; ++k) {
      if (x == a) return k;
      x = x * g;
    }
    throw InvariantViolation("discrete log not found");
  }
  // Baby-step giant-step.
  Int m;
  mpz_sqrt(m.get_mpz_t(), n.get_mpz_t());
  m += 1;
  std::map<std::vector<std::uint64_t>, Int> table;
  FFElem x = one();
  for (Int j = 0; j < m; ++j) {
    table.emplace(x.coords(), j);
    x = x * g;
  }
  const FFElem step = inv(g.pow(m));
  FFElem y = a;
  for (Int i = 0; i <= m; ++i) {
    auto it = table.find(y.coords());
    if (it != table.end()) return mod(i * m + it->second, n);
    y = y * step;
  }
  throw InvariantViolation("discrete log not found");
}

FFElem FiniteField::root_of_unity(const Int& n, const Int& k) const {
  const Int qm1 = desc_->order - 1;
  if (!mpz_divisible_p(qm1.get_mpz_t(), n.get_mpz_t()))
    throw DomainError("no root of unity of order " + n.get_str() + " in this field");
  return primitive().pow(mod(qm1 / n * k, qm1));
}

namespace {

using BigPoly = UPoly<FFElem>;

BigPoly lift_poly(const FiniteField& big, const fp::Poly& f) {
  std::vector<FFElem> c;
  for (auto x : f) c.push_back(big.from_int(Int(static_cast<unsigned long>(x))));
  return BigPoly(std::move(c), big.zero());
}

// Splits f (product of distinct linear factors) into a root.
FFElem split_root(const FiniteField& big, BigPoly f, std::mt19937_64& rng) {
  const FFElem z = big.zero();
  for (int guard = 0; guard < 10000; ++guard) {
    f = f.monic();
    if (f.degree() == 1) return z - f.coeff(0);
    const BigPoly x = BigPoly::x(z);
    BigPoly h(z);
    const FFElem a = big.random(rng);
    const BigPoly xa = x + BigPoly::constant(a, z);
    if (big.p() == 2) {
      BigPoly t = xa % f, acc = t;
      for (unsigned i = 1; i < big.degree(); ++i) {
        t = (t * t) % f;
        acc = acc + t;
      }
      h = acc;
    } else {
      h = powmod(xa, (big.order() - 1) / 2, f) - BigPoly::constant(big.one(), z);
    }
    BigPoly g = gcd(f, h);
    if (g.degree() >= 1 && g.degree() < f.degree()) {
      f = (2 * g.degree() <= f.degree()) ? g : f / g;
    }
  }
  throw InvariantViolation("root splitting did not converge");
}

}  // namespace

FFElem find_root(const FiniteField& big, const fp::Poly& f, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  BigPoly g = lift_poly(big, f);
  // Keep only the roots lying in the field.
  const BigPoly x = BigPoly::x(big.zero());
  BigPoly xq = powmod(x, big.order(), g);
  BigPoly split = gcd(g, xq - x);
  if (split.degree() < 1) throw DomainError("polynomial has no root in the extension");
  return split_root(big, split, rng);
}

FieldEmbedding::FieldEmbedding(const FiniteField& small, const FiniteField& big,
                               std::uint64_t seed)
    : big_(&big) {
  if (small.p() != big.p() || big.degree() % small.degree() != 0)
    throw DomainError("no field embedding between these fields");
  FFElem r = small.degree() == 1 ? big.from_int(Int(0) - Int(static_cast<unsigned long>(small.modulus()[0])))
                                 : find_root(big, small.modulus(), seed);
  FFElem acc = big.one();
  for (unsigned i = 0; i < small.degree(); ++i) {
    powers_.push_back(acc);
    acc = acc * r;
  }
}

FFElem FieldEmbedding::operator()(const FFElem& a) const {
  FFElem out = big_->zero();
  for (std::size_t i = 0; i < powers_.size(); ++i) {
    if (!a.coords()[i]) continue;
    out = out + big_->from_int(Int(static_cast<unsigned long>(a.coords()[i]))) * powers_[i];
  }
  return out;
}

}  // namespace frobdyn
