#include "frobdyn/mpoly.hpp"

#include <numeric>
#include <sstream>

#include "frobdyn/errors.hpp"

namespace frobdyn {

bool GrlexGreater::operator()(const Monomial& a, const Monomial& b) const {
  const auto da = std::accumulate(a.begin(), a.end(), std::uint64_t{0});
  const auto db = std::accumulate(b.begin(), b.end(), std::uint64_t{0});
  if (da != db) return da > db;
  return a > b;
}

namespace {

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m[i] = a[i] + b[i];
  return m;
}

bool mono_divides(const Monomial& a, const Monomial& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

std::string coeff_str(const FFElem& c) {
  const auto& v = c.coords();
  if (v.size() == 1) return std::to_string(v[0]);
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = v.size(); i-- > 0;) {
    if (!v[i]) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0 || v[i] != 1) os << v[i];
    if (i > 0) {
      if (v[i] != 1) os << '*';
      os << 'g';
      if (i > 1) os << '^' << i;
    }
  }
  if (first) return "0";
  return "(" + os.str() + ")";
}

}  // namespace

MPoly MPoly::constant(std::shared_ptr<const FiniteField> f, unsigned nvars, const FFElem& c) {
  MPoly r(std::move(f), nvars);
  r.add_term(Monomial(nvars, 0), c);
  return r;
}

MPoly MPoly::variable(std::shared_ptr<const FiniteField> f, unsigned nvars, unsigned i,
                      std::uint32_t power) {
  if (i >= nvars) throw DomainError("variable index out of range");
  FFElem one = f->one();
  MPoly r(std::move(f), nvars);
  Monomial m(nvars, 0);
  m[i] = power;
  r.add_term(m, one);
  return r;
}

bool MPoly::is_constant() const {
  return t_.empty() || (t_.size() == 1 && t_.begin()->first == Monomial(n_, 0));
}

FFElem MPoly::constant_term() const {
  auto it = t_.find(Monomial(n_, 0));
  return it == t_.end() ? f_->zero() : it->second;
}

const Monomial& MPoly::lead_monomial() const {
  if (t_.empty()) throw DomainError("leading monomial of zero polynomial");
  return t_.begin()->first;
}

const FFElem& MPoly::lead_coeff() const {
  if (t_.empty()) throw DomainError("leading coefficient of zero polynomial");
  return t_.begin()->second;
}

std::uint32_t MPoly::degree_in(unsigned var) const {
  std::uint32_t d = 0;
  for (const auto& [m, c] : t_) d = std::max(d, m[var]);
  return d;
}

std::uint32_t MPoly::total_degree() const {
  if (t_.empty()) return 0;
  const auto& m = t_.begin()->first;
  return std::accumulate(m.begin(), m.end(), std::uint32_t{0});
}

unsigned MPoly::first_variable() const {
  unsigned v = n_;
  for (const auto& [m, c] : t_)
    for (unsigned i = 0; i < v; ++i)
      if (m[i]) {
        v = i;
        break;
      }
  return v;
}

MPoly MPoly::monic() const {
  if (t_.empty()) return *this;
  const FFElem s = inv(lead_coeff());
  return s * *this;
}

void MPoly::add_term(const Monomial& m, const FFElem& c) {
  if (c.zero()) return;
  auto [it, inserted] = t_.emplace(m, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.zero()) t_.erase(it);
  }
}

MPoly operator+(const MPoly& a, const MPoly& b) {
  MPoly r = a;
  if (!r.f_) r = MPoly(b.f_, b.n_);
  for (const auto& [m, c] : b.t_) r.add_term(m, c);
  return r;
}

MPoly operator-(const MPoly& a) {
  MPoly r(a.f_, a.n_);
  for (const auto& [m, c] : a.t_) r.t_.emplace(m, -c);
  return r;
}

MPoly operator-(const MPoly& a, const MPoly& b) { return a + (-b); }

MPoly operator*(const MPoly& a, const MPoly& b) {
  MPoly r(a.f_ ? a.f_ : b.f_, a.n_);
  for (const auto& [ma, ca] : a.t_)
    for (const auto& [mb, cb] : b.t_) r.add_term(mono_mul(ma, mb), ca * cb);
  return r;
}

MPoly operator*(const FFElem& s, const MPoly& a) {
  MPoly r(a.f_, a.n_);
  if (s.zero()) return r;
  for (const auto& [m, c] : a.t_) r.t_.emplace(m, s * c);
  return r;
}

bool operator<(const MPoly& a, const MPoly& b) {
  auto ia = a.t_.begin(), ib = b.t_.begin();
  GrlexGreater gt;
  for (; ia != a.t_.end() && ib != b.t_.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return gt(ib->first, ia->first);
    if (!(ia->second == ib->second)) return ia->second < ib->second;
  }
  return ia == a.t_.end() && ib != b.t_.end();
}

MPoly MPoly::pow(unsigned long e) const {
  MPoly r = constant(f_, n_, f_->one());
  MPoly b = *this;
  while (e) {
    if (e & 1UL) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

std::optional<MPoly> exact_divide(const MPoly& a, const MPoly& b) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  MPoly q(a.f_, a.n_), r = a;
  const Monomial& lb = b.lead_monomial();
  const FFElem lbi = inv(b.lead_coeff());
  while (!r.is_zero()) {
    const Monomial& lr = r.lead_monomial();
    if (!mono_divides(lb, lr)) return std::nullopt;
    Monomial m(lr.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = lr[i] - lb[i];
    const FFElem c = r.lead_coeff() * lbi;
    MPoly term(a.f_, a.n_);
    term.add_term(m, c);
    q.add_term(m, c);
    r = r - term * b;
  }
  return q;
}

std::map<std::uint32_t, MPoly> MPoly::coefficients_in(unsigned var) const {
  std::map<std::uint32_t, MPoly> out;
  for (const auto& [m, c] : t_) {
    Monomial mm = m;
    const std::uint32_t k = mm[var];
    mm[var] = 0;
    auto it = out.try_emplace(k, f_, n_).first;
    it->second.add_term(mm, c);
  }
  return out;
}

FFElem MPoly::evaluate(const std::vector<FFElem>& point, const FieldEmbedding& emb) const {
  if (point.size() != n_) throw DomainError("evaluation point has wrong dimension");
  FFElem acc = emb.target().zero();
  for (const auto& [m, c] : t_) {
    FFElem term = emb(c);
    for (unsigned i = 0; i < n_; ++i)
      if (m[i]) term = term * point[i].pow(Int(static_cast<unsigned long>(m[i])));
    acc = acc + term;
  }
  return acc;
}

FFElem MPoly::evaluate(const std::vector<FFElem>& point) const {
  if (point.size() != n_) throw DomainError("evaluation point has wrong dimension");
  FFElem acc = f_->zero();
  for (const auto& [m, c] : t_) {
    FFElem term = c;
    for (unsigned i = 0; i < n_; ++i)
      if (m[i]) term = term * point[i].pow(Int(static_cast<unsigned long>(m[i])));
    acc = acc + term;
  }
  return acc;
}

std::string MPoly::str(const std::vector<std::string>& names) const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : t_) {
    if (!first) os << " + ";
    first = false;
    const bool is_const = std::all_of(m.begin(), m.end(), [](auto x) { return x == 0; });
    const bool unit = c.one();
    if (is_const || !unit) {
      os << coeff_str(c);
      if (!is_const) os << '*';
    }
    bool first_var = true;
    for (unsigned i = 0; i < n_; ++i) {
      if (!m[i]) continue;
      if (!first_var) os << '*';
      first_var = false;
      os << names.at(i);
      if (m[i] > 1) os << '^' << m[i];
    }
  }
  return os.str();
}

namespace {

MPoly content_in(const MPoly& a, unsigned v) {
  MPoly g(a.field(), a.nvars());
  for (const auto& [k, c] : a.coefficients_in(v)) {
    g = gcd(g, c);
    if (g.is_constant() && !g.is_zero()) break;
  }
  return g;
}

MPoly primitive_in(const MPoly& a, unsigned v) {
  MPoly c = content_in(a, v);
  return *exact_divide(a, c);
}

MPoly coeff_of(const MPoly& a, unsigned v, std::uint32_t k) {
  auto cs = a.coefficients_in(v);
  auto it = cs.find(k);
  return it == cs.end() ? MPoly(a.field(), a.nvars()) : it->second;
}

MPoly prem(MPoly a, const MPoly& b, unsigned v) {
  const std::uint32_t db = b.degree_in(v);
  const MPoly lcb = coeff_of(b, v, db);
  while (!a.is_zero() && a.degree_in(v) >= db) {
    const std::uint32_t da = a.degree_in(v);
    const MPoly lca = coeff_of(a, v, da);
    a = lcb * a - lca * MPoly::variable(a.field(), a.nvars(), v, da - db) * b;
  }
  return a;
}

}  // namespace

MPoly gcd(const MPoly& a, const MPoly& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  const auto& f = a.field();
  if (a.is_constant() || b.is_constant()) return MPoly::constant(f, a.nvars(), f->one());
  const unsigned v = std::min(a.first_variable(), b.first_variable());
  if (a.degree_in(v) == 0) return gcd(a, content_in(b, v));
  if (b.degree_in(v) == 0) return gcd(content_in(a, v), b);
  const MPoly ca = content_in(a, v), cb = content_in(b, v);
  MPoly pa = *exact_divide(a, ca), pb = *exact_divide(b, cb);
  const MPoly c = gcd(ca, cb);
  if (pa.degree_in(v) < pb.degree_in(v)) std::swap(pa, pb);
  MPoly g(f, a.nvars());
  for (;;) {
    MPoly r = prem(pa, pb, v);
    if (r.is_zero()) {
      g = primitive_in(pb, v);
      break;
    }
    if (r.degree_in(v) == 0) {
      g = MPoly::constant(f, a.nvars(), f->one());
      break;
    }
    pa = std::move(pb);
    pb = primitive_in(r, v);
  }
  return (c * g).monic();
}

}  // namespace frobdyn
