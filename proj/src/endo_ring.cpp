#include "frobdyn/endo_ring.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "frobdyn/errors.hpp"
#include "frobdyn/linalg.hpp"

namespace frobdyn {

namespace {

using Table = std::vector<std::vector<std::vector<Rat>>>;

Table empty_table(unsigned n) {
  return Table(n, std::vector<std::vector<Rat>>(n, std::vector<Rat>(n, Rat(0))));
}

std::vector<Rat> mul_coords(const Algebra& A, const std::vector<Rat>& x, const std::vector<Rat>& y) {
  std::vector<Rat> out(A.dim, Rat(0));
  for (unsigned i = 0; i < A.dim; ++i) {
    if (x[i] == 0) continue;
    for (unsigned j = 0; j < A.dim; ++j) {
      if (y[j] == 0) continue;
      const Rat xy = x[i] * y[j];
      for (unsigned k = 0; k < A.dim; ++k)
        if (A.table[i][j][k] != 0) out[k] += xy * A.table[i][j][k];
    }
  }
  return out;
}

std::vector<Rat> unit(unsigned n, unsigned i) {
  std::vector<Rat> v(n, Rat(0));
  v[i] = 1;
  return v;
}

std::vector<Rat> coords_over_order(const Algebra& A, const std::vector<Rat>& x) {
  auto c = solve_right(A.order_basis.transpose(), x);
  if (!c) throw InvariantViolation("order basis does not span the algebra");
  return *c;
}

// Order basis must be a ring containing 1.
void check_order(const Algebra& A) {
  if (A.order_basis.rows() != A.dim || A.order_basis.cols() != A.dim || !inverse(A.order_basis))
    throw DomainError("order basis must be an invertible dim x dim matrix");
  auto integral = [&](const std::vector<Rat>& x) {
    for (const auto& c : coords_over_order(A, x))
      if (!is_integer(c)) return false;
    return true;
  };
  if (!integral(unit(A.dim, 0))) throw DomainError("order does not contain 1");
  for (unsigned i = 0; i < A.dim; ++i)
    for (unsigned j = 0; j < A.dim; ++j) {
      auto bi = A.order_basis.row(i), bj = A.order_basis.row(j);
      if (!integral(mul_coords(A, {bi.begin(), bi.end()}, {bj.begin(), bj.end()})))
        throw DomainError("order basis is not closed under multiplication");
    }
}

void check_frobenius(const std::shared_ptr<const Algebra>& A) {
  if (A->q < 2) throw DomainError("Frobenius size q must be at least 2");
  Elem F = Elem::frobenius(A);
  if (F.zero()) throw DomainError("Frobenius element is zero");
  if (!F.is_central()) throw DomainError("Frobenius element is not central");
}

Int square_free_integer(const Rat& r) {
  // r * den^2 is an integer in the same square class.
  return Rat(r * Rat(r.get_den()) * Rat(r.get_den())).get_num();
}

unsigned long valuation(Int& n, const Int& p) { return strip_prime(n, p); }

int legendre(const Int& a, const Int& p) { return mpz_legendre(a.get_mpz_t(), p.get_mpz_t()); }

}  // namespace

std::string Algebra::describe() const {
  std::ostringstream os;
  switch (kind) {
    case RingKind::Integer:
      os << "Z (F = " << q << ")";
      break;
    case RingKind::Quadratic:
      os << "Z[F], F^2 = " << a << "*F - " << q;
      break;
    case RingKind::Quaternion:
      os << "quaternion order in (" << a << "," << b << "/Q), q = " << q;
      break;
  }
  return os.str();
}

std::shared_ptr<const Algebra> make_integer_ring(const Int& q) {
  auto A = std::make_shared<Algebra>();
  A->kind = RingKind::Integer;
  A->dim = 1;
  A->q = q;
  A->frob = {Rat(q)};
  A->order_basis = RatMatrix::identity(1, Rat(0), Rat(1));
  A->table = empty_table(1);
  A->table[0][0][0] = 1;
  std::shared_ptr<const Algebra> out = A;
  check_frobenius(out);
  return out;
}

std::shared_ptr<const Algebra> make_quadratic_ring(const Rat& trace, const Int& q) {
  const Rat disc = trace * trace - 4 * Rat(q);
  if (disc >= 0) {
    Int s = square_free_integer(disc), r;
    mpz_sqrt(r.get_mpz_t(), s.get_mpz_t());
    if (r * r == s) throw DomainError("x^2 - a x + q is reducible over Q; Q(F) is not a field");
  }
  if (!is_integer(trace)) throw DomainError("Frobenius trace must be an integer");
  auto A = std::make_shared<Algebra>();
  A->kind = RingKind::Quadratic;
  A->dim = 2;
  A->a = trace;
  A->b = Rat(q);
  A->q = q;
  A->frob = {Rat(0), Rat(1)};
  A->order_basis = RatMatrix::identity(2, Rat(0), Rat(1));
  A->table = empty_table(2);
  A->table[0][0] = {Rat(1), Rat(0)};
  A->table[0][1] = {Rat(0), Rat(1)};
  A->table[1][0] = {Rat(0), Rat(1)};
  A->table[1][1] = {-Rat(q), trace};
  check_order(*A);
  std::shared_ptr<const Algebra> out = A;
  check_frobenius(out);
  return out;
}

int hilbert_symbol(Int a, Int b, const Int& v) {
  if (a == 0 || b == 0) throw DomainError("Hilbert symbol of zero");
  if (v == 0) return (a < 0 && b < 0) ? -1 : 1;
  const long alpha = static_cast<long>(valuation(a, v));
  const long beta = static_cast<long>(valuation(b, v));
  if (v == 2) {
    auto eps = [](const Int& u) { return mod(u, Int(4)) == 3 ? 1 : 0; };
    auto omega = [](const Int& u) {
      const Int r = mod(u, Int(8));
      return (r == 3 || r == 5) ? 1 : 0;
    };
    const long e = eps(a) * eps(b) + alpha * omega(b) + beta * omega(a);
    return e % 2 ? -1 : 1;
  }
  int s = 1;
  const Int half = (v - 1) / 2;
  if ((alpha * beta) % 2 && mpz_odd_p(half.get_mpz_t())) s = -s;
  if (beta % 2) s *= legendre(a, v);
  if (alpha % 2) s *= legendre(b, v);
  return s;
}

bool quaternion_is_division(const Rat& a, const Rat& b) {
  if (a == 0 || b == 0) throw DomainError("quaternion parameters must be nonzero");
  const Int A = square_free_integer(a), B = square_free_integer(b);
  if (hilbert_symbol(A, B, Int(0)) == -1) return true;
  std::vector<Int> places = {Int(2)};
  for (const auto& f : prime_factors(abs(A))) places.push_back(f);
  for (const auto& f : prime_factors(abs(B))) places.push_back(f);
  for (const auto& v : places)
    if (hilbert_symbol(A, B, v) == -1) return true;
  return false;
}

std::shared_ptr<const Algebra> make_quaternion_ring(const Rat& a, const Rat& b,
                                                    const std::vector<Rat>& frob, const Int& q,
                                                    std::optional<RatMatrix> order_basis) {
  if (!quaternion_is_division(a, b))
    throw DomainError("(a, b / Q) is split; a division algebra is required");
  if (frob.size() != 4) throw DomainError("Frobenius needs 4 quaternion coordinates");
  auto A = std::make_shared<Algebra>();
  A->kind = RingKind::Quaternion;
  A->dim = 4;
  A->a = a;
  A->b = b;
  A->q = q;
  A->frob = frob;
  A->order_basis = order_basis ? *order_basis : RatMatrix::identity(4, Rat(0), Rat(1));
  // 1, i, j, k with k = ij.
  Table t = empty_table(4);
  for (unsigned i = 0; i < 4; ++i) {
    t[0][i] = unit(4, i);
    t[i][0] = unit(4, i);
  }
  auto set = [&](unsigned x, unsigned y, unsigned k, const Rat& c) {
    t[x][y] = std::vector<Rat>(4, Rat(0));
    t[x][y][k] = c;
  };
  set(1, 1, 0, a);
  set(2, 2, 0, b);
  set(3, 3, 0, -a * b);
  set(1, 2, 3, Rat(1));
  set(2, 1, 3, Rat(-1));
  set(1, 3, 2, a);
  set(3, 1, 2, -a);
  set(2, 3, 1, -b);
  set(3, 2, 1, b);
  A->table = std::move(t);
  check_order(*A);
  std::shared_ptr<const Algebra> out = A;
  check_frobenius(out);
  return out;
}

Elem::Elem(std::shared_ptr<const Algebra> alg, std::vector<Rat> c) : alg_(std::move(alg)), c_(std::move(c)) {
  if (!alg_) throw DomainError("element without algebra");
  if (c_.size() != alg_->dim) throw DomainError("coordinate vector has wrong length");
}

Elem Elem::scalar(std::shared_ptr<const Algebra> alg, const Rat& r) {
  std::vector<Rat> c(alg->dim, Rat(0));
  c[0] = r;
  return Elem(std::move(alg), std::move(c));
}

Elem Elem::frobenius(std::shared_ptr<const Algebra> alg) {
  auto c = alg->frob;
  return Elem(std::move(alg), std::move(c));
}

Elem Elem::basis(std::shared_ptr<const Algebra> alg, unsigned i) {
  const unsigned n = alg->dim;
  return Elem(std::move(alg), unit(n, i));
}

bool Elem::zero() const {
  for (const auto& x : c_)
    if (x != 0) return false;
  return true;
}

bool Elem::is_rational() const {
  for (std::size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

Rat Elem::rational() const {
  if (!is_rational()) throw DomainError("element is not rational: " + str());
  return c_.empty() ? Rat(0) : c_[0];
}

bool Elem::is_central() const {
  for (unsigned i = 0; i < alg_->dim; ++i) {
    const Elem e = basis(alg_, i);
    if (!(e * *this == *this * e)) return false;
  }
  return true;
}

namespace {
// Unset (default-constructed) elements behave as zero.
const std::shared_ptr<const Algebra>& common(const Elem& x, const Elem& y) {
  if (x.algebra() && y.algebra() && x.algebra() != y.algebra() &&
      x.algebra()->table != y.algebra()->table)
    throw DomainError("elements of different algebras");
  return x.algebra() ? x.algebra() : y.algebra();
}
}  // namespace

Elem operator+(const Elem& x, const Elem& y) {
  if (!x.alg_) return y;
  if (!y.alg_) return x;
  common(x, y);
  std::vector<Rat> c(x.c_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = x.c_[i] + y.c_[i];
  return Elem(x.alg_, std::move(c));
}

Elem operator-(const Elem& x) {
  if (!x.alg_) return x;
  std::vector<Rat> c(x.c_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = -x.c_[i];
  return Elem(x.alg_, std::move(c));
}

Elem operator-(const Elem& x, const Elem& y) { return x + (-y); }

Elem operator*(const Elem& x, const Elem& y) {
  if (!x.alg_) return x;
  if (!y.alg_) return y;
  const auto& A = common(x, y);
  return Elem(A, mul_coords(*A, x.c_, y.c_));
}

Elem operator*(const Rat& r, const Elem& x) {
  if (!x.alg_) return x;
  std::vector<Rat> c(x.c_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = r * x.c_[i];
  return Elem(x.alg_, std::move(c));
}

bool operator<(const Elem& x, const Elem& y) { return x.c_ < y.c_; }

Elem Elem::pow(long e) const {
  Elem base = e < 0 ? inv(*this) : *this;
  unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
  Elem r = scalar(alg_, Rat(1));
  while (k) {
    if (k & 1UL) r = r * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return r;
}

std::vector<Rat> Elem::order_coords() const { return coords_over_order(*alg_, c_); }

Int Elem::order_denominator() const {
  Int d = 1;
  for (const auto& c : order_coords()) d = lcm(d, Int(c.get_den()));
  return d;
}

std::string Elem::str() const {
  if (!alg_) return "0";
  static const char* names[2][4] = {{"", "F", "", ""}, {"", "i", "j", "k"}};
  const int row = alg_->kind == RingKind::Quaternion ? 1 : 0;
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    Rat c = c_[i];
    if (!first) {
      os << (c < 0 ? " - " : " + ");
      c = abs(c);
    }
    if (i == 0)
      os << c;
    else if (c == 1)
      os << names[row][i];
    else if (c == -1)
      os << "-" << names[row][i];
    else
      os << c << "*" << names[row][i];
    first = false;
  }
  return first ? "0" : os.str();
}

Elem inv(const Elem& x) {
  if (x.zero()) throw DomainError("inverse of zero ring element");
  const auto& A = x.algebra();
  auto y = solve_right(regular_representation(x), unit(A->dim, 0));
  if (!y) throw DomainError("ring element is a zero divisor: " + x.str());
  return Elem(A, std::move(*y));
}

Elem one_like(const Elem& x) { return Elem::scalar(x.algebra(), Rat(1)); }

RatMatrix regular_representation(const Elem& x) {
  const auto& A = *x.algebra();
  RatMatrix m(A.dim, A.dim, Rat(0));
  for (unsigned j = 0; j < A.dim; ++j) {
    auto col = mul_coords(A, x.coords(), unit(A.dim, j));
    for (unsigned i = 0; i < A.dim; ++i) m(i, j) = col[i];
  }
  return m;
}

EndoMatrix endo_zero(std::shared_ptr<const Algebra> alg, std::size_t r, std::size_t c) {
  return EndoMatrix(r, c, Elem::scalar(std::move(alg), Rat(0)));
}

EndoMatrix endo_identity(std::shared_ptr<const Algebra> alg, std::size_t n) {
  const Elem z = Elem::scalar(alg, Rat(0));
  return EndoMatrix::identity(n, z, Elem::scalar(alg, Rat(1)));
}

EndoMatrix endo_from_rational(std::shared_ptr<const Algebra> alg, const RatMatrix& m) {
  return m.map([&](const Rat& r) { return Elem::scalar(alg, r); });
}

RatMatrix endo_to_rational(const EndoMatrix& m) {
  return m.map([](const Elem& e) { return e.algebra() ? e.rational() : Rat(0); });
}

Int endo_denominator(const EndoMatrix& m) {
  Int d = 1;
  for (const auto& e : m.data()) d = lcm(d, e.order_denominator());
  return d;
}

RatMatrix endo_flatten(const EndoMatrix& m) {
  const unsigned k = m.zero().algebra()->dim;
  RatMatrix out(m.rows() * k, m.cols() * k, Rat(0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out.set_block(i * k, j * k, regular_representation(m(i, j)));
  return out;
}

bool endo_invertible(const EndoMatrix& m) {
  return m.square() && (m.rows() == 0 || rank(endo_flatten(m)) == m.rows() * m.zero().algebra()->dim);
}

bool center_is_rational(const Algebra& alg) { return alg.kind != RingKind::Quadratic; }

CenterPoly center_poly_from_rational(std::shared_ptr<const Algebra> alg, const std::vector<Rat>& c) {
  std::vector<Elem> out;
  for (const auto& r : c) out.push_back(Elem::scalar(alg, r));
  return CenterPoly(std::move(out), Elem::scalar(alg, Rat(0)));
}

std::optional<std::vector<Rat>> center_poly_rational(const CenterPoly& p) {
  std::vector<Rat> out;
  for (const auto& c : p.coeffs()) {
    if (!c.is_rational()) return std::nullopt;
    out.push_back(c.rational());
  }
  return out;
}

CenterPoly center_x(std::shared_ptr<const Algebra> alg) {
  return CenterPoly::x(Elem::scalar(std::move(alg), Rat(0)));
}

CenterPoly center_const(const Elem& c) {
  return CenterPoly::constant(c, Elem::scalar(c.algebra(), Rat(0)));
}

EndoMatrix eval_center_poly(const CenterPoly& p, const EndoMatrix& A) {
  return eval_matrix(p, A, [](const Elem& e) { return e; });
}

std::string to_string(const CenterPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (long i = p.degree(); i >= 0; --i) {
    const Elem& c = p.coeffs()[static_cast<std::size_t>(i)];
    if (c.zero()) continue;
    std::string cs;
    bool negative = false;
    if (c.is_rational()) {
      Rat r = c.rational();
      negative = r < 0;
      if (!first) r = abs(r);
      cs = (r == 1 && i > 0) ? "" : (r == -1 && i > 0) ? "-" : r.get_str();
    } else {
      cs = "(" + c.str() + ")";
    }
    if (!first) os << (negative ? " - " : " + ");
    os << cs;
    if (i > 0) {
      if (!cs.empty() && cs != "-") os << "*";
      os << "x";
      if (i > 1) os << "^" << i;
    }
    first = false;
  }
  return os.str();
}

namespace {

// Coordinates of a matrix as a vector over the center.
std::vector<Elem> center_coords(const EndoMatrix& A) {
  std::vector<Elem> out;
  const auto& alg = A.zero().algebra();
  for (const auto& e : A.data()) {
    if (!center_is_rational(*alg))
      out.push_back(e);
    else
      for (const auto& c : e.coords()) out.push_back(Elem::scalar(alg, c));
  }
  return out;
}

}  // namespace

CenterPoly min_poly_over_center(const EndoMatrix& A) {
  if (!A.square()) throw DomainError("min_poly_over_center: matrix not square");
  const auto& alg = A.zero().algebra();
  const Elem zero = Elem::scalar(alg, Rat(0)), one = Elem::scalar(alg, Rat(1));
  if (A.rows() == 0) return CenterPoly::constant(one, zero);
  std::vector<std::vector<Elem>> powers;
  EndoMatrix P = endo_identity(alg, A.rows());
  for (;;) {
    auto v = center_coords(P);
    if (!powers.empty()) {
      Matrix<Elem> M(v.size(), powers.size(), zero);
      for (std::size_t j = 0; j < powers.size(); ++j)
        for (std::size_t i = 0; i < v.size(); ++i) M(i, j) = powers[j][i];
      if (auto c = solve_right(M, v)) {
        std::vector<Elem> coeffs;
        for (const auto& x : *c) coeffs.push_back(zero - x);
        coeffs.push_back(one);
        return CenterPoly(std::move(coeffs), zero);
      }
    }
    powers.push_back(std::move(v));
    P = P * A;
  }
}

std::complex<double> embed(const Elem& z) {
  const auto& A = *z.algebra();
  if (center_is_rational(A)) return {z.rational().get_d(), 0.0};
  const double a = A.a.get_d(), q = A.q.get_d();
  const double disc = a * a - 4 * q;
  const std::complex<double> F =
      disc < 0 ? std::complex<double>(a / 2, std::sqrt(-disc) / 2) : std::complex<double>((a + std::sqrt(disc)) / 2, 0);
  return z.coords()[0].get_d() + z.coords()[1].get_d() * F;
}

std::vector<std::complex<double>> numeric_roots(const CenterPoly& p) {
  const long n = p.degree();
  if (n <= 0) return {};
  std::vector<std::complex<double>> c;
  for (const auto& e : p.coeffs()) c.push_back(embed(e));
  const std::complex<double> lead = c.back();
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
  for (long i = 1; i < n; ++i) M(i, i - 1) = 1;
  for (long i = 0; i < n; ++i) M(i, n - 1) = -c[static_cast<std::size_t>(i)] / lead;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
  std::vector<std::complex<double>> roots;
  for (long i = 0; i < n; ++i) {
    std::complex<double> z = es.eigenvalues()(i);
    // Newton polish.
    for (int it = 0; it < 3; ++it) {
      std::complex<double> f = 0, df = 0;
      for (auto k = c.rbegin(); k != c.rend(); ++k) {
        df = df * z + f;
        f = f * z + *k;
      }
      if (std::abs(df) < 1e-300) break;
      const std::complex<double> step = f / df;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      z -= step;
    }
    roots.push_back(z);
  }
  std::sort(roots.begin(), roots.end(), [](auto x, auto y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return roots;
}

CenterPoly squarefree_part(const CenterPoly& g) {
  if (g.degree() <= 0) return g.monic();
  return (g / gcd(g, g.derivative())).monic();
}

unsigned root_multiplicity(const CenterPoly& g, const Elem& r) {
  unsigned m = 0;
  CenterPoly h = g;
  const CenterPoly lin = CenterPoly::linear_root(r, g.zero());
  while (!h.is_zero()) {
    auto [qq, rr] = divmod(h, lin);
    if (!rr.is_zero()) break;
    h = qq;
    ++m;
  }
  return m;
}

namespace {

CenterPoly power_poly(const std::shared_ptr<const Algebra>& alg, long m, long k) {
  const Elem zero = Elem::scalar(alg, Rat(0));
  const Elem Fk = Elem::frobenius(alg).pow(k);
  return CenterPoly::monomial(one_like(zero), static_cast<std::size_t>(m), zero) - center_const(Fk);
}

}  // namespace

bool shares_root_with_power(const CenterPoly& g, long m, long k) {
  if (m < 1) throw DomainError("power must be positive");
  return gcd(g, power_poly(g.zero().algebra(), m, k)).degree() >= 1;
}

std::optional<FrobeniusPower> is_frobenius_power(const CenterPoly& g, std::complex<double> lambda,
                                                 long m_bound) {
  if (m_bound < 1) throw DomainError("m_bound must be positive");
  if (std::abs(lambda) < 1e-300) throw DomainError("zero eigenvalue");
  const auto& alg = g.zero().algebra();
  const CenterPoly h = squarefree_part(g);
  const auto roots = numeric_roots(h);
  double sep = 1.0;
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j) sep = std::min(sep, std::abs(roots[i] - roots[j]));
  const std::complex<double> F = embed(Elem::frobenius(alg));
  const double r = std::log(std::abs(lambda)) / std::log(std::abs(F));
  for (long m = 1; m <= m_bound; ++m) {
    const double km = r * static_cast<double>(m);
    const long k = std::lround(km);
    if (std::abs(km - static_cast<double>(k)) > 1e-6 * static_cast<double>(m)) continue;
    const CenterPoly c = gcd(h, power_poly(alg, m, k));
    if (c.degree() < 1) continue;
    // lambda must be one of the roots of c, not merely close to F^k/m.
    bool hit = false;
    for (const auto& z : numeric_roots(c))
      if (std::abs(z - lambda) < sep / 3) hit = true;
    if (hit) return FrobeniusPower{m, k};
  }
  return std::nullopt;
}

bool is_nfp(const EndoMatrix& A, long m_bound) {
  const CenterPoly g = min_poly_over_center(A);
  for (const auto& z : numeric_roots(squarefree_part(g)))
    if (is_frobenius_power(g, z, m_bound)) return false;
  return true;
}

std::vector<Rat> cyclotomic(unsigned long n) {
  if (n == 0) throw DomainError("cyclotomic index must be positive");
  using P = UPoly<Rat>;
  const Rat z(0);
  P num = P::monomial(Rat(1), n, z) - P::constant(Rat(1), z);
  for (unsigned long d = 1; d < n; ++d)
    if (n % d == 0) num = num / P(cyclotomic(d), z);
  return num.coeffs();
}

}  // namespace frobdyn
