#include "frobdyn/exp_point.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace frobdyn {

Rat torsion_canon(const Rat& t, const Int& p) {
  Int den = t.get_den();
  const unsigned long k = strip_prime(den, p);
  if (den == 1) return Rat(0);
  Int num = t.get_num();
  if (k > 0) num = num * inv_mod(ipow(p, k), den);
  return make_rat(mod(num, den), den);
}

bool ExpCoord::is_identity() const {
  if (tors != 0) return false;
  for (const auto& x : e)
    if (x != 0) return false;
  return true;
}

ExpCoord add(const ExpCoord& a, const ExpCoord& b, const Int& p) {
  if (a.e.size() != b.e.size()) throw DomainError("exponent vectors over different bases");
  ExpCoord r;
  r.e.resize(a.e.size());
  for (std::size_t i = 0; i < a.e.size(); ++i) r.e[i] = a.e[i] + b.e[i];
  r.tors = torsion_canon(a.tors + b.tors, p);
  return r;
}

ExpCoord neg(const ExpCoord& a, const Int& p) { return scale(a, Rat(-1), p); }

ExpCoord scale(const ExpCoord& a, const Rat& r, const Int& p) {
  ExpCoord out;
  out.e.resize(a.e.size());
  for (std::size_t i = 0; i < a.e.size(); ++i) out.e[i] = a.e[i] * r;
  out.tors = torsion_canon(a.tors * r, p);
  return out;
}

CoprimeBasis coprime_basis(std::shared_ptr<const FunctionField> K,
                           const std::vector<RationalFunction>& elems) {
  std::vector<MPoly> B;
  std::function<void(const MPoly&)> insert = [&](const MPoly& g0) {
    if (g0.is_zero()) throw DomainError("zero polynomial in coprime basis input");
    if (g0.is_constant()) return;
    MPoly g = g0.monic();
    for (std::size_t i = 0; i < B.size(); ++i) {
      MPoly h = gcd(g, B[i]);
      if (h.is_constant()) continue;
      MPoly b = B[i];
      B.erase(B.begin() + static_cast<long>(i));
      insert(h);
      insert(*exact_divide(b, h));
      insert(*exact_divide(g, h));
      return;
    }
    B.push_back(g);
  };
  for (const auto& x : elems) {
    if (x.is_zero()) throw DomainError("coprime_basis: zero element");
    insert(x.num());
    insert(x.den());
  }
  std::sort(B.begin(), B.end(), [](const MPoly& a, const MPoly& b) {
    if (a.total_degree() != b.total_degree()) return a.total_degree() < b.total_degree();
    return a < b;
  });
  return {std::move(K), std::move(B)};
}

ExpCoord to_exponents(const RationalFunction& x, const CoprimeBasis& B) {
  if (x.is_zero()) throw DomainError("to_exponents: zero element");
  const Int p = B.p();
  ExpCoord out = ExpCoord::identity(B.size());
  MPoly num = x.num(), den = x.den();
  for (std::size_t i = 0; i < B.size(); ++i) {
    const MPoly& f = B.elems[i];
    for (;;) {
      auto q = exact_divide(num, f);
      if (!q) break;
      num = std::move(*q);
      out.e[i] += 1;
    }
    for (;;) {
      auto q = exact_divide(den, f);
      if (!q) break;
      den = std::move(*q);
      out.e[i] -= 1;
    }
  }
  if (!num.is_constant() || !den.is_constant()) {
    const RationalFunction residual(num, den);
    throw NotInSpan("element not generated by the coprime basis", residual.str(B.K->names));
  }
  const FiniteField& F = *B.K->F;
  const FFElem c = num.constant_term() * inv(den.constant_term());
  out.tors = torsion_canon(make_rat(F.dlog(c), F.order() - 1), p);
  return out;
}

RationalFunction reconstruct(const ExpCoord& x, const CoprimeBasis& B) {
  const FunctionField& K = *B.K;
  const Int qm1 = B.torsion_modulus();
  const Rat k = x.tors * Rat(qm1);
  if (!is_integer(k)) throw DomainError("torsion not defined over the constant field");
  RationalFunction r = RationalFunction::constant(K, K.F->primitive().pow(k.get_num()));
  for (std::size_t i = 0; i < B.size(); ++i) {
    if (x.e[i] == 0) continue;
    if (!is_integer(x.e[i])) throw DomainError("fractional exponent cannot be reconstructed");
    r = r * RationalFunction::from_poly(B.elems[i]).pow(x.e[i].get_num().get_si());
  }
  return r;
}

ExpCoord rebase(const ExpCoord& x, const CoprimeBasis& from, const CoprimeBasis& to) {
  const Int p = to.p();
  ExpCoord out = ExpCoord::identity(to.size());
  out.tors = x.tors;
  for (std::size_t i = 0; i < from.size(); ++i) {
    if (x.e[i] == 0) continue;
    ExpCoord f = to_exponents(RationalFunction::from_poly(from.elems[i]), to);
    out = add(out, scale(f, x.e[i], p), p);
  }
  return out;
}

ExpCoord frobenius_apply(const ExpCoord& x, const Int& q, const Int& p) { return scale(x, Rat(q), p); }

ExpPoint frobenius_apply(const ExpPoint& x, const Int& q, const Int& p) {
  ExpPoint out;
  for (const auto& c : x) out.push_back(frobenius_apply(c, q, p));
  return out;
}

ExpPoint add(const ExpPoint& a, const ExpPoint& b, const Int& p) {
  if (a.size() != b.size()) throw DomainError("points of different dimension");
  ExpPoint out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(add(a[i], b[i], p));
  return out;
}

ExpPoint apply_matrix(const RatMatrix& A, const ExpPoint& x, const Int& p) {
  if (A.cols() != x.size()) throw DomainError("matrix/point dimension mismatch");
  const std::size_t s = x.empty() ? 0 : x[0].e.size();
  ExpPoint out(A.rows(), ExpCoord::identity(s));
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j)
      if (A(i, j) != 0) out[i] = add(out[i], scale(x[j], A(i, j), p), p);
  return out;
}

IntMatrix relation_lattice(const std::vector<ExpCoord>& xs, const Int& p) {
  const std::size_t n = xs.size();
  if (n == 0) return IntMatrix(0, 0, Int(0));
  const std::size_t s = xs[0].e.size();
  RatMatrix E(s, n, Rat(0));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < s; ++i) E(i, j) = xs[j].e[i];
  IntMatrix K = integer_kernel(scale_to_integer(E));
  const std::size_t r = K.rows();
  if (r == 0) return K;
  std::vector<Rat> tau(r);
  Int D = 1;
  for (std::size_t i = 0; i < r; ++i) {
    Rat t = 0;
    for (std::size_t j = 0; j < n; ++j) t += Rat(K(i, j)) * xs[j].tors;
    tau[i] = torsion_canon(t, p);
    D = lcm(D, tau[i].get_den());
  }
  if (D == 1) return lll(K);
  IntMatrix row(1, r + 1, Int(0));
  for (std::size_t i = 0; i < r; ++i) row(0, i) = Rat(tau[i] * Rat(D)).get_num();
  row(0, r) = D;
  IntMatrix ker = integer_kernel(row);
  IntMatrix A(ker.rows(), r, Int(0));
  for (std::size_t i = 0; i < ker.rows(); ++i)
    for (std::size_t j = 0; j < r; ++j) A(i, j) = ker(i, j);
  return lll(hnf_rows(A * K));
}

IntMatrix joint_relation_lattice(const std::vector<std::vector<ExpCoord>>& rows, std::size_t n, const Int& p) {
  IntMatrix L = IntMatrix::identity(n, Int(0), Int(1));
  for (const auto& row : rows) {
    if (L.rows() == 0) break;
    if (row.size() != n) throw DomainError("joint_relation_lattice: row length mismatch");
    // Images of the current basis vectors; relations among them cut L down.
    std::vector<ExpCoord> img;
    for (std::size_t r = 0; r < L.rows(); ++r) {
      ExpCoord acc = ExpCoord::identity(row.empty() ? 0 : row[0].e.size());
      for (std::size_t i = 0; i < n; ++i)
        if (L(r, i) != 0) acc = add(acc, scale(row[i], Rat(L(r, i)), p), p);
      img.push_back(acc);
    }
    const IntMatrix C = relation_lattice(img, p);
    if (C.rows() == 0) return IntMatrix(0, n, Int(0));
    L = lll(hnf_rows(C * L));
  }
  return L;
}

std::optional<std::vector<Int>> mult_dependence(const std::vector<ExpCoord>& xs, const Int& p) {
  IntMatrix L = relation_lattice(xs, p);
  if (L.rows() == 0) return std::nullopt;
  std::size_t best = 0;
  for (std::size_t i = 1; i < L.rows(); ++i)
    if (norm_sq(L.row(i)) < norm_sq(L.row(best))) best = i;
  std::vector<Int> v(L.row(best).begin(), L.row(best).end());
  for (const auto& x : v) {
    if (x == 0) continue;
    if (x < 0)
      for (auto& y : v) y = -y;
    break;
  }
  return v;
}

std::optional<std::vector<Int>> mult_dependence(std::shared_ptr<const FunctionField> K,
                                                const std::vector<RationalFunction>& xs) {
  for (const auto& x : xs)
    if (x.is_zero()) throw DomainError("mult_dependence: zero element");
  CoprimeBasis B = coprime_basis(K, xs);
  std::vector<ExpCoord> cs;
  for (const auto& x : xs) cs.push_back(to_exponents(x, B));
  return mult_dependence(cs, B.p());
}

std::string to_string(const ExpCoord& x) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < x.e.size(); ++i) os << (i ? "," : "") << x.e[i].get_str();
  os << "|" << x.tors.get_str() << ')';
  return os.str();
}

}  // namespace frobdyn
