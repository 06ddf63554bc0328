#include "frobdyn/lattice.hpp"

#include <algorithm>
#include <stdexcept>

#include "frobdyn/errors.hpp"

namespace frobdyn {

namespace {

void row_axpy(IntMatrix& m, std::size_t dst, std::size_t src, const Int& f) {
  if (f == 0) return;
  for (std::size_t c = 0; c < m.cols(); ++c) m(dst, c) -= f * m(src, c);
}

}  // namespace

IntMatrix hnf_rows(IntMatrix m) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    for (;;) {
      std::size_t best = m.rows();
      for (std::size_t i = r; i < m.rows(); ++i) {
        if (m(i, c) == 0) continue;
        if (best == m.rows() || abs(m(i, c)) < abs(m(best, c))) best = i;
      }
      if (best == m.rows()) break;
      m.swap_rows(best, r);
      bool clean = true;
      for (std::size_t i = r + 1; i < m.rows(); ++i) {
        if (m(i, c) == 0) continue;
        row_axpy(m, i, r, floor_div(m(i, c), m(r, c)));
        if (m(i, c) != 0) clean = false;
      }
      if (clean) break;
    }
    if (m(r, c) == 0) continue;
    if (m(r, c) < 0)
      for (std::size_t k = 0; k < m.cols(); ++k) m(r, k) = -m(r, k);
    for (std::size_t i = 0; i < r; ++i) row_axpy(m, i, r, floor_div(m(i, c), m(r, c)));
    ++r;
  }
  return m.block(0, 0, r, m.cols());
}

IntMatrix integer_kernel(const IntMatrix& m) {
  const std::size_t n = m.cols(), k = m.rows();
  IntMatrix aug(n, k + n, Int(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) aug(i, j) = m(j, i);
    aug(i, k + i) = 1;
  }
  IntMatrix h = hnf_rows(aug);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    bool zero = true;
    for (std::size_t j = 0; j < k && zero; ++j) zero = h(i, j) == 0;
    if (zero) keep.push_back(i);
  }
  IntMatrix out(keep.size(), n, Int(0));
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = h(keep[i], k + j);
  return out;
}

Int norm_sq(std::span<const Int> v) {
  Int s = 0;
  for (const auto& x : v) s += x * x;
  return s;
}

IntMatrix lll(IntMatrix b) {
  const std::size_t n = b.rows(), dim = b.cols();
  if (n <= 1) return b;
  auto dot = [&](std::size_t i, const std::vector<Rat>& v) {
    Rat s = 0;
    for (std::size_t c = 0; c < dim; ++c) s += Rat(b(i, c)) * v[c];
    return s;
  };
  std::vector<std::vector<Rat>> bs(n, std::vector<Rat>(dim));
  std::vector<Rat> bn(n);
  RatMatrix mu(n, n, Rat(0));
  auto gram_schmidt = [&]() {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < dim; ++c) bs[i][c] = b(i, c);
      for (std::size_t j = 0; j < i; ++j) {
        mu(i, j) = bn[j] == 0 ? Rat(0) : dot(i, bs[j]) / bn[j];
        for (std::size_t c = 0; c < dim; ++c) bs[i][c] -= mu(i, j) * bs[j][c];
      }
      bn[i] = 0;
      for (std::size_t c = 0; c < dim; ++c) bn[i] += bs[i][c] * bs[i][c];
    }
  };
  gram_schmidt();
  const Rat delta(3, 4);
  std::size_t k = 1;
  while (k < n) {
    for (std::size_t jj = k; jj-- > 0;) {
      Int q = round_nearest(mu(k, jj));
      if (q == 0) continue;
      row_axpy(b, k, jj, q);
      for (std::size_t l = 0; l < jj; ++l) mu(k, l) -= Rat(q) * mu(jj, l);
      mu(k, jj) -= Rat(q);
    }
    if (bn[k] >= (delta - mu(k, k - 1) * mu(k, k - 1)) * bn[k - 1]) {
      ++k;
    } else {
      b.swap_rows(k, k - 1);
      gram_schmidt();
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
  return b;
}

std::vector<Int> smith_invariants(IntMatrix m) {
  std::vector<Int> out;
  const std::size_t R = m.rows(), C = m.cols();
  for (std::size_t t = 0; t < std::min(R, C); ++t) {
    for (;;) {
      std::size_t bi = R, bj = C;
      for (std::size_t i = t; i < R; ++i)
        for (std::size_t j = t; j < C; ++j)
          if (m(i, j) != 0 && (bi == R || abs(m(i, j)) < abs(m(bi, bj)))) {
            bi = i;
            bj = j;
          }
      if (bi == R) {
        std::sort(out.begin(), out.end());
        return out;
      }
      m.swap_rows(bi, t);
      if (bj != t)
        for (std::size_t i = 0; i < R; ++i) std::swap(m(i, bj), m(i, t));
      bool done = true;
      for (std::size_t i = t + 1; i < R; ++i) {
        if (m(i, t) == 0) continue;
        row_axpy(m, i, t, floor_div(m(i, t), m(t, t)));
        if (m(i, t) != 0) done = false;
      }
      for (std::size_t j = t + 1; j < C; ++j) {
        if (m(t, j) == 0) continue;
        Int f = floor_div(m(t, j), m(t, t));
        for (std::size_t i = 0; i < R; ++i) m(i, j) -= f * m(i, t);
        if (m(t, j) != 0) done = false;
      }
      if (!done) continue;
      // Pivot must divide the remaining block.
      bool divides = true;
      for (std::size_t i = t + 1; i < R && divides; ++i)
        for (std::size_t j = t + 1; j < C; ++j)
          if (!mpz_divisible_p(m(i, j).get_mpz_t(), m(t, t).get_mpz_t())) {
            for (std::size_t c = 0; c < C; ++c) m(t, c) += m(i, c);
            divides = false;
            break;
          }
      if (divides) break;
    }
    out.push_back(abs(m(t, t)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Int saturation_exponent(const IntMatrix& gens) {
  auto inv = smith_invariants(gens);
  return inv.empty() ? Int(1) : inv.back();
}

std::optional<std::vector<Int>> hnf_solve(const IntMatrix& hnf, std::vector<Int> v) {
  if (v.size() != hnf.cols()) throw std::invalid_argument("hnf_solve: length mismatch");
  std::vector<Int> coeff(hnf.rows());
  std::size_t c = 0;
  for (std::size_t r = 0; r < hnf.rows(); ++r) {
    while (c < hnf.cols() && hnf(r, c) == 0) {
      if (v[c] != 0) return std::nullopt;
      ++c;
    }
    if (!mpz_divisible_p(v[c].get_mpz_t(), hnf(r, c).get_mpz_t())) return std::nullopt;
    coeff[r] = v[c] / hnf(r, c);
    for (std::size_t k = 0; k < hnf.cols(); ++k) v[k] -= coeff[r] * hnf(r, k);
  }
  for (const auto& x : v)
    if (x != 0) return std::nullopt;
  return coeff;
}

IntMatrix scale_to_integer(const RatMatrix& m, Int* scale_out) {
  Int l = 1;
  for (const auto& x : m.data()) l = lcm(l, x.get_den());
  IntMatrix out(m.rows(), m.cols(), Int(0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      Rat s = m(i, j) * Rat(l);
      out(i, j) = s.get_num();
    }
  if (scale_out) *scale_out = l;
  return out;
}

RatMatrix to_rat(const IntMatrix& m) {
  return m.map([](const Int& x) { return Rat(x); });
}

}  // namespace frobdyn
