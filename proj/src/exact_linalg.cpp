#include "polygen/exact_linalg.hpp"

#include <sstream>

namespace polygen {

namespace {

template <typename T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: shape mismatch");
  Matrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

template <typename T>
std::vector<T> apply(const Matrix<T>& a, std::span<const T> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("matrix-vector product: shape mismatch");
  std::vector<T> y(a.rows(), T(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

// Row-echelon reduction over Q; returns the rank and leaves m reduced.
std::size_t eliminate(RatMat& m) {
  std::size_t r = 0;
  for (std::size_t j = 0; j < m.cols() && r < m.rows(); ++j) {
    std::size_t p = r;
    while (p < m.rows() && m(p, j) == 0) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(r, p);
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (m(i, j) == 0) continue;
      Rat f = m(i, j) / m(r, j);
      for (std::size_t k = j; k < m.cols(); ++k) m(i, k) -= f * m(r, k);
    }
    ++r;
  }
  return r;
}

void row_axpy(IntMat& m, std::size_t dst, std::size_t src, const Int& q) {
  // row[dst] -= q * row[src]
  for (std::size_t k = 0; k < m.cols(); ++k) m(dst, k) -= q * m(src, k);
}

void negate_row(IntMat& m, std::size_t i) {
  for (std::size_t k = 0; k < m.cols(); ++k) m(i, k) = -m(i, k);
}

}  // namespace

IntMat operator*(const IntMat& a, const IntMat& b) { return multiply(a, b); }
RatMat operator*(const RatMat& a, const RatMat& b) { return multiply(a, b); }
IntVec operator*(const IntMat& a, std::span<const Int> x) { return apply(a, x); }
RatVec operator*(const RatMat& a, std::span<const Rat> x) { return apply(a, x); }

RatMat to_rat(const IntMat& m) {
  RatMat r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rat(m(i, j));
  return r;
}

RatVec to_rat(std::span<const Int> v) { return RatVec(v.begin(), v.end()); }

Int dot(std::span<const Int> a, std::span<const Int> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rat dot(std::span<const Int> a, std::span<const Rat> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += Rat(a[i]) * b[i];
  return s;
}

Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw std::invalid_argument("make_rat: zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

Int gcd_of(std::span<const Int> v) {
  Int g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  return g;
}

Int det(const IntMat& m) {
  if (!m.is_square()) throw std::invalid_argument("det: matrix is not square");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMat a = m;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Int t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

Rat det(const RatMat& m) {
  if (!m.is_square()) throw std::invalid_argument("det: matrix is not square");
  RatMat a = m;
  Rat d = 1;
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      a.swap_rows(k, p);
      d = -d;
    }
    d *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rat f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return d;
}

std::size_t rank(const RatMat& m) {
  RatMat a = m;
  return eliminate(a);
}

std::size_t rank(const IntMat& m) { return rank(to_rat(m)); }

HnfResult hnf(const IntMat& m) {
  IntMat h = m;
  IntMat u = IntMat::identity(m.rows());
  std::size_t r = 0;
  for (std::size_t j = 0; j < h.cols() && r < h.rows(); ++j) {
    // Euclid on column j below the current pivot row.
    while (true) {
      std::size_t best = h.rows();
      for (std::size_t i = r; i < h.rows(); ++i) {
        if (h(i, j) == 0) continue;
        if (best == h.rows() || abs(h(i, j)) < abs(h(best, j))) best = i;
      }
      if (best == h.rows()) break;
      h.swap_rows(r, best);
      u.swap_rows(r, best);
      bool done = true;
      for (std::size_t i = r + 1; i < h.rows(); ++i) {
        if (h(i, j) == 0) continue;
        Int q;
        mpz_tdiv_q(q.get_mpz_t(), h(i, j).get_mpz_t(), h(r, j).get_mpz_t());
        row_axpy(h, i, r, q);
        row_axpy(u, i, r, q);
        if (h(i, j) != 0) done = false;
      }
      if (done) break;
    }
    if (h(r, j) == 0) continue;
    if (h(r, j) < 0) {
      negate_row(h, r);
      negate_row(u, r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), h(i, j).get_mpz_t(), h(r, j).get_mpz_t());
      if (q == 0) continue;
      row_axpy(h, i, r, q);
      row_axpy(u, i, r, q);
    }
    ++r;
  }
  return {std::move(h), std::move(u)};
}

std::optional<RatVec> solve(const RatMat& a, std::span<const Rat> b) {
  if (!a.is_square() || a.rows() != b.size()) throw std::invalid_argument("solve: shape mismatch");
  const std::size_t n = a.rows();
  RatMat m(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = a(i, j);
    m(i, n) = b[i];
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m(p, k) == 0) ++p;
    if (p == n) return std::nullopt;
    m.swap_rows(k, p);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || m(i, k) == 0) continue;
      Rat f = m(i, k) / m(k, k);
      for (std::size_t j = k; j <= n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  RatVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = m(i, n) / m(i, i);
  return x;
}

std::optional<RatMat> inverse(const RatMat& a) {
  if (!a.is_square()) throw std::invalid_argument("inverse: matrix is not square");
  const std::size_t n = a.rows();
  RatMat m(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = a(i, j);
    m(i, n + i) = 1;
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m(p, k) == 0) ++p;
    if (p == n) return std::nullopt;
    m.swap_rows(k, p);
    Rat piv = m(k, k);
    for (std::size_t j = 0; j < 2 * n; ++j) m(k, j) /= piv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || m(i, k) == 0) continue;
      Rat f = m(i, k);
      for (std::size_t j = 0; j < 2 * n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  RatMat inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = m(i, n + j);
  return inv;
}

IntVec primitive(std::span<const Rat> v) {
  Int l = 1;
  bool nonzero = false;
  for (const auto& x : v) {
    if (x != 0) nonzero = true;
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  }
  if (!nonzero) throw std::invalid_argument("primitive: zero vector");
  IntVec out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.get_num() * (l / x.get_den()));
  make_primitive_in_place(out);
  return out;
}

IntVec primitive(std::span<const Int> v) {
  IntVec out(v.begin(), v.end());
  if (gcd_of(out) == 0) throw std::invalid_argument("primitive: zero vector");
  make_primitive_in_place(out);
  return out;
}

void make_primitive_in_place(IntVec& v) {
  Int g = gcd_of(v);
  if (g == 0 || g == 1) return;
  for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

bool is_integral(std::span<const Rat> v) {
  for (const auto& x : v)
    if (x.get_den() != 1) return false;
  return true;
}

IntVec to_int(std::span<const Rat> v) {
  IntVec out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (x.get_den() != 1) throw std::invalid_argument("to_int: non-integral entry");
    out.push_back(x.get_num());
  }
  return out;
}

std::string to_string(std::span<const Int> v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i].get_str();
  os << ')';
  return os.str();
}

}  // namespace polygen
