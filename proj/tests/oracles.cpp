#include "oracles.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace oracle {

Q cofactor_det(const QMat& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  Q total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j] == 0) continue;
    QMat minor;
    for (std::size_t i = 1; i < n; ++i) {
      QVec row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(row);
    }
    const Q term = m[0][j] * cofactor_det(minor);
    total += (j % 2 == 0) ? term : Q(-term);
  }
  return total;
}

std::optional<QVec> cramer(const QMat& a, const QVec& b) {
  const Q d = cofactor_det(a);
  if (d == 0) return std::nullopt;
  QVec x(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    QMat aj = a;
    for (std::size_t i = 0; i < a.size(); ++i) aj[i][j] = b[i];
    x[j] = cofactor_det(aj) / d;
  }
  return x;
}

std::size_t rank_of(QMat m) {
  std::size_t r = 0;
  const std::size_t cols = m.empty() ? 0 : m.front().size();
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Q f = m[i][c] / m[r][c];
      for (std::size_t k = c; k < cols; ++k) m[i][k] -= f * m[r][k];
    }
    ++r;
  }
  return r;
}

System hyperplane_system(const IntMat& rows) {
  System s;
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    std::vector<long> a;
    for (std::size_t j = 0; j < rows.cols(); ++j) a.push_back(rows(i, j).get_si());
    s.a.push_back(a);
    s.c.push_back(1);
  }
  return s;
}

System from_library(const polygen::HalfspaceSystem& h) {
  System s;
  for (std::size_t i = 0; i < h.size(); ++i) {
    std::vector<long> a;
    for (std::size_t j = 0; j < h.dim(); ++j) a.push_back(h.normals(i, j).get_si());
    s.a.push_back(a);
    s.c.push_back(h.constants[i].get_si());
  }
  return s;
}

bool satisfies(const System& s, const QVec& x, long scale) {
  for (std::size_t i = 0; i < s.a.size(); ++i) {
    Q v = Q(s.c[i]) * scale;
    for (std::size_t j = 0; j < x.size(); ++j) v += Q(s.a[i][j]) * x[j];
    if (v < 0) return false;
  }
  return true;
}

bool satisfies(const System& s, const Point& x, long scale) {
  for (std::size_t i = 0; i < s.a.size(); ++i) {
    long v = s.c[i] * scale;
    for (std::size_t j = 0; j < x.size(); ++j) v += s.a[i][j] * x[j];
    if (v < 0) return false;
  }
  return true;
}

std::vector<QVec> subset_vertices(const System& s) {
  const std::size_t m = s.a.size(), d = s.dim();
  std::set<QVec> found;
  std::vector<std::size_t> pick(d);
  std::iota(pick.begin(), pick.end(), 0);
  if (m < d) return {};
  while (true) {
    QMat a;
    QVec b;
    for (std::size_t i : pick) {
      a.emplace_back(s.a[i].begin(), s.a[i].end());
      b.push_back(-s.c[i]);
    }
    if (auto x = cramer(a, b); x && satisfies(s, *x)) found.insert(*x);
    // next combination
    std::size_t k = d;
    while (k > 0 && pick[k - 1] == m - d + k - 1) --k;
    if (k == 0) break;
    ++pick[k - 1];
    for (std::size_t j = k; j < d; ++j) pick[j] = pick[j - 1] + 1;
  }
  return {found.begin(), found.end()};
}

std::vector<Point> box_points(const System& s, long lo, long hi, long scale) {
  const std::size_t d = s.dim();
  std::vector<Point> out;
  Point x(d, lo);
  while (true) {
    if (satisfies(s, x, scale)) out.push_back(x);
    std::size_t i = 0;
    while (i < d && x[i] == hi) x[i++] = lo;
    if (i == d) break;
    ++x[i];
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::vector<std::size_t> tight_rows(const System& s, const QVec& v) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < s.a.size(); ++i) {
    Q val = s.c[i];
    for (std::size_t j = 0; j < v.size(); ++j) val += Q(s.a[i][j]) * v[j];
    if (val == 0) out.push_back(i);
  }
  return out;
}

}  // namespace

bool definitional_smooth(const System& s, const std::vector<QVec>& vertices) {
  const std::size_t d = s.dim();
  std::vector<std::vector<std::size_t>> tight;
  for (const auto& v : vertices) tight.push_back(tight_rows(s, v));
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    QMat edges;
    for (std::size_t j = 0; j < vertices.size(); ++j) {
      if (j == i) continue;
      std::vector<std::size_t> common;
      std::set_intersection(tight[i].begin(), tight[i].end(), tight[j].begin(), tight[j].end(),
                            std::back_inserter(common));
      QMat normals;
      for (std::size_t r : common) normals.emplace_back(s.a[r].begin(), s.a[r].end());
      if (rank_of(normals) != d - 1) continue;
      QVec e(d);
      for (std::size_t k = 0; k < d; ++k) e[k] = vertices[j][k] - vertices[i][k];
      Int g = 0;
      for (const auto& x : e) {
        if (x.get_den() != 1) return false;
        g = gcd(g, x.get_num());
      }
      for (auto& x : e) x /= Q(g);
      edges.push_back(e);
    }
    if (edges.size() != d) return false;
    if (abs(cofactor_det(edges)) != 1) return false;
  }
  return true;
}

std::optional<std::pair<int, Point>> decomposition_failure(const System& s, long lo, long hi, int kmax) {
  const auto base = box_points(s, lo, hi, 1);
  for (int k = 2; k <= kmax; ++k) {
    for (const auto& y : box_points(s, k * lo, k * hi, k)) {
      bool ok = false;
      for (const auto& x : base) {
        Point z(y.size());
        for (std::size_t j = 0; j < y.size(); ++j) z[j] = y[j] - x[j];
        if (satisfies(s, z, k - 1)) {
          ok = true;
          break;
        }
      }
      if (!ok) return std::pair{k, y};
    }
  }
  return std::nullopt;
}

long uniform(std::mt19937_64& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

IntMat random_unimodular(std::mt19937_64& rng, std::size_t d, int steps) {
  IntMat u = IntMat::identity(d);
  for (int s = 0; s < steps; ++s) {
    const auto i = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(d) - 1));
    const auto j = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(d) - 1));
    switch (uniform(rng, 0, 3)) {
      case 0:
        u.swap_rows(i, j);
        break;
      case 1:
        for (std::size_t k = 0; k < d; ++k) u(i, k) = -u(i, k);
        break;
      default:
        if (i != j) {
          const long f = uniform(rng, 0, 1) ? 1 : -1;
          for (std::size_t k = 0; k < d; ++k) u(i, k) += f * u(j, k);
        }
    }
  }
  return u;
}

IntMat random_rows(std::mt19937_64& rng, std::size_t d, long r) {
  const auto m = static_cast<std::size_t>(uniform(rng, static_cast<long>(d) + 1, 2 * static_cast<long>(d) + 2));
  IntMat out(m, d);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < d; ++j) out(i, j) = uniform(rng, -r, r);
  return out;
}

IntMat fixture(const std::string& name) {
  std::ifstream in(std::string(POLYGEN_FIXTURE_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::vector<std::vector<Int>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<Int> row;
    long v;
    while (ls >> v) row.emplace_back(v);
    if (!row.empty()) rows.push_back(row);
  }
  return IntMat::from_rows(rows);
}

IntMat matrix(const std::vector<std::vector<long>>& rows) {
  std::vector<std::vector<Int>> out;
  for (const auto& r : rows) out.emplace_back(r.begin(), r.end());
  return IntMat::from_rows(out);
}

std::vector<polygen::IntVec> rows_sorted(const IntMat& m) {
  std::vector<polygen::IntVec> out;
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(m.row_vector(i));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace oracle
