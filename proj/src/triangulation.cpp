#include "polygen/triangulation.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "polygen/lattice_points.hpp"
#include "polygen/polytope.hpp"

namespace polygen {

namespace {

struct BoundaryFace {
  std::vector<std::size_t> vertices;  // sorted
  IntVec normal;                      // outward
  Int offset;                         // normal . x == offset on the face
};

// Outward hyperplane through d points; `inside` is a point of the hull scaled by `scale`.
BoundaryFace make_face(const std::vector<IntVec>& pts, std::vector<std::size_t> vs, const IntVec& inside,
                       const Int& scale) {
  const std::size_t d = pts.front().size();
  IntMat diffs(d - 1, d);
  for (std::size_t k = 1; k < d; ++k)
    for (std::size_t j = 0; j < d; ++j) diffs(k - 1, j) = pts[vs[k]][j] - pts[vs[0]][j];
  IntVec a(d);
  for (std::size_t j = 0; j < d; ++j) {
    IntMat minor(d - 1, d - 1);
    for (std::size_t r = 0; r + 1 < d; ++r)
      for (std::size_t c = 0, cc = 0; c < d; ++c)
        if (c != j) minor(r, cc++) = diffs(r, c);
    a[j] = d == 1 ? Int(1) : det(minor);
    if (j % 2) a[j] = -a[j];
  }
  make_primitive_in_place(a);
  Int b = dot(a, pts[vs[0]]);
  if (dot(a, inside) > b * scale) {
    for (auto& x : a) x = -x;
    b = -b;
  }
  std::sort(vs.begin(), vs.end());
  return {std::move(vs), std::move(a), std::move(b)};
}

}  // namespace

std::vector<std::vector<std::size_t>> placing_triangulation(const std::vector<IntVec>& points) {
  if (points.empty()) throw DimensionError("no points to triangulate");
  const std::size_t d = points.front().size();
  if (d == 0) throw DimensionError("points of dimension 0");

  // Greedy affinely independent start.
  std::vector<std::size_t> start{0};
  RatMat diffs(0, d);
  for (std::size_t i = 1; i < points.size() && start.size() <= d; ++i) {
    RatMat trial = diffs;
    RatVec row(d);
    for (std::size_t j = 0; j < d; ++j) row[j] = points[i][j] - points[0][j];
    trial.append_row(row);
    if (rank(trial) == trial.rows()) {
      diffs = std::move(trial);
      start.push_back(i);
    }
  }
  if (start.size() != d + 1) throw DimensionError("points do not span the space");

  const Int scale = static_cast<long>(d + 1);
  IntVec inside(d, Int(0));
  for (std::size_t i : start)
    for (std::size_t j = 0; j < d; ++j) inside[j] += points[i][j];

  std::vector<std::vector<std::size_t>> simplices{start};
  std::vector<BoundaryFace> boundary;
  for (std::size_t skip = 0; skip <= d; ++skip) {
    std::vector<std::size_t> vs;
    for (std::size_t k = 0; k <= d; ++k)
      if (k != skip) vs.push_back(start[k]);
    boundary.push_back(make_face(points, vs, inside, scale));
  }

  std::vector<char> placed(points.size(), 0);
  for (std::size_t i : start) placed[i] = 1;
  for (std::size_t p = 0; p < points.size(); ++p) {
    if (placed[p]) continue;
    const auto split = std::partition(boundary.begin(), boundary.end(),
                                      [&](const BoundaryFace& f) { return dot(f.normal, points[p]) <= f.offset; });
    if (split == boundary.end()) continue;  // inside the current hull
    std::vector<BoundaryFace> visible(std::make_move_iterator(split), std::make_move_iterator(boundary.end()));
    boundary.erase(split, boundary.end());
    std::map<std::vector<std::size_t>, int> ridges;
    for (const auto& f : visible) {
      std::vector<std::size_t> s = f.vertices;
      s.push_back(p);
      std::sort(s.begin(), s.end());
      simplices.push_back(std::move(s));
      for (std::size_t drop = 0; drop < f.vertices.size(); ++drop) {
        std::vector<std::size_t> r;
        for (std::size_t k = 0; k < f.vertices.size(); ++k)
          if (k != drop) r.push_back(f.vertices[k]);
        ++ridges[r];
      }
    }
    for (const auto& [r, count] : ridges) {
      if (count != 1) continue;
      std::vector<std::size_t> vs = r;
      vs.push_back(p);
      boundary.push_back(make_face(points, vs, inside, scale));
    }
  }
  return simplices;
}

Int normalized_volume(const std::vector<IntVec>& points, std::span<const std::size_t> simplex) {
  const std::size_t d = points.front().size();
  IntMat m(simplex.size(), d + 1);
  for (std::size_t i = 0; i < simplex.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) m(i, j) = points[simplex[i]][j];
    m(i, d) = 1;
  }
  return abs(det(m));
}

void for_each_parallelepiped_point(const std::vector<IntVec>& g,
                                   const std::function<void(std::span<const std::int64_t>)>& fn) {
  const std::size_t n = g.size();
  const IntMat gm = IntMat::from_rows(g);
  const Int signed_det = det(gm);
  if (signed_det == 0) throw std::invalid_argument("parallelepiped generators are dependent");
  const Int dd = abs(signed_det);
  if (dd == 1) return;
  const std::int64_t big_d = to_int64(dd);

  // Coset representatives of Z^n modulo the generated lattice: the box below the HNF pivots.
  const IntMat h = hnf(gm).h;
  std::vector<std::int64_t> radix(n);
  for (std::size_t i = 0; i < n; ++i) radix[i] = to_int64(abs(h(i, i)));

  // adj = D * g^-1, integral; lambda * D = x * adj for the row vector x. Stepping
  // x_i by one adds row i of adj to lambda, and resetting it subtracts radix_i times that row.
  const RatMat inv = *inverse(to_rat(gm));
  std::vector<std::int64_t> step(n * n), reset(n * n), gen(n * n);
  auto mod_d = [&](const Int& v) {
    Int r = v % dd;
    if (r < 0) r += dd;
    return to_int64(r);
  };
  Int bound = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Int a = Rat(inv(i, j) * dd).get_num();
      step[i * n + j] = mod_d(a);
      reset[i * n + j] = mod_d(-a * radix[i]);
      gen[i * n + j] = to_int64(g[i][j]);
    }
  for (std::size_t k = 0; k < n; ++k) {
    Int col = 0;
    for (std::size_t j = 0; j < n; ++j) col += abs(g[j][k]);
    if (col * dd > bound) bound = col * dd;
  }
  if (bound > Int(std::numeric_limits<std::int64_t>::max() / 2))
    throw std::overflow_error("parallelepiped point out of range");

  // Exact division by D: shift out the power of two, multiply by the inverse of the odd part mod 2^64.
  int shift = 0;
  std::uint64_t odd = static_cast<std::uint64_t>(big_d);
  while (!(odd & 1)) {
    odd >>= 1;
    ++shift;
  }
  std::uint64_t odd_inverse = odd;
  for (int i = 0; i < 6; ++i) odd_inverse *= 2 - odd * odd_inverse;

  std::vector<std::int64_t> x(n, 0), lambda(n, 0), point(n);
  auto add_row = [&](const std::int64_t* row) {
    for (std::size_t j = 0; j < n; ++j) {
      lambda[j] += row[j];
      if (lambda[j] >= big_d) lambda[j] -= big_d;
    }
  };
  while (true) {
    std::size_t i = 0;
    while (i < n && x[i] + 1 == radix[i]) {
      x[i] = 0;
      add_row(&reset[i * n]);
      add_row(&step[i * n]);
      ++i;
    }
    if (i == n) break;
    ++x[i];
    add_row(&step[i * n]);
    for (std::size_t k = 0; k < n; ++k) {
      std::int64_t s = 0;
      for (std::size_t j = 0; j < n; ++j) s += lambda[j] * gen[j * n + k];
      point[k] = static_cast<std::int64_t>((static_cast<std::uint64_t>(s >> shift)) * odd_inverse);
    }
    fn(point);
  }
}

}  // namespace polygen
