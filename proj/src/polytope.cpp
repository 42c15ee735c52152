#include "polygen/polytope.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "polygen/double_description.hpp"

namespace polygen {

namespace {

void check_dimension(std::size_t d) {
  if (d == 0) throw DimensionError("ambient dimension must be at least 1");
  if (d > kMaxDimension) throw DimensionError("ambient dimension exceeds " + std::to_string(kMaxDimension));
}

bool rat_vec_less(const RatVec& a, const RatVec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

IntVec tail(const IntVec& v) { return IntVec(v.begin() + 1, v.end()); }

}  // namespace

bool operator<(const Facet& a, const Facet& b) {
  if (a.normal != b.normal)
    return std::lexicographical_compare(a.normal.begin(), a.normal.end(), b.normal.begin(), b.normal.end());
  return a.constant < b.constant;
}

HalfspaceSystem HRep::system() const { return {rows, IntVec(rows.rows(), Int(1))}; }

HalfspaceSystem GeneralHRep::system() const {
  HalfspaceSystem s;
  s.normals = IntMat(facets.size(), dim);
  s.constants.reserve(facets.size());
  for (std::size_t i = 0; i < facets.size(); ++i) {
    for (std::size_t j = 0; j < dim; ++j) s.normals(i, j) = facets[i].normal[j];
    s.constants.push_back(facets[i].constant);
  }
  return s;
}

VertexData vertex_enumeration(const HRep& h) { return vertex_enumeration(h.system()); }

VertexData vertex_enumeration(const HalfspaceSystem& system) {
  const std::size_t d = system.dim();
  const std::size_t m = system.size();
  check_dimension(d);
  if (system.constants.size() != m) throw std::invalid_argument("vertex_enumeration: constants/normals mismatch");

  // Homogenize: (t, x) with t >= 0 and c t + a . x >= 0.
  IntMat cone(m + 1, d + 1);
  cone(0, 0) = 1;
  for (std::size_t i = 0; i < m; ++i) {
    cone(i + 1, 0) = system.constants[i];
    for (std::size_t j = 0; j < d; ++j) cone(i + 1, j + 1) = system.normals(i, j);
  }
  ConeGenerators g = double_description(cone);

  bool nonempty = false;
  for (const auto& r : g.rays)
    if (r[0] > 0) nonempty = true;
  if (!nonempty) throw EmptyPolyhedronError();

  VertexData vd;
  vd.dim = d;
  for (const auto& l : g.lineality) {
    IntVec dir = primitive(std::span<const Int>(tail(l)));
    IntVec opp = dir;
    for (auto& x : opp) x = -x;
    vd.rays.push_back(std::move(dir));
    vd.rays.push_back(std::move(opp));
  }

  std::vector<std::pair<RatVec, std::vector<std::size_t>>> verts;
  for (std::size_t r = 0; r < g.rays.size(); ++r) {
    const IntVec& ray = g.rays[r];
    if (ray[0] == 0) {
      vd.rays.push_back(primitive(std::span<const Int>(tail(ray))));
      continue;
    }
    if (!g.lineality.empty()) continue;  // minimal faces are not points
    RatVec v(d);
    for (std::size_t j = 0; j < d; ++j) v[j] = make_rat(ray[j + 1], ray[0]);
    std::vector<std::size_t> tight;
    for (std::size_t i = 0; i < m; ++i)
      if (g.zero_sets[r].test(i + 1)) tight.push_back(i);
    verts.emplace_back(std::move(v), std::move(tight));
  }
  std::sort(verts.begin(), verts.end(), [](const auto& a, const auto& b) { return rat_vec_less(a.first, b.first); });
  for (auto& [v, t] : verts) {
    vd.vertices.push_back(std::move(v));
    vd.tight_sets.push_back(std::move(t));
  }
  std::sort(vd.rays.begin(), vd.rays.end());

  // Implicit equalities are tight at every generator.
  vd.full_dim = true;
  for (std::size_t i = 0; i < m && vd.full_dim; ++i) {
    bool always_tight = true;
    for (const auto& z : g.zero_sets)
      if (!z.test(i + 1)) {
        always_tight = false;
        break;
      }
    if (always_tight) vd.full_dim = false;
  }
  return vd;
}

ConvexHull convex_hull(const std::vector<RatVec>& points, std::size_t dim) {
  check_dimension(dim);
  if (points.empty()) throw std::invalid_argument("convex_hull: no points");

  std::vector<RatVec> pts = points;
  std::sort(pts.begin(), pts.end(), rat_vec_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  // Dual cone over (c, a): c + a . p >= 0 for every point p.
  IntMat cone(pts.size(), dim + 1);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].size() != dim) throw std::invalid_argument("convex_hull: point of wrong dimension");
    Int den = 1;
    for (const auto& x : pts[i]) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
    cone(i, 0) = den;
    for (std::size_t j = 0; j < dim; ++j) cone(i, j + 1) = pts[i][j].get_num() * (den / pts[i][j].get_den());
  }
  ConeGenerators g = double_description(cone);

  ConvexHull hull;
  hull.affine_dim = dim - g.lineality.size();
  const bool full_dim = g.lineality.empty();

  HalfspaceSystem& desc = hull.description;
  desc.normals = IntMat(0, dim);
  auto push = [&](const IntVec& ca, bool negate) {
    IntVec a = tail(ca);
    Int c = ca[0];
    if (negate) {
      for (auto& x : a) x = -x;
      c = -c;
    }
    desc.normals.append_row(std::span<const Int>(a));
    desc.constants.push_back(c);
  };
  for (const auto& r : g.rays) push(r, false);
  for (const auto& l : g.lineality) {
    push(l, false);
    push(l, true);
  }

  if (full_dim) {
    hull.hrep.dim = dim;
    for (const auto& r : g.rays) hull.hrep.facets.push_back({tail(r), r[0]});
    std::sort(hull.hrep.facets.begin(), hull.hrep.facets.end());
  } else {
    hull.hrep.dim = dim;
  }

  // Which rows the vertex tight sets refer to.
  const HalfspaceSystem tight_rows = full_dim ? hull.hrep.system() : desc;
  std::vector<IntVec> equations;
  for (const auto& l : g.lineality) equations.push_back(tail(l));

  VertexData& vd = hull.vertex_data;
  vd.dim = dim;
  vd.full_dim = full_dim;
  for (const auto& p : pts) {
    std::vector<std::size_t> tight;
    RatMat normals(0, dim);
    for (std::size_t i = 0; i < tight_rows.size(); ++i) {
      Rat v = Rat(tight_rows.constants[i]) + dot(tight_rows.normals.row(i), std::span<const Rat>(p));
      if (v == 0) {
        tight.push_back(i);
        RatVec row = to_rat(tight_rows.normals.row(i));
        normals.append_row(std::span<const Rat>(row));
      }
    }
    for (const auto& e : equations) {
      RatVec row = to_rat(e);
      normals.append_row(std::span<const Rat>(row));
    }
    if (normals.rows() > 0 && rank(normals) == dim) {
      vd.vertices.push_back(p);
      vd.tight_sets.push_back(std::move(tight));
    }
  }
  return hull;
}

ConvexHull facet_enumeration(const VRep& v) {
  check_dimension(v.dim());
  std::vector<RatVec> pts;
  pts.reserve(v.points.rows());
  for (std::size_t i = 0; i < v.points.rows(); ++i) pts.push_back(to_rat(v.points.row(i)));
  return convex_hull(pts, v.dim());
}

VRep dual(const HRep& h) { return VRep{h.rows}; }

HalfspaceSystem dilate(const HRep& h, const Int& k) { return dilate(h.system(), k); }

HalfspaceSystem dilate(const HalfspaceSystem& s, const Int& k) {
  if (k < 1) throw std::invalid_argument("dilate: factor must be a positive integer");
  HalfspaceSystem out = s;
  for (auto& c : out.constants) c *= k;
  return out;
}

FacetIncidence facet_incidence(const HalfspaceSystem& system, const VertexData& vd) {
  const std::size_t d = system.dim();
  std::vector<std::vector<std::size_t>> row_vertices(system.size());
  for (std::size_t v = 0; v < vd.tight_sets.size(); ++v)
    for (std::size_t i : vd.tight_sets[v]) row_vertices[i].push_back(v);

  FacetIncidence inc;
  std::map<std::vector<std::size_t>, std::size_t> seen;  // tight vertex set -> facet position
  std::vector<std::size_t> row_to_facet(system.size(), SIZE_MAX);
  for (std::size_t i = 0; i < system.size(); ++i) {
    const auto& tv = row_vertices[i];
    if (tv.size() < d) continue;
    if (auto it = seen.find(tv); it != seen.end()) {
      row_to_facet[i] = it->second;
      continue;
    }
    RatMat diffs(tv.size() - 1, d);
    for (std::size_t k = 1; k < tv.size(); ++k)
      for (std::size_t j = 0; j < d; ++j) diffs(k - 1, j) = vd.vertices[tv[k]][j] - vd.vertices[tv[0]][j];
    if (rank(diffs) != d - 1) continue;
    row_to_facet[i] = inc.facet_rows.size();
    seen.emplace(tv, inc.facet_rows.size());
    inc.facet_rows.push_back(i);
  }

  inc.vertex_facets.resize(vd.tight_sets.size());
  for (std::size_t v = 0; v < vd.tight_sets.size(); ++v) {
    auto& out = inc.vertex_facets[v];
    for (std::size_t i : vd.tight_sets[v])
      if (row_to_facet[i] != SIZE_MAX) out.push_back(row_to_facet[i]);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return inc;
}

bool columns_have_both_signs(const IntMat& rows) {
  for (std::size_t j = 0; j < rows.cols(); ++j) {
    bool pos = false, neg = false;
    for (std::size_t i = 0; i < rows.rows(); ++i) {
      if (rows(i, j) > 0) pos = true;
      if (rows(i, j) < 0) neg = true;
    }
    if (!pos || !neg) return false;
  }
  return true;
}

}  // namespace polygen
