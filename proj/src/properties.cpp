#include "polygen/properties.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include "polygen/triangulation.hpp"

namespace polygen {

const char* to_string(Representation rep) { return rep == Representation::hyperplane ? "h" : "v"; }

Representation parse_representation(const std::string& s) {
  if (s == "h" || s == "hyperplane") return Representation::hyperplane;
  if (s == "v" || s == "convex_hull") return Representation::convex_hull;
  throw std::invalid_argument("unknown representation: " + s);
}

const char* to_string(Normality n) {
  switch (n) {
    case Normality::yes: return "true";
    case Normality::no: return "false";
    case Normality::unverified: return "unverified";
  }
  return "?";
}

bool check_compact(const VertexData& vd) { return vd.bounded(); }

bool check_lattice(const VertexData& vd) {
  return std::all_of(vd.vertices.begin(), vd.vertices.end(), [](const RatVec& v) { return is_integral(v); });
}

bool check_reflexive(const HRep&, const VertexData& vd) {
  return check_compact(vd) && check_lattice(vd) && vd.full_dim;
}

bool check_reflexive(const ConvexHull& hull, std::size_t cap) {
  if (!hull.vertex_data.full_dim || !check_lattice(hull.vertex_data)) return false;
  LatticePointSet interior(hull.hrep.dim);
  try {
    interior = interior_lattice_points(hull.hrep, cap);
  } catch (const LatticePointCapExceeded&) {
    return false;
  }
  if (interior.size() != 1) return false;
  std::vector<Int> p;
  for (auto c : interior[0]) p.emplace_back(static_cast<long>(c));
  for (const auto& f : hull.hrep.facets)
    if (f.constant + dot(f.normal, p) != 1) return false;
  return true;
}

bool check_smooth(const HalfspaceSystem& system, const VertexData& vd) {
  const std::size_t d = system.dim();
  if (!vd.bounded() || !vd.full_dim || vd.vertices.empty() || !check_lattice(vd)) return false;
  const FacetIncidence inc = facet_incidence(system, vd);
  for (const auto& facets : inc.vertex_facets) {
    if (facets.size() != d) return false;
    RatMat a(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) a(i, j) = system.normals(inc.facet_rows[facets[i]], j);
    auto inv = inverse(a);
    if (!inv) return false;
    // Column j of A^-1 leaves facet j and stays on the others: an edge direction.
    IntMat edges(d, d);
    for (std::size_t j = 0; j < d; ++j) {
      IntVec e = primitive(std::span<const Rat>(inv->col_vector(j)));
      for (std::size_t i = 0; i < d; ++i) edges(i, j) = e[i];
    }
    if (abs(det(edges)) != 1) return false;
  }
  return true;
}

namespace {

// Row values in int64. Every evaluated point lies in the box of radius
// d * (max |vertex coordinate| + 1), which bounds all intermediate sums.
struct Evaluator {
  std::size_t m = 0, d = 0;
  std::vector<std::int64_t> normals, constants;

  Evaluator(const HalfspaceSystem& p, const VertexData& vd) : m(p.size()), d(p.dim()) {
    Int radius = 0;
    for (const auto& v : vd.vertices)
      for (const auto& c : v) radius = std::max(radius, Int(abs(c.get_num()) / c.get_den()));
    const Int box = (radius + 2) * static_cast<long>(d);
    for (std::size_t r = 0; r < m; ++r) {
      Int row = 2 * abs(p.constants[r]);
      for (std::size_t j = 0; j < d; ++j) row += 2 * abs(p.normals(r, j));
      if (row * box > Int(std::numeric_limits<std::int64_t>::max() / 4))
        throw std::overflow_error("row values out of range");
      for (std::size_t j = 0; j < d; ++j) normals.push_back(to_int64(p.normals(r, j)));
      constants.push_back(to_int64(p.constants[r]));
    }
  }

  void values(std::span<const std::int64_t> x, std::vector<std::int64_t>& out) const {
    out.assign(m, 0);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t j = 0; j < d; ++j) out[r] += normals[r * d + j] * x[j];
  }

  bool contains(const std::vector<std::int64_t>& x) const {
    for (std::size_t r = 0; r < m; ++r)
      if (constants[r] + x[r] < 0) return false;
    return true;
  }

  bool fits(const std::vector<std::int64_t>& y, const std::vector<std::int64_t>& x, std::int64_t k) const {
    for (std::size_t r = 0; r < m; ++r)
      if (constants[r] * (k - 1) + y[r] - x[r] < 0) return false;
    return true;
  }

  /// Some base point x has y - x in (k-1)P, given the normal values of y and of the base points.
  bool splits(const std::vector<std::int64_t>& y, const std::vector<std::vector<std::int64_t>>& base, std::int64_t k) const {
    return std::any_of(base.begin(), base.end(), [&](const auto& x) { return fits(y, x, k); });
  }
};

void record_failure(NormalityResult& result, std::int64_t k, std::span<const std::int64_t> y) {
  IntVec w;
  for (auto c : y) w.emplace_back(static_cast<long>(c));
  if (result.verdict == Normality::no &&
      (result.failing_multiple < k || (result.failing_multiple == k && *result.witness <= w)))
    return;
  result.verdict = Normality::no;
  result.witness = std::move(w);
  result.failing_multiple = static_cast<int>(k);
}

// Scans kP for k = 2 .. d-1; used for lower-dimensional polytopes.
void check_by_dilates(const LatticePointEnumerator& en, const Evaluator& ev,
                      const std::vector<std::vector<std::int64_t>>& base_values, std::size_t cap, NormalityResult& result) {
  const std::size_t top = std::max<std::size_t>(1, ev.d - 1);
  std::vector<std::int64_t> y;
  for (std::size_t k = 2; k <= top; ++k) {
    const LatticePointSet points = en.points(static_cast<std::int64_t>(k), cap);
    for (std::size_t i = 0; i < points.size(); ++i) {
      ev.values(points[i], y);
      if (!ev.splits(y, base_values, static_cast<std::int64_t>(k))) {
        record_failure(result, static_cast<std::int64_t>(k), points[i]);
        return;
      }
    }
  }
}

// A point of kP with no split is a point of the fundamental parallelepiped of
// any simplicial cone containing it, so checking those points is complete.
// Points above the smallest failing degree found so far are skipped. Split
// candidates: recent successes, corners of the unit box around y / k, then
// every base point.
void check_by_parallelepipeds(const VertexData& vd, const Evaluator& ev,
                              const std::vector<std::vector<std::int64_t>>& base_values, std::size_t cap,
                              NormalityResult& result) {
  const std::size_t d = ev.d;
  std::vector<IntVec> vertices;
  for (const auto& v : vd.vertices) vertices.push_back(to_int(v));
  const auto simplices = placing_triangulation(vertices);
  Int total = 0;
  std::vector<std::vector<IntVec>> cones;
  for (const auto& s : simplices) {
    const Int vol = normalized_volume(vertices, s);
    total += vol;
    if (vol == 1) continue;
    std::vector<IntVec> gens(d + 1, IntVec(d + 1));
    for (std::size_t i = 0; i <= d; ++i) {
      for (std::size_t j = 0; j < d; ++j) gens[i][j] = vertices[s[i]][j];
      gens[i][d] = 1;
    }
    cones.push_back(std::move(gens));
  }
  if (total > Int(static_cast<unsigned long>(cap))) {
    result.verdict = Normality::unverified;
    return;
  }

  constexpr std::size_t kRecent = 8;
  std::vector<std::size_t> recent;
  std::vector<std::int64_t> x(d);
  std::vector<std::int64_t> xv;
  // Corners in Gray code order from the nearest one; only that one in high dimension.
  const std::size_t corners = d <= 10 ? std::size_t{1} << d : 1;
  auto near_split = [&](const std::vector<std::int64_t>& y, std::span<const std::int64_t> p, std::int64_t k) {
    for (std::size_t j = 0; j < d; ++j) {
      const std::int64_t lo = p[j] >= 0 ? p[j] / k : -((-p[j] + k - 1) / k);
      x[j] = 2 * (p[j] - lo * k) > k ? lo + 1 : lo;
    }
    ev.values(x, xv);
    if (ev.contains(xv) && ev.fits(y, xv, k)) return true;
    for (std::size_t i = 1; i < corners; ++i) {
      const auto j = static_cast<std::size_t>(std::countr_zero(i));
      const std::int64_t sign = x[j] * k >= p[j] ? -1 : 1;
      x[j] += sign;
      for (std::size_t r = 0; r < ev.m; ++r) xv[r] += sign * ev.normals[r * d + j];
      if (ev.contains(xv) && ev.fits(y, xv, k)) return true;
    }
    return false;
  };
  auto split = [&](const std::vector<std::int64_t>& y, std::span<const std::int64_t> p, std::int64_t k) {
    for (std::size_t i = 0; i < recent.size(); ++i) {
      if (ev.fits(y, base_values[recent[i]], k)) {
        std::rotate(recent.begin(), recent.begin() + static_cast<std::ptrdiff_t>(i),
                    recent.begin() + static_cast<std::ptrdiff_t>(i) + 1);
        return true;
      }
    }
    if (near_split(y, p, k)) return true;
    for (std::size_t b = 0; b < base_values.size(); ++b) {
      if (!ev.fits(y, base_values[b], k)) continue;
      if (recent.size() < kRecent) recent.push_back(b);
      std::rotate(recent.begin(), recent.end() - 1, recent.end());
      recent.front() = b;
      return true;
    }
    return false;
  };

  std::vector<std::int64_t> y;
  for (const auto& gens : cones) {
    for_each_parallelepiped_point(gens, [&](std::span<const std::int64_t> p) {
      const std::int64_t k = p[d];
      if (k < 2 || (result.verdict == Normality::no && k > result.failing_multiple)) return;
      ev.values(p.first(d), y);
      if (!split(y, p, k)) record_failure(result, k, p.first(d));
    });
  }
}

}  // namespace

NormalityResult check_normal(const HalfspaceSystem& p, std::size_t cap, std::size_t parallelepiped_cap) {
  NormalityResult result;
  const std::size_t d = p.dim();
  // Lattice polygons and segments are always normal.
  if (d <= 2) return result;
  try {
    const LatticePointEnumerator en(p);
    const Evaluator ev(p, en.vertex_data());
    const LatticePointSet base = en.points(1, cap);
    std::vector<std::vector<std::int64_t>> base_values(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) ev.values(base[i], base_values[i]);
    if (en.vertex_data().full_dim)
      check_by_parallelepipeds(en.vertex_data(), ev, base_values, parallelepiped_cap, result);
    else
      check_by_dilates(en, ev, base_values, cap, result);
  } catch (const LatticePointCapExceeded&) {
    result.verdict = Normality::unverified;
  } catch (const std::overflow_error&) {
    result.verdict = Normality::unverified;
  }
  return result;
}

namespace {

Normality decide_normal(const PropertyReport& r, std::size_t d, const HalfspaceSystem& system,
                        const CheckOptions& opts) {
  if (!r.compact || !r.lattice) return Normality::no;
  if (r.reflexive && r.smooth && d <= opts.smooth_reflexive_normal_max_dim) return Normality::yes;
  return check_normal(system, opts.lattice_point_cap, opts.parallelepiped_cap).verdict;
}

}  // namespace

PropertyReport check_all(const IntMat& m, Representation rep, const CheckOptions& opts) {
  const std::size_t d = m.cols();
  if (m.rows() == 0 || d == 0 || d > kMaxDimension) return PropertyReport::malformed();

  PropertyReport r;
  if (rep == Representation::hyperplane) {
    const HRep h{m};
    const VertexData vd = vertex_enumeration(h);
    r.compact = check_compact(vd);
    r.lattice = check_lattice(vd);
    r.reflexive = check_reflexive(h, vd);
    r.smooth = check_smooth(h, vd);
    r.normal = decide_normal(r, d, h.system(), opts);
  } else {
    const ConvexHull hull = facet_enumeration(VRep{m});
    r.compact = true;
    r.lattice = check_lattice(hull.vertex_data);
    r.reflexive = check_reflexive(hull, opts.lattice_point_cap);
    r.smooth = check_smooth(hull.hrep, hull.vertex_data);
    r.normal = decide_normal(r, d, hull.description, opts);
  }
  r.all_correct = r.compact && r.lattice && r.reflexive && r.smooth && r.normal == Normality::yes;
  return r;
}

PropertyReport check_all(const std::vector<std::vector<Int>>& rows, Representation rep, const CheckOptions& opts) {
  if (rows.empty()) return PropertyReport::malformed();
  const std::size_t d = rows.front().size();
  for (const auto& r : rows)
    if (r.size() != d) return PropertyReport::malformed();
  return check_all(IntMat::from_rows(rows), rep, opts);
}

}  // namespace polygen
