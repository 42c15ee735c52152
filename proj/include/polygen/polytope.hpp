// Polytope representations, vertex/facet enumeration, duality and dilation.

#pragma once

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "polygen/exact_linalg.hpp"

namespace polygen {

inline constexpr std::size_t kMaxDimension = 16;

class EmptyPolyhedronError : public std::runtime_error {
 public:
  EmptyPolyhedronError() : std::runtime_error("polyhedron is empty") {}
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Inequalities constants[i] + normals.row(i) . x >= 0.
struct HalfspaceSystem {
  IntMat normals;
  IntVec constants;

  std::size_t dim() const { return normals.cols(); }
  std::size_t size() const { return normals.rows(); }
};

/// Dataset hyperplane form: every row w encodes 1 + w . x >= 0.
struct HRep {
  IntMat rows;

  std::size_t dim() const { return rows.cols(); }
  HalfspaceSystem system() const;
};

/// Convex hull of the listed points (which need not be vertices).
struct VRep {
  IntMat points;

  std::size_t dim() const { return points.cols(); }
};

/// a . x >= -c with a primitive.
struct Facet {
  IntVec normal;
  Int constant;

  bool operator==(const Facet&) const = default;
};

bool operator<(const Facet& a, const Facet& b);

struct GeneralHRep {
  std::size_t dim = 0;
  std::vector<Facet> facets;

  HalfspaceSystem system() const;
};

struct VertexData {
  std::vector<RatVec> vertices;
  /// Per vertex, indices of the inequalities that are tight there.
  std::vector<std::vector<std::size_t>> tight_sets;
  /// Primitive extreme rays of the recession cone; both orientations of any
  /// lineality direction are listed, so this is empty iff the set is bounded.
  std::vector<IntVec> rays;
  bool full_dim = true;
  std::size_t dim = 0;

  bool bounded() const { return rays.empty(); }
};

struct ConvexHull {
  /// Facet inequalities; empty when the hull is not full-dimensional.
  GeneralHRep hrep;
  /// Vertices (a subset of the input points) with tight sets over hrep.
  VertexData vertex_data;
  /// Inequalities plus equations (as inequality pairs) cutting out the hull,
  /// valid in every dimension.
  HalfspaceSystem description;
  std::size_t affine_dim = 0;
};

/// Vertices, tight sets and recession rays of {x : c + A x >= 0}.
/// Throws EmptyPolyhedronError for infeasible systems and DimensionError
/// for d > kMaxDimension.
VertexData vertex_enumeration(const HalfspaceSystem& system);
VertexData vertex_enumeration(const HRep& h);

/// Irredundant facets of conv(points); duplicate and interior points are absorbed.
ConvexHull facet_enumeration(const VRep& v);
ConvexHull convex_hull(const std::vector<RatVec>& points, std::size_t dim);

/// Reinterprets the rows of h as points (the polar for constant-1 rows).
VRep dual(const HRep& h);

/// k + w . x >= 0 for every row w, i.e. the dilate kP. Throws for k < 1.
HalfspaceSystem dilate(const HRep& h, const Int& k);
HalfspaceSystem dilate(const HalfspaceSystem& s, const Int& k);

/// Indices of inequalities that define facets (bounded, full-dimensional
/// input), with exact duplicates collapsed onto their first occurrence.
struct FacetIncidence {
  std::vector<std::size_t> facet_rows;                ///< distinct facet-defining rows
  std::vector<std::vector<std::size_t>> vertex_facets;  ///< per vertex, positions into facet_rows
};

FacetIncidence facet_incidence(const HalfspaceSystem& system, const VertexData& vd);

/// Every column holds a positive and a negative entry; necessary for boundedness.
bool columns_have_both_signs(const IntMat& rows);

}  // namespace polygen
