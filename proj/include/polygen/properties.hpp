// Global property verdicts for a single sample in either representation.
//
// Conventions for lower-dimensional hulls: they are never reflexive or smooth;
// compactness and the lattice property are judged as-is.

#pragma once

#include <optional>
#include <vector>

#include "polygen/lattice_points.hpp"
#include "polygen/polytope.hpp"
#include "polygen/sample.hpp"

namespace polygen {

enum class Normality { no, yes, unverified };

const char* to_string(Normality n);

struct PropertyReport {
  bool compact = false;
  bool lattice = false;
  bool reflexive = false;
  bool smooth = false;
  Normality normal = Normality::no;
  bool all_correct = false;
  bool ill_formed = false;

  static PropertyReport malformed() {
    PropertyReport r;
    r.ill_formed = true;
    return r;
  }

  bool operator==(const PropertyReport&) const = default;
};

struct NormalityResult {
  Normality verdict = Normality::yes;
  std::optional<IntVec> witness;  ///< lattice point of kP that does not decompose
  int failing_multiple = 0;
};

/// Bound on the normalized volume of P, i.e. on the number of parallelepiped
/// points visited by the normality check.
inline constexpr std::size_t kDefaultParallelepipedCap = 250'000'000;

struct CheckOptions {
  std::size_t lattice_point_cap = kDefaultLatticePointCap;
  std::size_t parallelepiped_cap = kDefaultParallelepipedCap;
  /// Smooth reflexive polytopes are known to be normal up to this dimension,
  /// which spares the enumeration of large dilates. 0 disables the shortcut.
  std::size_t smooth_reflexive_normal_max_dim = 8;
};

bool check_compact(const VertexData& vd);
bool check_lattice(const VertexData& vd);

/// Hyperplane form: constant-1 rows make any compact lattice polytope reflexive.
bool check_reflexive(const HRep& h, const VertexData& vd);
/// Hull form: a unique interior lattice point p and c + a.p == 1 on every facet.
bool check_reflexive(const ConvexHull& hull, std::size_t cap = kDefaultLatticePointCap);

/// Simple vertices whose primitive edge directions form a lattice basis.
bool check_smooth(const HalfspaceSystem& system, const VertexData& vd);
inline bool check_smooth(const HRep& h, const VertexData& vd) { return check_smooth(h.system(), vd); }
inline bool check_smooth(const GeneralHRep& g, const VertexData& vd) { return check_smooth(g.system(), vd); }

/// Verifies that every lattice point of kP is a lattice point of (k-1)P plus one
/// of P. Full-dimensional polytopes are triangulated and only the fundamental
/// parallelepiped points of the simplicial cones over P x {1} are tested; the
/// others scan kP for k = 2 .. d-1. The witness is the smallest failing point
/// of the smallest failing k. Expects a bounded lattice polytope.
NormalityResult check_normal(const HalfspaceSystem& p, std::size_t cap = kDefaultLatticePointCap,
                             std::size_t parallelepiped_cap = kDefaultParallelepipedCap);

PropertyReport check_all(const IntMat& m, Representation rep, const CheckOptions& opts = {});
/// Row lists may be ragged; ragged or empty input is reported ill-formed.
PropertyReport check_all(const std::vector<std::vector<Int>>& rows, Representation rep,
                         const CheckOptions& opts = {});

}  // namespace polygen
