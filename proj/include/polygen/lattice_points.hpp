// Lattice point enumeration in bounded polyhedra.

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "polygen/polytope.hpp"

namespace polygen {

inline constexpr std::size_t kDefaultLatticePointCap = 2'000'000;

/// Raised when an enumeration would produce more points than the cap allows.
class LatticePointCapExceeded : public std::runtime_error {
 public:
  explicit LatticePointCapExceeded(std::size_t cap)
      : std::runtime_error("lattice point count exceeds cap of " + std::to_string(cap)) {}
};

class UnboundedError : public std::domain_error {
 public:
  UnboundedError() : std::domain_error("polyhedron is unbounded") {}
};

/// Flat list of integer points of one dimension.
class LatticePointSet {
 public:
  explicit LatticePointSet(std::size_t dim = 0) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const { return size() == 0; }

  std::span<const std::int64_t> operator[](std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  void push_back(std::span<const std::int64_t> p) { coords_.insert(coords_.end(), p.begin(), p.end()); }

  std::vector<IntVec> to_int_vecs() const;
  bool contains(std::span<const std::int64_t> p) const;

 private:
  std::size_t dim_;
  std::vector<std::int64_t> coords_;
};

/// Enumerates lattice points of scale * P for a bounded system P.
///
/// Coordinates are fixed one at a time; the admissible range of coordinate i
/// comes from the exact projection of P onto the first i + 1 coordinates, so
/// every partial point extends to a real point of P.
class LatticePointEnumerator {
 public:
  /// Throws UnboundedError or EmptyPolyhedronError.
  explicit LatticePointEnumerator(const HalfspaceSystem& system);

  std::size_t dim() const { return dim_; }
  const VertexData& vertex_data() const { return vertex_data_; }

  LatticePointSet points(std::int64_t scale, std::size_t cap) const;
  bool contains(std::span<const std::int64_t> x, std::int64_t scale) const;

 private:
  struct Level {
    std::size_t width = 0;              // number of coordinates involved
    std::vector<std::int64_t> normals;  // row-major, width columns
    std::vector<std::int64_t> constants;
  };

  std::size_t dim_ = 0;
  VertexData vertex_data_;
  std::vector<Level> levels_;  // levels_[i] constrains coordinates 0..i
  std::vector<Rat> box_lo_, box_hi_;
};

/// All lattice points of the polytope, boundary included.
LatticePointSet lattice_points(const HalfspaceSystem& p, std::size_t cap = kDefaultLatticePointCap);
LatticePointSet lattice_points(const HRep& p, std::size_t cap = kDefaultLatticePointCap);
LatticePointSet lattice_points(const GeneralHRep& p, std::size_t cap = kDefaultLatticePointCap);

/// Lattice points at which every inequality is strict.
LatticePointSet interior_lattice_points(const HalfspaceSystem& p, std::size_t cap = kDefaultLatticePointCap);
LatticePointSet interior_lattice_points(const HRep& p, std::size_t cap = kDefaultLatticePointCap);
LatticePointSet interior_lattice_points(const GeneralHRep& p, std::size_t cap = kDefaultLatticePointCap);

std::int64_t to_int64(const Int& x);  ///< throws std::overflow_error when out of range

}  // namespace polygen
