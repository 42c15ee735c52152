// Placing triangulations and fundamental parallelepipeds of simplicial cones.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "polygen/exact_linalg.hpp"

namespace polygen {

/// Simplices (indices into `points`, sorted) of the placing triangulation that
/// adds the points in order. Throws DimensionError unless the points span R^d.
std::vector<std::vector<std::size_t>> placing_triangulation(const std::vector<IntVec>& points);

/// |det| of the homogenized vertices: d! times the volume of the simplex.
Int normalized_volume(const std::vector<IntVec>& points, std::span<const std::size_t> simplex);

/// Calls `fn` with every nonzero lattice point sum(l_i g_i), 0 <= l_i < 1, of
/// the cone over the linearly independent generators `g`; |det g| - 1 calls.
/// Throws std::overflow_error when the coordinates leave the int64 range.
void for_each_parallelepiped_point(const std::vector<IntVec>& g,
                                   const std::function<void(std::span<const std::int64_t>)>& fn);

}  // namespace polygen
