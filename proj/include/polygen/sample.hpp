// A dataset sample: one integer matrix in one of the two representations.

#pragma once

#include <cstddef>
#include <string>

#include "polygen/exact_linalg.hpp"

namespace polygen {

/// hyperplane: rows w of 1 + w.x >= 0; convex_hull: rows are points.
enum class Representation { hyperplane, convex_hull };

const char* to_string(Representation rep);
Representation parse_representation(const std::string& s);  ///< "h"/"v"; throws std::invalid_argument

struct Sample {
  IntMat matrix;
  Representation rep = Representation::hyperplane;
  std::size_t id = 0;
};

}  // namespace polygen
