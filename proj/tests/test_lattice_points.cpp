#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <random>

#include "oracles.hpp"
#include "polygen/lattice_points.hpp"

using namespace polygen;
using oracle::matrix;

namespace {

std::vector<oracle::Point> as_points(const LatticePointSet& s) {
  std::vector<oracle::Point> out;
  for (std::size_t i = 0; i < s.size(); ++i) out.emplace_back(s[i].begin(), s[i].end());
  std::sort(out.begin(), out.end());
  return out;
}

const IntMat kHexagon = matrix({{0, 1}, {0, -1}, {-1, 0}, {1, 0}, {1, -1}, {-1, 1}});
const IntMat kReeve = matrix({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 2}});

}  // namespace

TEST_SUITE("lattice_points") {
  TEST_CASE("hexagon") {
    const auto pts = as_points(lattice_points(HRep{kHexagon}));
    const std::vector<oracle::Point> expected{{-1, -1}, {-1, 0}, {0, -1}, {0, 0}, {0, 1}, {1, 0}, {1, 1}};
    CHECK(pts == expected);
    CHECK(as_points(interior_lattice_points(HRep{kHexagon})) == std::vector<oracle::Point>{{0, 0}});
  }

  TEST_CASE("segment given by inequalities") {
    const HalfspaceSystem seg{matrix({{0, 1}, {0, -1}, {1, 0}, {-1, 0}}), IntVec{0, 0, 0, 1}};
    CHECK(as_points(lattice_points(seg)) == std::vector<oracle::Point>{{0, 0}, {1, 0}});
  }

  TEST_CASE("Reeve tetrahedron and cross-polytope") {
    const ConvexHull reeve = facet_enumeration(VRep{kReeve});
    CHECK(as_points(lattice_points(reeve.hrep)) == std::vector<oracle::Point>{{0, 0, 0}, {0, 1, 0}, {1, 0, 0}, {1, 1, 2}});
    CHECK(interior_lattice_points(reeve.hrep).empty());
    const HalfspaceSystem two = dilate(reeve.description, 2);
    CHECK(lattice_points(two).contains(std::vector<std::int64_t>{1, 1, 1}));

    const ConvexHull cross =
        facet_enumeration(VRep{matrix({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}})});
    CHECK(as_points(interior_lattice_points(cross.hrep)) == std::vector<oracle::Point>{{0, 0, 0}});
    CHECK(lattice_points(cross.hrep).size() == 7);
  }

  TEST_CASE("enumeration of dilates matches a box scan") {
    std::mt19937_64 rng(31);
    int checked = 0;
    while (checked < 120) {
      const auto d = static_cast<std::size_t>(oracle::uniform(rng, 1, 3));
      const IntMat rows = oracle::random_rows(rng, d, 3);
      const HRep h{rows};
      if (!vertex_enumeration(h).bounded()) continue;
      ++checked;
      const oracle::System s = oracle::hyperplane_system(rows);
      long bound = 0;
      for (const auto& v : oracle::subset_vertices(s))
        for (const auto& x : v) bound = std::max(bound, std::abs(x.get_num().get_si()) / x.get_den().get_si() + 1);
      for (long k : {1L, 2L, 3L}) {
        LatticePointEnumerator en(h.system());
        CHECK(as_points(en.points(k, kDefaultLatticePointCap)) == oracle::box_points(s, -bound * k, bound * k, k));
      }
      oracle::System strict = s;
      for (auto& c : strict.c) c -= 1;
      CHECK(as_points(interior_lattice_points(h)) == oracle::box_points(strict, -bound, bound));
    }
  }

  TEST_CASE("cap and unbounded input") {
    const HalfspaceSystem big = dilate(HRep{kHexagon}, 100);
    CHECK_THROWS_AS(lattice_points(big, 100), LatticePointCapExceeded);
    CHECK(lattice_points(big, 1'000'000).size() == 30301);
    CHECK_THROWS_AS(lattice_points(HRep{matrix({{1, 0}, {0, 1}})}), UnboundedError);
  }
}
