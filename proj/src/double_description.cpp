#include "polygen/double_description.hpp"

namespace polygen {

namespace {

int sign_of(const Int& x) { return sgn(x); }

// Returns alpha * x - beta * y, made primitive.
IntVec combine(const Int& alpha, const IntVec& x, const Int& beta, const IntVec& y) {
  IntVec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = alpha * x[i] - beta * y[i];
  make_primitive_in_place(out);
  return out;
}

}  // namespace

ConeGenerators double_description(const IntMat& constraints) {
  const std::size_t n = constraints.cols();
  const std::size_t m = constraints.rows();

  ConeGenerators g;
  for (std::size_t i = 0; i < n; ++i) {
    IntVec e(n, 0);
    e[i] = 1;
    g.lineality.push_back(std::move(e));
  }

  for (std::size_t c = 0; c < m; ++c) {
    const auto a = constraints.row(c);

    // A lineality direction that crosses the hyperplane becomes a ray.
    std::size_t pick = g.lineality.size();
    Int pick_val;
    for (std::size_t i = 0; i < g.lineality.size(); ++i) {
      Int v = dot(a, g.lineality[i]);
      if (v != 0) {
        pick = i;
        pick_val = v;
        break;
      }
    }
    if (pick != g.lineality.size()) {
      IntVec l0 = std::move(g.lineality[pick]);
      g.lineality.erase(g.lineality.begin() + static_cast<std::ptrdiff_t>(pick));
      if (pick_val < 0) {
        for (auto& x : l0) x = -x;
        pick_val = -pick_val;
      }
      for (auto& l : g.lineality) {
        Int v = dot(a, l);
        if (v != 0) l = combine(pick_val, l, v, l0);
      }
      for (std::size_t r = 0; r < g.rays.size(); ++r) {
        Int v = dot(a, g.rays[r]);
        if (v != 0) g.rays[r] = combine(pick_val, g.rays[r], v, l0);
        g.zero_sets[r].set(c);
      }
      // l0 was orthogonal to every earlier constraint.
      IncidenceSet z(m);
      for (std::size_t k = 0; k < c; ++k) z.set(k);
      g.rays.push_back(std::move(l0));
      g.zero_sets.push_back(std::move(z));
      continue;
    }

    std::vector<Int> vals(g.rays.size());
    std::vector<std::size_t> pos, neg;
    for (std::size_t r = 0; r < g.rays.size(); ++r) {
      vals[r] = dot(a, g.rays[r]);
      int s = sign_of(vals[r]);
      if (s > 0) pos.push_back(r);
      else if (s < 0) neg.push_back(r);
    }
    if (neg.empty()) {
      for (std::size_t r = 0; r < g.rays.size(); ++r)
        if (vals[r] == 0) g.zero_sets[r].set(c);
      continue;
    }

    // A 2-face through p and q has n - 2 - dim(lineality) independent tight
    // constraints (implicit equalities included), which bounds the count below.
    const std::size_t pointed_dim = n - g.lineality.size();
    std::vector<IntVec> new_rays;
    std::vector<IncidenceSet> new_zero;
    for (std::size_t p : pos) {
      for (std::size_t q : neg) {
        IncidenceSet common = g.zero_sets[p] & g.zero_sets[q];
        if (pointed_dim >= 2 && common.count() + 2 < pointed_dim) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < g.rays.size() && adjacent; ++r) {
          if (r == p || r == q) continue;
          if (common.subset_of(g.zero_sets[r])) adjacent = false;
        }
        if (!adjacent) continue;
        new_rays.push_back(combine(vals[p], g.rays[q], vals[q], g.rays[p]));
        common.set(c);
        new_zero.push_back(std::move(common));
      }
    }

    std::vector<IntVec> kept;
    std::vector<IncidenceSet> kept_zero;
    for (std::size_t r = 0; r < g.rays.size(); ++r) {
      if (vals[r] < 0) continue;
      if (vals[r] == 0) g.zero_sets[r].set(c);
      kept.push_back(std::move(g.rays[r]));
      kept_zero.push_back(std::move(g.zero_sets[r]));
    }
    for (std::size_t i = 0; i < new_rays.size(); ++i) {
      kept.push_back(std::move(new_rays[i]));
      kept_zero.push_back(std::move(new_zero[i]));
    }
    g.rays = std::move(kept);
    g.zero_sets = std::move(kept_zero);
  }
  return g;
}

}  // namespace polygen
