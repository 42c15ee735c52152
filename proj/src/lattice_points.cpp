#include "polygen/lattice_points.hpp"

#include <algorithm>

namespace polygen {

namespace {

using i128 = __int128;

i128 floor_div(i128 a, i128 b) {  // b > 0
  return a >= 0 ? a / b : -((-a + b - 1) / b);
}

i128 ceil_div(i128 a, i128 b) { return -floor_div(-a, b); }

Int floor_rat(const Rat& r) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Int ceil_rat(const Rat& r) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

}  // namespace

std::int64_t to_int64(const Int& x) {
  if (!x.fits_slong_p()) throw std::overflow_error("integer does not fit in 64 bits: " + x.get_str());
  return x.get_si();
}

std::vector<IntVec> LatticePointSet::to_int_vecs() const {
  std::vector<IntVec> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    IntVec v;
    for (auto c : (*this)[i]) v.emplace_back(static_cast<long>(c));
    out.push_back(std::move(v));
  }
  return out;
}

bool LatticePointSet::contains(std::span<const std::int64_t> p) const {
  for (std::size_t i = 0; i < size(); ++i)
    if (std::equal(p.begin(), p.end(), (*this)[i].begin())) return true;
  return false;
}

LatticePointEnumerator::LatticePointEnumerator(const HalfspaceSystem& system) : dim_(system.dim()) {
  vertex_data_ = vertex_enumeration(system);
  if (!vertex_data_.bounded()) throw UnboundedError();

  const auto& verts = vertex_data_.vertices;
  box_lo_.assign(dim_, verts.front()[0]);
  box_hi_.assign(dim_, verts.front()[0]);
  for (std::size_t j = 0; j < dim_; ++j) {
    box_lo_[j] = box_hi_[j] = verts.front()[j];
    for (const auto& v : verts) {
      box_lo_[j] = std::min(box_lo_[j], v[j]);
      box_hi_[j] = std::max(box_hi_[j], v[j]);
    }
  }

  auto to_level = [](const HalfspaceSystem& s) {
    Level lv;
    lv.width = s.dim();
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = 0; j < s.dim(); ++j) lv.normals.push_back(to_int64(s.normals(i, j)));
      lv.constants.push_back(to_int64(s.constants[i]));
    }
    return lv;
  };

  levels_.resize(dim_);
  for (std::size_t i = 0; i + 1 < dim_; ++i) {
    std::vector<RatVec> projected;
    projected.reserve(verts.size());
    for (const auto& v : verts) projected.emplace_back(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(i + 1));
    levels_[i] = to_level(convex_hull(projected, i + 1).description);
  }
  levels_[dim_ - 1] = to_level(system);
}

bool LatticePointEnumerator::contains(std::span<const std::int64_t> x, std::int64_t scale) const {
  const Level& lv = levels_.back();
  const std::size_t m = lv.constants.size();
  for (std::size_t r = 0; r < m; ++r) {
    i128 s = static_cast<i128>(lv.constants[r]) * scale;
    for (std::size_t j = 0; j < dim_; ++j) s += static_cast<i128>(lv.normals[r * dim_ + j]) * x[j];
    if (s < 0) return false;
  }
  return true;
}

LatticePointSet LatticePointEnumerator::points(std::int64_t scale, std::size_t cap) const {
  LatticePointSet out(dim_);
  std::vector<std::int64_t> x(dim_, 0);
  std::vector<std::int64_t> lo_box(dim_), hi_box(dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    lo_box[j] = to_int64(ceil_rat(box_lo_[j] * scale));
    hi_box[j] = to_int64(floor_rat(box_hi_[j] * scale));
  }

  std::size_t count = 0;
  auto recurse = [&](auto&& self, std::size_t i) -> void {
    const Level& lv = levels_[i];
    const std::size_t w = lv.width;
    i128 lo = lo_box[i], hi = hi_box[i];
    for (std::size_t r = 0; r < lv.constants.size(); ++r) {
      const std::int64_t* a = lv.normals.data() + r * w;
      i128 s = static_cast<i128>(lv.constants[r]) * scale;
      for (std::size_t j = 0; j < i; ++j) s += static_cast<i128>(a[j]) * x[j];
      const i128 ai = a[i];
      if (ai > 0) lo = std::max(lo, ceil_div(-s, ai));
      else if (ai < 0) hi = std::min(hi, floor_div(s, -ai));
      else if (s < 0) return;
      if (lo > hi) return;
    }
    for (i128 v = lo; v <= hi; ++v) {
      x[i] = static_cast<std::int64_t>(v);
      if (i + 1 < dim_) {
        self(self, i + 1);
      } else if (contains(x, scale)) {
        if (++count > cap) throw LatticePointCapExceeded(cap);
        out.push_back(x);
      }
    }
  };
  recurse(recurse, 0);
  return out;
}

LatticePointSet lattice_points(const HalfspaceSystem& p, std::size_t cap) {
  try {
    return LatticePointEnumerator(p).points(1, cap);
  } catch (const EmptyPolyhedronError&) {
    return LatticePointSet(p.dim());
  }
}

LatticePointSet lattice_points(const HRep& p, std::size_t cap) { return lattice_points(p.system(), cap); }
LatticePointSet lattice_points(const GeneralHRep& p, std::size_t cap) { return lattice_points(p.system(), cap); }

LatticePointSet interior_lattice_points(const HalfspaceSystem& p, std::size_t cap) {
  // For integral data, c + a.x > 0 at a lattice point iff (c - 1) + a.x >= 0.
  if (!vertex_enumeration(p).bounded()) throw UnboundedError();
  HalfspaceSystem strict = p;
  for (auto& c : strict.constants) c -= 1;
  return lattice_points(strict, cap);
}

LatticePointSet interior_lattice_points(const HRep& p, std::size_t cap) {
  return interior_lattice_points(p.system(), cap);
}

LatticePointSet interior_lattice_points(const GeneralHRep& p, std::size_t cap) {
  return interior_lattice_points(p.system(), cap);
}

}  // namespace polygen
