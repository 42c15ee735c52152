// Double description method for polyhedral cones {y : A y >= 0}.

#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "polygen/exact_linalg.hpp"

namespace polygen {

/// Fixed-size bitset sized at runtime; used for constraint incidence sets.
class IncidenceSet {
 public:
  IncidenceSet() = default;
  explicit IncidenceSet(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i / 64] |= (std::uint64_t{1} << (i % 64)); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  std::size_t size() const { return bits_; }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool subset_of(const IncidenceSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

  IncidenceSet operator&(const IncidenceSet& o) const {
    IncidenceSet r = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= o.words_[i];
    return r;
  }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < bits_; ++i)
      if (test(i)) out.push_back(i);
    return out;
  }

  bool operator==(const IncidenceSet&) const = default;

 private:
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

struct ConeGenerators {
  std::vector<IntVec> rays;             ///< primitive extreme rays of the pointed part
  std::vector<IncidenceSet> zero_sets;  ///< constraints tight at each ray
  std::vector<IntVec> lineality;        ///< basis of the lineality space
};

/// Generators of {y in R^n : constraints * y >= 0}, computed incrementally over
/// the rows of `constraints` with exact integer arithmetic.
ConeGenerators double_description(const IntMat& constraints);

}  // namespace polygen
