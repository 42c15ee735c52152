// Lattice equivalence: copy and row-permutation checks, invariant keys, an
// anchor-based search for unimodular witnesses, and a key-bucketed index.

#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "polygen/polytope.hpp"
#include "polygen/sample.hpp"

namespace polygen {

/// Vertices and primitive facet inequalities of a full-dimensional lattice polytope.
struct LatticePolytope {
  std::size_t dim = 0;
  std::vector<IntVec> vertices;  // sorted
  std::vector<Facet> facets;     // sorted

  /// True when every facet reads a.x >= -1, i.e. the origin is the unique
  /// interior lattice point.
  bool origin_reflexive() const;
};

/// Throws std::invalid_argument unless the matrix describes a compact,
/// full-dimensional lattice polytope.
LatticePolytope make_lattice_polytope(const IntMat& m, Representation rep);
LatticePolytope make_lattice_polytope(const Sample& s);

struct InvariantKey {
  std::size_t n_vertices = 0;
  std::size_t n_facets = 0;
  /// (value, multiplicity) sorted by value; values a.v + c - 1 over all
  /// facet/vertex pairs (a.v after centering a reflexive polytope).
  std::vector<std::pair<Int, std::size_t>> pairing;

  std::string serialize() const;
  static InvariantKey parse(const std::string& text);
  bool operator==(const InvariantKey&) const = default;
};

InvariantKey invariant_key(const LatticePolytope& p);

struct EquivalenceWitness {
  IntMat u;  ///< d x d, det = +-1
  IntVec t;  ///< translation
};

/// Checks det(u) = +-1 and that x -> u x + t maps vertices of p onto those of q.
bool verify_witness(const LatticePolytope& p, const LatticePolytope& q, const EquivalenceWitness& w);

/// A verified witness mapping p onto q, or none when they are not equivalent.
std::optional<EquivalenceWitness> equivalent(const LatticePolytope& p, const LatticePolytope& q);

/// Byte equality of the serialized sample with some training text.
bool exact_copy(const IntMat& sample, const std::unordered_set<std::string>& training_texts);
bool row_permutation_match(const IntMat& a, const IntMat& b);

/// Training-sample ids bucketed by invariant key; immutable once built.
class DatasetIndex {
 public:
  /// Throws std::invalid_argument if any training sample is not a compact
  /// full-dimensional lattice polytope.
  static DatasetIndex build(const std::vector<Sample>& training, std::size_t threads = 1);
  static DatasetIndex load(std::istream& in);
  void save(std::ostream& out) const;

  const std::vector<std::size_t>* lookup(const InvariantKey& key) const;
  std::size_t sample_count() const;
  std::size_t bucket_count() const { return buckets_.size(); }
  bool operator==(const DatasetIndex&) const = default;

 private:
  std::map<std::string, std::vector<std::size_t>> buckets_;
};

struct IndexMatch {
  std::size_t id = 0;
  EquivalenceWitness witness;
};

/// Shortlists by key, then searches pairwise. `training` is indexed by sample id.
std::optional<IndexMatch> find_equivalent_in_index(const LatticePolytope& p, const DatasetIndex& index,
                                                   const std::vector<Sample>& training);

}  // namespace polygen
