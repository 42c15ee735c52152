// Evaluation report: counts, JSON and CSV forms, and consistency checks.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polygen/properties.hpp"

namespace polygen {

struct RunConfig {
  std::string mode = "evaluate";  ///< "evaluate" or "perturbation"
  std::string dataset;            ///< training or source dataset path
  Representation rep = Representation::hyperplane;
  std::string samples;  ///< generated sample file
  std::size_t num_samples = 0;
  std::uint64_t seed = 0;
  /// Not written to reports: output must not depend on it.
  std::size_t threads = 1;
  std::size_t cap = kDefaultLatticePointCap;
  std::size_t parallelepiped_cap = kDefaultParallelepipedCap;
  std::string split_manifest;
  std::size_t smooth_reflexive_normal_max_dim = CheckOptions{}.smooth_reflexive_normal_max_dim;

  CheckOptions check_options() const { return CheckOptions{.lattice_point_cap = cap,
                        .parallelepiped_cap = parallelepiped_cap,
                        .smooth_reflexive_normal_max_dim = smooth_reflexive_normal_max_dim}; }
  bool operator==(const RunConfig&) const = default;
};

struct Intersections {
  std::size_t compact_lattice = 0;
  std::size_t compact_lattice_normal = 0;
  std::size_t compact_not_smooth = 0;
  std::size_t compact_lattice_not_smooth = 0;
  bool operator==(const Intersections&) const = default;
};

struct Memorization {
  std::size_t copies = 0;
  std::size_t row_permutations = 0;
  std::size_t resolved = 0;
  std::size_t half_a = 0;
  std::size_t half_b = 0;
  bool operator==(const Memorization&) const = default;
};

struct EvalReport {
  RunConfig config;
  std::size_t samples = 0;  ///< blocks read, ill-formed included
  std::size_t compact = 0;
  std::size_t lattice = 0;
  std::size_t reflexive = 0;
  std::size_t smooth = 0;
  std::size_t normal = 0;
  Intersections intersections;
  std::size_t all_correct = 0;
  std::size_t ill_formed = 0;
  std::size_t normal_unverified = 0;
  Memorization memorization;

  /// Adds one sample's verdicts (no memorization data).
  void add(const PropertyReport& r);
  bool operator==(const EvalReport&) const = default;
};

/// Violated report invariants, empty when consistent.
std::vector<std::string> validate(const EvalReport& r);

std::string to_json(const EvalReport& r);
EvalReport report_from_json(const std::string& text);
/// "metric,count" rows; the first five mirror the published table rows.
std::string to_csv(const EvalReport& r);

}  // namespace polygen
