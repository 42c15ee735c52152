// Batch evaluation of generated samples and the perturbation experiment.

#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "polygen/dataset.hpp"
#include "polygen/equivalence.hpp"
#include "polygen/report.hpp"

namespace polygen {

/// An all-correct sample with no equivalent training sample.
class InconsistencyError : public std::runtime_error {
 public:
  InconsistencyError(std::size_t sample_id, const std::string& detail)
      : std::runtime_error("sample " + std::to_string(sample_id) + ": " + detail), sample_id(sample_id) {}
  std::size_t sample_id;
};

/// Training samples (id = position), their texts, the key index and an optional split.
struct TrainingSet {
  std::vector<Sample> samples;
  std::unordered_set<std::string> texts;
  DatasetIndex index;
  std::optional<Split> split;

  static TrainingSet build(std::vector<Sample> samples, std::size_t threads, std::optional<Split> split = {});
};

/// Per-sample outcome before aggregation.
struct SampleOutcome {
  PropertyReport properties;
  bool copy = false;
  bool row_permutation = false;
  std::optional<std::size_t> resolved_id;
};

/// Checks every block; with a training set, all-correct samples are also matched
/// against it. Throws InconsistencyError for an unresolved all-correct sample.
EvalReport evaluate(const ParsedDataset& generated, const TrainingSet* training, const RunConfig& config);

/// Draw i takes stream (seed, i): a uniform id in [0, dataset_size), then one perturbation.
std::vector<std::size_t> perturbation_ids(std::size_t dataset_size, std::size_t draws, std::uint64_t seed);

EvalReport perturbation_experiment(const std::function<const Sample&(std::size_t)>& sample_by_id,
                                   std::size_t dataset_size, const RunConfig& config);
EvalReport perturbation_experiment(const std::vector<Sample>& dataset, const RunConfig& config);

}  // namespace polygen
