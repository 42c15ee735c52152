#include "polygen/evaluate.hpp"

#include "polygen/parallel.hpp"
#include "polygen/rng.hpp"

namespace polygen {

TrainingSet TrainingSet::build(std::vector<Sample> samples, std::size_t threads, std::optional<Split> split) {
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (samples[i].id != i) throw std::invalid_argument("training sample ids must equal their positions");
  TrainingSet t;
  t.index = DatasetIndex::build(samples, threads);
  for (const auto& s : samples) t.texts.insert(serialize(s));
  t.samples = std::move(samples);
  t.split = std::move(split);
  return t;
}

namespace {

SampleOutcome examine(const Sample& s, const TrainingSet* training, const CheckOptions& opts) {
  SampleOutcome out;
  out.properties = check_all(s.matrix, s.rep, opts);
  if (!training || !out.properties.all_correct) return out;
  out.copy = exact_copy(s.matrix, training->texts);
  const LatticePolytope p = make_lattice_polytope(s);
  // A row permutation describes the same polytope, so it sits in the same bucket.
  if (const auto* bucket = training->index.lookup(invariant_key(p))) {
    for (std::size_t id : *bucket) {
      if (training->samples[id].rep == s.rep && row_permutation_match(s.matrix, training->samples[id].matrix)) {
        out.row_permutation = true;
        out.resolved_id = id;
        return out;
      }
    }
  }
  const auto match = find_equivalent_in_index(p, training->index, training->samples);
  if (!match) throw InconsistencyError(s.id, "all properties hold but no equivalent training sample exists");
  out.resolved_id = match->id;
  return out;
}

void accumulate(EvalReport& report, const SampleOutcome& o, const TrainingSet* training) {
  report.add(o.properties);
  if (!o.resolved_id) return;
  auto& m = report.memorization;
  m.copies += o.copy;
  m.row_permutations += o.row_permutation;
  ++m.resolved;
  if (training && training->split) {
    const char half = training->split->membership(*o.resolved_id);
    m.half_a += half == 'a';
    m.half_b += half == 'b';
  }
}

}  // namespace

EvalReport evaluate(const ParsedDataset& generated, const TrainingSet* training, const RunConfig& config) {
  const std::size_t n = generated.block_count();
  std::vector<const Sample*> by_block(n, nullptr);
  for (const auto& s : generated.samples) {
    if (s.id >= n || by_block[s.id]) throw std::invalid_argument("sample ids must be distinct block positions");
    by_block[s.id] = &s;
  }
  std::vector<SampleOutcome> outcomes(n);
  const CheckOptions opts = config.check_options();
  parallel_for(n, config.threads, [&](std::size_t i) {
    if (by_block[i])
      outcomes[i] = examine(*by_block[i], training, opts);
    else
      outcomes[i].properties = PropertyReport::malformed();
  });

  EvalReport report;
  report.config = config;
  for (const auto& o : outcomes) accumulate(report, o, training);
  return report;
}

std::vector<std::size_t> perturbation_ids(std::size_t dataset_size, std::size_t draws, std::uint64_t seed) {
  std::vector<std::size_t> ids(draws);
  for (std::size_t i = 0; i < draws; ++i) {
    auto rng = make_stream(seed, i);
    ids[i] = uniform_below(rng, dataset_size);
  }
  return ids;
}

EvalReport perturbation_experiment(const std::function<const Sample&(std::size_t)>& sample_by_id,
                                   std::size_t dataset_size, const RunConfig& config) {
  const std::size_t draws = config.num_samples;
  if (draws > 0 && dataset_size == 0) throw std::invalid_argument("cannot draw from an empty dataset");
  std::vector<Sample> perturbed(draws);
  for (std::size_t i = 0; i < draws; ++i) {
    auto rng = make_stream(config.seed, i);
    const std::size_t id = uniform_below(rng, dataset_size);
    perturbed[i] = perturb(sample_by_id(id), rng);
    perturbed[i].id = i;
  }
  std::vector<PropertyReport> reports(draws);
  const CheckOptions opts = config.check_options();
  parallel_for(draws, config.threads,
               [&](std::size_t i) { reports[i] = check_all(perturbed[i].matrix, perturbed[i].rep, opts); });
  EvalReport report;
  report.config = config;
  report.config.mode = "perturbation";
  for (const auto& r : reports) report.add(r);
  return report;
}

EvalReport perturbation_experiment(const std::vector<Sample>& dataset, const RunConfig& config) {
  return perturbation_experiment([&](std::size_t id) -> const Sample& { return dataset.at(id); }, dataset.size(),
                                 config);
}

}  // namespace polygen
