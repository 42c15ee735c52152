// polygen: command-line front end for the dataset, checker, baseline and evaluation tools.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "polygen/dataset.hpp"
#include "polygen/evaluate.hpp"
#include "polygen/ngram.hpp"
#include "polygen/parallel.hpp"
#include "polygen/rng.hpp"

using namespace polygen;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInconsistent = 3;

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string data;
  std::string rep = "h";
  std::uint64_t seed = 0;
  std::size_t num_samples = 1000;
  std::size_t threads = 1;
  std::size_t cap = kDefaultLatticePointCap;
  std::size_t parallelepiped_cap = kDefaultParallelepipedCap;
  std::string split_manifest;
  std::string out;
};

std::string load(const std::string& path) {
  if (path.empty()) throw DataError("--data is required");
  try {
    return read_text_file(resolve_data_path(path));
  } catch (const std::runtime_error& e) {
    throw DataError(e.what());
  }
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-")
    std::cout << text;
  else
    write_text_file(out, text);
}

std::vector<Sample> load_well_formed(const std::string& path, Representation rep) {
  ParsedDataset ds = parse_dataset(load(path), rep);
  if (!ds.ill_formed.empty())
    throw DataError(path + ": block " + std::to_string(ds.ill_formed.front().id) + " is ill-formed (" +
                    ds.ill_formed.front().reason + ")");
  return std::move(ds.samples);
}

std::string stats_json(const DatasetStats& s, std::size_t dim_min, std::size_t dim_max) {
  nlohmann::ordered_json j;
  j["count"] = s.count;
  j["ill_formed"] = s.ill_formed;
  j["vocab_size"] = s.vocab_size;
  j["max_tokens_incl_specials"] = s.max_tokens_incl_specials;
  j["max_tokens_excl_specials"] = s.max_tokens_excl_specials;
  j["min_rows"] = s.min_rows;
  j["max_rows"] = s.max_rows;
  j["min_cols"] = dim_min;
  j["max_cols"] = dim_max;
  nlohmann::ordered_json hist = nlohmann::ordered_json::object();
  for (const auto& [value, count] : s.entry_histogram) hist[value.get_str()] = count;
  j["entry_histogram"] = hist;
  return j.dump(2) + "\n";
}

int run_stats(const Common& c, bool strict) {
  const std::string text = load(c.data);
  const Representation rep = parse_representation(c.rep);
  StatsAccumulator acc;
  std::size_t seen = 0, dim_min = 0, dim_max = 0, out_of_range = 0;
  std::optional<IllFormed> first_bad;
  for_each_block(
      text, rep,
      [&](Sample&& s) {
        const std::size_t d = s.matrix.cols(), m = s.matrix.rows();
        dim_min = seen++ == 0 ? d : std::min(dim_min, d);
        dim_max = std::max(dim_max, d);
        if (rep == Representation::hyperplane && (m < d + 1 || m > 3 * d)) ++out_of_range;
        acc.add(s.matrix);
      },
      [&](IllFormed&& e) {
        if (!first_bad) first_bad = std::move(e);
        acc.add_ill_formed();
      });
  const DatasetStats stats = acc.result();
  emit(c.out, stats_json(stats, dim_min, dim_max));
  if (strict) {
    if (first_bad)
      throw DataError("block " + std::to_string(first_bad->id) + " is ill-formed (" + first_bad->reason + ")");
    if (dim_min != dim_max) throw DataError("samples of different dimensions");
    if (out_of_range) std::cerr << "warning: " << out_of_range << " samples have a row count outside [d+1, 3d]\n";
  }
  return 0;
}

int run_convert(const Common& c, std::size_t vrep_limit) {
  const Representation rep = parse_representation(c.rep);
  std::vector<Sample> samples = load_well_formed(c.data, rep);
  if (vrep_limit > 0) {
    if (rep != Representation::hyperplane) throw DataError("--vrep-token-limit needs hyperplane input");
    samples = filter_by_vrep_length(samples, vrep_limit, c.threads);
    std::cerr << samples.size() << " samples kept\n";
  }
  std::vector<Sample> converted(samples.size());
  parallel_for(samples.size(), c.threads, [&](std::size_t i) { converted[i] = convert_rep(samples[i]); });
  emit(c.out, serialize_dataset(converted));
  return 0;
}

SplitSpec parse_fraction(const std::string& f, std::uint64_t seed) {
  SplitSpec spec{seed, 1, 2};
  if (std::sscanf(f.c_str(), "%lu/%lu", &spec.numerator, &spec.denominator) != 2 || spec.denominator == 0 ||
      spec.numerator > spec.denominator)
    throw CLI::ValidationError("--fraction", "expected p/q with 0 <= p <= q, q > 0");
  return spec;
}

int run_split(const Common& c, const std::string& fraction, const std::string& half_a, const std::string& half_b) {
  const Representation rep = parse_representation(c.rep);
  const std::vector<Sample> samples = load_well_formed(c.data, rep);
  const Split split = half_split(samples.size(), parse_fraction(fraction, c.seed));
  emit(c.out, split.to_json());
  auto write_half = [&](const std::string& path, const std::vector<std::size_t>& ids) {
    if (path.empty()) return;
    std::vector<Sample> part;
    for (std::size_t id : ids) part.push_back(samples[id]);
    write_text_file(path, serialize_dataset(part));
  };
  write_half(half_a, split.half_a);
  write_half(half_b, split.half_b);
  return 0;
}

RunConfig make_config(const Common& c) {
  RunConfig cfg;
  cfg.dataset = c.data;
  cfg.rep = parse_representation(c.rep);
  cfg.num_samples = c.num_samples;
  cfg.seed = c.seed;
  cfg.threads = c.threads;
  cfg.cap = c.cap;
  cfg.parallelepiped_cap = c.parallelepiped_cap;
  cfg.split_manifest = c.split_manifest;
  return cfg;
}

void write_report(const EvalReport& r, const std::string& out, const std::string& csv) {
  const auto bad = validate(r);
  if (!bad.empty()) throw InconsistencyError(0, "report invariant violated: " + bad.front());
  emit(out, to_json(r));
  if (!csv.empty()) write_text_file(csv, to_csv(r));
}

int run_perturb(const Common& c, const std::string& csv) {
  const Representation rep = parse_representation(c.rep);
  const std::string text = load(c.data);
  const std::size_t total = dataset_stats(text).count;
  const auto ids = perturbation_ids(total, c.num_samples, c.seed);
  const std::set<std::size_t> wanted(ids.begin(), ids.end());
  std::map<std::size_t, Sample> chosen;
  std::size_t position = 0;
  const std::size_t ill = for_each_batch(text, rep, 4096, [&](std::vector<Sample>& batch) {
    for (auto& s : batch) {
      if (wanted.contains(position)) chosen.emplace(position, std::move(s));
      ++position;
    }
  });
  if (ill) throw DataError("dataset contains ill-formed blocks");
  const EvalReport r = perturbation_experiment([&](std::size_t id) -> const Sample& { return chosen.at(id); }, total,
                                               make_config(c));
  write_report(r, c.out, csv);
  return 0;
}

int run_baseline_fit(const Common& c, std::size_t order) {
  const NGramModel model = fit_ngram(std::string_view(load(c.data)), order);
  std::ostringstream out;
  model.save(out);
  emit(c.out, out.str());
  return 0;
}

int run_baseline_sample(const Common& c, const std::string& model_path, std::size_t max_len) {
  std::ifstream in(model_path);
  if (!in) throw DataError("cannot read " + model_path);
  const NGramModel model = NGramModel::load(in);
  const std::size_t limit = max_len ? max_len : model.max_length();
  if (limit == 0) throw CLI::ValidationError("--max-len", "model has no recorded length bound");
  std::vector<std::string> blocks(c.num_samples);
  parallel_for(c.num_samples, c.threads, [&](std::size_t i) {
    auto rng = make_stream(c.seed, i);
    blocks[i] = render_generation(model.sample(rng, limit), model.vocab());
  });
  std::string text;
  for (std::size_t i = 0; i < blocks.size(); ++i) text += (i ? "\n" : "") + blocks[i];
  emit(c.out, text);
  return 0;
}

int run_check(const Common& c) {
  const ParsedDataset ds = parse_dataset(load(c.data), parse_representation(c.rep));
  std::vector<PropertyReport> reports(ds.block_count(), PropertyReport::malformed());
  const CheckOptions opts = make_config(c).check_options();
  parallel_for(ds.samples.size(), c.threads, [&](std::size_t i) {
    const Sample& s = ds.samples[i];
    reports[s.id] = check_all(s.matrix, s.rep, opts);
  });
  std::string out;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    nlohmann::ordered_json j;
    j["id"] = i;
    j["compact"] = r.compact;
    j["lattice"] = r.lattice;
    j["reflexive"] = r.reflexive;
    j["smooth"] = r.smooth;
    j["normal"] = to_string(r.normal);
    j["all_correct"] = r.all_correct;
    j["ill_formed"] = r.ill_formed;
    out += j.dump() + "\n";
  }
  emit(c.out, out);
  return 0;
}

int run_index_build(const Common& c) {
  const std::vector<Sample> samples = load_well_formed(c.data, parse_representation(c.rep));
  DatasetIndex index;
  try {
    index = DatasetIndex::build(samples, c.threads);
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  std::ostringstream out;
  index.save(out);
  emit(c.out, out.str());
  return 0;
}

int run_evaluate(const Common& c, const std::string& samples_path, const std::string& index_path,
                 const std::string& csv) {
  const Representation rep = parse_representation(c.rep);
  std::optional<Split> split;
  if (!c.split_manifest.empty()) {
    try {
      split = Split::from_json(read_text_file(c.split_manifest));
    } catch (const std::exception& e) {
      throw DataError(std::string("split manifest: ") + e.what());
    }
  }
  std::optional<TrainingSet> training;
  if (!c.data.empty()) {
    std::vector<Sample> train = load_well_formed(c.data, rep);
    if (!index_path.empty()) {
      std::ifstream in(index_path);
      if (!in) throw DataError("cannot read " + index_path);
      TrainingSet t;
      t.index = DatasetIndex::load(in);
      if (t.index.sample_count() != train.size()) throw DataError("index does not match the training set");
      for (const auto& s : train) t.texts.insert(serialize(s));
      t.samples = std::move(train);
      t.split = split;
      training = std::move(t);
    } else {
      try {
        training = TrainingSet::build(std::move(train), c.threads, split);
      } catch (const std::invalid_argument& e) {
        throw DataError(e.what());
      }
    }
  }
  const ParsedDataset generated = parse_dataset(load(samples_path), rep);
  RunConfig cfg = make_config(c);
  cfg.samples = samples_path;
  cfg.num_samples = generated.block_count();
  write_report(evaluate(generated, training ? &*training : nullptr, cfg), c.out, csv);
  return 0;
}

int run_report(const std::string& in, const std::string& format, const std::string& out) {
  const EvalReport r = report_from_json(read_text_file(in));
  emit(out, format == "csv" ? to_csv(r) : to_json(r));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reflexive polytope dataset tools: property checks, baseline generation, evaluation"};
  app.require_subcommand(1);
  Common c;
  auto common = [&](CLI::App* sub, bool sampling, bool needs_data = true) {
    auto* data = sub->add_option("--data", c.data, "dataset file (relative paths also tried under $POLYGEN_DATA_DIR)");
    if (needs_data) data->required();
    sub->add_option("--rep", c.rep, "representation of the input matrices")->check(CLI::IsMember({"h", "v"}));
    sub->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--cap", c.cap, "lattice point cap for normality checks");
    sub->add_option("--parallelepiped-cap", c.parallelepiped_cap, "normalized volume cap for normality checks");
    sub->add_option("--out", c.out, "output file (default stdout)");
    if (sampling) {
      sub->add_option("--seed", c.seed, "random seed");
      sub->add_option("--num-samples", c.num_samples, "number of samples");
    }
  };

  auto* ingest = app.add_subcommand("ingest", "validate a dataset and print its statistics");
  common(ingest, false);
  auto* stats = app.add_subcommand("stats", "print dataset statistics");
  common(stats, false);

  std::size_t vrep_limit = 0;
  auto* convert = app.add_subcommand("convert", "switch between hyperplane and convex hull form");
  common(convert, false);
  convert->add_option("--vrep-token-limit", vrep_limit, "keep samples whose hull form has fewer tokens");

  std::string fraction = "1/2", half_a, half_b;
  auto* split = app.add_subcommand("split", "seeded random split; writes the manifest");
  common(split, true);
  split->add_option("--fraction", fraction, "share of samples in half A, as p/q");
  split->add_option("--half-a", half_a, "write half A samples here");
  split->add_option("--half-b", half_b, "write half B samples here");

  std::string csv;
  auto* perturb_cmd = app.add_subcommand("perturb", "single-entry perturbation experiment");
  common(perturb_cmd, true);
  perturb_cmd->add_option("--csv", csv, "also write the CSV table here");

  std::size_t order = 10;
  auto* fit = app.add_subcommand("baseline-fit", "fit the n-gram baseline (line-numbered tokens)");
  common(fit, false);
  fit->add_option("--order", order, "context length")->check(CLI::PositiveNumber);

  std::string model_path;
  std::size_t max_len = 0;
  auto* sample_cmd = app.add_subcommand("baseline-sample", "sample from a fitted baseline");
  common(sample_cmd, true, false);
  sample_cmd->add_option("--model", model_path, "model file")->required();
  sample_cmd->add_option("--max-len", max_len, "token limit (default: recorded with the model)");

  auto* check = app.add_subcommand("check", "per-sample property verdicts as JSON lines");
  common(check, false);

  auto* index_cmd = app.add_subcommand("index-build", "build the invariant-key index of a training set");
  common(index_cmd, false);

  std::string samples_path, index_path;
  auto* eval = app.add_subcommand("evaluate", "evaluate generated samples against a training set");
  common(eval, false, false);
  eval->add_option("--samples", samples_path, "generated samples")->required();
  eval->add_option("--index", index_path, "prebuilt index for --data");
  eval->add_option("--split-manifest", c.split_manifest, "split manifest of the training run");
  eval->add_option("--csv", csv, "also write the CSV table here");

  std::string report_in, format = "csv";
  auto* report = app.add_subcommand("report", "re-emit a JSON report");
  report->add_option("--in", report_in, "JSON report")->required();
  report->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  report->add_option("--out", c.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*ingest) return run_stats(c, true);
    if (*stats) return run_stats(c, false);
    if (*convert) return run_convert(c, vrep_limit);
    if (*split) return run_split(c, fraction, half_a, half_b);
    if (*perturb_cmd) return run_perturb(c, csv);
    if (*fit) return run_baseline_fit(c, order);
    if (*sample_cmd) return run_baseline_sample(c, model_path, max_len);
    if (*check) return run_check(c);
    if (*index_cmd) return run_index_build(c);
    if (*eval) return run_evaluate(c, samples_path, index_path, csv);
    if (*report) return run_report(report_in, format, c.out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InconsistencyError& e) {
    std::cerr << "inconsistency: " << e.what() << "\n";
    return kExitInconsistent;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
