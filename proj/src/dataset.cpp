#include "polygen/dataset.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "polygen/parallel.hpp"
#include "polygen/polytope.hpp"
#include "polygen/rng.hpp"

namespace polygen {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

bool is_integer_literal(std::string_view t) {
  std::size_t i = t.starts_with('-') ? 1 : 0;
  if (i == t.size()) return false;
  for (; i < t.size(); ++i)
    if (t[i] < '0' || t[i] > '9') return false;
  return true;
}

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string parse_block(const std::vector<std::string_view>& lines, IntMat& out) {
  std::vector<std::vector<std::string_view>> rows;
  rows.reserve(lines.size());
  for (auto line : lines) rows.push_back(split_words(line));
  const std::size_t d = rows.front().size();
  for (const auto& r : rows) {
    for (auto w : r)
      if (!is_integer_literal(w)) return "non-integer token '" + std::string(w) + "'";
    if (r.size() != d) return "rows of unequal length";
  }
  out = IntMat(rows.size(), d);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < d; ++j) out(i, j) = Int(std::string(rows[i][j]));
  return {};
}

}  // namespace

void for_each_block(std::string_view text, Representation rep, const std::function<void(Sample&&)>& on_sample,
                    const std::function<void(IllFormed&&)>& on_ill_formed) {
  std::size_t id = 0;
  std::vector<std::string_view> block;
  auto flush = [&] {
    if (block.empty()) return;
    IntMat m;
    std::string error = parse_block(block, m);
    if (error.empty())
      on_sample(Sample{std::move(m), rep, id});
    else
      on_ill_formed(IllFormed{id, std::move(error)});
    ++id;
    block.clear();
  };
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    if (std::all_of(line.begin(), line.end(), is_space))
      flush();
    else
      block.push_back(line);
    pos = end + 1;
  }
  flush();
}

ParsedDataset parse_dataset(std::string_view text, Representation rep) {
  ParsedDataset out;
  for_each_block(
      text, rep, [&](Sample&& s) { out.samples.push_back(std::move(s)); },
      [&](IllFormed&& e) { out.ill_formed.push_back(std::move(e)); });
  return out;
}

std::size_t for_each_batch(std::string_view text, Representation rep, std::size_t batch_size,
                           const std::function<void(std::vector<Sample>&)>& fn) {
  std::vector<Sample> batch;
  std::size_t ill = 0;
  for_each_block(
      text, rep,
      [&](Sample&& s) {
        batch.push_back(std::move(s));
        if (batch.size() >= batch_size) {
          fn(batch);
          batch.clear();
        }
      },
      [&](IllFormed&&) { ++ill; });
  if (!batch.empty()) fn(batch);
  return ill;
}

std::string serialize(const IntMat& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out += ' ';
      out += m(i, j).get_str();
    }
    out += '\n';
  }
  return out;
}

std::string serialize(const Sample& s) { return serialize(s.matrix); }

std::string serialize_dataset(const std::vector<Sample>& samples) {
  std::string out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i) out += '\n';
    out += serialize(samples[i]);
  }
  return out;
}

const char* to_string(Scheme s) { return s == Scheme::standard ? "standard" : "line_numbered"; }

Vocab Vocab::build(const std::vector<Int>& entries, std::size_t max_rows, Scheme scheme) {
  Vocab v;
  v.scheme_ = scheme;
  v.tokens_ = {"<pad>", "<sos>", "<eos>"};
  if (scheme == Scheme::standard) {
    v.tokens_.push_back("<nl>");
  } else {
    for (std::size_t r = 1; r <= max_rows; ++r) v.tokens_.push_back("<nl_" + std::to_string(r) + ">");
  }
  std::set<Int> sorted(entries.begin(), entries.end());
  for (const auto& x : sorted) v.tokens_.push_back(x.get_str());
  v.index();
  return v;
}

Vocab Vocab::build(const std::vector<Sample>& samples, Scheme scheme) {
  std::set<Int> entries;
  std::size_t max_rows = 0;
  for (const auto& s : samples) {
    max_rows = std::max(max_rows, s.matrix.rows());
    for (std::size_t i = 0; i < s.matrix.rows(); ++i)
      for (std::size_t j = 0; j < s.matrix.cols(); ++j) entries.insert(s.matrix(i, j));
  }
  return build(std::vector<Int>(entries.begin(), entries.end()), max_rows, scheme);
}

Vocab Vocab::from_tokens(const std::vector<std::string>& tokens) {
  if (tokens.size() < 4 || tokens[0] != "<pad>" || tokens[1] != "<sos>" || tokens[2] != "<eos>")
    throw std::invalid_argument("vocabulary must start with <pad> <sos> <eos>");
  Vocab v;
  v.tokens_ = tokens;
  v.scheme_ = tokens[3] == "<nl>" ? Scheme::standard : Scheme::line_numbered;
  v.index();
  if (v.newline_count_ == 0) throw std::invalid_argument("vocabulary lacks newline tokens");
  return v;
}

void Vocab::index() {
  ids_.clear();
  newline_count_ = 0;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    const std::string& t = tokens_[i];
    if (!ids_.emplace(t, static_cast<int>(i)).second) throw std::invalid_argument("duplicate token " + t);
    if (i >= 3 && t.starts_with("<nl")) {
      const std::string expected =
          scheme_ == Scheme::standard ? "<nl>" : "<nl_" + std::to_string(newline_count_ + 1) + ">";
      if (t != expected || i != static_cast<std::size_t>(first_newline_ + newline_count_))
        throw std::invalid_argument("unexpected newline token " + t);
      ++newline_count_;
    } else if (i >= 3 && !is_integer_literal(t)) {
      throw std::invalid_argument("unexpected token " + t);
    }
  }
}

std::optional<int> Vocab::find(const std::string& token) const {
  const auto it = ids_.find(token);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

int Vocab::newline(std::size_t row) const {
  if (scheme_ == Scheme::standard) return first_newline_;
  if (row < 1 || row > static_cast<std::size_t>(newline_count_))
    throw std::out_of_range("no newline token for row " + std::to_string(row));
  return first_newline_ + static_cast<int>(row) - 1;
}

bool Vocab::is_newline(int id) const { return id >= first_newline_ && id < first_newline_ + newline_count_; }

std::size_t Vocab::newline_row(int id) const {
  if (!is_newline(id) || scheme_ == Scheme::standard) return 0;
  return static_cast<std::size_t>(id - first_newline_ + 1);
}

std::optional<Int> Vocab::integer(int id) const {
  if (id < first_newline_ + newline_count_ || id >= static_cast<int>(tokens_.size())) return std::nullopt;
  return Int(tokens_[static_cast<std::size_t>(id)]);
}

TokenSeq tokenize(const IntMat& m, const Vocab& vocab) {
  TokenSeq seq{{Vocab::kSos}, vocab.scheme()};
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const auto id = vocab.find(m(i, j).get_str());
      if (!id) throw std::out_of_range("token " + m(i, j).get_str() + " not in vocabulary");
      seq.ids.push_back(*id);
    }
    seq.ids.push_back(vocab.newline(i + 1));
  }
  seq.ids.push_back(Vocab::kEos);
  return seq;
}

Detokenized detokenize(const TokenSeq& seq, const Vocab& vocab) {
  auto fail = [](std::string why) { return Detokenized{std::nullopt, std::move(why)}; };
  if (seq.ids.empty() || seq.ids.front() != Vocab::kSos) return fail("missing start token");
  std::vector<std::vector<Int>> rows;
  std::vector<Int> row;
  std::size_t i = 1;
  bool closed = false;
  for (; i < seq.ids.size(); ++i) {
    const int id = seq.ids[i];
    if (id == Vocab::kEos) {
      closed = true;
      break;
    }
    if (vocab.is_newline(id)) {
      if (row.empty()) return fail("empty row");
      if (!rows.empty() && row.size() != rows.front().size()) return fail("rows of unequal length");
      rows.push_back(std::move(row));
      row.clear();
    } else if (auto x = vocab.integer(id)) {
      row.push_back(std::move(*x));
    } else {
      return fail("unexpected token " + vocab.token(id));
    }
  }
  if (!closed) return fail("missing end token");
  if (!row.empty()) return fail("last row not terminated");
  if (rows.empty()) return fail("no rows");
  for (++i; i < seq.ids.size(); ++i)
    if (seq.ids[i] != Vocab::kPad) return fail("tokens after end token");
  return Detokenized{IntMat::from_rows(rows), {}};
}

std::string render_generation(const TokenSeq& seq, const Vocab& vocab) {
  const Detokenized d = detokenize(seq, vocab);
  if (d.matrix) return serialize(*d.matrix);
  std::string out = "#ill-formed";
  for (int id : seq.ids) out += ' ' + vocab.token(id);
  return out + '\n';
}

std::size_t token_length(const IntMat& m, bool with_specials) {
  return m.rows() * (m.cols() + 1) + (with_specials ? 2 : 0);
}

void StatsAccumulator::add(const IntMat& m) {
  DatasetStats& s = stats_;
  s.min_rows = s.count == 0 ? m.rows() : std::min(s.min_rows, m.rows());
  ++s.count;
  s.max_rows = std::max(s.max_rows, m.rows());
  s.max_tokens_incl_specials = std::max(s.max_tokens_incl_specials, token_length(m, true));
  s.max_tokens_excl_specials = std::max(s.max_tokens_excl_specials, token_length(m, false));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) ++s.entry_histogram[m(i, j)];
}

DatasetStats StatsAccumulator::result() const {
  DatasetStats s = stats_;
  s.vocab_size = 4 + s.entry_histogram.size();
  return s;
}

DatasetStats dataset_stats(const ParsedDataset& ds) {
  StatsAccumulator acc;
  for (const auto& s : ds.samples) acc.add(s.matrix);
  for (std::size_t i = 0; i < ds.ill_formed.size(); ++i) acc.add_ill_formed();
  return acc.result();
}

DatasetStats dataset_stats(std::string_view text) {
  StatsAccumulator acc;
  for_each_block(
      text, Representation::hyperplane, [&](Sample&& s) { acc.add(s.matrix); },
      [&](IllFormed&&) { acc.add_ill_formed(); });
  return acc.result();
}

char Split::membership(std::size_t id) const {
  if (std::binary_search(half_a.begin(), half_a.end(), id)) return 'a';
  if (std::binary_search(half_b.begin(), half_b.end(), id)) return 'b';
  return 0;
}

std::string Split::to_json() const {
  nlohmann::ordered_json j;
  j["rng"] = kRngName;
  j["seed"] = spec.seed;
  j["fraction"] = {spec.numerator, spec.denominator};
  j["half_a"] = half_a;
  j["half_b"] = half_b;
  return j.dump() + "\n";
}

Split Split::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  Split s;
  s.spec.seed = j.at("seed").get<std::uint64_t>();
  s.spec.numerator = j.at("fraction").at(0).get<std::uint64_t>();
  s.spec.denominator = j.at("fraction").at(1).get<std::uint64_t>();
  s.half_a = j.at("half_a").get<std::vector<std::size_t>>();
  s.half_b = j.at("half_b").get<std::vector<std::size_t>>();
  if (!std::is_sorted(s.half_a.begin(), s.half_a.end()) || !std::is_sorted(s.half_b.begin(), s.half_b.end()))
    throw std::invalid_argument("split manifest ids must be sorted");
  return s;
}

Split half_split(std::size_t n, const SplitSpec& spec) {
  if (spec.denominator == 0 || spec.numerator > spec.denominator)
    throw std::invalid_argument("split fraction must lie in [0, 1]");
  std::vector<std::size_t> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = i;
  auto rng = make_stream(spec.seed, 0);
  for (std::size_t i = n; i > 1; --i) std::swap(ids[i - 1], ids[uniform_below(rng, i)]);
  const std::size_t size_a = static_cast<std::size_t>(
      (static_cast<unsigned __int128>(n) * spec.numerator + spec.denominator - 1) / spec.denominator);
  Split s{spec, {ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(size_a)},
          {ids.begin() + static_cast<std::ptrdiff_t>(size_a), ids.end()}};
  std::sort(s.half_a.begin(), s.half_a.end());
  std::sort(s.half_b.begin(), s.half_b.end());
  return s;
}

Sample convert_rep(const Sample& s) {
  const std::size_t d = s.matrix.cols();
  if (s.rep == Representation::hyperplane) {
    const VertexData vd = vertex_enumeration(HRep{s.matrix});
    if (!vd.bounded()) throw ConversionError("polyhedron is unbounded");
    IntMat out(vd.vertices.size(), d);
    for (std::size_t i = 0; i < vd.vertices.size(); ++i) {
      if (!is_integral(vd.vertices[i])) throw ConversionError("vertex is not a lattice point");
      for (std::size_t j = 0; j < d; ++j) out(i, j) = vd.vertices[i][j].get_num();
    }
    return Sample{std::move(out), Representation::convex_hull, s.id};
  }
  const ConvexHull hull = facet_enumeration(VRep{s.matrix});
  if (!hull.vertex_data.full_dim) throw ConversionError("hull is not full-dimensional");
  std::vector<IntVec> rows;
  for (const auto& f : hull.hrep.facets) {
    if (f.constant != 1) throw ConversionError("facet " + to_string(f.normal) + " is not at distance 1 from 0");
    rows.push_back(f.normal);
  }
  std::sort(rows.begin(), rows.end());
  return Sample{IntMat::from_rows(rows), Representation::hyperplane, s.id};
}

std::vector<Sample> filter_by_vrep_length(const std::vector<Sample>& hyperplane_samples, std::size_t threshold,
                                          std::size_t threads) {
  std::vector<char> keep(hyperplane_samples.size(), 0);
  parallel_for(hyperplane_samples.size(), threads, [&](std::size_t i) {
    keep[i] = token_length(convert_rep(hyperplane_samples[i]).matrix, true) < threshold;
  });
  std::vector<Sample> out;
  for (std::size_t i = 0; i < hyperplane_samples.size(); ++i)
    if (keep[i]) out.push_back(hyperplane_samples[i]);
  return out;
}

std::vector<std::size_t> filter_by_vrep_length(std::string_view hyperplane_text, std::size_t threshold,
                                               std::size_t threads) {
  std::vector<std::size_t> kept;
  const std::size_t ill = for_each_batch(hyperplane_text, Representation::hyperplane, 4096, [&](auto& batch) {
    for (const auto& s : filter_by_vrep_length(batch, threshold, threads)) kept.push_back(s.id);
  });
  if (ill) throw std::invalid_argument(std::to_string(ill) + " ill-formed blocks in dataset");
  return kept;
}

Sample perturb(const Sample& s, std::mt19937_64& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> eligible;
  for (std::size_t i = 0; i < s.matrix.rows(); ++i)
    for (std::size_t j = 0; j < s.matrix.cols(); ++j)
      if (abs(s.matrix(i, j)) <= 1) eligible.emplace_back(i, j);
  if (eligible.empty()) throw std::invalid_argument("no entry in {-1, 0, 1} to perturb");
  const auto [i, j] = eligible[uniform_below(rng, eligible.size())];
  Sample out = s;
  Int& x = out.matrix(i, j);
  if (x == 0)
    x = uniform_below(rng, 2) == 0 ? 1 : -1;
  else
    x = 0;
  return out;
}

std::filesystem::path resolve_data_path(const std::filesystem::path& p) {
  if (p.is_absolute() || std::filesystem::exists(p)) return p;
  if (const char* root = std::getenv("POLYGEN_DATA_DIR")) return std::filesystem::path(root) / p;
  return p;
}

std::string read_text_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) throw std::runtime_error("cannot write " + p.string());
}

}  // namespace polygen
