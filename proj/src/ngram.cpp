#include "polygen/ngram.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "polygen/rng.hpp"

namespace polygen {

namespace {

constexpr std::size_t kPendingLimit = 1 << 22;

}  // namespace

NGramModel::NGramModel(Vocab vocab, std::size_t n) : vocab_(std::move(vocab)), n_(n) {
  if (n_ < 1) throw std::invalid_argument("n-gram order must be at least 1");
  bits_ = static_cast<unsigned>(std::bit_width(vocab_.size() - 1));
  if (bits_ * n_ > 64) throw std::invalid_argument("vocabulary too large for an order-" + std::to_string(n_) + " key");
}

std::uint64_t NGramModel::pack(std::span<const int> history) const {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    const int tok = i < history.size() ? history[history.size() - 1 - i] : Vocab::kSos;
    key |= static_cast<std::uint64_t>(tok) << (bits_ * (n_ - 1 - i));
  }
  return key;
}

void NGramModel::add(std::span<const int> seq) {
  if (seq.empty() || seq.front() != Vocab::kSos) throw std::invalid_argument("sequence must start with SOS");
  for (std::size_t p = 1; p < seq.size(); ++p) {
    if (seq[p] < 0 || static_cast<std::size_t>(seq[p]) >= vocab_.size())
      throw std::out_of_range("token id outside the vocabulary");
    pending_.push_back(Entry{pack(seq.subspan(0, p)), static_cast<std::uint32_t>(seq[p]), 1});
  }
  if (pending_.size() >= kPendingLimit) finalize();
}

void NGramModel::finalize() {
  if (pending_.empty()) return;
  auto less = [](const Entry& a, const Entry& b) { return a.key != b.key ? a.key < b.key : a.next < b.next; };
  std::sort(pending_.begin(), pending_.end(), less);
  std::vector<Entry> merged;
  merged.reserve(table_.size() + pending_.size());
  std::merge(table_.begin(), table_.end(), pending_.begin(), pending_.end(), std::back_inserter(merged), less);
  table_.clear();
  for (const auto& e : merged) {
    if (!table_.empty() && table_.back().key == e.key && table_.back().next == e.next)
      table_.back().count += e.count;
    else
      table_.push_back(e);
  }
  pending_.clear();
  pending_.shrink_to_fit();
  cumulative_.resize(table_.size());
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < table_.size(); ++i) cumulative_[i] = total += table_[i].count;
}

void NGramModel::require_final() const {
  if (!pending_.empty()) throw std::logic_error("n-gram model used before finalize()");
}

std::uint64_t NGramModel::event_count() const {
  require_final();
  return cumulative_.empty() ? 0 : cumulative_.back();
}

std::pair<std::size_t, std::size_t> NGramModel::range(std::uint64_t key, std::size_t k) const {
  const unsigned shift = bits_ * static_cast<unsigned>(n_ - k);
  const unsigned __int128 prefix = shift >= 64 ? 0 : key >> shift;
  const unsigned __int128 lo = prefix << shift;
  const unsigned __int128 hi = (prefix + 1) << shift;  // exclusive
  const auto first = std::lower_bound(table_.begin(), table_.end(), lo,
                                      [](const Entry& e, unsigned __int128 v) { return e.key < v; });
  const auto last = std::lower_bound(first, table_.end(), hi,
                                     [](const Entry& e, unsigned __int128 v) { return e.key < v; });
  return {static_cast<std::size_t>(first - table_.begin()), static_cast<std::size_t>(last - table_.begin())};
}

std::map<int, std::uint64_t> NGramModel::histogram(std::span<const int> context) const {
  require_final();
  if (context.size() > n_) throw std::invalid_argument("context longer than the model order");
  const auto [lo, hi] = range(pack(context), context.size());
  std::map<int, std::uint64_t> out;
  for (std::size_t i = lo; i < hi; ++i) out[static_cast<int>(table_[i].next)] += table_[i].count;
  return out;
}

int NGramModel::next_token(std::span<const int> history, std::mt19937_64& rng) const {
  require_final();
  if (table_.empty()) throw std::logic_error("n-gram model has no events");
  const std::uint64_t key = pack(history);
  for (std::size_t k = n_;; --k) {
    const auto [lo, hi] = range(key, k);
    if (lo < hi) {
      const std::uint64_t base = lo == 0 ? 0 : cumulative_[lo - 1];
      const std::uint64_t r = base + uniform_below(rng, cumulative_[hi - 1] - base);
      const auto it = std::upper_bound(cumulative_.begin() + static_cast<std::ptrdiff_t>(lo),
                                       cumulative_.begin() + static_cast<std::ptrdiff_t>(hi), r);
      return static_cast<int>(table_[static_cast<std::size_t>(it - cumulative_.begin())].next);
    }
    if (k == 0) break;
  }
  throw std::logic_error("empty order-0 histogram");
}

TokenSeq NGramModel::sample(std::mt19937_64& rng, std::size_t max_len) const {
  TokenSeq seq{{Vocab::kSos}, vocab_.scheme()};
  while (seq.ids.size() < max_len && seq.ids.back() != Vocab::kEos) seq.ids.push_back(next_token(seq.ids, rng));
  return seq;
}

void NGramModel::save(std::ostream& out) const {
  require_final();
  out << "polygen-ngram 1\norder " << n_ << "\nmax_length " << max_length_ << "\nvocab";
  for (const auto& t : vocab_.tokens()) out << ' ' << t;
  out << '\n';
  const std::uint64_t mask = (bits_ == 64 ? ~0ULL : (1ULL << bits_) - 1);
  for (const auto& e : table_) {
    for (std::size_t i = 0; i < n_; ++i) {
      // oldest token first
      const unsigned shift = bits_ * static_cast<unsigned>(i);
      out << vocab_.token(static_cast<int>((e.key >> shift) & mask)) << ' ';
    }
    out << "\t" << vocab_.token(static_cast<int>(e.next)) << '\t' << e.count << '\n';
  }
}

NGramModel NGramModel::load(std::istream& in) {
  auto fail = [](const std::string& why) -> NGramModel { throw std::runtime_error("bad n-gram file: " + why); };
  std::string line, word;
  if (!std::getline(in, line) || line != "polygen-ngram 1") return fail("header");
  std::size_t n = 0;
  if (!std::getline(in, line) || std::sscanf(line.c_str(), "order %zu", &n) != 1) return fail("order line");
  std::size_t max_length = 0;
  if (!std::getline(in, line) || std::sscanf(line.c_str(), "max_length %zu", &max_length) != 1)
    return fail("max_length line");
  if (!std::getline(in, line) || !line.starts_with("vocab ")) return fail("vocab line");
  std::vector<std::string> tokens;
  std::istringstream vs(line.substr(6));
  while (vs >> word) tokens.push_back(word);
  NGramModel model(Vocab::from_tokens(tokens), n);
  model.max_length_ = max_length;
  auto id_of = [&](const std::string& t) {
    const auto id = model.vocab_.find(t);
    if (!id) fail("unknown token " + t);
    return *id;
  };
  std::vector<int> context(n);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) return fail("line without tab fields");
    std::istringstream cs(line.substr(0, t1));
    for (std::size_t i = 0; i < n; ++i) {
      if (!(cs >> word)) return fail("short context");
      context[i] = id_of(word);
    }
    const int next = id_of(line.substr(t1 + 1, t2 - t1 - 1));
    const std::uint64_t count = std::stoull(line.substr(t2 + 1));
    if (count == 0) return fail("zero count");
    model.pending_.push_back(Entry{model.pack(context), static_cast<std::uint32_t>(next), count});
  }
  model.finalize();
  return model;
}

bool NGramModel::operator==(const NGramModel& o) const {
  require_final();
  o.require_final();
  if (!(vocab_ == o.vocab_) || n_ != o.n_ || max_length_ != o.max_length_ || table_.size() != o.table_.size()) return false;
  for (std::size_t i = 0; i < table_.size(); ++i)
    if (table_[i].key != o.table_[i].key || table_[i].next != o.table_[i].next || table_[i].count != o.table_[i].count)
      return false;
  return true;
}

NGramModel fit_ngram(const std::vector<Sample>& samples, std::size_t n) {
  if (samples.empty()) throw std::invalid_argument("cannot fit an n-gram model on an empty dataset");
  NGramModel model(Vocab::build(samples, Scheme::line_numbered), n);
  std::size_t longest = 0;
  for (const auto& s : samples) {
    const TokenSeq seq = tokenize(s.matrix, model.vocab());
    longest = std::max(longest, seq.ids.size());
    model.add(seq.ids);
  }
  model.finalize();
  model.set_max_length(longest + 16);
  return model;
}

NGramModel fit_ngram(std::string_view text, std::size_t n) {
  const DatasetStats stats = dataset_stats(text);
  if (stats.ill_formed) throw std::invalid_argument(std::to_string(stats.ill_formed) + " ill-formed blocks in dataset");
  if (stats.count == 0) throw std::invalid_argument("cannot fit an n-gram model on an empty dataset");
  std::vector<Int> entries;
  for (const auto& [value, count] : stats.entry_histogram) entries.push_back(value);
  NGramModel model(Vocab::build(entries, stats.max_rows, Scheme::line_numbered), n);
  for_each_batch(text, Representation::hyperplane, 4096, [&](std::vector<Sample>& batch) {
    for (const auto& s : batch) model.add(tokenize(s.matrix, model.vocab()).ids);
  });
  model.finalize();
  model.set_max_length(stats.max_tokens_incl_specials + 16);
  return model;
}

}  // namespace polygen
