// Dataset text format, tokenization, statistics, splits, representation
// conversion and the single-entry perturbation.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "polygen/exact_linalg.hpp"
#include "polygen/sample.hpp"

namespace polygen {

/// A block of the text format that is not a rectangular integer matrix.
struct IllFormed {
  std::size_t id = 0;
  std::string reason;
};

struct ParsedDataset {
  std::vector<Sample> samples;  ///< well-formed blocks, id = block position
  std::vector<IllFormed> ill_formed;
  std::size_t block_count() const { return samples.size() + ill_formed.size(); }
};

/// Blocks are separated by one or more blank lines; each line holds
/// whitespace-separated decimal integers.
ParsedDataset parse_dataset(std::string_view text, Representation rep);

/// Streaming form of parse_dataset: exactly one callback per block, in order.
void for_each_block(std::string_view text, Representation rep, const std::function<void(Sample&&)>& on_sample,
                    const std::function<void(IllFormed&&)>& on_ill_formed);

/// Batches of consecutive well-formed samples (at most `batch_size` each);
/// ill-formed blocks are skipped. Returns the number of ill-formed blocks.
std::size_t for_each_batch(std::string_view text, Representation rep, std::size_t batch_size,
                           const std::function<void(std::vector<Sample>&)>& fn);

/// "a b\nc d\n": single spaces, every row newline-terminated.
std::string serialize(const Sample& s);
std::string serialize(const IntMat& m);
/// Samples joined by one blank line.
std::string serialize_dataset(const std::vector<Sample>& samples);

enum class Scheme { standard, line_numbered };

const char* to_string(Scheme s);

/// PAD, SOS, EOS, the newline token(s), then integer literals in ascending order.
class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kSos = 1;
  static constexpr int kEos = 2;

  /// Line-numbered vocabularies carry NEWLINE_1 .. NEWLINE_r for the largest row count r.
  static Vocab build(const std::vector<Sample>& samples, Scheme scheme);
  static Vocab build(const std::vector<Int>& entries, std::size_t max_rows, Scheme scheme);
  static Vocab from_tokens(const std::vector<std::string>& tokens);

  Scheme scheme() const { return scheme_; }
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& token(int id) const { return tokens_.at(static_cast<std::size_t>(id)); }
  std::optional<int> find(const std::string& token) const;

  /// Newline token closing row `row` (1-based); throws if the vocabulary lacks it.
  int newline(std::size_t row) const;
  bool is_newline(int id) const;
  /// Row number carried by a line-numbered newline, 0 for the plain one.
  std::size_t newline_row(int id) const;
  std::optional<Int> integer(int id) const;

  bool operator==(const Vocab& o) const { return tokens_ == o.tokens_; }

 private:
  void index();

  Scheme scheme_ = Scheme::standard;
  std::vector<std::string> tokens_;
  std::map<std::string, int> ids_;
  int first_newline_ = 3;
  int newline_count_ = 0;
};

struct TokenSeq {
  std::vector<int> ids;
  Scheme scheme = Scheme::standard;
};

/// Throws std::out_of_range when an entry or row number is missing from the vocabulary.
TokenSeq tokenize(const IntMat& m, const Vocab& vocab);

struct Detokenized {
  std::optional<IntMat> matrix;
  std::string error;  ///< set when matrix is empty
};

/// Rows must be non-empty, newline-terminated and of equal length, between SOS
/// and EOS; only PAD may follow EOS.
Detokenized detokenize(const TokenSeq& seq, const Vocab& vocab);

/// Text block for a generated sequence: the matrix when well-formed, otherwise
/// a marker line that parse_dataset reports as ill-formed.
std::string render_generation(const TokenSeq& seq, const Vocab& vocab);

/// Token counts: with specials = entries + newlines + SOS + EOS; without = entries + newlines.
std::size_t token_length(const IntMat& m, bool with_specials);

struct DatasetStats {
  std::size_t count = 0;
  std::size_t ill_formed = 0;
  std::size_t vocab_size = 0;  ///< standard scheme, specials included
  std::size_t max_tokens_incl_specials = 0;
  std::size_t max_tokens_excl_specials = 0;
  std::size_t min_rows = 0;
  std::size_t max_rows = 0;
  std::map<Int, std::size_t> entry_histogram;
};

class StatsAccumulator {
 public:
  void add(const IntMat& m);
  void add_ill_formed() { ++stats_.ill_formed; }
  DatasetStats result() const;

 private:
  DatasetStats stats_;
};

DatasetStats dataset_stats(const ParsedDataset& ds);
DatasetStats dataset_stats(std::string_view text);

struct SplitSpec {
  std::uint64_t seed = 0;
  std::uint64_t numerator = 1;
  std::uint64_t denominator = 2;
};

/// A partition of sample ids; half_a holds ceil(n * fraction) ids.
struct Split {
  SplitSpec spec;
  std::vector<std::size_t> half_a;  ///< sorted
  std::vector<std::size_t> half_b;  ///< sorted

  /// 'a', 'b', or 0 for an id in neither half.
  char membership(std::size_t id) const;
  std::string to_json() const;
  static Split from_json(const std::string& text);
};

Split half_split(std::size_t n, const SplitSpec& spec);

class ConversionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Hyperplane to vertex matrix (lexicographic rows) and back to constant-1 rows.
/// Throws ConversionError for unbounded, non-lattice or non-reflexive input.
Sample convert_rep(const Sample& s);

/// Hyperplane samples whose hull form tokenizes (standard, with specials) to
/// fewer than `threshold` tokens. Throws ConversionError like convert_rep.
std::vector<Sample> filter_by_vrep_length(const std::vector<Sample>& hyperplane_samples, std::size_t threshold,
                                          std::size_t threads = 1);
/// Streaming form returning the ids of retained samples.
std::vector<std::size_t> filter_by_vrep_length(std::string_view hyperplane_text, std::size_t threshold,
                                               std::size_t threads = 1);

/// Picks one entry in {-1, 0, 1} uniformly; 0 becomes +-1, +-1 becomes 0.
/// Throws std::invalid_argument when no entry is eligible.
Sample perturb(const Sample& s, std::mt19937_64& rng);

/// Relative paths are looked up under $POLYGEN_DATA_DIR when not found as given.
std::filesystem::path resolve_data_path(const std::filesystem::path& p);
std::string read_text_file(const std::filesystem::path& p);
void write_text_file(const std::filesystem::path& p, const std::string& text);

}  // namespace polygen
