// Order-n next-token histogram model with longest-match backoff.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "polygen/dataset.hpp"

namespace polygen {

/// Counts are kept for full order-n contexts (left-padded with SOS), packed into
/// 64-bit keys with the most recent token in the high bits. The histogram of a
/// shorter context is then the contiguous key range sharing its high bits.
class NGramModel {
 public:
  /// Throws std::invalid_argument for n < 1 or a vocabulary too large to pack n tokens in 64 bits.
  NGramModel(Vocab vocab, std::size_t n = 10);

  /// Adds one sequence starting with SOS; every later token is a training event.
  void add(std::span<const int> seq);
  /// Folds pending events into the table; required before any query.
  void finalize();

  std::size_t order() const { return n_; }
  /// Sampling length bound recorded with the model (0 when unset).
  std::size_t max_length() const { return max_length_; }
  void set_max_length(std::size_t n) { max_length_ = n; }
  const Vocab& vocab() const { return vocab_; }
  std::uint64_t event_count() const;

  /// Next-token counts after `context` (oldest first, at most n tokens; shorter
  /// contexts are matched as suffixes of the padded history). Empty if unseen.
  std::map<int, std::uint64_t> histogram(std::span<const int> context) const;

  /// Samples the next token after `history` (starting with SOS), backing off by
  /// dropping the oldest context token until a histogram exists.
  int next_token(std::span<const int> history, std::mt19937_64& rng) const;

  /// Starts from SOS; stops after EOS or once the sequence holds max_len tokens.
  TokenSeq sample(std::mt19937_64& rng, std::size_t max_len) const;

  void save(std::ostream& out) const;
  static NGramModel load(std::istream& in);

  bool operator==(const NGramModel& o) const;

 private:
  struct Entry {
    std::uint64_t key;
    std::uint32_t next;
    std::uint64_t count;
  };

  std::uint64_t pack(std::span<const int> history) const;
  std::pair<std::size_t, std::size_t> range(std::uint64_t key, std::size_t k) const;
  void require_final() const;

  Vocab vocab_;
  std::size_t n_;
  unsigned bits_;
  std::size_t max_length_ = 0;
  std::vector<Entry> table_;  // sorted by (key, next), collapsed
  std::vector<std::uint64_t> cumulative_;
  std::vector<Entry> pending_;
};

/// Fits on the line-numbered tokenization of the samples; the recorded maximum
/// length is the longest training sequence plus 16.
NGramModel fit_ngram(const std::vector<Sample>& samples, std::size_t n = 10);
/// Streaming form over dataset text; ill-formed blocks raise std::invalid_argument.
NGramModel fit_ngram(std::string_view text, std::size_t n = 10);

}  // namespace polygen
