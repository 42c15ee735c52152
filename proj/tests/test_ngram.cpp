#include <doctest.h>

#include <map>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "polygen/ngram.hpp"

using namespace polygen;
using oracle::matrix;

namespace {

using Counts = std::map<int, std::uint64_t>;

// Token ids: 3 = <nl>, 4 = "1", 5 = "2", 6 = "3".
Vocab small_vocab() { return Vocab::build(std::vector<Int>{1, 2, 3}, 1, Scheme::standard); }
constexpr int A = 4, B = 5, C = 6;
constexpr int S = Vocab::kSos, E = Vocab::kEos;

// Counts by scanning every event whose SOS-padded history ends with `context`.
Counts naive_histogram(const std::vector<std::vector<int>>& corpus, std::size_t n, const std::vector<int>& context) {
  Counts out;
  for (const auto& seq : corpus) {
    std::vector<int> history(n, S);
    for (std::size_t i = 1; i < seq.size(); ++i) {
      history.push_back(seq[i - 1]);
      if (std::equal(context.begin(), context.end(), history.end() - static_cast<std::ptrdiff_t>(context.size())))
        ++out[seq[i]];
    }
  }
  return out;
}

NGramModel trained(const std::vector<std::vector<int>>& corpus, std::size_t n) {
  NGramModel m(small_vocab(), n);
  for (const auto& s : corpus) m.add(s);
  m.finalize();
  return m;
}

}  // namespace

TEST_SUITE("ngram") {
  TEST_CASE("hand-counted toy corpus") {
    const std::vector<std::vector<int>> corpus{{S, A, B, E}, {S, A, B, A, E}};
    const NGramModel m = trained(corpus, 2);
    CHECK(m.event_count() == 7);
    CHECK(m.histogram(std::vector<int>{A}) == Counts{{B, 2}, {E, 1}});
    CHECK(m.histogram(std::vector<int>{B}) == Counts{{A, 1}, {E, 1}});
    CHECK(m.histogram(std::vector<int>{}) == Counts{{A, 3}, {B, 2}, {E, 2}});
    CHECK(m.histogram(std::vector<int>{S}) == Counts{{A, 2}});
    CHECK(m.histogram(std::vector<int>{B, A}) == Counts{{E, 1}});
    CHECK(m.histogram(std::vector<int>{C}).empty());
    CHECK_THROWS_AS(m.histogram(std::vector<int>{A, B, A}), std::invalid_argument);
  }

  TEST_CASE("histograms match a naive count") {
    std::mt19937_64 rng(71);
    for (std::size_t n : {1u, 2u, 3u, 5u}) {
      std::vector<std::vector<int>> corpus;
      for (int s = 0; s < 30; ++s) {
        std::vector<int> seq{S};
        const auto len = oracle::uniform(rng, 1, 12);
        for (long i = 0; i < len; ++i) seq.push_back(static_cast<int>(oracle::uniform(rng, 3, 6)));
        seq.push_back(E);
        corpus.push_back(seq);
      }
      const NGramModel m = trained(corpus, n);
      for (int q = 0; q < 200; ++q) {
        const auto k = static_cast<std::size_t>(oracle::uniform(rng, 0, static_cast<long>(n)));
        std::vector<int> context;
        for (std::size_t i = 0; i < k; ++i) context.push_back(static_cast<int>(oracle::uniform(rng, 1, 6)));
        CHECK(m.histogram(context) == naive_histogram(corpus, n, context));
      }
    }
  }

  TEST_CASE("a single training sequence is reproduced") {
    const NGramModel m = trained({{S, A, 3, B, 3, C, 3, E}}, 2);
    std::mt19937_64 rng(72);
    for (int i = 0; i < 20; ++i) CHECK(m.sample(rng, 50).ids == std::vector<int>{S, A, 3, B, 3, C, 3, E});
    CHECK(m.sample(rng, 3).ids == std::vector<int>{S, A, 3});
  }

  TEST_CASE("backoff to shorter contexts") {
    const NGramModel m = trained({{S, A, B, E}}, 3);
    std::mt19937_64 rng(73);
    const std::vector<int> history{S, B, C, A};
    for (int i = 0; i < 20; ++i) CHECK(m.next_token(history, rng) == B);
    const std::vector<int> unseen{S, C};
    const Counts global = m.histogram(std::vector<int>{});
    for (int i = 0; i < 20; ++i) CHECK(global.count(m.next_token(unseen, rng)) == 1);
  }

  TEST_CASE("sampling frequencies follow the counts") {
    const NGramModel m = trained({{S, A, B}, {S, A, B}, {S, A, B}, {S, A, C}}, 1);
    std::mt19937_64 rng(74);
    const int draws = 40000;
    int b = 0;
    for (int i = 0; i < draws; ++i) b += m.next_token(std::vector<int>{S, A}, rng) == B;
    const double expected_b = 0.75 * draws, expected_c = 0.25 * draws;
    const double chi2 = (b - expected_b) * (b - expected_b) / expected_b +
                        (draws - b - expected_c) * (draws - b - expected_c) / expected_c;
    CHECK(chi2 < 10.83);
  }

  TEST_CASE("samples stay in the vocabulary and respect the length bound") {
    std::vector<Sample> samples;
    std::mt19937_64 rng(75);
    for (std::size_t i = 0; i < 20; ++i) samples.push_back({oracle::random_rows(rng, 3), Representation::hyperplane, i});
    const NGramModel m = fit_ngram(samples, 4);
    CHECK(m.vocab().scheme() == Scheme::line_numbered);
    std::size_t longest = 0;
    for (const auto& s : samples) longest = std::max(longest, token_length(s.matrix, true));
    CHECK(m.max_length() == longest + 16);
    int well_formed = 0;
    for (int i = 0; i < 100; ++i) {
      const TokenSeq seq = m.sample(rng, m.max_length());
      CHECK(seq.ids.front() == S);
      CHECK(seq.ids.size() <= m.max_length());
      for (int id : seq.ids) CHECK(static_cast<std::size_t>(id) < m.vocab().size());
      for (std::size_t j = 0; j + 1 < seq.ids.size(); ++j) CHECK(seq.ids[j] != E);
      well_formed += detokenize(seq, m.vocab()).matrix.has_value();
    }
    CHECK(well_formed > 50);
    CHECK(fit_ngram(serialize_dataset(samples), 4) == m);
    CHECK_THROWS_AS(fit_ngram("1 2\n\n3\n4 5\n", 4), std::invalid_argument);
  }

  TEST_CASE("save and load") {
    NGramModel m = trained({{S, A, B, E}, {S, C, C, C, E}}, 3);
    m.set_max_length(42);
    std::stringstream buf;
    m.save(buf);
    const std::string text = buf.str();
    CHECK(text.rfind("polygen-ngram 1\norder 3\nmax_length 42\nvocab <pad> <sos> <eos> <nl> 1 2 3\n", 0) == 0);
    const NGramModel back = NGramModel::load(buf);
    CHECK(back == m);
    CHECK(back.max_length() == 42);
    std::istringstream bad("polygen-ngram 2\n");
    CHECK_THROWS(NGramModel::load(bad));
  }

  TEST_CASE("construction and finalize") {
    CHECK_THROWS_AS(NGramModel(small_vocab(), 0), std::invalid_argument);
    CHECK_THROWS_AS(NGramModel(small_vocab(), 30), std::invalid_argument);
    NGramModel m(small_vocab(), 2);
    m.add(std::vector<int>{S, A, E});
    CHECK_THROWS_AS(m.event_count(), std::logic_error);
    m.finalize();
    m.add(std::vector<int>{S, B, E});
    m.finalize();
    CHECK(m.event_count() == 4);
    CHECK(m.histogram(std::vector<int>{S}) == Counts{{A, 1}, {B, 1}});
  }
}
