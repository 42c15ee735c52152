#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "oracles.hpp"
#include "polygen/dataset.hpp"
#include "polygen/rng.hpp"

using namespace polygen;
using oracle::matrix;

namespace {

const IntMat kHexagon = matrix({{0, 1}, {0, -1}, {-1, 0}, {1, 0}, {1, -1}, {-1, 1}});

IntMat random_matrix(std::mt19937_64& rng) {
  const auto r = static_cast<std::size_t>(oracle::uniform(rng, 1, 6));
  const auto c = static_cast<std::size_t>(oracle::uniform(rng, 1, 5));
  IntMat m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = oracle::uniform(rng, -30, 30);
  return m;
}

std::vector<int> ids_of(const Vocab& v, const std::vector<std::string>& tokens) {
  std::vector<int> out;
  for (const auto& t : tokens) out.push_back(*v.find(t));
  return out;
}

std::size_t differing_entries(const IntMat& a, const IntMat& b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) n += a(i, j) != b(i, j);
  return n;
}

}  // namespace

TEST_SUITE("dataset") {
  TEST_CASE("parse blocks") {
    const ParsedDataset ds = parse_dataset("1 2\n3 4\n\n\n  \n-1 0\n\n1 x\n\n1 2\n3\n\n5\n", Representation::hyperplane);
    REQUIRE(ds.samples.size() == 3);
    CHECK(ds.block_count() == 5);
    CHECK(ds.samples[0].matrix == matrix({{1, 2}, {3, 4}}));
    CHECK(ds.samples[0].id == 0);
    CHECK(ds.samples[1].id == 1);
    CHECK(ds.samples[2].id == 4);
    CHECK(ds.samples[2].matrix == matrix({{5}}));
    REQUIRE(ds.ill_formed.size() == 2);
    CHECK(ds.ill_formed[0].id == 2);
    CHECK(ds.ill_formed[1].id == 3);
    CHECK(parse_dataset("", Representation::hyperplane).block_count() == 0);
    CHECK(parse_dataset("\n\n", Representation::hyperplane).block_count() == 0);
    CHECK(parse_dataset("1 2\r\n3 4\r\n", Representation::hyperplane).samples.size() == 1);
  }

  TEST_CASE("serialize and parse round trip") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<Sample> samples;
      const auto n = oracle::uniform(rng, 0, 8);
      for (long i = 0; i < n; ++i)
        samples.push_back({random_matrix(rng), Representation::convex_hull, static_cast<std::size_t>(i)});
      const std::string text = serialize_dataset(samples);
      const ParsedDataset back = parse_dataset(text, Representation::convex_hull);
      CHECK(back.ill_formed.empty());
      REQUIRE(back.samples.size() == samples.size());
      for (std::size_t i = 0; i < samples.size(); ++i) {
        CHECK(back.samples[i].matrix == samples[i].matrix);
        CHECK(back.samples[i].id == i);
      }
      CHECK(serialize_dataset(back.samples) == text);
    }
    CHECK(serialize(matrix({{1, -2}, {0, 3}})) == "1 -2\n0 3\n");
  }

  TEST_CASE("streaming parse matches the batch parse") {
    const std::string text = "1 2\n\n3\n4 5\n\n6\n\n7 8\n9 10\n\n11\n";
    std::vector<std::size_t> seen;
    std::size_t bad = 0;
    for_each_block(text, Representation::hyperplane, [&](Sample&& s) { seen.push_back(s.id); },
                   [&](IllFormed&&) { ++bad; });
    CHECK(seen == std::vector<std::size_t>{0, 2, 3, 4});
    CHECK(bad == 1);
    std::vector<std::size_t> sizes;
    const std::size_t ill = for_each_batch(text, Representation::hyperplane, 3,
                                           [&](std::vector<Sample>& batch) { sizes.push_back(batch.size()); });
    CHECK(ill == 1);
    CHECK(sizes == std::vector<std::size_t>{3, 1});
  }

  TEST_CASE("hexagon tokenization") {
    const std::vector<Sample> one{{kHexagon, Representation::hyperplane, 0}};
    const Vocab standard = Vocab::build(one, Scheme::standard);
    CHECK(standard.tokens() == std::vector<std::string>{"<pad>", "<sos>", "<eos>", "<nl>", "-1", "0", "1"});
    const TokenSeq seq = tokenize(kHexagon, standard);
    CHECK(seq.ids.size() == 20);
    CHECK(token_length(kHexagon, true) == 20);
    CHECK(token_length(kHexagon, false) == 18);
    CHECK(seq.ids == ids_of(standard, {"<sos>", "0", "1", "<nl>", "0", "-1", "<nl>", "-1", "0", "<nl>", "1", "0",
                                       "<nl>", "1", "-1", "<nl>", "-1", "1", "<nl>", "<eos>"}));
    CHECK(detokenize(seq, standard).matrix == kHexagon);

    const Vocab numbered = Vocab::build(one, Scheme::line_numbered);
    CHECK(numbered.size() == 3 + 6 + 3);
    CHECK(numbered.token(3) == "<nl_1>");
    const TokenSeq nseq = tokenize(kHexagon, numbered);
    CHECK(nseq.ids.size() == 20);
    CHECK(numbered.token(nseq.ids[3]) == "<nl_1>");
    CHECK(numbered.token(nseq.ids[18]) == "<nl_6>");
    CHECK(numbered.newline_row(nseq.ids[18]) == 6);
    CHECK(detokenize(nseq, numbered).matrix == kHexagon);
    CHECK(Vocab::from_tokens(numbered.tokens()) == numbered);
    CHECK_THROWS_AS(tokenize(matrix({{7}}), standard), std::out_of_range);
    CHECK_THROWS(Vocab::from_tokens({"<pad>", "<sos>", "<eos>", "x"}));
  }

  TEST_CASE("tokenization round trip") {
    std::mt19937_64 rng(62);
    for (int trial = 0; trial < 60; ++trial) {
      std::vector<Sample> samples{{random_matrix(rng), Representation::hyperplane, 0},
                                  {random_matrix(rng), Representation::hyperplane, 1}};
      for (Scheme scheme : {Scheme::standard, Scheme::line_numbered}) {
        const Vocab v = Vocab::build(samples, scheme);
        for (const auto& s : samples) {
          const TokenSeq seq = tokenize(s.matrix, v);
          CHECK(seq.ids.size() == token_length(s.matrix, true));
          CHECK(detokenize(seq, v).matrix == s.matrix);
          CHECK(render_generation(seq, v) == serialize(s.matrix));
        }
      }
    }
  }

  TEST_CASE("detokenization failures") {
    const Vocab v = Vocab::build(std::vector<Int>{-1, 0, 1}, 3, Scheme::standard);
    auto bad = [&](const std::vector<std::string>& toks) {
      const Detokenized d = detokenize(TokenSeq{ids_of(v, toks), Scheme::standard}, v);
      CHECK_FALSE(d.matrix);
      CHECK_FALSE(d.error.empty());
    };
    bad({"0", "<nl>", "<eos>"});
    bad({"<sos>", "0", "<nl>"});
    bad({"<sos>", "<nl>", "<eos>"});
    bad({"<sos>", "0", "<eos>"});
    bad({"<sos>", "0", "1", "<nl>", "1", "<nl>", "<eos>"});
    bad({"<sos>", "<eos>"});
    bad({"<sos>", "0", "<nl>", "<eos>", "1"});
    bad({"<sos>", "0", "<sos>", "<nl>", "<eos>"});
    const TokenSeq padded{ids_of(v, {"<sos>", "0", "<nl>", "<eos>", "<pad>", "<pad>"}), Scheme::standard};
    CHECK(detokenize(padded, v).matrix == matrix({{0}}));
    const TokenSeq broken{ids_of(v, {"<sos>", "0", "<eos>"}), Scheme::standard};
    const std::string rendered = render_generation(broken, v);
    CHECK(rendered == "#ill-formed <sos> 0 <eos>\n");
    CHECK(parse_dataset(rendered, Representation::hyperplane).ill_formed.size() == 1);
  }

  TEST_CASE("statistics") {
    const std::string text = "0 1\n0 -1\n-1 0\n1 0\n\n2 2 2\n\n1 z\n";
    const DatasetStats s = dataset_stats(text);
    CHECK(s.count == 2);
    CHECK(s.ill_formed == 1);
    CHECK(s.vocab_size == 4 + 4);
    CHECK(s.max_tokens_incl_specials == 14);
    CHECK(s.max_tokens_excl_specials == 12);
    CHECK(s.min_rows == 1);
    CHECK(s.max_rows == 4);
    CHECK(s.entry_histogram.at(Int(2)) == 3);
    CHECK(s.entry_histogram.at(Int(0)) == 4);
    CHECK(dataset_stats(parse_dataset(text, Representation::hyperplane)).count == 2);
  }

  TEST_CASE("half split") {
    for (std::size_t n : {0u, 1u, 7u, 100u, 72256u}) {
      const Split s = half_split(n, {17});
      CHECK(s.half_a.size() == (n + 1) / 2);
      CHECK(s.half_a.size() + s.half_b.size() == n);
      std::vector<std::size_t> all = s.half_a;
      all.insert(all.end(), s.half_b.begin(), s.half_b.end());
      std::sort(all.begin(), all.end());
      for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i] == i);
      CHECK(std::is_sorted(s.half_a.begin(), s.half_a.end()));
      CHECK(half_split(n, {17}).half_a == s.half_a);
    }
    const Split big = half_split(72256, {3});
    CHECK(big.half_a.size() == 36128);
    CHECK(big.half_b.size() == 36128);
    CHECK(half_split(100, {3}).half_a != half_split(100, {4}).half_a);
    const Split third = half_split(10, {5, 1, 3});
    CHECK(third.half_a.size() == 4);
    CHECK(third.membership(third.half_a[0]) == 'a');
    CHECK(third.membership(third.half_b[0]) == 'b');
    CHECK(third.membership(10) == 0);
    const Split back = Split::from_json(third.to_json());
    CHECK(back.half_a == third.half_a);
    CHECK(back.half_b == third.half_b);
    CHECK(back.spec.seed == 5);
    CHECK(back.spec.denominator == 3);
    CHECK(third.to_json().find(kRngName) != std::string::npos);
  }

  TEST_CASE("representation conversion") {
    for (const char* name : {"b1", "b2"}) {
      const IntMat h = oracle::fixture(std::string(name) + "_h.txt");
      const IntMat v = oracle::fixture(std::string(name) + "_v.txt");
      const Sample vs = convert_rep(Sample{h, Representation::hyperplane, 3});
      CHECK(vs.rep == Representation::convex_hull);
      CHECK(vs.id == 3);
      CHECK(oracle::rows_sorted(vs.matrix) == oracle::rows_sorted(v));
      std::vector<IntVec> in_order;
      for (std::size_t i = 0; i < vs.matrix.rows(); ++i) in_order.push_back(vs.matrix.row_vector(i));
      CHECK(in_order == oracle::rows_sorted(vs.matrix));
      CHECK(oracle::rows_sorted(convert_rep(Sample{v, Representation::convex_hull, 0}).matrix) ==
            oracle::rows_sorted(h));
    }
    const Sample hex_v = convert_rep(Sample{kHexagon, Representation::hyperplane, 0});
    CHECK(hex_v.matrix == matrix({{-1, -1}, {-1, 0}, {0, -1}, {0, 1}, {1, 0}, {1, 1}}));
    CHECK(oracle::rows_sorted(convert_rep(hex_v).matrix) == oracle::rows_sorted(kHexagon));
    CHECK_THROWS_AS(convert_rep(Sample{matrix({{1, 0}, {0, 1}}), Representation::hyperplane, 0}), ConversionError);
    CHECK_THROWS_AS(convert_rep(Sample{matrix({{-2, 0}, {0, -1}, {1, 1}}), Representation::hyperplane, 0}),
                    ConversionError);
    CHECK_THROWS_AS(convert_rep(Sample{matrix({{0, 0}, {1, 0}, {0, 1}}), Representation::convex_hull, 0}),
                    ConversionError);
  }

  TEST_CASE("vertex-length filter") {
    const std::vector<Sample> samples{{kHexagon, Representation::hyperplane, 0},
                                      {matrix({{-1, 0}, {0, -1}, {1, 1}}), Representation::hyperplane, 1}};
    CHECK(filter_by_vrep_length(samples, 0).empty());
    CHECK(filter_by_vrep_length(samples, 1000).size() == 2);
    // Hexagon hull: 20 tokens, triangle hull: 11 tokens.
    CHECK(filter_by_vrep_length(samples, 20, 2).size() == 1);
    CHECK(filter_by_vrep_length(samples, 21).size() == 2);
    const std::string text = serialize_dataset(samples);
    CHECK(filter_by_vrep_length(text, 20) == std::vector<std::size_t>{1});
    CHECK(filter_by_vrep_length(text, 1000, 3) == std::vector<std::size_t>{0, 1});
    const std::vector<Sample> open{{matrix({{1, 0}, {0, 1}}), Representation::hyperplane, 0}};
    CHECK_THROWS_AS(filter_by_vrep_length(open, 1000), ConversionError);
  }

  TEST_CASE("perturbation changes one entry") {
    std::mt19937_64 rng(63);
    const Sample left{oracle::fixture("fig1_left.txt"), Representation::hyperplane, 0};
    const IntMat right = oracle::fixture("fig1_right.txt");
    CHECK(differing_entries(left.matrix, right) == 1);
    bool reached = false;
    for (std::uint64_t seed = 0; seed < 5000 && !reached; ++seed) {
      auto r = make_stream(seed, 0);
      reached = perturb(left, r).matrix == right;
    }
    CHECK(reached);
    for (int trial = 0; trial < 200; ++trial) {
      IntMat m = random_matrix(rng);
      m(0, 0) = oracle::uniform(rng, -1, 1);
      const Sample out = perturb(Sample{m, Representation::hyperplane, 9}, rng);
      CHECK(out.id == 9);
      CHECK(differing_entries(m, out.matrix) == 1);
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
          if (m(i, j) != out.matrix(i, j)) {
            CHECK(abs(m(i, j)) <= 1);
            CHECK((m(i, j) == 0) == (out.matrix(i, j) != 0));
            CHECK(abs(out.matrix(i, j)) <= 1);
          }
    }
    CHECK_THROWS_AS(perturb(Sample{matrix({{5, 7}}), Representation::hyperplane, 0}, rng), std::invalid_argument);
  }
}
