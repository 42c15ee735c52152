#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "polygen/report.hpp"

using namespace polygen;

namespace {

EvalReport random_consistent(std::mt19937_64& rng) {
  EvalReport r;
  const auto n = oracle::uniform(rng, 0, 60);
  for (long i = 0; i < n; ++i) {
    PropertyReport p;
    if (oracle::uniform(rng, 0, 9) == 0) {
      r.add(PropertyReport::malformed());
      continue;
    }
    p.compact = oracle::uniform(rng, 0, 1);
    p.lattice = oracle::uniform(rng, 0, 1);
    p.reflexive = p.compact && p.lattice && oracle::uniform(rng, 0, 1);
    p.smooth = p.compact && p.lattice && oracle::uniform(rng, 0, 1);
    if (p.compact && p.lattice) p.normal = static_cast<Normality>(oracle::uniform(rng, 0, 2));
    p.all_correct = p.reflexive && p.smooth && p.normal == Normality::yes;
    r.add(p);
  }
  r.memorization.resolved = r.all_correct;
  r.memorization.copies = static_cast<std::size_t>(oracle::uniform(rng, 0, static_cast<long>(r.all_correct)));
  r.memorization.row_permutations = static_cast<std::size_t>(oracle::uniform(rng, 0, static_cast<long>(r.all_correct)));
  r.memorization.half_a = static_cast<std::size_t>(oracle::uniform(rng, 0, static_cast<long>(r.all_correct)));
  r.memorization.half_b = r.all_correct - r.memorization.half_a;
  r.config.seed = rng();
  r.config.num_samples = static_cast<std::size_t>(n);
  r.config.parallelepiped_cap = static_cast<std::size_t>(rng() % 1000000);
  r.config.dataset = "7d.txt";
  r.config.rep = Representation::convex_hull;
  return r;
}

}  // namespace

TEST_SUITE("report") {
  TEST_CASE("zero report") {
    const EvalReport r;
    CHECK(validate(r).empty());
    const std::string csv = to_csv(r);
    CHECK(csv.rfind("metric,count\nAll properties,0\nCompact,0\n", 0) == 0);
    CHECK(csv.find("Samples,0\n") != std::string::npos);
    CHECK(report_from_json(to_json(r)) == r);
  }

  TEST_CASE("counts follow the per-sample properties") {
    EvalReport r;
    PropertyReport p;
    p.compact = p.lattice = p.reflexive = p.smooth = p.all_correct = true;
    p.normal = Normality::yes;
    r.add(p);
    p.smooth = p.all_correct = false;
    r.add(p);
    p = PropertyReport{};
    p.compact = true;
    p.normal = Normality::no;
    r.add(p);
    p.lattice = true;
    p.normal = Normality::unverified;
    r.add(p);
    r.add(PropertyReport::malformed());
    CHECK(r.samples == 5);
    CHECK(r.ill_formed == 1);
    CHECK(r.compact == 4);
    CHECK(r.lattice == 3);
    CHECK(r.normal == 2);
    CHECK(r.normal_unverified == 1);
    CHECK(r.all_correct == 1);
    CHECK(r.intersections.compact_lattice == 3);
    CHECK(r.intersections.compact_lattice_normal == 2);
    CHECK(r.intersections.compact_not_smooth == 3);
    CHECK(r.intersections.compact_lattice_not_smooth == 2);
    CHECK(validate(r).empty());
  }

  TEST_CASE("JSON round trip and layout") {
    std::mt19937_64 rng(81);
    for (int trial = 0; trial < 50; ++trial) {
      const EvalReport r = random_consistent(rng);
      CHECK(validate(r).empty());
      const std::string j = to_json(r);
      CHECK(report_from_json(j) == r);
      CHECK(to_json(report_from_json(j)) == j);
    }
    EvalReport r;
    r.config.threads = 8;
    CHECK(to_json(r).find("threads") == std::string::npos);
    const std::string j = to_json(r);
    for (const char* key : {"\"config\"", "\"totals\"", "\"properties\"", "\"intersections\"", "\"memorization\"",
                            "\"rng\"", "\"normal_unverified\""})
      CHECK(j.find(key) != std::string::npos);
    CHECK_THROWS(report_from_json("{}"));
  }

  TEST_CASE("CSV lists every metric once") {
    std::mt19937_64 rng(82);
    const EvalReport r = random_consistent(rng);
    const std::string csv = to_csv(r);
    std::size_t lines = 0;
    for (char c : csv) lines += c == '\n';
    CHECK(lines == 19);
    CHECK(csv.find("Compact," + std::to_string(r.compact) + "\n") != std::string::npos);
    CHECK(csv.find("Lattice polyhedron," + std::to_string(r.lattice) + "\n") != std::string::npos);
    CHECK(csv.find("Ill-formed," + std::to_string(r.ill_formed) + "\n") != std::string::npos);
  }

  TEST_CASE("validation catches broken counts") {
    std::mt19937_64 rng(83);
    int caught = 0;
    for (int trial = 0; trial < 200; ++trial) {
      EvalReport r = random_consistent(rng);
      std::size_t* fields[] = {&r.compact, &r.lattice, &r.reflexive, &r.smooth, &r.normal, &r.all_correct,
                               &r.ill_formed, &r.intersections.compact_lattice, &r.memorization.copies,
                               &r.memorization.resolved};
      const auto pick = static_cast<std::size_t>(oracle::uniform(rng, 0, 9));
      *fields[pick] = r.samples + 1;
      CHECK_FALSE(validate(r).empty());
      ++caught;
    }
    CHECK(caught == 200);
  }
}
