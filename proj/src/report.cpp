#include "polygen/report.hpp"

#include <json.hpp>

#include "polygen/rng.hpp"

namespace polygen {

void EvalReport::add(const PropertyReport& r) {
  ++samples;
  if (r.ill_formed) {
    ++ill_formed;
    return;
  }
  const bool normal_yes = r.normal == Normality::yes;
  compact += r.compact;
  lattice += r.lattice;
  reflexive += r.reflexive;
  smooth += r.smooth;
  normal += normal_yes;
  normal_unverified += r.normal == Normality::unverified;
  all_correct += r.all_correct;
  intersections.compact_lattice += r.compact && r.lattice;
  intersections.compact_lattice_normal += r.compact && r.lattice && normal_yes;
  intersections.compact_not_smooth += r.compact && !r.smooth;
  intersections.compact_lattice_not_smooth += r.compact && r.lattice && !r.smooth;
}

std::vector<std::string> validate(const EvalReport& r) {
  std::vector<std::string> bad;
  auto le = [&](std::size_t a, std::size_t b, const char* what) {
    if (a > b) bad.push_back(std::string(what) + " (" + std::to_string(a) + " > " + std::to_string(b) + ")");
  };
  const std::size_t formed = r.samples >= r.ill_formed ? r.samples - r.ill_formed : 0;
  le(r.ill_formed, r.samples, "ill_formed <= samples");
  for (auto [v, name] : {std::pair{r.compact, "compact"}, {r.lattice, "lattice"}, {r.reflexive, "reflexive"},
                         {r.smooth, "smooth"}, {r.normal, "normal"}}) {
    le(v, formed, (std::string(name) + " <= well-formed samples").c_str());
    le(r.all_correct, v, (std::string("all_correct <= ") + name).c_str());
  }
  le(r.normal + r.normal_unverified, formed, "normal + normal_unverified <= well-formed samples");
  const auto& i = r.intersections;
  le(i.compact_lattice, std::min(r.compact, r.lattice), "compact_lattice <= compact, lattice");
  le(i.compact_lattice_normal, std::min(i.compact_lattice, r.normal), "compact_lattice_normal <= compact_lattice, normal");
  le(i.compact_not_smooth, r.compact, "compact_not_smooth <= compact");
  le(i.compact_lattice_not_smooth, std::min(i.compact_lattice, i.compact_not_smooth),
     "compact_lattice_not_smooth <= compact_lattice, compact_not_smooth");
  const auto& m = r.memorization;
  le(m.copies, r.all_correct, "copies <= all_correct");
  le(m.resolved, r.all_correct, "resolved <= all_correct");
  le(m.row_permutations, m.resolved, "row_permutations <= resolved");
  le(m.half_a + m.half_b, m.resolved, "half_a + half_b <= resolved");
  return bad;
}

namespace {

using Json = nlohmann::ordered_json;

Json config_json(const RunConfig& c) {
  Json j;
  j["mode"] = c.mode;
  j["dataset"] = c.dataset;
  j["rep"] = to_string(c.rep);
  j["samples"] = c.samples;
  j["num_samples"] = c.num_samples;
  j["seed"] = c.seed;
  j["cap"] = c.cap;
  j["parallelepiped_cap"] = c.parallelepiped_cap;
  j["split_manifest"] = c.split_manifest;
  j["rng"] = kRngName;
  j["smooth_reflexive_normal_max_dim"] = c.smooth_reflexive_normal_max_dim;
  j["lower_dimensional"] = "not reflexive, not smooth";
  return j;
}

}  // namespace

std::string to_json(const EvalReport& r) {
  Json j;
  j["config"] = config_json(r.config);
  j["totals"] = {{"samples", r.samples}, {"well_formed", r.samples - r.ill_formed}};
  j["properties"] = {{"compact", r.compact},
                     {"lattice", r.lattice},
                     {"reflexive", r.reflexive},
                     {"smooth", r.smooth},
                     {"normal", r.normal}};
  const auto& i = r.intersections;
  j["intersections"] = {{"compact_lattice", i.compact_lattice},
                        {"compact_lattice_normal", i.compact_lattice_normal},
                        {"compact_not_smooth", i.compact_not_smooth},
                        {"compact_lattice_not_smooth", i.compact_lattice_not_smooth}};
  j["all_correct"] = r.all_correct;
  j["ill_formed"] = r.ill_formed;
  j["normal_unverified"] = r.normal_unverified;
  const auto& m = r.memorization;
  j["memorization"] = {{"copies", m.copies},
                       {"row_permutations", m.row_permutations},
                       {"resolved", m.resolved},
                       {"half_a", m.half_a},
                       {"half_b", m.half_b}};
  return j.dump(2) + "\n";
}

EvalReport report_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  EvalReport r;
  const auto& c = j.at("config");
  r.config.mode = c.at("mode").get<std::string>();
  r.config.dataset = c.at("dataset").get<std::string>();
  r.config.rep = parse_representation(c.at("rep").get<std::string>());
  r.config.samples = c.at("samples").get<std::string>();
  r.config.num_samples = c.at("num_samples").get<std::size_t>();
  r.config.seed = c.at("seed").get<std::uint64_t>();
  r.config.cap = c.at("cap").get<std::size_t>();
  r.config.parallelepiped_cap = c.at("parallelepiped_cap").get<std::size_t>();
  r.config.split_manifest = c.at("split_manifest").get<std::string>();
  r.config.smooth_reflexive_normal_max_dim = c.at("smooth_reflexive_normal_max_dim").get<std::size_t>();
  r.samples = j.at("totals").at("samples").get<std::size_t>();
  const auto& p = j.at("properties");
  r.compact = p.at("compact").get<std::size_t>();
  r.lattice = p.at("lattice").get<std::size_t>();
  r.reflexive = p.at("reflexive").get<std::size_t>();
  r.smooth = p.at("smooth").get<std::size_t>();
  r.normal = p.at("normal").get<std::size_t>();
  const auto& i = j.at("intersections");
  r.intersections.compact_lattice = i.at("compact_lattice").get<std::size_t>();
  r.intersections.compact_lattice_normal = i.at("compact_lattice_normal").get<std::size_t>();
  r.intersections.compact_not_smooth = i.at("compact_not_smooth").get<std::size_t>();
  r.intersections.compact_lattice_not_smooth = i.at("compact_lattice_not_smooth").get<std::size_t>();
  r.all_correct = j.at("all_correct").get<std::size_t>();
  r.ill_formed = j.at("ill_formed").get<std::size_t>();
  r.normal_unverified = j.at("normal_unverified").get<std::size_t>();
  const auto& m = j.at("memorization");
  r.memorization.copies = m.at("copies").get<std::size_t>();
  r.memorization.row_permutations = m.at("row_permutations").get<std::size_t>();
  r.memorization.resolved = m.at("resolved").get<std::size_t>();
  r.memorization.half_a = m.at("half_a").get<std::size_t>();
  r.memorization.half_b = m.at("half_b").get<std::size_t>();
  return r;
}

std::string to_csv(const EvalReport& r) {
  const auto& i = r.intersections;
  const auto& m = r.memorization;
  const std::pair<const char*, std::size_t> rows[] = {
      {"All properties", r.all_correct},
      {"Compact", r.compact},
      {"Lattice polyhedron", r.lattice},
      {"Smooth", r.smooth},
      {"Normal", r.normal},
      {"Reflexive", r.reflexive},
      {"Compact+lattice", i.compact_lattice},
      {"Compact+lattice+normal", i.compact_lattice_normal},
      {"Compact+not smooth", i.compact_not_smooth},
      {"Compact+lattice+not smooth", i.compact_lattice_not_smooth},
      {"Ill-formed", r.ill_formed},
      {"Normal unverified", r.normal_unverified},
      {"Copy", m.copies},
      {"Row permutation", m.row_permutations},
      {"Resolved", m.resolved},
      {"In half A", m.half_a},
      {"In half B", m.half_b},
      {"Samples", r.samples},
  };
  std::string out = "metric,count\n";
  for (const auto& [label, value] : rows) out += std::string(label) + "," + std::to_string(value) + "\n";
  return out;
}

}  // namespace polygen
