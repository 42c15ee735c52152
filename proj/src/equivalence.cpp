#include "polygen/equivalence.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "polygen/dataset.hpp"
#include "polygen/parallel.hpp"

namespace polygen {

bool LatticePolytope::origin_reflexive() const {
  return std::all_of(facets.begin(), facets.end(), [](const Facet& f) { return f.constant == 1; });
}

namespace {

LatticePolytope finish(std::size_t dim, std::vector<IntVec> vertices, std::vector<Facet> facets) {
  std::sort(vertices.begin(), vertices.end());
  std::sort(facets.begin(), facets.end());
  return LatticePolytope{dim, std::move(vertices), std::move(facets)};
}

std::vector<IntVec> integral_vertices(const VertexData& vd) {
  std::vector<IntVec> out;
  for (const auto& v : vd.vertices) {
    if (!is_integral(v)) throw std::invalid_argument("not a lattice polytope");
    out.push_back(to_int(v));
  }
  return out;
}

}  // namespace

LatticePolytope make_lattice_polytope(const IntMat& m, Representation rep) {
  if (m.rows() == 0 || m.cols() == 0) throw std::invalid_argument("empty matrix");
  const std::size_t d = m.cols();
  if (rep == Representation::hyperplane) {
    const HalfspaceSystem system = HRep{m}.system();
    const VertexData vd = vertex_enumeration(system);
    if (!vd.bounded() || !vd.full_dim) throw std::invalid_argument("not a full-dimensional polytope");
    std::vector<IntVec> vertices = integral_vertices(vd);
    const FacetIncidence inc = facet_incidence(system, vd);
    std::vector<Facet> facets;
    for (std::size_t k = 0; k < inc.facet_rows.size(); ++k) {
      IntVec a = primitive(std::span<const Int>(system.normals.row_vector(inc.facet_rows[k])));
      std::size_t vi = 0;
      while (std::find(inc.vertex_facets[vi].begin(), inc.vertex_facets[vi].end(), k) == inc.vertex_facets[vi].end())
        ++vi;
      Int c = -dot(a, vertices[vi]);
      facets.push_back(Facet{std::move(a), std::move(c)});
    }
    return finish(d, std::move(vertices), std::move(facets));
  }
  const ConvexHull hull = facet_enumeration(VRep{m});
  if (!hull.vertex_data.full_dim) throw std::invalid_argument("not a full-dimensional polytope");
  return finish(d, integral_vertices(hull.vertex_data), hull.hrep.facets);
}

LatticePolytope make_lattice_polytope(const Sample& s) { return make_lattice_polytope(s.matrix, s.rep); }

std::string InvariantKey::serialize() const {
  std::ostringstream out;
  out << "nv=" << n_vertices << ";nf=" << n_facets << ";";
  for (std::size_t i = 0; i < pairing.size(); ++i) {
    if (i) out << ',';
    out << pairing[i].first << 'x' << pairing[i].second;
  }
  return out.str();
}

InvariantKey InvariantKey::parse(const std::string& text) {
  InvariantKey key;
  auto fail = [&] { throw std::invalid_argument("malformed invariant key: " + text); };
  const auto s1 = text.find(';');
  const auto s2 = s1 == std::string::npos ? s1 : text.find(';', s1 + 1);
  if (s2 == std::string::npos || text.rfind("nv=", 0) != 0 || text.compare(s1 + 1, 3, "nf=") != 0) fail();
  try {
    key.n_vertices = std::stoul(text.substr(3, s1 - 3));
    key.n_facets = std::stoul(text.substr(s1 + 4, s2 - s1 - 4));
    std::istringstream rest(text.substr(s2 + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      const auto x = item.rfind('x');
      if (x == std::string::npos) fail();
      key.pairing.emplace_back(Int(item.substr(0, x)), std::stoul(item.substr(x + 1)));
    }
  } catch (const std::invalid_argument&) {
    fail();
  }
  return key;
}

namespace {

/// distances[v][f] = a_f . v + c_f, the lattice distance of vertex v from facet f.
std::vector<std::vector<Int>> distance_table(const LatticePolytope& p) {
  std::vector<std::vector<Int>> out(p.vertices.size(), std::vector<Int>(p.facets.size()));
  for (std::size_t v = 0; v < p.vertices.size(); ++v)
    for (std::size_t f = 0; f < p.facets.size(); ++f)
      out[v][f] = dot(p.facets[f].normal, p.vertices[v]) + p.facets[f].constant;
  return out;
}

}  // namespace

InvariantKey invariant_key(const LatticePolytope& p) {
  InvariantKey key;
  key.n_vertices = p.vertices.size();
  key.n_facets = p.facets.size();
  std::map<Int, std::size_t> counts;
  for (const auto& row : distance_table(p))
    for (const auto& x : row) ++counts[x - 1];
  key.pairing.assign(counts.begin(), counts.end());
  return key;
}

bool verify_witness(const LatticePolytope& p, const LatticePolytope& q, const EquivalenceWitness& w) {
  const std::size_t d = p.dim;
  if (q.dim != d || w.u.rows() != d || w.u.cols() != d || w.t.size() != d) return false;
  if (p.vertices.size() != q.vertices.size()) return false;
  if (abs(det(w.u)) != 1) return false;
  std::vector<IntVec> image;
  image.reserve(p.vertices.size());
  for (const auto& v : p.vertices) {
    IntVec x = w.u * std::span<const Int>(v);
    for (std::size_t i = 0; i < d; ++i) x[i] += w.t[i];
    image.push_back(std::move(x));
  }
  std::sort(image.begin(), image.end());
  return image == q.vertices;
}

namespace {

/// Returns the integral point p with a.p + c = 1 on every facet, if any.
std::optional<IntVec> reflexive_center(const LatticePolytope& p) {
  const std::size_t d = p.dim;
  RatMat a(0, d);
  RatVec b;
  for (const auto& f : p.facets) {
    if (a.rows() == d) break;
    RatMat trial = a;
    trial.append_row(to_rat(f.normal));
    if (rank(trial) > a.rows()) {
      a = std::move(trial);
      b.emplace_back(1 - f.constant);
    }
  }
  if (a.rows() != d) return std::nullopt;
  auto x = solve(a, b);
  if (!x || !is_integral(*x)) return std::nullopt;
  IntVec c = to_int(*x);
  for (const auto& f : p.facets)
    if (dot(f.normal, c) + f.constant != 1) return std::nullopt;
  return c;
}

LatticePolytope translate(const LatticePolytope& p, const IntVec& by) {
  LatticePolytope out = p;
  for (auto& v : out.vertices)
    for (std::size_t i = 0; i < p.dim; ++i) v[i] += by[i];
  for (auto& f : out.facets) f.constant -= dot(f.normal, by);
  return out;
}

class AnchorSearch {
 public:
  AnchorSearch(const LatticePolytope& p, const LatticePolytope& q, bool linear)
      : p_(p), q_(q), linear_(linear), dp_(distance_table(p)), dq_(distance_table(q)) {}

  std::optional<EquivalenceWitness> run() {
    const std::size_t n = p_.vertices.size();
    std::vector<std::vector<Int>> sig_p(n), sig_q(n);
    for (std::size_t i = 0; i < n; ++i) {
      sig_p[i] = dp_[i];
      std::sort(sig_p[i].begin(), sig_p[i].end());
      sig_q[i] = dq_[i];
      std::sort(sig_q[i].begin(), sig_q[i].end());
    }
    {
      auto a = sig_p, b = sig_q;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a != b) return std::nullopt;
    }

    candidates_.assign(n, {});
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (sig_p[i] == sig_q[j]) candidates_[i].push_back(j);

    if (!choose_anchors()) return std::nullopt;
    used_.assign(n, false);
    image_.clear();
    return extend();
  }

 private:
  // Anchors with few candidates first; independence over the linear or affine span.
  bool choose_anchors() {
    const std::size_t d = p_.dim;
    const std::size_t want = linear_ ? d : d + 1;
    std::vector<std::size_t> order(p_.vertices.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return candidates_[a].size() < candidates_[b].size(); });
    anchors_.clear();
    RatMat span(0, d);
    for (std::size_t i : order) {
      if (anchors_.size() == want) break;
      if (!linear_ && anchors_.empty()) {
        anchors_.push_back(i);
        continue;
      }
      RatMat trial = span;
      trial.append_row(to_rat(difference(p_.vertices[i])));
      if (rank(trial) > span.rows()) {
        span = std::move(trial);
        anchors_.push_back(i);
      }
    }
    return anchors_.size() == want;
  }

  IntVec difference(const IntVec& v) const {
    if (linear_) return v;
    IntVec out = v;
    const IntVec& base = p_.vertices[anchors_.front()];
    for (std::size_t k = 0; k < out.size(); ++k) out[k] -= base[k];
    return out;
  }

  bool pair_compatible(std::size_t pi, std::size_t qi, std::size_t pj, std::size_t qj) const {
    std::vector<std::pair<Int, Int>> a, b;
    a.reserve(p_.facets.size());
    b.reserve(q_.facets.size());
    for (std::size_t f = 0; f < p_.facets.size(); ++f) a.emplace_back(dp_[pi][f], dp_[pj][f]);
    for (std::size_t f = 0; f < q_.facets.size(); ++f) b.emplace_back(dq_[qi][f], dq_[qj][f]);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
  }

  std::optional<EquivalenceWitness> extend() {
    const std::size_t k = image_.size();
    if (k == anchors_.size()) return solve_witness();
    const std::size_t pi = anchors_[k];
    for (std::size_t qi : candidates_[pi]) {
      if (used_[qi]) continue;
      bool ok = true;
      for (std::size_t j = 0; j < k && ok; ++j) ok = pair_compatible(pi, qi, anchors_[j], image_[j]);
      if (!ok) continue;
      used_[qi] = true;
      image_.push_back(qi);
      if (auto w = extend()) return w;
      image_.pop_back();
      used_[qi] = false;
    }
    return std::nullopt;
  }

  // U V = W with V, W the anchor (difference) vectors as columns.
  std::optional<EquivalenceWitness> solve_witness() const {
    const std::size_t d = p_.dim;
    const std::size_t offset = linear_ ? 0 : 1;
    RatMat v(d, d), w(d, d);
    for (std::size_t j = 0; j < d; ++j) {
      const IntVec& pv = p_.vertices[anchors_[j + offset]];
      const IntVec& qv = q_.vertices[image_[j + offset]];
      for (std::size_t i = 0; i < d; ++i) {
        v(i, j) = pv[i];
        w(i, j) = qv[i];
        if (!linear_) {
          v(i, j) -= p_.vertices[anchors_[0]][i];
          w(i, j) -= q_.vertices[image_[0]][i];
        }
      }
    }
    auto v_inv = inverse(v);
    if (!v_inv) return std::nullopt;
    const RatMat u_rat = w * *v_inv;
    EquivalenceWitness result{IntMat(d, d), IntVec(d, 0)};
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        if (u_rat(i, j).get_den() != 1) return std::nullopt;
        result.u(i, j) = u_rat(i, j).get_num();
      }
    if (!linear_) {
      const IntVec moved = result.u * std::span<const Int>(p_.vertices[anchors_[0]]);
      for (std::size_t i = 0; i < d; ++i) result.t[i] = q_.vertices[image_[0]][i] - moved[i];
    }
    if (!verify_witness(p_, q_, result)) return std::nullopt;
    return result;
  }

  const LatticePolytope& p_;
  const LatticePolytope& q_;
  bool linear_;
  std::vector<std::vector<Int>> dp_, dq_;
  std::vector<std::vector<std::size_t>> candidates_;
  std::vector<std::size_t> anchors_;
  std::vector<std::size_t> image_;
  std::vector<bool> used_;
};

}  // namespace

std::optional<EquivalenceWitness> equivalent(const LatticePolytope& p, const LatticePolytope& q) {
  if (p.dim != q.dim || p.vertices.size() != q.vertices.size() || p.facets.size() != q.facets.size())
    return std::nullopt;
  if (!(invariant_key(p) == invariant_key(q))) return std::nullopt;

  const auto cp = reflexive_center(p);
  const auto cq = reflexive_center(q);
  if (cp.has_value() != cq.has_value()) return std::nullopt;
  if (!cp) return AnchorSearch(p, q, false).run();

  // Interior points correspond, so search linear maps between the centered copies.
  IntVec neg_p = *cp;
  for (auto& x : neg_p) x = -x;
  IntVec neg_q = *cq;
  for (auto& x : neg_q) x = -x;
  const LatticePolytope p0 = translate(p, neg_p);
  const LatticePolytope q0 = translate(q, neg_q);
  auto w = AnchorSearch(p0, q0, true).run();
  if (!w) return std::nullopt;
  // x -> U (x - cp) + cq
  const IntVec moved = w->u * std::span<const Int>(*cp);
  for (std::size_t i = 0; i < p.dim; ++i) w->t[i] = (*cq)[i] - moved[i];
  if (!verify_witness(p, q, *w)) return std::nullopt;
  return w;
}

bool exact_copy(const IntMat& sample, const std::unordered_set<std::string>& training_texts) {
  return training_texts.contains(serialize(sample));
}

bool row_permutation_match(const IntMat& a, const IntMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  auto rows = [](const IntMat& m) {
    std::vector<IntVec> r;
    for (std::size_t i = 0; i < m.rows(); ++i) r.push_back(m.row_vector(i));
    std::sort(r.begin(), r.end());
    return r;
  };
  return rows(a) == rows(b);
}

DatasetIndex DatasetIndex::build(const std::vector<Sample>& training, std::size_t threads) {
  std::vector<std::string> keys(training.size());
  std::vector<std::string> errors(training.size());
  parallel_for(training.size(), threads, [&](std::size_t i) {
    try {
      keys[i] = invariant_key(make_lattice_polytope(training[i])).serialize();
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  DatasetIndex index;
  for (std::size_t i = 0; i < training.size(); ++i) {
    if (!errors[i].empty())
      throw std::invalid_argument("training sample " + std::to_string(i) + ": " + errors[i]);
    index.buckets_[keys[i]].push_back(i);
  }
  return index;
}

void DatasetIndex::save(std::ostream& out) const {
  out << "polygen-index 1\n";
  for (const auto& [key, ids] : buckets_) {
    out << key << '\t';
    for (std::size_t i = 0; i < ids.size(); ++i) out << (i ? " " : "") << ids[i];
    out << '\n';
  }
}

DatasetIndex DatasetIndex::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "polygen-index 1") throw std::runtime_error("not an index file");
  DatasetIndex index;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw std::runtime_error("malformed index line");
    const std::string key = line.substr(0, tab);
    InvariantKey::parse(key);
    std::istringstream ids(line.substr(tab + 1));
    auto& bucket = index.buckets_[key];
    std::size_t id;
    while (ids >> id) bucket.push_back(id);
    if (bucket.empty()) throw std::runtime_error("index bucket without ids");
  }
  return index;
}

const std::vector<std::size_t>* DatasetIndex::lookup(const InvariantKey& key) const {
  const auto it = buckets_.find(key.serialize());
  return it == buckets_.end() ? nullptr : &it->second;
}

std::size_t DatasetIndex::sample_count() const {
  std::size_t n = 0;
  for (const auto& [key, ids] : buckets_) n += ids.size();
  return n;
}

std::optional<IndexMatch> find_equivalent_in_index(const LatticePolytope& p, const DatasetIndex& index,
                                                   const std::vector<Sample>& training) {
  const auto* ids = index.lookup(invariant_key(p));
  if (!ids) return std::nullopt;
  for (std::size_t id : *ids) {
    if (id >= training.size()) throw std::out_of_range("index refers to a missing training sample");
    if (auto w = equivalent(p, make_lattice_polytope(training[id]))) return IndexMatch{id, std::move(*w)};
  }
  return std::nullopt;
}

}  // namespace polygen
