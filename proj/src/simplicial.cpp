#include "plsys/simplicial.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "plsys/field.hpp"

namespace plsys {

std::string simplex_key(const Simplex& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s[i]);
  }
  return out;
}

Simplex parse_simplex_key(const std::string& key) {
  Simplex s;
  std::stringstream ss(key);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw Error("malformed simplex key '" + key + "'");
    s.push_back(v);
  }
  if (s.empty()) throw Error("empty simplex key");
  std::sort(s.begin(), s.end());
  return s;
}

namespace {

bool simplex_less(const Simplex& a, const Simplex& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace

SimplicialComplex SimplicialComplex::build(const std::vector<Simplex>& maximal) {
  std::set<Simplex> all;
  for (Simplex s : maximal) {
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
      throw Error("simplex [" + simplex_key(s) + "] repeats a vertex");
    }
    if (s.empty()) continue;
    if (s.size() > 24) throw Error("simplex dimension too large");
    const std::size_t n = s.size();
    for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
      Simplex face;
      for (std::size_t k = 0; k < n; ++k)
        if (mask & (std::uint32_t{1} << k)) face.push_back(s[k]);
      all.insert(std::move(face));
    }
  }
  SimplicialComplex k;
  k.simplices_.assign(all.begin(), all.end());
  std::sort(k.simplices_.begin(), k.simplices_.end(), simplex_less);
  for (std::size_t i = 0; i < k.simplices_.size(); ++i) k.lookup_.emplace(k.simplices_[i], i);
  k.facets_.resize(k.size());
  k.cofaces_.resize(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    const Simplex& s = k.simplices_[i];
    if (s.size() < 2) continue;
    for (std::size_t drop = 0; drop < s.size(); ++drop) {
      Simplex f = s;
      f.erase(f.begin() + static_cast<std::ptrdiff_t>(drop));
      std::size_t j = k.lookup_.at(f);
      k.facets_[i].push_back(j);
      k.cofaces_[j].push_back(i);
    }
  }
  for (auto& c : k.cofaces_) std::sort(c.begin(), c.end());
  return k;
}

std::optional<std::size_t> SimplicialComplex::find(const Simplex& s) const {
  auto it = lookup_.find(s);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t SimplicialComplex::index(const Simplex& s) const {
  auto i = find(s);
  if (!i) throw Error("[" + simplex_key(s) + "] is not a simplex of the complex");
  return *i;
}

std::vector<int> SimplicialComplex::vertices() const {
  std::vector<int> out;
  for (const auto& s : simplices_) {
    if (s.size() != 1) break;
    out.push_back(s[0]);
  }
  return out;
}

std::vector<std::size_t> SimplicialComplex::of_dimension(int d) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size(); ++i)
    if (dim_of(i) == d) out.push_back(i);
  return out;
}

std::vector<std::size_t> SimplicialComplex::maximal() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size(); ++i)
    if (cofaces_[i].empty()) out.push_back(i);
  return out;
}

bool SimplicialComplex::is_pure() const {
  for (std::size_t i : maximal())
    if (dim_of(i) != dimension()) return false;
  return true;
}

bool SimplicialComplex::is_face(std::size_t a, std::size_t b) const {
  const Simplex& x = simplices_[a];
  const Simplex& y = simplices_[b];
  return x.size() <= y.size() && std::includes(y.begin(), y.end(), x.begin(), x.end());
}

long SimplicialComplex::euler_characteristic() const {
  long chi = 0;
  for (const auto& s : simplices_) chi += (s.size() % 2 == 1) ? 1 : -1;
  return chi;
}

std::vector<std::size_t> SimplicialComplex::f_vector() const {
  std::vector<std::size_t> f(static_cast<std::size_t>(dimension() + 1), 0);
  for (const auto& s : simplices_) ++f[s.size() - 1];
  return f;
}

std::vector<std::size_t> open_star(const SimplicialComplex& k, std::size_t s) {
  if (s >= k.size()) throw Error("open_star: simplex index out of range");
  std::vector<char> seen(k.size(), 0);
  std::vector<std::size_t> stack{s};
  seen[s] = 1;
  while (!stack.empty()) {
    std::size_t t = stack.back();
    stack.pop_back();
    for (std::size_t c : k.cofaces(t)) {
      if (!seen[c]) {
        seen[c] = 1;
        stack.push_back(c);
      }
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k.size(); ++i)
    if (seen[i]) out.push_back(i);
  return out;
}

std::vector<std::size_t> face_closure(const SimplicialComplex& k, const std::vector<std::size_t>& which) {
  std::vector<char> seen(k.size(), 0);
  std::vector<std::size_t> stack;
  for (std::size_t i : which) {
    if (!seen[i]) {
      seen[i] = 1;
      stack.push_back(i);
    }
  }
  while (!stack.empty()) {
    std::size_t t = stack.back();
    stack.pop_back();
    for (std::size_t f : k.facets(t)) {
      if (!seen[f]) {
        seen[f] = 1;
        stack.push_back(f);
      }
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k.size(); ++i)
    if (seen[i]) out.push_back(i);
  return out;
}

std::vector<std::size_t> closed_star(const SimplicialComplex& k, std::size_t s) {
  return face_closure(k, open_star(k, s));
}

std::vector<std::size_t> link(const SimplicialComplex& k, std::size_t s) {
  const Simplex& sv = k.simplex(s);
  std::vector<std::size_t> out;
  for (std::size_t t : closed_star(k, s)) {
    const Simplex& tv = k.simplex(t);
    bool disjoint = std::none_of(tv.begin(), tv.end(),
                                 [&](int v) { return std::binary_search(sv.begin(), sv.end(), v); });
    if (disjoint) out.push_back(t);
  }
  return out;
}

SimplicialComplex barycentric_subdivision(const SimplicialComplex& k) {
  std::vector<Simplex> flags;
  for (std::size_t top : k.maximal()) {
    // Walk down from the maximal simplex, one facet at a time.
    std::vector<Simplex> partial{{static_cast<int>(top)}};
    for (int d = k.dim_of(top); d > 0; --d) {
      std::vector<Simplex> next;
      for (const auto& chain : partial) {
        for (std::size_t f : k.facets(static_cast<std::size_t>(chain.back()))) {
          Simplex c = chain;
          c.push_back(static_cast<int>(f));
          next.push_back(std::move(c));
        }
      }
      partial = std::move(next);
    }
    for (auto& chain : partial) {
      std::reverse(chain.begin(), chain.end());
      flags.push_back(std::move(chain));
    }
  }
  return SimplicialComplex::build(flags);
}

SimplicialComplex full_subcomplex(const SimplicialComplex& k, const std::vector<int>& vs) {
  std::vector<int> sorted = vs;
  std::sort(sorted.begin(), sorted.end());
  std::vector<Simplex> keep;
  for (std::size_t i : k.maximal()) {
    // Restrict each maximal simplex; the closure of the restrictions is the full subcomplex.
    Simplex s;
    for (int v : k.simplex(i))
      if (std::binary_search(sorted.begin(), sorted.end(), v)) s.push_back(v);
    if (!s.empty()) keep.push_back(std::move(s));
  }
  return SimplicialComplex::build(keep);
}

SimplicialComplex subcomplex(const SimplicialComplex& k, const std::vector<std::size_t>& face_closed) {
  std::vector<Simplex> keep;
  keep.reserve(face_closed.size());
  for (std::size_t i : face_closed) keep.push_back(k.simplex(i));
  SimplicialComplex sub = SimplicialComplex::build(keep);
  if (sub.size() != face_closed.size()) throw Error("subcomplex: index set is not closed under faces");
  return sub;
}

SimplicialMap::SimplicialMap(ComplexPtr source, ComplexPtr target, std::map<int, int> vertex_map)
    : source_(std::move(source)), target_(std::move(target)), vertex_map_(std::move(vertex_map)) {
  image_.resize(source_->size());
  for (std::size_t i = 0; i < source_->size(); ++i) {
    Simplex img;
    for (int v : source_->simplex(i)) {
      auto it = vertex_map_.find(v);
      if (it == vertex_map_.end()) throw Error("vertex map has no value at vertex " + std::to_string(v));
      img.push_back(it->second);
    }
    std::sort(img.begin(), img.end());
    img.erase(std::unique(img.begin(), img.end()), img.end());
    auto j = target_->find(img);
    if (!j) {
      throw Error("image of [" + simplex_key(source_->simplex(i)) + "] is [" + simplex_key(img) +
                  "], which is not a simplex of the target");
    }
    image_[i] = *j;
  }
}

SimplicialMap SimplicialMap::identity(ComplexPtr k) {
  std::map<int, int> vm;
  for (int v : k->vertices()) vm[v] = v;
  return SimplicialMap(k, k, std::move(vm));
}

bool SimplicialMap::nondegenerate_on(std::size_t i) const {
  return target_->simplex(image_[i]).size() == source_->simplex(i).size();
}

SimplicialMap compose(const SimplicialMap& g, const SimplicialMap& f) {
  if (!(f.target() == g.source())) throw Error("compose: target of the first map is not the source of the second");
  std::map<int, int> vm;
  for (const auto& [v, w] : f.vertex_map()) vm[v] = g(w);
  return SimplicialMap(f.source_ptr(), g.target_ptr(), std::move(vm));
}

SimplicialMap subdivide_map(const SimplicialMap& f, ComplexPtr y1, ComplexPtr k1) {
  std::map<int, int> vm;
  for (std::size_t t = 0; t < f.source().size(); ++t) vm[static_cast<int>(t)] = static_cast<int>(f.image(t));
  return SimplicialMap(std::move(y1), std::move(k1), std::move(vm));
}

SimplicialMap subdivide_map(const SimplicialMap& f) {
  return subdivide_map(f, share(barycentric_subdivision(f.source())), share(barycentric_subdivision(f.target())));
}

namespace {

int induced_sign(const SimplicialComplex& k, const Orientation& o, std::size_t top, std::size_t ridge) {
  const auto& fs = k.facets(top);
  for (std::size_t pos = 0; pos < fs.size(); ++pos) {
    if (fs[pos] == ridge) return o.sign[top] * (pos % 2 == 0 ? 1 : -1);
  }
  throw Error("induced_sign: not a facet");
}

}  // namespace

Report validate_orientation(const SimplicialComplex& k, const Orientation& o, bool allow_boundary) {
  Report r;
  if (!k.is_pure()) {
    r.add("complex is not pure");
    return r;
  }
  if (o.sign.size() != k.size()) {
    r.add("orientation has " + std::to_string(o.sign.size()) + " entries for " + std::to_string(k.size()) +
          " simplices");
    return r;
  }
  const int m = k.dimension();
  for (std::size_t t : k.of_dimension(m)) {
    if (o.sign[t] != 1 && o.sign[t] != -1) r.add("top simplex [" + simplex_key(k.simplex(t)) + "] has no sign");
  }
  if (!r.ok() || m < 1) return r;
  for (std::size_t ridge : k.of_dimension(m - 1)) {
    const auto& tops = k.cofaces(ridge);
    const std::string name = "[" + simplex_key(k.simplex(ridge)) + "]";
    if (tops.size() == 1) {
      if (!allow_boundary) r.add("ridge " + name + " lies in a single top simplex: not a closed pseudo-manifold");
    } else if (tops.size() > 2) {
      r.add("ridge " + name + " lies in " + std::to_string(tops.size()) + " top simplices");
    } else if (induced_sign(k, o, tops[0], ridge) + induced_sign(k, o, tops[1], ridge) != 0) {
      r.add("incoherent ridge " + name + " between [" + simplex_key(k.simplex(tops[0])) + "] and [" +
            simplex_key(k.simplex(tops[1])) + "]");
    }
  }
  return r;
}

Orientation orient_coherently(const SimplicialComplex& k) {
  if (!k.is_pure()) throw Error("orient_coherently: complex is not pure");
  Orientation o{std::vector<int>(k.size(), 0)};
  const int m = k.dimension();
  if (m < 0) return o;
  for (std::size_t start : k.of_dimension(m)) {
    if (o.sign[start] != 0) continue;
    o.sign[start] = 1;
    std::deque<std::size_t> queue{start};
    while (!queue.empty() && m > 0) {
      std::size_t t = queue.front();
      queue.pop_front();
      for (std::size_t ridge : k.facets(t)) {
        for (std::size_t u : k.cofaces(ridge)) {
          if (u == t) continue;
          const int want = -induced_sign(k, o, t, ridge);
          if (o.sign[u] == 0) {
            o.sign[u] = 1;
            if (induced_sign(k, o, u, ridge) != want) o.sign[u] = -1;
            queue.push_back(u);
          } else if (induced_sign(k, o, u, ridge) != want) {
            throw Error("complex is not orientable (conflict at [" + simplex_key(k.simplex(ridge)) + "])");
          }
        }
      }
    }
  }
  return o;
}

}  // namespace plsys
