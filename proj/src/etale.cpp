#include "plsys/etale.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace plsys {

namespace {

std::string name_of(const SimplicialComplex& k, std::size_t s) { return "[" + simplex_key(k.simplex(s)) + "]"; }

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent[b] = a;
    return true;
  }
};

}  // namespace

std::vector<char> EtaleOpen::open_part() const {
  std::vector<char> out(boundary.size());
  for (std::size_t i = 0; i < boundary.size(); ++i) out[i] = boundary[i] ? 0 : 1;
  return out;
}

EtaleOpen EtaleOpen::identity(ComplexPtr k) {
  EtaleOpen e;
  e.total = k;
  e.boundary.assign(k->size(), 0);
  e.psi = SimplicialMap::identity(k);
  return e;
}

EtaleOpen EtaleOpen::from_open_set(ComplexPtr k, const std::vector<std::size_t>& u) {
  std::vector<char> in_u(k->size(), 0);
  for (std::size_t s : u) in_u[s] = 1;
  for (std::size_t s : u)
    for (std::size_t t : k->cofaces(s))
      if (!in_u[t]) throw Error("from_open_set: the set is not up-closed at " + name_of(*k, s));
  auto closure = face_closure(*k, u);
  auto l = share(subcomplex(*k, closure));
  EtaleOpen e;
  e.total = l;
  e.boundary.assign(l->size(), 1);
  for (std::size_t s : u) e.boundary[l->index(k->simplex(s))] = 0;
  std::map<int, int> vm;
  for (int v : l->vertices()) vm[v] = v;
  e.psi = SimplicialMap(l, k, vm);
  return e;
}

Report validate_etale(const EtaleOpen& e) {
  Report r;
  const SimplicialComplex& l = *e.total;
  const SimplicialComplex& k = e.base();
  if (!(e.psi.source() == l)) {
    r.add("psi is not defined on L");
    return r;
  }
  if (e.boundary.size() != l.size()) {
    r.add("L0 mask has the wrong length");
    return r;
  }
  for (std::size_t s = 0; s < l.size(); ++s) {
    if (!e.boundary[s]) continue;
    for (std::size_t f : l.facets(s))
      if (!e.boundary[f]) r.add("L0 is not closed under faces at " + name_of(l, s));
  }
  for (std::size_t s = 0; s < l.size(); ++s)
    if (!e.psi.nondegenerate_on(s)) r.add("psi collapses " + name_of(l, s));
  if (!r.ok()) return r;

  const int m = k.dimension();
  for (std::size_t s = 0; s < l.size(); ++s) {
    if (!e.boundary[s]) continue;
    auto star = open_star(l, s);
    bool covered = std::any_of(star.begin(), star.end(), [&](std::size_t t) { return !e.boundary[t]; });
    if (!covered) r.add(name_of(l, s) + " in L0 is not a face of a simplex of L - L0");
  }
  for (std::size_t s : l.of_dimension(m - 1)) {
    std::size_t open_tops = 0, tops = 0;
    for (std::size_t t : l.cofaces(s)) {
      if (l.dim_of(t) != m) continue;
      ++tops;
      if (!e.boundary[t]) ++open_tops;
    }
    if (e.boundary[s]) {
      if (open_tops != 1) {
        r.add("ridge " + name_of(l, s) + " of L0 is a face of " + std::to_string(open_tops) +
              " open top simplices instead of one");
      }
    } else {
      std::size_t image_tops = 0;
      for (std::size_t t : k.cofaces(e.psi.image(s)))
        if (k.dim_of(t) == m) ++image_tops;
      if (tops != image_tops) {
        r.add("ridge " + name_of(l, s) + " is a face of " + std::to_string(tops) + " top simplices but its image " +
              name_of(k, e.psi.image(s)) + " is a face of " + std::to_string(image_tops));
      }
    }
  }

  for (std::size_t s = 0; s < l.size(); ++s) {
    if (e.boundary[s]) continue;
    auto star = open_star(l, s);
    std::set<std::size_t> images;
    for (std::size_t t : star) images.insert(e.psi.image(t));
    if (images.size() != star.size()) {
      r.add("star criterion: psi is not injective on the star of " + name_of(l, s));
      continue;
    }
    auto closed = face_closure(l, star);
    bool interior = std::none_of(closed.begin(), closed.end(), [&](std::size_t t) { return e.boundary[t] != 0; });
    if (interior && star.size() != open_star(k, e.psi.image(s)).size()) {
      r.add("star criterion: psi does not map the star of " + name_of(l, s) + " onto the star of " +
            name_of(k, e.psi.image(s)));
    }
  }
  return r;
}

UniversalCompletion universal_completion(const RawEtale& r, ComplexPtr base) {
  const SimplicialComplex& k = *base;
  const std::size_t ncells = r.label.size();
  for (std::size_t c = 0; c < ncells; ++c)
    if (r.label[c] >= k.size()) throw Error("raw cell " + std::to_string(c) + " has an unknown label");
  for (auto [f, c] : r.faces) {
    if (f >= ncells || c >= ncells) throw Error("raw face relation names an unknown cell");
    const auto& fs = k.facets(r.label[c]);
    if (std::find(fs.begin(), fs.end(), r.label[f]) == fs.end()) {
      throw Error("raw cells " + std::to_string(f) + " < " + std::to_string(c) + " are labelled " +
                  name_of(k, r.label[f]) + " and " + name_of(k, r.label[c]) +
                  ", which are not a facet pair (labels must preserve dimension)");
    }
  }

  // Copies of every face of every cell's simplex.
  std::map<std::pair<std::size_t, Simplex>, std::size_t> element;
  std::vector<std::pair<std::size_t, Simplex>> elems;
  for (std::size_t c = 0; c < ncells; ++c) {
    const Simplex& sv = k.simplex(r.label[c]);
    const std::size_t n = sv.size();
    for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
      Simplex face;
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1U) face.push_back(sv[i]);
      element.emplace(std::make_pair(c, face), elems.size());
      elems.emplace_back(c, face);
    }
  }
  std::vector<std::size_t> image(elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i) image[i] = k.index(elems[i].second);

  UnionFind uf(elems.size());
  for (auto [f, c] : r.faces) {
    for (std::size_t i = 0; i < elems.size(); ++i) {
      if (elems[i].first != f) continue;
      uf.unite(i, element.at({c, elems[i].second}));
    }
  }

  // Neighbours inside each copy: (element, neighbour, 0 for facet / 1 for coface).
  std::vector<std::vector<std::pair<std::size_t, int>>> nbrs(elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i) {
    const auto& [c, face] = elems[i];
    if (face.size() < 2) continue;
    for (std::size_t drop = 0; drop < face.size(); ++drop) {
      Simplex g = face;
      g.erase(g.begin() + static_cast<std::ptrdiff_t>(drop));
      std::size_t j = element.at({c, g});
      nbrs[i].emplace_back(j, 0);
      nbrs[j].emplace_back(i, 1);
    }
  }
  // Parallel zigzags: neighbours of one class in the same direction with the
  // same image are the same simplex.
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::tuple<std::size_t, int, std::size_t>, std::size_t> seen;
    for (std::size_t i = 0; i < elems.size(); ++i) {
      for (auto [j, dir] : nbrs[i]) {
        auto key = std::make_tuple(uf.find(i), dir, image[j]);
        auto [it, fresh] = seen.emplace(key, j);
        if (!fresh && uf.unite(it->second, j)) changed = true;
      }
    }
  }

  std::map<std::size_t, int> vertex_id;  // class root -> vertex of L
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (elems[i].second.size() != 1) continue;
    std::size_t root = uf.find(i);
    if (!vertex_id.count(root)) vertex_id.emplace(root, 0);
  }
  {
    int next = 0;
    for (auto& [root, id] : vertex_id) id = next++;
  }
  std::map<std::size_t, Simplex> class_simplex;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    std::size_t root = uf.find(i);
    if (class_simplex.count(root)) continue;
    Simplex vs;
    for (int v : elems[i].second) vs.push_back(vertex_id.at(uf.find(element.at({elems[i].first, Simplex{v}}))));
    std::sort(vs.begin(), vs.end());
    class_simplex.emplace(root, vs);
  }
  std::vector<Simplex> all;
  for (const auto& [root, vs] : class_simplex) all.push_back(vs);
  auto l = share(SimplicialComplex::build(all));
  if (l->size() != class_simplex.size()) throw Error("universal completion: glued copies do not form a complex");

  UniversalCompletion out;
  out.open.total = l;
  out.open.boundary.assign(l->size(), 1);
  out.cell.resize(ncells);
  for (std::size_t c = 0; c < ncells; ++c) {
    std::size_t root = uf.find(element.at({c, k.simplex(r.label[c])}));
    std::size_t s = l->index(class_simplex.at(root));
    out.cell[c] = s;
    out.open.boundary[s] = 0;
  }
  std::map<int, int> vm;
  for (const auto& [root, id] : vertex_id) vm[id] = elems[root].second[0];
  out.open.psi = SimplicialMap(l, std::move(base), vm);
  Report rep = validate_etale(out.open);
  if (!rep.ok()) throw Error("universal completion is not a constructible etale open: " + rep.first());
  return out;
}

Report universal_factor(const RawEtale& r, const UniversalCompletion& u, const EtaleOpen& target,
                        const std::vector<std::size_t>& cell_to_target, std::map<int, int>* factor) {
  Report rep;
  const SimplicialComplex& l = *u.open.total;
  const SimplicialComplex& t = *target.total;
  if (cell_to_target.size() != r.label.size()) {
    rep.add("cell map has the wrong length");
    return rep;
  }
  for (std::size_t c = 0; c < r.label.size(); ++c) {
    if (target.psi.image(cell_to_target[c]) != r.label[c]) rep.add("cell " + std::to_string(c) + " changes label");
    if (target.boundary[cell_to_target[c]]) rep.add("cell " + std::to_string(c) + " lands outside the open part");
  }
  for (auto [f, c] : r.faces)
    if (!t.is_face(cell_to_target[f], cell_to_target[c])) rep.add("face relation not preserved");
  if (!rep.ok()) return rep;

  std::map<int, int> eta;
  for (std::size_t c = 0; c < r.label.size(); ++c) {
    const Simplex& src = l.simplex(u.cell[c]);
    const Simplex& dst = t.simplex(cell_to_target[c]);
    for (int x : src) {
      int over = u.open.psi(x);
      auto it = std::find_if(dst.begin(), dst.end(), [&](int w) { return target.psi(w) == over; });
      if (it == dst.end()) {
        rep.add("no vertex over " + std::to_string(over) + " in the image of cell " + std::to_string(c));
        continue;
      }
      auto [pos, fresh] = eta.emplace(x, *it);
      if (!fresh && pos->second != *it) rep.add("vertex " + std::to_string(x) + " would map to two vertices");
    }
  }
  if (!rep.ok()) return rep;
  if (eta.size() != l.vertices().size()) {
    rep.add("some vertex of the completion is not reached by any cell");
    return rep;
  }
  try {
    SimplicialMap m(u.open.total, target.total, eta);
    rep.merge(compose_etale(m, u.open, target));
  } catch (const Error& err) {
    rep.add(err.what());
  }
  if (rep.ok() && factor) *factor = eta;
  return rep;
}

Report compose_etale(const SimplicialMap& mu, const EtaleOpen& a, const EtaleOpen& b) {
  Report r;
  if (!(mu.source() == *a.total) || !(mu.target() == *b.total)) {
    r.add("mu does not run between the two etale opens");
    return r;
  }
  for (const auto& [v, w] : mu.vertex_map()) {
    if (b.psi(w) != a.psi(v)) {
      r.add("triangle fails at vertex " + std::to_string(v) + ": " + std::to_string(b.psi(w)) +
            " != " + std::to_string(a.psi(v)));
    }
  }
  for (std::size_t s = 0; s < a.total->size(); ++s) {
    if (!a.boundary[s] && b.boundary[mu.image(s)]) {
      r.add(name_of(*a.total, s) + " leaves the open part");
    }
  }
  return r;
}

}  // namespace plsys
