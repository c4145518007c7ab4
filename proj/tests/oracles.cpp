#include "oracles.hpp"

#include <algorithm>
#include <stdexcept>

namespace oracle {

namespace {

std::uint32_t apply_cols(const std::vector<std::uint32_t>& cols, std::uint32_t v) {
  std::uint32_t out = 0;
  for (std::size_t i = 0; i < cols.size(); ++i)
    if (v >> i & 1U) out ^= cols[i];
  return out;
}

ElementSet image(const std::vector<std::uint32_t>& cols, ElementSet s, int dom_dim) {
  ElementSet out = 0;
  for (std::uint32_t v = 0; v < (1U << dom_dim); ++v)
    if (s >> v & 1U) out |= 1U << apply_cols(cols, v);
  return out;
}

ElementSet preimage(const std::vector<std::uint32_t>& cols, ElementSet t, int dom_dim) {
  ElementSet out = 0;
  for (std::uint32_t v = 0; v < (1U << dom_dim); ++v)
    if (t >> apply_cols(cols, v) & 1U) out |= 1U << v;
  return out;
}

// All subspaces of F2^d, as element sets.
std::vector<ElementSet> subspaces(int d) {
  std::vector<ElementSet> out;
  const std::uint32_t n = 1U << d;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    if (!(s & 1U)) continue;
    bool closed = true;
    for (std::uint32_t a = 0; a < n && closed; ++a)
      for (std::uint32_t b = 0; b < n && closed; ++b)
        if ((s >> a & 1U) && (s >> b & 1U) && !(s >> (a ^ b) & 1U)) closed = false;
    if (closed) out.push_back(static_cast<ElementSet>(s));
  }
  return out;
}

int popcount_dim(ElementSet s) {
  int elems = __builtin_popcount(s);
  int d = 0;
  while ((1 << d) < elems) ++d;
  return d;
}

std::vector<std::vector<int>> facet_lists(const F2Functor& f) {
  std::vector<std::vector<int>> facets(f.simplices.size());
  for (const auto& [rel, cols] : f.maps) facets[static_cast<std::size_t>(rel.second)].push_back(rel.first);
  return facets;
}

// Depth-first enumeration where each simplex with a facet is forced by it.
template <class Forced>
void enumerate(const F2Functor& f, Forced forced, std::vector<std::vector<ElementSet>>& found) {
  const auto facets = facet_lists(f);
  std::vector<ElementSet> cur(f.simplices.size(), 0);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == f.simplices.size()) {
      found.push_back(cur);
      return;
    }
    if (facets[i].empty()) {
      for (ElementSet s : subspaces(f.dim[i])) {
        cur[i] = s;
        self(self, i + 1);
      }
      return;
    }
    ElementSet want = forced(facets[i][0], static_cast<int>(i), cur);
    for (int s : facets[i])
      if (forced(s, static_cast<int>(i), cur) != want) return;
    cur[i] = want;
    self(self, i + 1);
  };
  rec(rec, 0);
}

std::vector<ElementSet> pick_extreme(const std::vector<std::vector<ElementSet>>& found, bool largest) {
  if (found.empty()) throw std::logic_error("oracle: no admissible family");
  auto total = [](const std::vector<ElementSet>& v) {
    int n = 0;
    for (ElementSet s : v) n += popcount_dim(s);
    return n;
  };
  const auto* best = &found.front();
  for (const auto& v : found)
    if (largest ? total(v) > total(*best) : total(v) < total(*best)) best = &v;
  for (const auto& v : found)
    for (std::size_t i = 0; i < v.size(); ++i) {
      bool ok = largest ? (v[i] & ~(*best)[i]) == 0 : ((*best)[i] & ~v[i]) == 0;
      if (!ok) throw std::logic_error("oracle: extreme family is not comparable with every admissible family");
    }
  return *best;
}

}  // namespace

std::vector<ElementSet> max_sub_episheaf(const F2Functor& f) {
  std::vector<std::vector<ElementSet>> found;
  enumerate(
      f,
      [&](int s, int t, const std::vector<ElementSet>& cur) {
        return image(f.maps.at({s, t}), cur[static_cast<std::size_t>(s)], f.dim[static_cast<std::size_t>(s)]);
      },
      found);
  return pick_extreme(found, true);
}

std::vector<ElementSet> min_mono_kernel(const F2Functor& f) {
  std::vector<std::vector<ElementSet>> found;
  enumerate(
      f,
      [&](int s, int t, const std::vector<ElementSet>& cur) {
        return preimage(f.maps.at({s, t}), cur[static_cast<std::size_t>(s)], f.dim[static_cast<std::size_t>(t)]);
      },
      found);
  return pick_extreme(found, false);
}

F2Functor random_f2_functor(std::mt19937& rng, bool sheaf, std::size_t max_simplices) {
  F2Functor f;
  f.sheaf = sheaf;
  int nv = 1 + static_cast<int>(rng() % 4);
  std::vector<std::vector<int>> edges;
  for (int a = 0; a < nv; ++a)
    for (int b = a + 1; b < nv; ++b) edges.push_back({a, b});
  std::shuffle(edges.begin(), edges.end(), rng);
  std::size_t room = max_simplices > static_cast<std::size_t>(nv) ? max_simplices - static_cast<std::size_t>(nv) : 0;
  std::size_t ne = std::min(edges.size(), room == 0 ? 0 : static_cast<std::size_t>(rng() % (room + 1)));
  edges.resize(ne);
  std::sort(edges.begin(), edges.end());
  for (int v = 0; v < nv; ++v) f.simplices.push_back({v});
  for (const auto& e : edges) f.simplices.push_back(e);
  for (std::size_t i = 0; i < f.simplices.size(); ++i) f.dim.push_back(static_cast<int>(rng() % 4));
  for (std::size_t i = static_cast<std::size_t>(nv); i < f.simplices.size(); ++i) {
    for (int v : f.simplices[i]) {
      int s = v;  // vertex index equals its id
      int t = static_cast<int>(i);
      int rows = sheaf ? f.dim[i] : f.dim[static_cast<std::size_t>(s)];
      int cols = sheaf ? f.dim[static_cast<std::size_t>(s)] : f.dim[i];
      std::vector<std::uint32_t> c;
      for (int j = 0; j < cols; ++j) c.push_back(static_cast<std::uint32_t>(rng() % (1U << rows)));
      f.maps[{s, t}] = c;
    }
  }
  return f;
}

plsys::CellFunctor to_library(const F2Functor& f) {
  using namespace plsys;
  Field f2 = Field::prime(2);
  auto k = share(SimplicialComplex::build(f.simplices));
  if (k->simplices() != f.simplices) throw std::logic_error("oracle: simplex order differs from the library");
  std::vector<std::size_t> dims(f.dim.begin(), f.dim.end());
  CellFunctor out(k, f2, f.sheaf ? Variance::sheaf : Variance::cosheaf, dims);
  for (const auto& [rel, cols] : f.maps) {
    auto [s, t] = rel;
    int rows = f.sheaf ? f.dim[static_cast<std::size_t>(t)] : f.dim[static_cast<std::size_t>(s)];
    Matrix m(f2, static_cast<std::size_t>(rows), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (int i = 0; i < rows; ++i) m(static_cast<std::size_t>(i), j) = Scalar(f2, static_cast<long>(cols[j] >> i & 1U));
    out.set_map(static_cast<std::size_t>(s), static_cast<std::size_t>(t), m);
  }
  return out;
}

ElementSet elements_of(const plsys::Subspace& s) {
  std::vector<std::uint32_t> rows;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    std::uint32_t r = 0;
    for (std::size_t j = 0; j < s.ambient_dim(); ++j)
      if (!s.rows()(i, j).is_zero()) r |= 1U << j;
    rows.push_back(r);
  }
  ElementSet out = 0;
  for (std::uint32_t c = 0; c < (1U << rows.size()); ++c) out |= 1U << apply_cols(rows, c);
  return out;
}

std::size_t rank_mod_p(std::vector<std::vector<long>> m, long p) {
  std::size_t rank = 0;
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  auto inv = [p](long a) {
    long r = 1, e = p - 2;
    a %= p;
    while (e > 0) {
      if (e & 1) r = r * a % p;
      a = a * a % p;
      e >>= 1;
    }
    return r;
  };
  for (auto& row : m)
    for (auto& x : row) x = ((x % p) + p) % p;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[rank]);
    long iv = inv(m[rank][c]);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      long fct = m[i][c] * iv % p;
      if (fct == 0) continue;
      for (std::size_t j = c; j < cols; ++j) m[i][j] = ((m[i][j] - fct * m[rank][j]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

}  // namespace oracle
