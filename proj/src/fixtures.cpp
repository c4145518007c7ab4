#include "plsys/fixtures.hpp"

#include <algorithm>

namespace plsys::fixtures {

namespace {

Matrix ints(Field f, std::initializer_list<std::initializer_list<long>> rows) { return Matrix::from_ints(f, rows); }

bool has_vertex(const Simplex& s, int v) { return std::find(s.begin(), s.end(), v) != s.end(); }

}  // namespace

ComplexPtr cone_hexagon() {
  std::vector<Simplex> tri;
  for (int k = 0; k < 6; ++k) tri.push_back({0, 1 + k, 1 + (k + 1) % 6});
  return share(SimplicialComplex::build(tri));
}

ComplexPtr octahedron() {
  std::vector<Simplex> tri;
  for (int i = 0; i < 4; ++i) {
    tri.push_back({i, (i + 1) % 4, north});
    tri.push_back({i, (i + 1) % 4, south});
  }
  return share(SimplicialComplex::build(tri));
}

Bisheaf example1(Field field) {
  auto k = cone_hexagon();
  const std::size_t c = k->index({cone_center});
  std::vector<std::size_t> sd(k->size(), 1), cd(k->size(), 1);
  sd[c] = 0;
  cd[c] = 2;
  CellSheaf sheaf(k, field, sd);
  CellCosheaf cosheaf(k, field, cd);
  for (auto [s, t] : sheaf.relations()) {
    if (s == c) continue;  // out of a zero space
    sheaf.set_map(s, t, Matrix::identity(field, 1));
  }
  for (auto [s, t] : cosheaf.relations())
    cosheaf.set_map(s, t, s == c ? ints(field, {{1}, {0}}) : Matrix::identity(field, 1));
  Bisheaf b = Bisheaf::with_zero_vertical(std::move(sheaf), std::move(cosheaf));
  for (std::size_t s = 0; s < k->size(); ++s)
    if (s != c) b.vertical[s] = Matrix::identity(field, 1);
  return b;
}

Bisheaf example2(Field field) {
  auto k = cone_hexagon();
  const std::size_t c = k->index({cone_center});
  std::vector<std::size_t> cd(k->size(), 1);
  cd[c] = 0;
  CellSheaf sheaf = CellSheaf::constant(k, field, 1);
  CellCosheaf cosheaf(k, field, cd);
  for (auto [s, t] : cosheaf.relations())
    if (s != c) cosheaf.set_map(s, t, Matrix::identity(field, 1));
  Bisheaf b = Bisheaf::with_zero_vertical(std::move(sheaf), std::move(cosheaf));
  for (std::size_t s = 0; s < k->size(); ++s)
    if (s != c) b.vertical[s] = Matrix::identity(field, 1);
  return b;
}

Bisheaf example3_f(Field field) {
  auto k = octahedron();
  auto equator = [&](std::size_t s) {
    const Simplex& v = k->simplex(s);
    return !has_vertex(v, north) && !has_vertex(v, south);
  };
  std::vector<std::size_t> sd(k->size(), 1);
  for (std::size_t s = 0; s < k->size(); ++s)
    if (equator(s)) sd[s] = 2;
  CellSheaf sheaf(k, field, sd);
  for (auto [s, t] : sheaf.relations()) {
    if (equator(t)) sheaf.set_map(s, t, Matrix::identity(field, 2));
    else if (equator(s)) sheaf.set_map(s, t, ints(field, {{1, 0}}));
    else sheaf.set_map(s, t, Matrix::identity(field, 1));
  }
  Bisheaf b = Bisheaf::with_zero_vertical(std::move(sheaf), CellCosheaf::constant(k, field, 1));
  for (std::size_t s = 0; s < k->size(); ++s)
    b.vertical[s] = equator(s) ? ints(field, {{1, 0}}) : Matrix::identity(field, 1);
  return b;
}

Bisheaf example3_h(Field field) {
  auto k = octahedron();
  const std::size_t n = k->index({north});
  CellSheaf sheaf = CellSheaf::constant(k, field, 1);
  for (std::size_t t : k->cofaces(n)) sheaf.set_map(n, t, Matrix::zero(field, 1, 1));
  Bisheaf b = Bisheaf::with_zero_vertical(std::move(sheaf), CellCosheaf::constant(k, field, 1));
  for (std::size_t s = 0; s < k->size(); ++s)
    if (s != n) b.vertical[s] = Matrix::identity(field, 1);
  return b;
}

std::vector<NamedOpen> cone_opens(ComplexPtr cone) {
  const std::size_t c = cone->index({cone_center});
  auto star = open_star(*cone, c);
  std::vector<std::size_t> ring;
  for (std::size_t s : star)
    if (s != c) ring.push_back(s);
  return {{"identity", EtaleOpen::identity(cone)},
          {"disk", EtaleOpen::from_open_set(cone, star)},
          {"annulus", EtaleOpen::from_open_set(cone, ring)}};
}

std::vector<NamedOpen> octahedron_opens(ComplexPtr oct) {
  return {{"identity", EtaleOpen::identity(oct)},
          {"north_disk", EtaleOpen::from_open_set(oct, open_star(*oct, oct->index({north})))}};
}

ComplexPtr annulus(int ring) {
  std::vector<Simplex> tri;
  for (int i = 0; i < ring; ++i) {
    int u = i, u1 = (i + 1) % ring, w = ring + i, w1 = ring + (i + 1) % ring;
    tri.push_back({u, u1, w});
    tri.push_back({u1, w, w1});
  }
  return share(SimplicialComplex::build(tri));
}

EtaleOpen annulus_double_cover(ComplexPtr base) {
  const int ring = static_cast<int>(base->vertices().size()) / 2;
  auto total = annulus(2 * ring);
  std::map<int, int> vm;
  for (int i = 0; i < 2 * ring; ++i) {
    vm[i] = i % ring;
    vm[2 * ring + i] = ring + i % ring;
  }
  EtaleOpen e;
  e.total = total;
  e.boundary.assign(total->size(), 0);
  e.psi = SimplicialMap(total, std::move(base), vm);
  return e;
}

Bisheaf twisted_annulus(ComplexPtr base, Field field) {
  const int ring = static_cast<int>(base->vertices().size()) / 2;
  // Cut along the radial edge {0, ring}; simplices touching it from the
  // side of vertices 1 and ring + 1 see a sign.
  auto in_cut = [&](const Simplex& s) {
    return std::all_of(s.begin(), s.end(), [&](int v) { return v == 0 || v == ring; });
  };
  auto right_side = [&](const Simplex& s) { return has_vertex(s, 1) || has_vertex(s, ring + 1); };
  CellSheaf sheaf = CellSheaf::constant(base, field, 1);
  CellCosheaf cosheaf = CellCosheaf::constant(base, field, 1);
  for (auto [s, t] : sheaf.relations()) {
    const Simplex& a = base->simplex(s);
    const Simplex& b = base->simplex(t);
    if (in_cut(a) && !in_cut(b) && right_side(b)) {
      sheaf.set_map(s, t, ints(field, {{-1}}));
      cosheaf.set_map(s, t, ints(field, {{-1}}));
    }
  }
  Bisheaf out = Bisheaf::with_zero_vertical(std::move(sheaf), std::move(cosheaf));
  for (auto& v : out.vertical) v = Matrix::identity(field, 1);
  return out;
}

DeskModel example1_desk(ComplexPtr cone) {
  // vertex (r, i, k) = 18 r + 6 i + k, i in Z/3 along phi, k in Z/6 along theta.
  auto id = [](int r, int i, int k) { return 18 * r + 6 * i + k; };
  std::vector<Simplex> tets;
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 6; ++k) {
      int i0 = std::min(i, (i + 1) % 3), i1 = std::max(i, (i + 1) % 3);
      int k0 = std::min(k, (k + 1) % 6), k1 = std::max(k, (k + 1) % 6);
      // Staircase triangulation of the cube: one tetrahedron per order of
      // the three coordinate steps.
      int axes[3] = {0, 1, 2};
      do {
        int c[3] = {0, i0, k0};
        Simplex t{id(c[0], c[1], c[2])};
        for (int a : axes) {
          if (a == 0) c[0] = 1;
          if (a == 1) c[1] = i1;
          if (a == 2) c[2] = k1;
          t.push_back(id(c[0], c[1], c[2]));
        }
        std::sort(t.begin(), t.end());
        tets.push_back(t);
      } while (std::next_permutation(axes, axes + 3));
    }
  }
  auto y = share(SimplicialComplex::build(tets));
  std::map<int, int> vm;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 6; ++k) {
      vm[id(0, i, k)] = cone_center;
      vm[id(1, i, k)] = 1 + k;
    }
  return {"example1", SimplicialMap(y, cone, vm), orient_coherently(*cone), 1};
}

DeskModel example2_desk(ComplexPtr cone) {
  DeskModel base = example1_desk(cone);
  const SimplicialComplex& y = base.map.source();
  const int apex = 36;
  std::vector<Simplex> tops;
  for (std::size_t s : y.maximal()) tops.push_back(y.simplex(s));
  for (std::size_t s : y.of_dimension(2)) {
    const Simplex& t = y.simplex(s);
    if (std::all_of(t.begin(), t.end(), [](int v) { return v < 18; })) {
      Simplex c = t;
      c.push_back(apex);
      tops.push_back(c);
    }
  }
  auto y2 = share(SimplicialComplex::build(tops));
  std::map<int, int> vm = base.map.vertex_map();
  vm[apex] = cone_center;
  return {"example2", SimplicialMap(y2, cone, vm), base.orientation, 1};
}

DeskModel example3_h_desk(ComplexPtr oct) {
  // Torus grid t(i, j) = 3 i + j, i in Z/4, j in Z/3. The disk A cones the
  // circle i = 0 from vertex 12. The disk B has boundary circle j = 0,
  // a collar to its own equator 13..16 and a south vertex 17.
  auto t = [](int i, int j) { return 3 * ((i % 4 + 4) % 4) + (j % 3 + 3) % 3; };
  std::vector<Simplex> tri;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 3; ++j) {
      tri.push_back({t(i, j), t(i + 1, j), t(i + 1, j + 1)});
      tri.push_back({t(i, j), t(i, j + 1), t(i + 1, j + 1)});
    }
  const int a = 12, sv = 17;
  for (int j = 0; j < 3; ++j) tri.push_back({a, t(0, j), t(0, j + 1)});
  for (int i = 0; i < 4; ++i) {
    int e = 13 + i, e1 = 13 + (i + 1) % 4;
    tri.push_back({t(i, 0), e, e1});
    tri.push_back({t(i, 0), t(i + 1, 0), e1});
    tri.push_back({sv, e, e1});
  }
  for (auto& s : tri) std::sort(s.begin(), s.end());
  auto y = share(SimplicialComplex::build(tri));
  std::map<int, int> vm;
  for (int v = 0; v <= 12; ++v) vm[v] = north;
  for (int i = 0; i < 4; ++i) vm[13 + i] = i;
  vm[sv] = south;
  return {"example3_h", SimplicialMap(y, oct, vm), orient_coherently(*oct), 0};
}

DeskModel identity_desk(ComplexPtr oct) {
  return {"identity", SimplicialMap::identity(oct), orient_coherently(*oct), 0};
}

}  // namespace plsys::fixtures
