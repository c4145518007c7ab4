#include <gtest/gtest.h>

#include "plsys/etale.hpp"
#include "plsys/fixtures.hpp"

using namespace plsys;
namespace fx = plsys::fixtures;

namespace {

// The open part of an etale open as raw cells, one per open simplex.
RawEtale raw_from(const EtaleOpen& e, std::vector<std::size_t>* cells = nullptr) {
  const SimplicialComplex& l = *e.total;
  std::map<std::size_t, std::size_t> cell_of;
  RawEtale r;
  for (std::size_t s = 0; s < l.size(); ++s) {
    if (e.boundary[s]) continue;
    cell_of[s] = r.label.size();
    r.label.push_back(e.psi.image(s));
    if (cells) cells->push_back(s);
  }
  for (auto [s, c] : cell_of)
    for (std::size_t f : l.facets(s))
      if (cell_of.count(f)) r.faces.emplace_back(cell_of.at(f), c);
  return r;
}

std::size_t open_count(const EtaleOpen& e) {
  std::size_t n = 0;
  for (char b : e.boundary) n += b ? 0 : 1;
  return n;
}

}  // namespace

TEST(Etale, FixtureOpensValidate) {
  auto cone = fx::cone_hexagon();
  for (const auto& [name, e] : fx::cone_opens(cone)) {
    Report r = validate_etale(e);
    EXPECT_TRUE(r.ok()) << name << ": " << r.first();
  }
  auto oct = fx::octahedron();
  for (const auto& [name, e] : fx::octahedron_opens(oct)) EXPECT_TRUE(validate_etale(e).ok()) << name;
  auto ann = fx::annulus();
  EXPECT_TRUE(validate_etale(EtaleOpen::identity(ann)).ok());
  Report cover = validate_etale(fx::annulus_double_cover(ann));
  EXPECT_TRUE(cover.ok()) << cover.first();
}

TEST(Etale, DiskHasTheRimAsFrontier) {
  auto cone = fx::cone_hexagon();
  auto disk = fx::cone_opens(cone)[1].open;
  EXPECT_EQ(disk.total->size(), cone->size());
  EXPECT_EQ(open_count(disk), 13u);
  for (std::size_t s = 0; s < disk.total->size(); ++s) {
    const auto& v = disk.total->simplex(s);
    bool rim = std::find(v.begin(), v.end(), 0) == v.end();
    EXPECT_EQ(disk.boundary[s] != 0, rim);
  }
}

TEST(Etale, ImageOfOpenPartIsUpClosed) {
  auto cone = fx::cone_hexagon();
  for (const auto& [name, e] : fx::cone_opens(cone)) {
    std::vector<char> img(cone->size(), 0);
    for (std::size_t s = 0; s < e.total->size(); ++s)
      if (!e.boundary[s]) img[e.psi.image(s)] = 1;
    for (std::size_t s = 0; s < cone->size(); ++s)
      if (img[s])
        for (std::size_t t : cone->cofaces(s)) EXPECT_TRUE(img[t]) << name;
  }
}

TEST(Etale, CollapsedSheetsAreRejected) {
  auto base = share(SimplicialComplex::build({{0, 1, 2}}));
  auto l = share(SimplicialComplex::build({{0, 1, 2}, {0, 1, 3}}));
  EtaleOpen e;
  e.total = l;
  e.boundary.assign(l->size(), 0);
  e.psi = SimplicialMap(l, base, {{0, 0}, {1, 1}, {2, 2}, {3, 2}});
  Report r = validate_etale(e);
  ASSERT_FALSE(r.ok());
  bool star = false;
  for (const auto& p : r.problems) star = star || p.find("star criterion") != std::string::npos;
  EXPECT_TRUE(star);
}

TEST(Etale, BadBoundaryAndDegenerateMapsAreRejected) {
  auto cone = fx::cone_hexagon();
  EtaleOpen e = EtaleOpen::identity(cone);
  e.boundary[cone->index({0, 1})] = 1;  // an edge without its vertices
  EXPECT_FALSE(validate_etale(e).ok());

  auto l = share(SimplicialComplex::build({{0, 1}}));
  auto k = share(SimplicialComplex::build({{0, 1}}));
  EtaleOpen d;
  d.total = l;
  d.boundary.assign(l->size(), 0);
  d.psi = SimplicialMap(l, k, {{0, 0}, {1, 0}});
  EXPECT_FALSE(validate_etale(d).ok());
}

TEST(Etale, FromOpenSetRequiresAnUpClosedSet) {
  auto cone = fx::cone_hexagon();
  EXPECT_THROW(EtaleOpen::from_open_set(cone, {cone->index({0})}), Error);
}

TEST(Universal, OpenPartIsAFixedPoint) {
  auto cone = fx::cone_hexagon();
  for (const auto& [name, e] : fx::cone_opens(cone)) {
    RawEtale r = raw_from(e);
    UniversalCompletion u = universal_completion(r, cone);
    EXPECT_EQ(u.open.total->f_vector(), e.total->f_vector()) << name;
    EXPECT_EQ(open_count(u.open), open_count(e)) << name;
    // idempotent up to isomorphism
    UniversalCompletion again = universal_completion(raw_from(u.open), cone);
    EXPECT_EQ(again.open.total->f_vector(), u.open.total->f_vector()) << name;
  }
  auto ann = fx::annulus();
  auto cover = fx::annulus_double_cover(ann);
  UniversalCompletion u = universal_completion(raw_from(cover), ann);
  EXPECT_EQ(u.open.total->f_vector(), cover.total->f_vector());
}

TEST(Universal, TwoTrianglesOverOneTriangleShareASheet) {
  auto k = share(SimplicialComplex::build({{0, 1, 2}}));
  RawEtale r;
  std::size_t tri = k->index({0, 1, 2}), edge = k->index({0, 1});
  r.label = {tri, tri, edge};
  r.faces = {{2, 0}, {2, 1}};
  UniversalCompletion u = universal_completion(r, k);
  EXPECT_EQ(u.open.total->size(), 7u);
  EXPECT_EQ(u.cell[0], u.cell[1]);
  EXPECT_EQ(open_count(u.open), 2u);
}

TEST(Universal, DisjointCellsGiveADisjointCompletion) {
  auto oct = fx::octahedron();
  RawEtale r;
  r.label = {oct->index({0, 1, fx::north}), oct->index({2, 3, fx::south})};
  UniversalCompletion u = universal_completion(r, oct);
  EXPECT_EQ(u.open.total->size(), 14u);
  EXPECT_EQ(open_count(u.open), 2u);
  EXPECT_EQ(u.open.total->vertices().size(), 6u);
}

TEST(Universal, LabelsMustDropDimensionByOne) {
  auto k = share(SimplicialComplex::build({{0, 1, 2}}));
  RawEtale r;
  r.label = {k->index({0}), k->index({0, 1, 2})};
  r.faces = {{0, 1}};
  EXPECT_THROW(universal_completion(r, k), Error);
}

TEST(Universal, RawMapsIntoAnOpenFactor) {
  auto cone = fx::cone_hexagon();
  auto disk = fx::cone_opens(cone)[1].open;
  std::vector<std::size_t> cells;
  RawEtale r = raw_from(disk, &cells);
  UniversalCompletion u = universal_completion(r, cone);
  std::map<int, int> eta;
  Report ok = universal_factor(r, u, disk, cells, &eta);
  EXPECT_TRUE(ok.ok()) << ok.first();
  EXPECT_EQ(eta.size(), u.open.total->vertices().size());

  // Sending the centre cell to a rim vertex breaks the labels.
  auto broken = cells;
  broken[0] = disk.total->index({1});
  EXPECT_FALSE(universal_factor(r, u, disk, broken).ok());
}

TEST(Compose, IdentityAndBrokenTriangle) {
  auto cone = fx::cone_hexagon();
  auto id = EtaleOpen::identity(cone);
  EXPECT_TRUE(compose_etale(SimplicialMap::identity(cone), id, id).ok());
  auto disk = fx::cone_opens(cone)[1].open;
  std::map<int, int> vm;
  for (int v : disk.total->vertices()) vm[v] = v;
  EXPECT_TRUE(compose_etale(SimplicialMap(disk.total, cone, vm), disk, id).ok());
  // a rotation of the rim keeps simplices but breaks the triangle
  std::map<int, int> rot;
  for (int v : cone->vertices()) rot[v] = v == 0 ? 0 : 1 + v % 6;
  Report r = compose_etale(SimplicialMap(cone, cone, rot), id, id);
  EXPECT_FALSE(r.ok());
}
