#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "plsys/dilation.hpp"
#include "plsys/fixtures.hpp"

using namespace plsys;
namespace fx = plsys::fixtures;

namespace {

const Field Q = Field::rationals();

std::size_t count(const std::vector<char>& mask) { return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1)); }

// Brute-force open part of the shrinking: a simplex of L^2 survives unless
// it spans a simplex together with some chain of L lying entirely in L0.
std::set<Simplex> shrink_oracle(const EtaleOpen& e) {
  const SimplicialComplex& l = *e.total;
  SimplicialComplex l1 = barycentric_subdivision(l);
  SimplicialComplex l2 = barycentric_subdivision(l1);
  std::vector<int> bad;
  for (std::size_t c = 0; c < l1.size(); ++c) {
    const Simplex& s = l1.simplex(c);
    if (std::all_of(s.begin(), s.end(), [&](int v) { return e.boundary[static_cast<std::size_t>(v)] != 0; }))
      bad.push_back(static_cast<int>(c));
  }
  std::set<Simplex> out;
  for (const Simplex& rho : l2.simplices()) {
    bool near = false;
    for (int x : bad) {
      Simplex with = rho;
      if (std::find(with.begin(), with.end(), x) == with.end()) with.push_back(x);
      std::sort(with.begin(), with.end());
      near = near || l2.find(with).has_value();
    }
    if (!near) out.insert(rho);
  }
  return out;
}

std::set<Simplex> open_simplices(const EtaleOpen& e) {
  std::set<Simplex> out;
  for (std::size_t s = 0; s < e.total->size(); ++s)
    if (!e.boundary[s]) out.insert(e.total->simplex(s));
  return out;
}

std::vector<std::pair<std::string, std::pair<Bisheaf, std::vector<fx::NamedOpen>>>> fixture_cases() {
  auto cone = fx::cone_opens(fx::cone_hexagon());
  auto oct = fx::octahedron_opens(fx::octahedron());
  auto ann = fx::annulus();
  std::vector<fx::NamedOpen> ann_opens{{"identity", EtaleOpen::identity(ann)},
                                       {"double_cover", fx::annulus_double_cover(ann)}};
  return {{"example1", {fx::example1(Q), cone}},
          {"example2", {fx::example2(Q), cone}},
          {"example3_f", {fx::example3_f(Q), oct}},
          {"example3_h", {fx::example3_h(Q), oct}},
          {"twisted", {fx::twisted_annulus(ann, Q), ann_opens}}};
}

}  // namespace

TEST(Dilation, SingleEdge) {
  auto k = share(SimplicialComplex::build({{0, 1}}));
  DilationMap d = dilation_map(k);
  EXPECT_EQ(d.k2->f_vector(), (std::vector<std::size_t>{5, 4}));
  EXPECT_TRUE(check_dilation(d).ok()) << check_dilation(d).first();
  // Outer edges collapse onto the original vertices, inner edges do not.
  std::size_t collapsed = 0;
  for (std::size_t e : d.k2->of_dimension(1)) {
    if (d.k1->dim_of(d.sigma.image(e)) == 0) {
      ++collapsed;
      EXPECT_LT(d.sigma.image(e), 2u);
    }
  }
  EXPECT_EQ(collapsed, 2u);
}

TEST(Dilation, VertexChainsMapToThemselves) {
  auto k = fx::cone_hexagon();
  DilationMap d = dilation_map(k);
  for (std::size_t t = 0; t < k->size(); ++t) {
    std::size_t v2 = d.k2->index({static_cast<int>(d.k1->index({static_cast<int>(t)}))});
    EXPECT_EQ(d.k1->simplex(d.sigma.image(v2)), (Simplex{static_cast<int>(t)}));
  }
}

TEST(Dilation, PreimagesOfVerticesOnFixtures) {
  for (auto k : {fx::cone_hexagon(), fx::octahedron(), fx::annulus()}) {
    Report r = check_dilation(dilation_map(k));
    EXPECT_TRUE(r.ok()) << r.first();
  }
}

TEST(Dilation, PlainComplementOvercountsAtTheEdgeMidpoint) {
  auto k = share(SimplicialComplex::build({{0, 1}}));
  DilationMap d = dilation_map(k);
  const std::size_t mid = d.k2->index({2});
  std::set<std::size_t> diff;
  for (std::size_t x : closed_star(*d.k2, mid)) diff.insert(x);
  for (int v : {0, 1})
    for (std::size_t x : closed_star(*d.k2, d.k2->index({v}))) diff.erase(x);
  std::size_t hits = 0;
  for (std::size_t x = 0; x < d.k2->size(); ++x) hits += d.sigma.image(x) == d.k1->index({2}) ? 1 : 0;
  EXPECT_EQ(hits, 1u);
  EXPECT_EQ(diff.size(), 3u);
}

TEST(Subdivide, ConstantStaysConstant) {
  auto k = fx::octahedron();
  Bisheaf b = Bisheaf::constant(k, Q, 2);
  DilationMap d = dilation_map(k);
  Bisheaf once = subdivide_bisheaf(b, d.k1);
  Bisheaf twice = subdivide_bisheaf(once, d.k2);
  for (const Bisheaf* x : {&once, &twice}) {
    EXPECT_TRUE(validate_bisheaf(*x).ok());
    for (std::size_t s = 0; s < x->base().size(); ++s) {
      EXPECT_EQ(x->sheaf.dim(s), 2u);
      EXPECT_TRUE(x->vertical[s].is_identity());
    }
    for (auto [s, t] : x->sheaf.relations()) EXPECT_TRUE(x->sheaf.map(s, t).is_identity());
  }
}

TEST(Subdivide, ExampleOneTakesTheValueAtTheTop) {
  Bisheaf b = fx::example1(Q);
  DilationMap d = dilation_map(b.base_ptr());
  Bisheaf once = subdivide_bisheaf(b, d.k1);
  ASSERT_TRUE(validate_bisheaf(once).ok()) << validate_bisheaf(once).first();
  for (std::size_t c = 0; c < d.k1->size(); ++c) {
    bool at_center = d.k1->simplex(c) == Simplex{static_cast<int>(b.base().index({fx::cone_center}))};
    EXPECT_EQ(once.cosheaf.dim(c), at_center ? 2u : 1u);
    EXPECT_EQ(once.sheaf.dim(c), b.sheaf.dim(d.top1(c)));
  }
  Bisheaf twice = subdivide_bisheaf(once, d.k2);
  EXPECT_TRUE(validate_bisheaf(twice).ok());
}

TEST(Subdivide, PartialSupportFollowsTheTop) {
  auto cone = fx::cone_hexagon();
  auto star = open_star(*cone, cone->index({fx::cone_center}));
  std::vector<char> mask(cone->size(), 0);
  for (std::size_t s : star) mask[s] = 1;
  Bisheaf b = Bisheaf::constant(cone, Q, 1, mask);
  auto k1 = share(barycentric_subdivision(*cone));
  Bisheaf once = subdivide_bisheaf(b, k1);
  EXPECT_TRUE(validate_bisheaf(once).ok());
  for (std::size_t c = 0; c < k1->size(); ++c)
    EXPECT_EQ(once.supported(c), mask[static_cast<std::size_t>(k1->simplex(c).back())] != 0);
}

TEST(Pullback, ExampleOneWidensTheRankTwoRegion) {
  Bisheaf b = fx::example1(Q);
  Dilation dil = dilate(b);
  ASSERT_TRUE(validate_bisheaf(dil.pulled).ok()) << validate_bisheaf(dil.pulled).first();
  std::size_t in_twice = 0, in_pulled = 0;
  for (std::size_t c = 0; c < dil.map.k2->size(); ++c) {
    in_twice += dil.twice.cosheaf.dim(c) == 2 ? 1 : 0;
    in_pulled += dil.pulled.cosheaf.dim(c) == 2 ? 1 : 0;
    if (dil.twice.cosheaf.dim(c) == 2) EXPECT_EQ(dil.pulled.cosheaf.dim(c), 2u);
  }
  EXPECT_EQ(in_twice, 1u);
  EXPECT_GT(in_pulled, in_twice);
}

TEST(Canonical, ConstantGivesIdentities) {
  Dilation dil = dilate(Bisheaf::constant(fx::cone_hexagon(), Q, 3));
  for (std::size_t c = 0; c < dil.map.k2->size(); ++c) {
    EXPECT_TRUE(dil.canonical.sheaf.component[c].is_identity());
    EXPECT_TRUE(dil.canonical.cosheaf.component[c].is_identity());
  }
}

TEST(Canonical, MapValidatesOnFixtures) {
  for (const auto& [name, data] : fixture_cases()) {
    Dilation dil = dilate(data.first);
    EXPECT_TRUE(validate_bisheaf(dil.pulled).ok()) << name;
    EXPECT_TRUE(validate_bisheaf(dil.twice).ok()) << name;
    Report r = validate_bisheaf_map(dil.pulled, dil.twice, dil.canonical);
    EXPECT_TRUE(r.ok()) << name << ": " << r.first();
  }
}

TEST(Canonical, ExampleOneStaysZeroOverTheIdentity) {
  Dilation dil = dilate(fx::example1(Q));
  LocalSystem l = pls(dil.pulled, EtaleOpen::identity(dil.map.k2));
  for (std::size_t d : l.stalk_dim) EXPECT_EQ(d, 0u);
}

TEST(Dilation, PartialSupportIsRejected) {
  auto cone = fx::cone_hexagon();
  auto star = open_star(*cone, cone->index({fx::cone_center}));
  std::vector<char> mask(cone->size(), 0);
  for (std::size_t s : star) mask[s] = 1;
  EXPECT_THROW(dilate(Bisheaf::constant(cone, Q, 1, mask)), Error);
}

TEST(Shrink, IdentityShrinksToTheWholeSubdivision) {
  auto k = fx::cone_hexagon();
  DilationMap d = dilation_map(k);
  Shrinking sh = shrink(EtaleOpen::identity(k), d);
  EXPECT_EQ(*sh.shrunk.total, *d.k2);
  EXPECT_EQ(count(sh.shrunk.boundary), 0u);
  EXPECT_TRUE(validate_etale(sh.shrunk).ok());
}

TEST(Shrink, OpensMatchTheOracle) {
  auto cone = fx::cone_hexagon();
  DilationMap d = dilation_map(cone);
  auto tri = share(SimplicialComplex::build({{0, 1, 2}}));
  std::vector<std::pair<EtaleOpen, DilationMap>> cases;
  for (const auto& [name, e] : fx::cone_opens(cone)) cases.emplace_back(e, d);
  cases.emplace_back(EtaleOpen::from_open_set(tri, {tri->index({0, 1, 2})}), dilation_map(tri));
  auto ann = fx::annulus();
  cases.emplace_back(fx::annulus_double_cover(ann), dilation_map(ann));
  for (const auto& [e, dm] : cases) {
    Shrinking sh = shrink(e, dm);
    Report v = validate_etale(sh.shrunk);
    EXPECT_TRUE(v.ok()) << v.first();
    Report c = compose_etale(sh.inclusion, sh.shrunk, sh.subdivided);
    EXPECT_TRUE(c.ok()) << c.first();
    EXPECT_TRUE(validate_etale(sh.subdivided).ok());
    EXPECT_EQ(open_simplices(sh.shrunk), shrink_oracle(e));
  }
}

TEST(Shrink, OpenTriangleKeepsOnlyTheCentre) {
  auto tri = share(SimplicialComplex::build({{0, 1, 2}}));
  auto e = EtaleOpen::from_open_set(tri, {tri->index({0, 1, 2})});
  DilationMap d = dilation_map(tri);
  Shrinking sh = shrink(e, d);
  auto open = open_simplices(sh.shrunk);
  ASSERT_FALSE(open.empty());
  EXPECT_LT(open.size(), d.k2->size());
  // Every surviving simplex sits over the open triangle in K^2 and avoids
  // the barycentres of the boundary faces.
  for (std::size_t s = 0; s < sh.shrunk.total->size(); ++s) {
    if (sh.shrunk.boundary[s]) continue;
    EXPECT_EQ(d.top2(sh.shrunk.psi.image(s)), tri->index({0, 1, 2}));
  }
  const std::size_t centre = d.k2->index({static_cast<int>(d.k1->index({static_cast<int>(tri->index({0, 1, 2}))}))});
  EXPECT_TRUE(open.count(d.k2->simplex(centre)));
}

TEST(Shrink, DiskShrinksStrictly) {
  auto cone = fx::cone_hexagon();
  DilationMap d = dilation_map(cone);
  auto disk = fx::cone_opens(cone)[1].open;
  Shrinking sh = shrink(disk, d);
  EXPECT_LT(open_simplices(sh.shrunk).size(), count(sh.subdivided.open_part()));
}

TEST(Shrink, TwiceIsStillAnOpen) {
  auto tri = share(SimplicialComplex::build({{0, 1, 2}}));
  auto e = EtaleOpen::from_open_set(tri, {tri->index({0, 1, 2})});
  DilationMap d = dilation_map(tri);
  Shrinking once = shrink(e, d);
  DilationMap dd = dilation_map(d.k2);
  Shrinking twice = shrink(once.shrunk, dd);
  EXPECT_TRUE(validate_etale(twice.shrunk).ok());
  EXPECT_TRUE(compose_etale(twice.inclusion, twice.shrunk, twice.subdivided).ok());
  EXPECT_FALSE(open_simplices(twice.shrunk).empty());
}

TEST(Shrink, WrongBaseThrows) {
  auto cone = fx::cone_hexagon();
  EXPECT_THROW(shrink(EtaleOpen::identity(cone), dilation_map(fx::octahedron())), Error);
}

TEST(ShrinkingInvariance, HoldsOnFixtures) {
  for (const auto& [name, data] : fixture_cases()) {
    Dilation dil = dilate(data.first);
    for (const auto& [oname, e] : data.second) {
      ShrinkingCheck c = verify_shrinking_invariance(dil, data.first, e);
      EXPECT_TRUE(c.ok) << name << "/" << oname << ": " << c.why;
    }
  }
}

TEST(ShrinkingInvariance, ExampleOneAnnulusIsRankOneAndTrivial) {
  Bisheaf b = fx::example1(Q);
  auto cone = b.base_ptr();
  ShrinkingCheck c = verify_shrinking_invariance(b, fx::cone_opens(cone)[2].open);
  ASSERT_TRUE(c.ok) << c.why;
  for (std::size_t s = 0; s < c.dilated.stalk_dim.size(); ++s)
    if (c.dilated.support[s]) EXPECT_EQ(c.dilated.stalk_dim[s], 1u);
  for (const auto& comp : monodromy_report(c.dilated).components)
    for (const auto& loop : comp.loops) EXPECT_TRUE(loop.matrix.is_identity());
}

TEST(ShrinkingInvariance, ExampleTwoDiskIsZero) {
  Bisheaf b = fx::example2(Q);
  ShrinkingCheck c = verify_shrinking_invariance(b, fx::cone_opens(b.base_ptr())[1].open);
  ASSERT_TRUE(c.ok) << c.why;
  for (std::size_t d : c.dilated.stalk_dim) EXPECT_EQ(d, 0u);
}

TEST(ShrinkingInvariance, TwistIsSeenOnBothSides) {
  auto ann = fx::annulus();
  Bisheaf b = fx::twisted_annulus(ann, Q);
  ShrinkingCheck c = verify_shrinking_invariance(b, EtaleOpen::identity(ann));
  ASSERT_TRUE(c.ok) << c.why;
  bool twisted = false;
  for (const auto& comp : monodromy_report(c.restricted).components)
    for (const auto& loop : comp.loops) twisted = twisted || !loop.matrix.is_identity();
  EXPECT_TRUE(twisted);
}

TEST(Witness, IdentityAndBrokenWitnesses) {
  DilationMap d = dilation_map(fx::cone_hexagon());
  StabilityWitness w = StabilityWitness::identity(*d.k2);
  EXPECT_TRUE(check_witness(w, *d.k2, *d.k2).ok());

  // Assigning a top simplex to a vertex fails the star inclusion.
  StabilityWitness bad = w;
  bad.assign[0] = d.k2->maximal().front();
  EXPECT_FALSE(check_witness(bad, *d.k2, *d.k2).ok());

  // Sending everything to the empty face of a vertex is not monotone.
  StabilityWitness flat = w;
  std::fill(flat.assign.begin(), flat.assign.end(), 0);
  EXPECT_FALSE(check_witness(flat, *d.k2, *d.k2).ok());
}

TEST(Witness, RefinementCarriers) {
  DilationMap d = dilation_map(fx::cone_hexagon());
  StabilityWitness w = StabilityWitness::identity(*d.k2);
  std::vector<std::size_t> id(d.k2->size());
  for (std::size_t s = 0; s < id.size(); ++s) id[s] = s;
  w.refinement = StabilityWitness::Refinement{d.k2, id, id};
  EXPECT_TRUE(check_witness(w, *d.k2, *d.k2).ok());

  // Moving one carrier off its simplex breaks the inclusion somewhere.
  auto moved = w;
  moved.refinement->carrier_k2[d.k2->maximal().back()] = d.k2->maximal().front();
  EXPECT_FALSE(check_witness(moved, *d.k2, *d.k2).ok());
}

TEST(Span, SelfSpanIsTheCanonicalMap) {
  for (const auto& [name, data] : fixture_cases()) {
    const Bisheaf& f = data.first;
    Dilation dil = dilate(f);
    StabilitySpan span = stability_span(f, dil.twice, StabilityWitness::identity(*dil.map.k2));
    for (std::size_t c = 0; c < dil.map.k2->size(); ++c) {
      EXPECT_EQ(span.to_g.sheaf.component[c], dil.canonical.sheaf.component[c]) << name;
      EXPECT_EQ(span.to_g.cosheaf.component[c], dil.canonical.cosheaf.component[c]) << name;
    }
    EXPECT_TRUE(validate_bisheaf_map(span.source, dil.twice, span.to_g).ok()) << name;
  }
}

TEST(Span, SelfSpanIsIsomorphicOverShrunkOpens) {
  for (const auto& [name, data] : fixture_cases()) {
    const Bisheaf& f = data.first;
    Dilation dil = dilate(f);
    StabilitySpan span = stability_span(f, dil.twice, StabilityWitness::identity(*dil.map.k2));
    for (const auto& [oname, e] : data.second) {
      Shrinking sh = shrink(e, dil.map);
      SubquotientResult r = compare_over(span.source, dil.twice, span.to_g, sh.shrunk);
      EXPECT_EQ(r.verdict, Verdict::isomorphic) << name << "/" << oname << ": " << r.reason;
    }
  }
}

TEST(Span, NonUniqueAndMissingFillsAreReported) {
  Bisheaf f = Bisheaf::constant(fx::cone_hexagon(), Q, 1);
  Dilation dil = dilate(f);
  StabilityWitness w = StabilityWitness::identity(*dil.map.k2);
  w.ladder.assign(dil.map.k2->size(), {Matrix::identity(Q, 1), Matrix::identity(Q, 1), Matrix::identity(Q, 1),
                                       Matrix::identity(Q, 1)});
  EXPECT_NO_THROW(stability_span(f, dil.twice, w));
  auto zero = w;
  zero.ladder[3].sheaf_from = Matrix::zero(Q, 1, 1);
  EXPECT_THROW(stability_span(f, dil.twice, zero), Error);
  auto inconsistent = w;
  inconsistent.ladder[3].cosheaf_from = Matrix::from_ints(Q, {{1}, {1}});
  inconsistent.ladder[3].cosheaf_to = Matrix::from_ints(Q, {{1}, {2}});
  EXPECT_THROW(stability_span(f, dil.twice, inconsistent), Error);
}

TEST(Span, ExampleThreeIsRejected) {
  Bisheaf f = fx::example3_f(Q);
  Bisheaf h = fx::example3_h(Q);
  Dilation dh = dilate(h);
  EXPECT_THROW(stability_span(f, dh.twice, StabilityWitness::identity(*dh.map.k2)), Error);
  SubquotientResult r = compare_over(f, h, std::nullopt, EtaleOpen::identity(f.base_ptr()));
  EXPECT_EQ(r.verdict, Verdict::not_subquotient) << r.reason;
}
