#include "plsys/dilation.hpp"

#include <algorithm>

namespace plsys {

namespace {

std::string name_of(const SimplicialComplex& k, std::size_t s) { return "[" + simplex_key(k.simplex(s)) + "]"; }

std::size_t as_index(int v) { return static_cast<std::size_t>(v); }

// Value at s = value of b at carrier[s]; maps are b's composites between
// carriers. The carrier must be monotone on the support.
Bisheaf carry(const Bisheaf& b, ComplexPtr l, const std::vector<std::size_t>& carrier, std::vector<char> support) {
  const std::size_t n = l->size();
  if (support.empty()) support.assign(n, 1);
  std::vector<std::size_t> sd(n, 0), cd(n, 0);
  for (std::size_t s = 0; s < n; ++s) {
    if (!support[s]) continue;
    if (!b.supported(carrier[s])) throw Error("carried value at " + name_of(*l, s) + " is unsupported");
    sd[s] = b.sheaf.dim(carrier[s]);
    cd[s] = b.cosheaf.dim(carrier[s]);
  }
  Bisheaf out{CellSheaf(l, b.field(), sd, support), CellCosheaf(l, b.field(), cd, support), {}};
  for (auto [s, t] : out.sheaf.relations()) {
    out.sheaf.set_map(s, t, b.sheaf.map_between(carrier[s], carrier[t]));
    out.cosheaf.set_map(s, t, b.cosheaf.map_between(carrier[s], carrier[t]));
  }
  for (std::size_t s = 0; s < n; ++s) {
    if (support[s]) out.vertical.push_back(b.vertical[carrier[s]]);
    else out.vertical.emplace_back(b.field(), cd[s], sd[s]);
  }
  return out;
}

}  // namespace

std::size_t DilationMap::top1(std::size_t c) const { return as_index(k1->simplex(c).back()); }
std::size_t DilationMap::top2(std::size_t c) const { return top1(as_index(k2->simplex(c).back())); }
std::size_t DilationMap::anchor(std::size_t c) const { return top1(sigma.image(c)); }

DilationMap dilation_map(ComplexPtr k) {
  DilationMap d;
  d.k = k;
  d.k1 = share(barycentric_subdivision(*k));
  d.k2 = share(barycentric_subdivision(*d.k1));
  std::map<int, int> vm;
  for (int v : d.k2->vertices()) vm[v] = d.k1->simplex(as_index(v)).front();
  for (auto& [v, w] : vm) w = static_cast<int>(d.k1->index({w}));
  d.sigma = SimplicialMap(d.k2, d.k1, std::move(vm));
  return d;
}

Report check_dilation(const DilationMap& d) {
  Report r;
  const SimplicialComplex& k = *d.k;
  const SimplicialComplex& k1 = *d.k1;
  const SimplicialComplex& k2 = *d.k2;
  for (std::size_t t = 0; t < k.size(); ++t) {
    const std::size_t v1 = k1.index({static_cast<int>(t)});
    const std::size_t v2 = k2.index({static_cast<int>(v1)});
    auto star = closed_star(k2, v2);
    std::vector<char> lower(k2.size(), 0);
    for (std::size_t s = 0; s < k.size(); ++s) {
      if (s == t || !k.is_face(s, t)) continue;
      const std::size_t w = k2.index({static_cast<int>(k1.index({static_cast<int>(s)}))});
      for (std::size_t x : closed_star(k2, w)) lower[x] = 1;
    }
    std::vector<char> expect(k2.size(), 0);
    for (std::size_t x : star) {
      bool meets = false;
      for (std::size_t f : face_closure(k2, {x})) meets = meets || lower[f];
      if (!meets) expect[x] = 1;
    }
    for (std::size_t x = 0; x < k2.size(); ++x) {
      const bool hit = d.sigma.image(x) == v1;
      if (hit != (expect[x] != 0))
        r.add("preimage of " + name_of(k1, v1) + (hit ? " contains " : " misses ") + name_of(k2, x));
    }
  }
  // Top chains of chains map to the reversed chain of their minima.
  for (std::size_t x : k2.maximal()) {
    Simplex minima;
    for (int c : k2.simplex(x)) minima.push_back(k1.simplex(as_index(c)).front());
    std::sort(minima.begin(), minima.end());
    minima.erase(std::unique(minima.begin(), minima.end()), minima.end());
    Simplex image;
    for (int m : minima) image.push_back(static_cast<int>(k1.index({m})));
    std::sort(image.begin(), image.end());
    if (k1.simplex(d.sigma.image(x)) != image) r.add("image of " + name_of(k2, x) + " is not its chain of minima");
  }
  return r;
}

Bisheaf subdivide_bisheaf(const Bisheaf& b, ComplexPtr k1) {
  std::vector<std::size_t> top(k1->size());
  std::vector<char> support(k1->size());
  for (std::size_t c = 0; c < k1->size(); ++c) {
    top[c] = as_index(k1->simplex(c).back());
    if (top[c] >= b.base().size()) throw Error("subdivide: " + name_of(*k1, c) + " is not a chain of the base");
    support[c] = b.supported(top[c]) ? 1 : 0;
  }
  return carry(b, std::move(k1), top, std::move(support));
}

Bisheaf dilation_pullback(const Bisheaf& b1, const DilationMap& d) {
  std::vector<char> support(d.k2->size());
  for (std::size_t c = 0; c < d.k2->size(); ++c) support[c] = b1.supported(d.sigma.image(c)) ? 1 : 0;
  return pullback_along(b1, d.sigma, std::move(support));
}

Dilation dilate(const Bisheaf& b) { return dilate(b, dilation_map(b.base_ptr())); }

Dilation dilate(const Bisheaf& b, const DilationMap& d) {
  for (std::size_t s = 0; s < b.base().size(); ++s)
    if (!b.supported(s)) throw Error("dilate: the bisheaf is not supported at " + name_of(b.base(), s));
  Dilation out{d, subdivide_bisheaf(b, d.k1), {}, {}, {}};
  out.twice = subdivide_bisheaf(out.once, d.k2);
  out.pulled = dilation_pullback(out.once, d);
  for (std::size_t c = 0; c < d.k2->size(); ++c) {
    out.canonical.sheaf.component.push_back(b.sheaf.map_between(d.anchor(c), d.top2(c)));
    out.canonical.cosheaf.component.push_back(b.cosheaf.map_between(d.anchor(c), d.top2(c)));
  }
  return out;
}

Shrinking shrink(const EtaleOpen& e, const DilationMap& d) {
  if (!(e.base() == *d.k)) throw Error("shrink: the dilation map is for a different base");
  const SimplicialComplex& l = *e.total;
  auto l1 = share(barycentric_subdivision(l));
  auto l2 = share(barycentric_subdivision(*l1));
  SimplicialMap psi1 = subdivide_map(e.psi, l1, d.k1);
  SimplicialMap psi2 = subdivide_map(psi1, l2, d.k2);

  auto all_in = [](const Simplex& s, const std::vector<char>& mask) {
    return std::all_of(s.begin(), s.end(), [&](int v) { return mask[as_index(v)] != 0; });
  };
  std::vector<char> in0_1(l1->size()), in0_2(l2->size());
  for (std::size_t c = 0; c < l1->size(); ++c) in0_1[c] = all_in(l1->simplex(c), e.boundary);
  for (std::size_t c = 0; c < l2->size(); ++c) in0_2[c] = all_in(l2->simplex(c), in0_1);

  Shrinking out;
  out.subdivided.total = l2;
  out.subdivided.boundary = in0_2;
  out.subdivided.psi = psi2;

  std::vector<std::size_t> star;
  for (std::size_t c = 0; c < l2->size(); ++c) {
    const Simplex& s = l2->simplex(c);
    if (std::any_of(s.begin(), s.end(), [&](int v) { return in0_1[as_index(v)] != 0; })) star.push_back(c);
  }
  std::vector<char> closed(l2->size(), 0);
  for (std::size_t c : face_closure(*l2, star)) closed[c] = 1;
  std::vector<std::size_t> open;
  for (std::size_t c = 0; c < l2->size(); ++c)
    if (!closed[c]) open.push_back(c);

  auto total = share(subcomplex(*l2, face_closure(*l2, open)));
  std::map<int, int> into_k2, into_l2;
  for (int v : total->vertices()) {
    into_k2[v] = psi2(v);
    into_l2[v] = v;
  }
  out.shrunk.total = total;
  out.shrunk.psi = SimplicialMap(total, d.k2, std::move(into_k2));
  out.inclusion = SimplicialMap(total, l2, std::move(into_l2));
  out.shrunk.boundary.assign(total->size(), 0);
  for (std::size_t c = 0; c < total->size(); ++c) out.shrunk.boundary[c] = closed[out.inclusion.image(c)];
  return out;
}

LocalSystem restrict_local_system(const LocalSystem& l, ComplexPtr target, const std::vector<char>& support,
                                  const std::vector<std::size_t>& carrier) {
  LocalSystem out;
  out.base = target;
  out.field = l.field;
  out.support = support;
  out.stalk_dim.assign(target->size(), 0);
  for (std::size_t s = 0; s < target->size(); ++s) {
    if (!support[s]) continue;
    if (!l.support[carrier[s]])
      throw Error("restrict: " + name_of(*target, s) + " is carried outside the local system");
    out.stalk_dim[s] = l.stalk_dim[carrier[s]];
  }
  for (std::size_t t = 0; t < target->size(); ++t) {
    if (!support[t]) continue;
    for (std::size_t s : target->facets(t))
      if (support[s]) out.transport[{s, t}] = transport_between(l, carrier[s], carrier[t]);
  }
  return out;
}

ShrinkingCheck verify_shrinking_invariance(const Bisheaf& b, const EtaleOpen& e) {
  return verify_shrinking_invariance(dilate(b), b, e);
}

ShrinkingCheck verify_shrinking_invariance(const Dilation& dil, const Bisheaf& b, const EtaleOpen& e) {
  Shrinking sh = shrink(e, dil.map);
  const SimplicialComplex l1 = barycentric_subdivision(*e.total);
  const SimplicialComplex& l2 = *sh.subdivided.total;
  const SimplicialComplex& total = *sh.shrunk.total;
  std::vector<std::size_t> carrier(total.size());
  for (std::size_t s = 0; s < total.size(); ++s) {
    std::size_t x = as_index(l2.simplex(sh.inclusion.image(s)).back());
    carrier[s] = as_index(l1.simplex(x).back());
  }
  ShrinkingCheck out;
  const std::vector<char> open = sh.shrunk.open_part();
  out.restricted = restrict_local_system(pls(b, e), sh.shrunk.total, open, carrier);
  out.dilated = pls(dil.pulled, sh.shrunk);
  for (std::size_t s = 0; s < total.size(); ++s) {
    if (!open[s]) continue;
    if (out.restricted.stalk_dim[s] != out.dilated.stalk_dim[s]) {
      out.why = "stalk at " + name_of(total, s) + ": " + std::to_string(out.restricted.stalk_dim[s]) + " vs " +
                std::to_string(out.dilated.stalk_dim[s]);
      return out;
    }
  }
  out.ok = equivalent(monodromy_report(out.restricted), monodromy_report(out.dilated), &out.why);
  return out;
}

StabilityWitness StabilityWitness::identity(const SimplicialComplex& k2) {
  StabilityWitness w;
  w.assign.resize(k2.size());
  for (std::size_t s = 0; s < k2.size(); ++s) w.assign[s] = s;
  return w;
}

Report check_witness(const StabilityWitness& w, const SimplicialComplex& l, const SimplicialComplex& k2) {
  Report r;
  if (w.assign.size() != l.size()) {
    r.add("witness assigns " + std::to_string(w.assign.size()) + " simplices of " + std::to_string(l.size()));
    return r;
  }
  for (std::size_t s = 0; s < l.size(); ++s)
    if (w.assign[s] >= k2.size()) r.add("witness sends " + name_of(l, s) + " outside the second subdivision");
  if (!w.ladder.empty() && w.ladder.size() != l.size()) r.add("ladder has the wrong length");
  if (!r.ok()) return r;
  for (std::size_t t = 0; t < l.size(); ++t)
    for (std::size_t s : l.facets(t))
      if (!k2.is_face(w.assign[s], w.assign[t]))
        r.add("witness is not monotone on " + name_of(l, s) + " < " + name_of(l, t));
  if (w.refinement) {
    const auto& ref = *w.refinement;
    const SimplicialComplex& rc = *ref.complex;
    if (ref.carrier_l.size() != rc.size() || ref.carrier_k2.size() != rc.size()) {
      r.add("refinement carriers have the wrong length");
      return r;
    }
    for (std::size_t x = 0; x < rc.size(); ++x) {
      if (ref.carrier_l[x] >= l.size() || ref.carrier_k2[x] >= k2.size()) {
        r.add("refinement carrier out of range at " + name_of(rc, x));
        continue;
      }
      // x lies in the open star of every face of its carrier in L, so each
      // such face needs x inside the open star of its assigned simplex.
      for (std::size_t t = 0; t < l.size(); ++t)
        if (l.is_face(t, ref.carrier_l[x]) && !k2.is_face(w.assign[t], ref.carrier_k2[x]))
          r.add("star of " + name_of(l, t) + " leaves the star of " + name_of(k2, w.assign[t]) + " at " +
                name_of(rc, x));
    }
  } else {
    if (!(l == k2)) {
      r.add("a witness without a refinement needs L to be the second subdivision");
      return r;
    }
    for (std::size_t t = 0; t < l.size(); ++t)
      if (!k2.is_face(w.assign[t], t)) r.add("star of " + name_of(l, t) + " leaves the star of its assignment");
  }
  return r;
}

StabilitySpan stability_span(const Bisheaf& f, const Bisheaf& g, const StabilityWitness& w) {
  StabilitySpan out{dilate(f), {}, {}};
  const DilationMap& d = out.dilation.map;
  const SimplicialComplex& l = g.base();
  Report ok = check_witness(w, l, *d.k2);
  if (!ok.ok()) throw Error("stability span: " + ok.first());
  out.source = carry(out.dilation.pulled, g.base_ptr(), w.assign, {});
  const Field field = f.field();
  for (std::size_t t = 0; t < l.size(); ++t) {
    const Bisheaf& src = out.source;
    Matrix a, b, c, dd;
    if (w.ladder.empty()) {
      if (g.sheaf.dim(t) != f.sheaf.dim(d.top2(t)) || g.cosheaf.dim(t) != f.cosheaf.dim(d.top2(t)))
        throw Error("stability span: without a ladder g must be f on the second subdivision, not at " +
                    name_of(l, t));
      const std::size_t from = d.anchor(w.assign[t]);
      a = Matrix::identity(field, src.sheaf.dim(t));
      b = f.sheaf.map_between(from, d.top2(t));
      c = Matrix::identity(field, src.cosheaf.dim(t));
      dd = f.cosheaf.map_between(from, d.top2(t));
    } else {
      const auto& rung = w.ladder[t];
      a = rung.sheaf_from;
      b = rung.sheaf_to;
      c = rung.cosheaf_from;
      dd = rung.cosheaf_to;
    }
    if (a.rows() != src.sheaf.dim(t) || b.rows() != g.sheaf.dim(t) || a.cols() != b.cols() ||
        c.cols() != src.cosheaf.dim(t) || dd.cols() != g.cosheaf.dim(t) || c.rows() != dd.rows())
      throw Error("stability span: ladder shapes do not fit at " + name_of(l, t));
    if (a.rank() != a.rows()) throw Error("stability span: sheaf fill is not unique at " + name_of(l, t));
    if (c.rank() != c.cols()) throw Error("stability span: cosheaf fill is not unique at " + name_of(l, t));
    auto x = solve(a.transpose(), b.transpose());
    if (!x) throw Error("stability span: no sheaf fill at " + name_of(l, t));
    auto y = solve(c, dd);
    if (!y) throw Error("stability span: no cosheaf fill at " + name_of(l, t));
    out.to_g.sheaf.component.push_back(x->transpose());
    out.to_g.cosheaf.component.push_back(*y);
  }
  Report square = validate_bisheaf_map(out.source, g, out.to_g);
  if (!square.ok()) throw Error("stability span: " + square.first());
  return out;
}

SubquotientResult compare_over(const Bisheaf& coarse, const Bisheaf& fine, const std::optional<BisheafMap>& via,
                               const EtaleOpen& e) {
  Bisheaf cp = pullback_bisheaf(coarse, e);
  Bisheaf fp = pullback_bisheaf(fine, e);
  IsoBisheaf ci = isofy(cp);
  IsoBisheaf fi = isofy(fp);
  if (!via) return compare_subquotient(ci, fi, std::nullopt);
  BisheafMap mp = pullback_bisheaf_map(*via, cp, fp, e.psi);
  return compare_subquotient(ci, fi, induced_iso_map(cp, ci, fp, fi, mp));
}

}  // namespace plsys
