#include "plsys/bisheaf.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace plsys {

namespace {

std::string name_of(const SimplicialComplex& k, std::size_t s) { return "[" + simplex_key(k.simplex(s)) + "]"; }

Matrix zero_vertical(const Bisheaf& b, std::size_t s) {
  return Matrix(b.field(), b.cosheaf.dim(s), b.sheaf.dim(s));
}

std::vector<std::size_t> neighbours(const SimplicialComplex& k, const std::vector<char>& support, std::size_t s) {
  std::vector<std::size_t> out;
  for (std::size_t f : k.facets(s))
    if (support[f]) out.push_back(f);
  for (std::size_t c : k.cofaces(s))
    if (support[c]) out.push_back(c);
  std::sort(out.begin(), out.end());
  return out;
}

bool covers(const SimplicialComplex& k, std::size_t face, std::size_t coface) {
  const auto& fs = k.facets(coface);
  return std::find(fs.begin(), fs.end(), face) != fs.end();
}

const Matrix& transport_of(const LocalSystem& l, std::size_t face, std::size_t coface) {
  auto it = l.transport.find({face, coface});
  if (it == l.transport.end())
    throw Error("no transport for " + name_of(*l.base, face) + " < " + name_of(*l.base, coface));
  return it->second;
}

Matrix inverse_or_throw(const Matrix& m, const std::string& what) {
  auto inv = m.inverse();
  if (!inv) throw Error(what + " is not invertible");
  return *inv;
}

// Map stalk(a) -> stalk(b) along one covering relation in either direction.
Matrix step(const LocalSystem& l, std::size_t a, std::size_t b) {
  const SimplicialComplex& k = *l.base;
  if (covers(k, a, b)) return inverse_or_throw(transport_of(l, a, b), "transport");
  if (covers(k, b, a)) return transport_of(l, b, a);
  throw Error(name_of(k, a) + " and " + name_of(k, b) + " are not adjacent");
}

}  // namespace

Bisheaf Bisheaf::with_zero_vertical(CellSheaf sheaf, CellCosheaf cosheaf) {
  Bisheaf b{std::move(sheaf), std::move(cosheaf), {}};
  for (std::size_t s = 0; s < b.base().size(); ++s) b.vertical.push_back(zero_vertical(b, s));
  return b;
}

Bisheaf Bisheaf::constant(ComplexPtr base, Field field, std::size_t n, std::vector<char> support) {
  Bisheaf b{CellSheaf::constant(base, field, n, support), CellCosheaf::constant(base, field, n, support), {}};
  for (std::size_t s = 0; s < base->size(); ++s)
    b.vertical.push_back(b.supported(s) ? Matrix::identity(field, n) : zero_vertical(b, s));
  return b;
}

Report validate_bisheaf(const Bisheaf& b) {
  Report r;
  r.merge(validate_sheaf(b.sheaf));
  r.merge(validate_cosheaf(b.cosheaf));
  if (!(b.sheaf.base() == b.cosheaf.base())) {
    r.add("sheaf and cosheaf live on different complexes");
    return r;
  }
  if (b.sheaf.support() != b.cosheaf.support()) r.add("sheaf and cosheaf have different supports");
  if (b.sheaf.field() != b.cosheaf.field()) r.add("sheaf and cosheaf are over different fields");
  const SimplicialComplex& k = b.base();
  if (b.vertical.size() != k.size()) {
    r.add("expected " + std::to_string(k.size()) + " vertical maps, got " + std::to_string(b.vertical.size()));
    return r;
  }
  bool shapes_ok = true;
  for (std::size_t s = 0; s < k.size(); ++s) {
    if (!b.supported(s)) continue;
    const Matrix& v = b.vertical[s];
    if (v.rows() != b.cosheaf.dim(s) || v.cols() != b.sheaf.dim(s)) {
      r.add("vertical map at " + name_of(k, s) + " has shape " + std::to_string(v.rows()) + "x" +
            std::to_string(v.cols()) + ", expected " + std::to_string(b.cosheaf.dim(s)) + "x" +
            std::to_string(b.sheaf.dim(s)));
      shapes_ok = false;
    }
  }
  if (!shapes_ok || !r.ok()) return r;
  for (auto [s, t] : b.sheaf.relations()) {
    if (!(b.vertical[s] == b.cosheaf.extend(s, t) * b.vertical[t] * b.sheaf.restrict(s, t)))
      r.add("bisheaf square " + name_of(k, s) + " < " + name_of(k, t) + " does not commute");
  }
  return r;
}

IsoBisheaf isofy(const Bisheaf& b, SweepOptions opts) {
  IsoBisheaf out;
  out.epi = epify(b.sheaf, opts);
  out.mono = monofy(b.cosheaf, opts);
  out.bisheaf.sheaf = as_sheaf(b.sheaf, out.epi);
  out.bisheaf.cosheaf = as_cosheaf(b.cosheaf, out.mono);
  for (std::size_t s = 0; s < b.base().size(); ++s) {
    if (!b.supported(s)) {
      out.bisheaf.vertical.push_back(zero_vertical(out.bisheaf, s));
      continue;
    }
    out.bisheaf.vertical.push_back(out.mono.kernel[s].projection() * b.vertical[s] * out.epi.component[s].basis());
  }
  return out;
}

Report validate_isobisheaf(const Bisheaf& b) {
  Report r = validate_bisheaf(b);
  if (!r.ok()) return r;
  if (!is_episheaf(b.sheaf)) r.add("the sheaf is not an episheaf");
  if (!is_monocosheaf(b.cosheaf)) r.add("the cosheaf is not a monocosheaf");
  return r;
}

Report validate_bisheaf_map(const Bisheaf& f, const Bisheaf& g, const BisheafMap& a) {
  Report r;
  if (!(f.base() == g.base())) {
    r.add("bisheaves live on different complexes");
    return r;
  }
  if (f.sheaf.support() != g.sheaf.support()) {
    r.add("bisheaves have different supports");
    return r;
  }
  r.merge(validate_map(f.sheaf, g.sheaf, a.sheaf));
  r.merge(validate_map(g.cosheaf, f.cosheaf, a.cosheaf));
  if (!r.ok()) return r;
  for (std::size_t s = 0; s < f.base().size(); ++s) {
    if (!f.supported(s)) continue;
    if (!(f.vertical[s] == a.cosheaf.component[s] * g.vertical[s] * a.sheaf.component[s]))
      r.add("vertical square at " + name_of(f.base(), s) + " does not commute");
  }
  return r;
}

BisheafMap identity_bisheaf_map(const Bisheaf& b) { return {identity_map(b.sheaf), identity_map(b.cosheaf)}; }

BisheafMap induced_iso_map(const Bisheaf& f, const IsoBisheaf& fi, const Bisheaf& g, const IsoBisheaf& gi,
                           const BisheafMap& a) {
  Report r = validate_bisheaf_map(f, g, a);
  if (!r.ok()) throw Error("induced_iso_map: " + r.first());
  BisheafMap out;
  for (std::size_t s = 0; s < f.base().size(); ++s) {
    if (!f.supported(s)) {
      out.sheaf.component.emplace_back(f.field(), gi.bisheaf.sheaf.dim(s), fi.bisheaf.sheaf.dim(s));
      out.cosheaf.component.emplace_back(f.field(), fi.bisheaf.cosheaf.dim(s), gi.bisheaf.cosheaf.dim(s));
      continue;
    }
    out.sheaf.component.push_back(
        induced_map(a.sheaf.component[s], fi.epi.component[s], gi.epi.component[s], InducedMode::sub));
    out.cosheaf.component.push_back(
        induced_map(a.cosheaf.component[s], gi.mono.kernel[s], fi.mono.kernel[s], InducedMode::quotient));
  }
  return out;
}

Matrix transport_between(const LocalSystem& l, std::size_t face, std::size_t coface) {
  const SimplicialComplex& k = *l.base;
  if (!k.is_face(face, coface))
    throw Error(name_of(k, face) + " is not a face of " + name_of(k, coface));
  Matrix m = Matrix::identity(l.field, l.stalk_dim[coface]);
  std::size_t cur = coface;
  while (cur != face) {
    std::size_t next = cur;
    for (std::size_t f : k.facets(cur)) {
      if (k.is_face(face, f)) {
        next = f;
        break;
      }
    }
    m = transport_of(l, next, cur) * m;
    cur = next;
  }
  return m;
}

Report validate_local_system(const LocalSystem& l) {
  Report r;
  const SimplicialComplex& k = *l.base;
  for (std::size_t t = 0; t < k.size(); ++t) {
    if (!l.support[t]) continue;
    for (std::size_t s : k.facets(t)) {
      if (!l.support[s]) continue;
      auto it = l.transport.find({s, t});
      if (it == l.transport.end()) {
        r.add("missing transport " + name_of(k, s) + " < " + name_of(k, t));
        continue;
      }
      const Matrix& m = it->second;
      if (m.rows() != l.stalk_dim[s] || m.cols() != l.stalk_dim[t]) {
        r.add("transport " + name_of(k, s) + " < " + name_of(k, t) + " has the wrong shape");
      } else if (!m.inverse()) {
        r.add("transport " + name_of(k, s) + " < " + name_of(k, t) + " is not invertible");
      }
    }
  }
  if (!r.ok()) return r;
  // Diamonds: all chains s < a < u give the same composite.
  for (std::size_t u = 0; u < k.size(); ++u) {
    if (!l.support[u]) continue;
    std::map<std::size_t, Matrix> first;
    for (std::size_t a : k.facets(u)) {
      if (!l.support[a]) continue;
      for (std::size_t s : k.facets(a)) {
        if (!l.support[s]) continue;
        Matrix c = l.transport.at({s, a}) * l.transport.at({a, u});
        auto [it, fresh] = first.emplace(s, c);
        if (!fresh && !(it->second == c))
          r.add("transports around " + name_of(k, s) + " < " + name_of(k, u) + " do not commute");
      }
    }
  }
  return r;
}

LocalSystem image_local_system(const IsoBisheaf& i) {
  const Bisheaf& b = i.bisheaf;
  LocalSystem l;
  l.base = b.base_ptr();
  l.field = b.field();
  l.support = b.sheaf.support();
  for (std::size_t s = 0; s < b.base().size(); ++s) {
    Subspace im = b.supported(s) ? image_basis(b.vertical[s]) : Subspace::zero(b.field(), 0);
    l.stalk_dim.push_back(im.dim());
    l.stalk_space.push_back(std::move(im));
  }
  for (auto [s, t] : b.cosheaf.relations()) {
    Matrix m = induced_map(b.cosheaf.extend(s, t), l.stalk_space[t], l.stalk_space[s], InducedMode::sub);
    if (m.rows() != m.cols() || m.rank() != m.rows()) {
      throw Error("image transport " + name_of(b.base(), s) + " < " + name_of(b.base(), t) +
                  " is not invertible; the input is not an isobisheaf");
    }
    l.transport.emplace(std::make_pair(s, t), std::move(m));
  }
  return l;
}

Bisheaf pullback_along(const Bisheaf& b, const SimplicialMap& psi, std::vector<char> support) {
  const SimplicialComplex& l = psi.source();
  if (support.empty()) support.assign(l.size(), 1);
  std::vector<std::size_t> sd(l.size(), 0), cd(l.size(), 0);
  for (std::size_t s = 0; s < l.size(); ++s) {
    if (!support[s]) continue;
    std::size_t img = psi.image(s);
    if (!b.supported(img))
      throw Error("pullback: " + name_of(l, s) + " lands outside the support at " + name_of(b.base(), img));
    sd[s] = b.sheaf.dim(img);
    cd[s] = b.cosheaf.dim(img);
  }
  Bisheaf out{CellSheaf(psi.source_ptr(), b.field(), sd, support), CellCosheaf(psi.source_ptr(), b.field(), cd, support),
              {}};
  for (auto [s, t] : out.sheaf.relations()) {
    out.sheaf.set_map(s, t, b.sheaf.map_between(psi.image(s), psi.image(t)));
    out.cosheaf.set_map(s, t, b.cosheaf.map_between(psi.image(s), psi.image(t)));
  }
  for (std::size_t s = 0; s < l.size(); ++s)
    out.vertical.push_back(support[s] ? b.vertical[psi.image(s)] : zero_vertical(out, s));
  return out;
}

Bisheaf pullback_bisheaf(const Bisheaf& b, const EtaleOpen& a) { return pullback_along(b, a.psi, a.open_part()); }

BisheafMap pullback_bisheaf_map(const BisheafMap& a, const Bisheaf& fp, const Bisheaf& gp, const SimplicialMap& psi) {
  BisheafMap out;
  for (std::size_t s = 0; s < fp.base().size(); ++s) {
    if (!fp.supported(s)) {
      out.sheaf.component.emplace_back(fp.field(), gp.sheaf.dim(s), fp.sheaf.dim(s));
      out.cosheaf.component.emplace_back(fp.field(), fp.cosheaf.dim(s), gp.cosheaf.dim(s));
      continue;
    }
    out.sheaf.component.push_back(a.sheaf.component[psi.image(s)]);
    out.cosheaf.component.push_back(a.cosheaf.component[psi.image(s)]);
  }
  return out;
}

LocalSystem pls(const Bisheaf& b, const EtaleOpen& a, SweepOptions opts) {
  return image_local_system(isofy(pullback_bisheaf(b, a), opts));
}

std::vector<LocalSystem> pls_many(const Bisheaf& b, const std::vector<EtaleOpen>& opens, Exec exec) {
  std::vector<LocalSystem> out(opens.size());
  for_each_index(opens.size(), exec, [&](std::size_t i) { out[i] = pls(b, opens[i]); });
  return out;
}

MonodromyReport monodromy_report(const LocalSystem& l, TreeRoot root) {
  const SimplicialComplex& k = *l.base;
  const std::size_t n = k.size();
  std::vector<long> comp(n, -1);
  MonodromyReport rep;

  std::vector<std::size_t> order(n);
  for (std::size_t s = 0; s < n; ++s) order[s] = root == TreeRoot::smallest ? s : n - 1 - s;

  for (std::size_t start : order) {
    if (!l.support[start] || comp[start] >= 0) continue;
    Component c;
    c.root = start;
    c.stalk_dim = l.stalk_dim[start];
    const long id = static_cast<long>(rep.components.size());

    std::vector<std::size_t> parent(n, n);
    std::map<std::size_t, Matrix> p;  // stalk(root) -> stalk(s)
    std::set<std::pair<std::size_t, std::size_t>> tree;
    std::deque<std::size_t> queue{start};
    comp[start] = id;
    p.emplace(start, Matrix::identity(l.field, c.stalk_dim));
    while (!queue.empty()) {
      std::size_t u = queue.front();
      queue.pop_front();
      c.simplices.push_back(u);
      for (std::size_t v : neighbours(k, l.support, u)) {
        if (comp[v] >= 0) continue;
        comp[v] = id;
        parent[v] = u;
        tree.insert({std::min(u, v), std::max(u, v)});
        p.emplace(v, step(l, u, v) * p.at(u));
        queue.push_back(v);
      }
    }
    std::sort(c.simplices.begin(), c.simplices.end());

    auto path_to = [&](std::size_t s) {
      std::vector<std::size_t> path;
      for (std::size_t x = s; x != n; x = parent[x]) path.push_back(x);
      std::reverse(path.begin(), path.end());
      return path;
    };

    if (c.stalk_dim > 0) {
      for (std::size_t t : c.simplices) {
        for (std::size_t s : k.facets(t)) {
          if (!l.support[s] || tree.count({s, t})) continue;
          Loop loop;
          loop.face = s;
          loop.coface = t;
          loop.path = path_to(t);
          auto back = path_to(s);
          loop.path.insert(loop.path.end(), back.rbegin(), back.rend());
          loop.matrix = inverse_or_throw(p.at(s), "path transport") * transport_of(l, s, t) * p.at(t);
          loop.trace = loop.matrix.trace();
          loop.determinant = loop.matrix.determinant();
          loop.rank_minus_identity = (loop.matrix - Matrix::identity(l.field, c.stalk_dim)).rank();
          c.loops.push_back(std::move(loop));
        }
      }
    }
    rep.components.push_back(std::move(c));
  }
  return rep;
}

Matrix holonomy(const LocalSystem& l, const std::vector<std::size_t>& closed_path) {
  if (closed_path.empty() || closed_path.front() != closed_path.back()) throw Error("holonomy: the path is not closed");
  Matrix m = Matrix::identity(l.field, l.stalk_dim[closed_path.front()]);
  for (std::size_t i = 0; i + 1 < closed_path.size(); ++i) {
    std::size_t a = closed_path[i], b = closed_path[i + 1];
    if (!l.support[a] || !l.support[b]) throw Error("holonomy: the path leaves the support");
    m = step(l, a, b) * m;
  }
  return m;
}

bool equivalent(const MonodromyReport& a, const MonodromyReport& b, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (a.components.size() != b.components.size()) return fail("different numbers of components");
  for (std::size_t i = 0; i < a.components.size(); ++i) {
    const Component& x = a.components[i];
    const Component& y = b.components[i];
    const std::string at = "component " + std::to_string(i);
    if (x.stalk_dim != y.stalk_dim) return fail(at + ": stalk dimensions differ");
    if (x.loops.size() != y.loops.size()) return fail(at + ": loop counts differ");
    for (std::size_t j = 0; j < x.loops.size(); ++j) {
      const Loop& p = x.loops[j];
      const Loop& q = y.loops[j];
      const std::string lp = at + ", loop " + std::to_string(j);
      if (!(p.trace == q.trace)) return fail(lp + ": traces " + p.trace.to_string() + " and " + q.trace.to_string());
      if (!(p.determinant == q.determinant)) return fail(lp + ": determinants differ");
      if (p.rank_minus_identity != q.rank_minus_identity) return fail(lp + ": rank(L - I) differs");
    }
  }
  return true;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::isomorphic: return "isomorphic";
    case Verdict::subquotient: return "subquotient";
    case Verdict::not_subquotient: return "not_subquotient";
  }
  return "?";
}

SubquotientResult compare_subquotient(const IsoBisheaf& coarse, const IsoBisheaf& fine,
                                      const std::optional<BisheafMap>& via) {
  const Bisheaf& f = coarse.bisheaf;
  const Bisheaf& g = fine.bisheaf;
  SubquotientResult out;
  if (!(f.base() == g.base())) {
    out.reason = "the bisheaves live on different complexes";
    return out;
  }
  if (f.sheaf.support() != g.sheaf.support()) {
    out.reason = "the bisheaves have different supports";
    return out;
  }
  const SimplicialComplex& k = f.base();
  LocalSystem lf = image_local_system(coarse);
  LocalSystem lg = image_local_system(fine);
  for (std::size_t s = 0; s < k.size(); ++s) {
    if (!f.supported(s)) continue;
    if (lf.stalk_dim[s] > lg.stalk_dim[s]) {
      out.reason = "stalk at " + name_of(k, s) + " has dimension " + std::to_string(lf.stalk_dim[s]) +
                   ", more than " + std::to_string(lg.stalk_dim[s]);
      return out;
    }
  }
  if (!via) {
    out.verdict = Verdict::subquotient;
    out.reason = "only stalk dimensions compared";
    return out;
  }
  Report r = validate_bisheaf_map(f, g, *via);
  if (!r.ok()) throw Error("compare_subquotient: " + r.first());

  bool iso = true;
  for (std::size_t s = 0; s < k.size(); ++s) {
    if (!f.supported(s)) {
      out.intermediate.push_back(Subspace::zero(g.field(), g.cosheaf.dim(s)));
      out.kernel.push_back(Subspace::zero(g.field(), g.cosheaf.dim(s)));
      continue;
    }
    Subspace i = image_basis(g.vertical[s] * via->sheaf.component[s]);
    Subspace kr = meet(i, kernel_basis(via->cosheaf.component[s]));
    if (!lg.stalk_space[s].contains(i)) throw Error("compare_subquotient: I is not inside the stalk");
    if (i.dim() - kr.dim() != lf.stalk_dim[s])
      throw Error("compare_subquotient: I/K does not match the coarse stalk at " + name_of(k, s));
    if (!kr.is_zero() || !(i == lg.stalk_space[s])) iso = false;
    out.intermediate.push_back(std::move(i));
    out.kernel.push_back(std::move(kr));
  }
  for (auto [s, t] : g.cosheaf.relations()) {
    const Matrix& e = g.cosheaf.extend(s, t);
    if (!out.intermediate[s].contains(push_forward(e, out.intermediate[t])) ||
        !out.kernel[s].contains(push_forward(e, out.kernel[t])))
      throw Error("compare_subquotient: witness is not a sublocal system at " + name_of(k, s));
  }
  out.verdict = iso ? Verdict::isomorphic : Verdict::subquotient;
  out.reason = iso ? "the map induces an isomorphism of image local systems"
                   : "the coarse local system is I/K for the witness I, K";
  return out;
}

}  // namespace plsys
