#include "plsys/cellsheaf.hpp"

#include <algorithm>
#include <random>

namespace plsys {

namespace {

std::string name_of(const SimplicialComplex& k, std::size_t s) { return "[" + simplex_key(k.simplex(s)) + "]"; }

std::vector<char> full_support(const SimplicialComplex& k, std::vector<char> support) {
  if (support.empty()) return std::vector<char>(k.size(), 1);
  if (support.size() != k.size()) throw Error("support mask has the wrong length");
  return support;
}

}  // namespace

CellFunctor::CellFunctor(ComplexPtr base, Field field, Variance variance, std::vector<char> support)
    : CellFunctor(base, field, variance, std::vector<std::size_t>(base->size(), 0), std::move(support)) {}

CellFunctor::CellFunctor(ComplexPtr base, Field field, Variance variance, const std::vector<std::size_t>& dims,
                         std::vector<char> support)
    : base_(std::move(base)), field_(field), variance_(variance) {
  support_ = full_support(*base_, std::move(support));
  if (dims.size() != base_->size()) throw Error("dimension list has the wrong length");
  dims_ = dims;
  for (std::size_t s = 0; s < base_->size(); ++s)
    if (!support_[s]) dims_[s] = 0;
  maps_.resize(base_->size());
  for (std::size_t t = 0; t < base_->size(); ++t) {
    for (std::size_t f : base_->facets(t)) maps_[t].push_back(zero_map(f, t));
  }
}

CellFunctor CellFunctor::constant(ComplexPtr base, Field field, Variance variance, std::size_t n,
                                  std::vector<char> support) {
  std::vector<std::size_t> dims(base->size(), n);
  CellFunctor f(base, field, variance, dims, std::move(support));
  for (auto [a, b] : f.relations()) f.set_map(a, b, Matrix::identity(field, n));
  return f;
}

Matrix CellFunctor::zero_map(std::size_t face, std::size_t coface) const {
  return variance_ == Variance::sheaf ? Matrix(field_, dims_[coface], dims_[face])
                                      : Matrix(field_, dims_[face], dims_[coface]);
}

void CellFunctor::set_dim(std::size_t s, std::size_t n) {
  if (!support_[s]) throw Error("set_dim: " + name_of(*base_, s) + " is outside the support");
  dims_[s] = n;
  for (std::size_t k = 0; k < base_->facets(s).size(); ++k) maps_[s][k] = zero_map(base_->facets(s)[k], s);
  for (std::size_t t : base_->cofaces(s)) maps_[t][slot(s, t)] = zero_map(s, t);
}

std::size_t CellFunctor::slot(std::size_t face, std::size_t coface) const {
  const auto& fs = base_->facets(coface);
  for (std::size_t k = 0; k < fs.size(); ++k)
    if (fs[k] == face) return k;
  throw Error(name_of(*base_, face) + " is not a facet of " + name_of(*base_, coface));
}

const Matrix& CellFunctor::map(std::size_t face, std::size_t coface) const { return maps_[coface][slot(face, coface)]; }

void CellFunctor::set_map(std::size_t face, std::size_t coface, Matrix m) {
  Matrix& target = maps_[coface][slot(face, coface)];
  if (m.rows() != target.rows() || m.cols() != target.cols()) {
    throw Error("map " + name_of(*base_, face) + " < " + name_of(*base_, coface) + " must be " +
                std::to_string(target.rows()) + "x" + std::to_string(target.cols()) + ", got " +
                std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!(m.field() == field_) && m.rows() * m.cols() > 0) throw Error("map over the wrong field");
  target = std::move(m);
}

Matrix CellFunctor::map_between(std::size_t face, std::size_t coface) const {
  if (!base_->is_face(face, coface)) {
    throw Error(name_of(*base_, face) + " is not a face of " + name_of(*base_, coface));
  }
  if (!support_[face]) throw Error(name_of(*base_, face) + " is outside the support");
  Matrix m = Matrix::identity(field_, dims_[face]);
  Simplex cur = base_->simplex(face);
  std::size_t cur_index = face;
  for (int v : base_->simplex(coface)) {
    if (std::binary_search(cur.begin(), cur.end(), v)) continue;
    cur.insert(std::upper_bound(cur.begin(), cur.end(), v), v);
    std::size_t next = base_->index(cur);
    if (variance_ == Variance::sheaf) {
      m = map(cur_index, next) * m;
    } else {
      m = m * map(cur_index, next);
    }
    cur_index = next;
  }
  return m;
}

std::vector<std::pair<std::size_t, std::size_t>> CellFunctor::relations() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t t = 0; t < base_->size(); ++t) {
    if (!support_[t]) continue;
    for (std::size_t f : base_->facets(t))
      if (support_[f]) out.emplace_back(f, t);
  }
  return out;
}

CellSheaf::CellSheaf(CellFunctor f) : CellFunctor(std::move(f)) {
  if (variance() != Variance::sheaf) throw Error("expected a sheaf");
}

CellCosheaf::CellCosheaf(CellFunctor f) : CellFunctor(std::move(f)) {
  if (variance() != Variance::cosheaf) throw Error("expected a cosheaf");
}

Report validate_functor(const CellFunctor& f) {
  Report r;
  const SimplicialComplex& k = f.base();
  for (std::size_t s = 0; s < k.size(); ++s) {
    if (!f.supported(s)) continue;
    for (std::size_t t : k.cofaces(s))
      if (!f.supported(t)) r.add("support is not up-closed: " + name_of(k, s) + " is in it but " + name_of(k, t) +
                                 " is not");
  }
  if (!r.ok()) return r;
  // Each pair face < coface of codimension two bounds exactly one square.
  for (std::size_t top = 0; top < k.size(); ++top) {
    if (!f.supported(top) || k.dim_of(top) < 1) continue;
    const auto& mids = k.facets(top);
    for (std::size_t a = 0; a < mids.size(); ++a)
      for (std::size_t b = a + 1; b < mids.size(); ++b) {
        const Simplex& sa = k.simplex(mids[a]);
        const Simplex& sb = k.simplex(mids[b]);
        Simplex low;
        std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(low));
        if (low.empty()) continue;
        std::size_t bottom = k.index(low);
        if (!f.supported(bottom)) continue;
        Matrix via_a, via_b;
        if (f.variance() == Variance::sheaf) {
          via_a = f.map(mids[a], top) * f.map(bottom, mids[a]);
          via_b = f.map(mids[b], top) * f.map(bottom, mids[b]);
        } else {
          via_a = f.map(bottom, mids[a]) * f.map(mids[a], top);
          via_b = f.map(bottom, mids[b]) * f.map(mids[b], top);
        }
        if (!(via_a == via_b)) {
          r.add("square " + name_of(k, bottom) + " < " + name_of(k, top) + " does not commute: through " +
                name_of(k, mids[a]) + " gives " + via_a.to_string() + ", through " + name_of(k, mids[b]) + " gives " +
                via_b.to_string());
        }
      }
  }
  return r;
}

bool is_episheaf(const CellSheaf& f) {
  for (auto [a, b] : f.relations())
    if (f.map(a, b).rank() != f.dim(b)) return false;
  return true;
}

bool is_monocosheaf(const CellCosheaf& f) {
  for (auto [a, b] : f.relations())
    if (f.map(a, b).rank() != f.dim(b)) return false;
  return true;
}

namespace {

std::vector<std::pair<std::size_t, std::size_t>> sweep_order(const CellFunctor& f, unsigned seed) {
  auto rels = f.relations();
  if (seed != 0) {
    std::mt19937 rng(seed);
    std::shuffle(rels.begin(), rels.end(), rng);
  }
  return rels;
}

std::size_t total_dim(const std::vector<Subspace>& v) {
  std::size_t n = 0;
  for (const auto& s : v) n += s.dim();
  return n;
}

}  // namespace

SheafSubfunctor epify(const CellSheaf& f, SweepOptions opts) {
  const SimplicialComplex& k = f.base();
  std::vector<Subspace> comp(k.size());
  for (std::size_t s = 0; s < k.size(); ++s) comp[s] = Subspace::full(f.field(), f.dim(s));

  if (opts.exec == Exec::serial) {
    const auto rels = sweep_order(f, opts.shuffle_seed);
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto [s, t] : rels) {
        const Matrix& r = f.restrict(s, t);
        Subspace lifted = meet(comp[t], push_forward(r, comp[s]));
        if (lifted.dim() != comp[t].dim()) {
          comp[t] = std::move(lifted);
          changed = true;
        }
        Subspace closed = meet(comp[s], preimage(r, comp[t]));
        if (closed.dim() != comp[s].dim()) {
          comp[s] = std::move(closed);
          changed = true;
        }
      }
    }
    return {std::move(comp)};
  }

  // Jacobi relaxation: every simplex is updated from the previous round.
  bool changed = true;
  while (changed) {
    std::vector<Subspace> next(k.size());
    for_each_index(k.size(), opts.exec, [&](std::size_t s) {
      Subspace c = comp[s];
      if (f.supported(s)) {
        for (std::size_t face : k.facets(s))
          if (f.supported(face)) c = meet(c, push_forward(f.restrict(face, s), comp[face]));
        for (std::size_t t : k.cofaces(s)) c = meet(c, preimage(f.restrict(s, t), comp[t]));
      }
      next[s] = std::move(c);
    });
    changed = total_dim(next) != total_dim(comp);
    comp = std::move(next);
  }
  return {std::move(comp)};
}

CosheafQuotient monofy(const CellCosheaf& f, SweepOptions opts) {
  const SimplicialComplex& k = f.base();
  std::vector<Subspace> ker(k.size());
  for (std::size_t s = 0; s < k.size(); ++s) ker[s] = Subspace::zero(f.field(), f.dim(s));

  if (opts.exec == Exec::serial) {
    const auto rels = sweep_order(f, opts.shuffle_seed);
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto [s, t] : rels) {
        const Matrix& e = f.extend(s, t);
        Subspace closed = join(ker[s], push_forward(e, ker[t]));
        if (closed.dim() != ker[s].dim()) {
          ker[s] = std::move(closed);
          changed = true;
        }
        Subspace injective = join(ker[t], preimage(e, ker[s]));
        if (injective.dim() != ker[t].dim()) {
          ker[t] = std::move(injective);
          changed = true;
        }
      }
    }
    return {std::move(ker)};
  }

  bool changed = true;
  while (changed) {
    std::vector<Subspace> next(k.size());
    for_each_index(k.size(), opts.exec, [&](std::size_t s) {
      Subspace c = ker[s];
      if (f.supported(s)) {
        for (std::size_t t : k.cofaces(s)) c = join(c, push_forward(f.extend(s, t), ker[t]));
        for (std::size_t face : k.facets(s))
          if (f.supported(face)) c = join(c, preimage(f.extend(face, s), ker[face]));
      }
      next[s] = std::move(c);
    });
    changed = total_dim(next) != total_dim(ker);
    ker = std::move(next);
  }
  return {std::move(ker)};
}

CellSheaf as_sheaf(const CellSheaf& f, const SheafSubfunctor& e) {
  std::vector<std::size_t> dims(f.base().size(), 0);
  for (std::size_t s = 0; s < dims.size(); ++s) dims[s] = f.supported(s) ? e.component[s].dim() : 0;
  CellSheaf out(f.base_ptr(), f.field(), dims, f.support());
  for (auto [s, t] : f.relations()) {
    out.set_map(s, t, induced_map(f.restrict(s, t), e.component[s], e.component[t], InducedMode::sub));
  }
  return out;
}

CellCosheaf as_cosheaf(const CellCosheaf& f, const CosheafQuotient& q) {
  std::vector<std::size_t> dims(f.base().size(), 0);
  for (std::size_t s = 0; s < dims.size(); ++s) dims[s] = f.supported(s) ? f.dim(s) - q.kernel[s].dim() : 0;
  CellCosheaf out(f.base_ptr(), f.field(), dims, f.support());
  for (auto [s, t] : f.relations()) {
    out.set_map(s, t, induced_map(f.extend(s, t), q.kernel[t], q.kernel[s], InducedMode::quotient));
  }
  return out;
}

Report check_subfunctor(const CellSheaf& f, const SheafSubfunctor& e, bool require_epi) {
  Report r;
  for (auto [s, t] : f.relations()) {
    Subspace img = push_forward(f.restrict(s, t), e.component[s]);
    if (!e.component[t].contains(img)) {
      r.add("restriction " + name_of(f.base(), s) + " < " + name_of(f.base(), t) + " leaves the subfunctor");
    } else if (require_epi && img.dim() != e.component[t].dim()) {
      r.add("restriction " + name_of(f.base(), s) + " < " + name_of(f.base(), t) + " is not surjective");
    }
  }
  return r;
}

Report check_quotient(const CellCosheaf& f, const CosheafQuotient& q, bool require_mono) {
  Report r;
  for (auto [s, t] : f.relations()) {
    const Matrix& e = f.extend(s, t);
    if (!q.kernel[s].contains(push_forward(e, q.kernel[t]))) {
      r.add("extension " + name_of(f.base(), s) + " < " + name_of(f.base(), t) + " is not defined on the quotient");
    } else if (require_mono && !(preimage(e, q.kernel[s]) == q.kernel[t])) {
      r.add("extension " + name_of(f.base(), s) + " < " + name_of(f.base(), t) + " is not injective on the quotient");
    }
  }
  return r;
}

FunctorMap identity_map(const CellFunctor& f) {
  FunctorMap a;
  for (std::size_t s = 0; s < f.base().size(); ++s) a.component.push_back(Matrix::identity(f.field(), f.dim(s)));
  return a;
}

FunctorMap zero_map(const CellFunctor& source, const CellFunctor& target) {
  FunctorMap a;
  for (std::size_t s = 0; s < source.base().size(); ++s)
    a.component.emplace_back(source.field(), target.dim(s), source.dim(s));
  return a;
}

Report validate_map(const CellFunctor& source, const CellFunctor& target, const FunctorMap& a) {
  Report r;
  const SimplicialComplex& k = source.base();
  if (!(k == target.base()) || source.variance() != target.variance()) {
    r.add("map between functors of different kinds or bases");
    return r;
  }
  if (a.component.size() != k.size()) {
    r.add("map has " + std::to_string(a.component.size()) + " components for " + std::to_string(k.size()) +
          " simplices");
    return r;
  }
  for (std::size_t s = 0; s < k.size(); ++s) {
    if (!source.supported(s)) continue;
    if (!target.supported(s)) {
      r.add(name_of(k, s) + " is supported by the source but not the target");
      continue;
    }
    if (a.component[s].rows() != target.dim(s) || a.component[s].cols() != source.dim(s)) {
      r.add("component at " + name_of(k, s) + " has the wrong shape");
    }
  }
  if (!r.ok()) return r;
  for (auto [s, t] : source.relations()) {
    Matrix lhs, rhs;
    if (source.variance() == Variance::sheaf) {
      lhs = a.component[t] * source.map(s, t);
      rhs = target.map(s, t) * a.component[s];
    } else {
      lhs = a.component[s] * source.map(s, t);
      rhs = target.map(s, t) * a.component[t];
    }
    if (!(lhs == rhs)) {
      r.add("naturality fails on " + name_of(k, s) + " < " + name_of(k, t) + ": " + lhs.to_string() + " vs " +
            rhs.to_string());
    }
  }
  return r;
}

FunctorMap induced_epi_map(const CellSheaf& f, const CellSheaf& g, const FunctorMap& a) {
  Report r = validate_map(f, g, a);
  if (!r.ok()) throw Error("induced_epi_map: " + r.first());
  SheafSubfunctor ef = epify(f), eg = epify(g);
  FunctorMap out;
  for (std::size_t s = 0; s < f.base().size(); ++s) {
    if (!f.supported(s)) {
      out.component.emplace_back(f.field(), 0, 0);
      continue;
    }
    out.component.push_back(induced_map(a.component[s], ef.component[s], eg.component[s], InducedMode::sub));
  }
  return out;
}

FunctorMap induced_mono_map(const CellCosheaf& f, const CellCosheaf& g, const FunctorMap& a) {
  Report r = validate_map(f, g, a);
  if (!r.ok()) throw Error("induced_mono_map: " + r.first());
  CosheafQuotient qf = monofy(f), qg = monofy(g);
  FunctorMap out;
  for (std::size_t s = 0; s < f.base().size(); ++s) {
    if (!f.supported(s)) {
      out.component.emplace_back(f.field(), 0, 0);
      continue;
    }
    out.component.push_back(induced_map(a.component[s], qf.kernel[s], qg.kernel[s], InducedMode::quotient));
  }
  return out;
}

SheafSubfunctor image_subfunctor(const CellFunctor& source, const CellFunctor& target, const FunctorMap& a) {
  SheafSubfunctor out;
  for (std::size_t s = 0; s < source.base().size(); ++s) {
    out.component.push_back(source.supported(s) ? image_basis(a.component[s])
                                                : Subspace::zero(target.field(), target.dim(s)));
  }
  return out;
}

}  // namespace plsys
