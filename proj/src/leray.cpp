#include "plsys/leray.hpp"

#include <algorithm>

namespace plsys {

namespace {

std::string name_of(const SimplicialComplex& k, std::size_t s) { return "[" + simplex_key(k.simplex(s)) + "]"; }

std::size_t as_index(int v) { return static_cast<std::size_t>(v); }

// x += a * y
void axpy(Chain& x, const Scalar& a, const Chain& y) {
  Chain out;
  out.reserve(x.size() + y.size());
  auto i = x.begin();
  auto j = y.begin();
  while (i != x.end() || j != y.end()) {
    if (j == y.end() || (i != x.end() && i->first < j->first)) {
      out.push_back(std::move(*i++));
    } else if (i == x.end() || j->first < i->first) {
      out.emplace_back(j->first, a * j->second);
      ++j;
    } else {
      Scalar v = i->second + a * j->second;
      if (!v.is_zero()) out.emplace_back(i->first, std::move(v));
      ++i;
      ++j;
    }
  }
  x = std::move(out);
}

Chain unit(std::size_t s, Field field) { return {{s, Scalar::one(field)}}; }

// Flags tau_0 < ... < tau_d = tau of the simplex with their signs.
void flags_of(const SimplicialComplex& y, std::size_t tau, std::vector<int>& chain, int sign,
              std::vector<std::pair<Simplex, int>>& out) {
  chain.push_back(static_cast<int>(tau));
  const int d = y.dim_of(tau);
  if (d == 0) {
    Simplex flag(chain.rbegin(), chain.rend());
    out.emplace_back(std::move(flag), sign);
  } else {
    const auto& fs = y.facets(tau);
    for (std::size_t p = 0; p < fs.size(); ++p) {
      const int step = ((d + static_cast<int>(p)) % 2 == 0) ? 1 : -1;
      flags_of(y, fs[p], chain, sign * step, out);
    }
  }
  chain.pop_back();
}

std::vector<char> full_mask(const SimplicialComplex& y1, const StarPreimage& s) {
  std::vector<char> mask(y1.size(), 0);
  for (std::size_t c = 0; c < y1.size(); ++c) mask[c] = s.inside[as_index(y1.simplex(c).front())];
  return mask;
}

struct LerayStalks {
  std::vector<StarPreimage> star;
  std::vector<Homology> homology;
};

LerayStalks relative_stalks(const SimplicialMap& f, int d, Field field, Exec exec) {
  const std::size_t n = f.target().size();
  LerayStalks out{std::vector<StarPreimage>(n), std::vector<Homology>(n)};
  for_each_index(n, exec, [&](std::size_t s) {
    out.star[s] = star_preimage(f, s);
    out.homology[s] = Homology(f.source(), out.star[s].inside, d, field);
  });
  return out;
}

LerayStalks fiber_stalks(const SimplicialMap& f, const SimplicialComplex& y1, int j, Field field, Exec exec) {
  const std::size_t n = f.target().size();
  LerayStalks out{std::vector<StarPreimage>(n), std::vector<Homology>(n)};
  for_each_index(n, exec, [&](std::size_t s) {
    out.star[s] = star_preimage(f, s);
    out.homology[s] = Homology(y1, full_mask(y1, out.star[s]), j, field);
  });
  return out;
}

Matrix from_coordinate_columns(Field field, std::size_t rows, const std::vector<Vector>& cols) {
  return cols.empty() ? Matrix::zero(field, rows, 0) : Matrix::from_columns(field, rows, cols);
}

CellSheaf assemble_sheaf(const SimplicialMap& f, const LerayStalks& rel, Field field, Exec exec) {
  const SimplicialComplex& k = f.target();
  std::vector<std::size_t> dims(k.size());
  for (std::size_t s = 0; s < k.size(); ++s) dims[s] = rel.homology[s].dim();
  CellSheaf sheaf(f.target_ptr(), field, dims);
  auto rels = sheaf.relations();
  std::vector<Matrix> maps(rels.size());
  for_each_index(rels.size(), exec, [&](std::size_t r) {
    auto [s, t] = rels[r];
    std::vector<Vector> cols;
    for (const Chain& rep : rel.homology[s].representatives()) {
      Chain projected;
      for (const auto& [cell, a] : rep)
        if (rel.star[t].in_s(cell)) projected.emplace_back(cell, a);
      cols.push_back(rel.homology[t].coordinates(projected));
    }
    maps[r] = from_coordinate_columns(field, dims[t], cols);
  });
  for (std::size_t r = 0; r < rels.size(); ++r) sheaf.set_map(rels[r].first, rels[r].second, std::move(maps[r]));
  return sheaf;
}

CellCosheaf assemble_cosheaf(const SimplicialMap& f, const LerayStalks& fib, Field field, Exec exec) {
  const SimplicialComplex& k = f.target();
  std::vector<std::size_t> dims(k.size());
  for (std::size_t s = 0; s < k.size(); ++s) dims[s] = fib.homology[s].dim();
  CellCosheaf cosheaf(f.target_ptr(), field, dims);
  auto rels = cosheaf.relations();
  std::vector<Matrix> maps(rels.size());
  for_each_index(rels.size(), exec, [&](std::size_t r) {
    auto [s, t] = rels[r];
    std::vector<Vector> cols;
    for (const Chain& rep : fib.homology[t].representatives()) cols.push_back(fib.homology[s].coordinates(rep));
    maps[r] = from_coordinate_columns(field, dims[s], cols);
  });
  for (std::size_t r = 0; r < rels.size(); ++r) cosheaf.set_map(rels[r].first, rels[r].second, std::move(maps[r]));
  return cosheaf;
}

}  // namespace

StarPreimage star_preimage(const SimplicialMap& f, std::size_t sigma) {
  if (sigma >= f.target().size()) throw Error("star_preimage: no simplex " + std::to_string(sigma) + " in the base");
  StarPreimage s;
  s.sigma = sigma;
  s.inside.assign(f.source().size(), 0);
  for (std::size_t t = 0; t < f.source().size(); ++t) s.inside[t] = f.target().is_face(sigma, f.image(t)) ? 1 : 0;
  return s;
}

Chain boundary(const SimplicialComplex& k, const Chain& c, const std::vector<char>& cells) {
  std::map<std::size_t, Scalar> acc;
  for (const auto& [s, a] : c) {
    const auto& fs = k.facets(s);
    for (std::size_t p = 0; p < fs.size(); ++p) {
      if (!cells.empty() && !cells[fs[p]]) continue;
      auto [it, fresh] = acc.try_emplace(fs[p], Scalar::zero(a.field()));
      if (p % 2 == 0) it->second += a;
      else it->second -= a;
    }
  }
  Chain out;
  for (auto& [s, a] : acc)
    if (!a.is_zero()) out.emplace_back(s, std::move(a));
  return out;
}

Homology::Homology(const SimplicialComplex& k, const std::vector<char>& cells, int degree, Field field)
    : complex_(&k), cells_(cells), degree_(degree), field_(field) {
  auto reduce = [&](Chain& x, Chain* track, const std::map<std::size_t, Pivot>& table,
                    const std::map<std::size_t, Chain>* tracks) {
    while (!x.empty()) {
      auto it = table.find(x.back().first);
      if (it == table.end()) return;
      const Chain& col = it->second.column;
      Scalar a = -(x.back().second / col.back().second);
      axpy(x, a, col);
      if (track) axpy(*track, a, tracks->at(it->first));
    }
  };

  // Boundaries of the (d+1)-cells.
  for (std::size_t s : k.of_dimension(degree + 1)) {
    if (!cells_[s]) continue;
    Chain col = boundary(k, unit(s, field), cells_);
    reduce(col, nullptr, table_, nullptr);
    if (col.empty()) continue;
    const std::size_t p = col.back().first;
    table_[p] = Pivot{std::move(col), -1};
  }
  const std::size_t boundary_rank = table_.size();

  // Cycles of the d-cells, by reducing their boundaries with tracking.
  std::vector<Chain> cycles;
  std::map<std::size_t, Pivot> low;
  std::map<std::size_t, Chain> tracks;
  for (std::size_t s : k.of_dimension(degree)) {
    if (!cells_[s]) continue;
    Chain track = unit(s, field);
    if (degree == 0) {
      cycles.push_back(std::move(track));
      continue;
    }
    Chain col = boundary(k, track, cells_);
    reduce(col, &track, low, &tracks);
    if (col.empty()) {
      cycles.push_back(std::move(track));
    } else {
      const std::size_t p = col.back().first;
      low[p] = Pivot{std::move(col), -1};
      tracks[p] = std::move(track);
    }
  }

  const std::size_t betti = cycles.size() - boundary_rank;
  for (Chain& z : cycles) {
    if (reps_.size() == betti) break;
    reduce(z, nullptr, table_, nullptr);
    if (z.empty()) continue;
    const std::size_t p = z.back().first;
    table_[p] = Pivot{z, static_cast<long>(reps_.size())};
    reps_.push_back(std::move(z));
  }
  if (reps_.size() != betti) throw Error("homology: cycle reduction found too few classes");
}

bool Homology::is_cycle(const Chain& c) const {
  for (const auto& [s, a] : c)
    if (!cells_[s] || complex_->dim_of(s) != degree_) return false;
  return degree_ == 0 || boundary(*complex_, c, cells_).empty();
}

Vector Homology::coordinates(const Chain& c) const {
  if (!is_cycle(c)) throw Error("homology: the chain is not a cycle in degree " + std::to_string(degree_));
  Vector out(reps_.size(), Scalar::zero(field_));
  Chain x = c;
  while (!x.empty()) {
    auto it = table_.find(x.back().first);
    if (it == table_.end()) throw Error("homology: a cycle does not reduce to the chosen classes");
    const Chain& col = it->second.column;
    Scalar a = x.back().second / col.back().second;
    axpy(x, -a, col);
    if (it->second.rep >= 0) out[static_cast<std::size_t>(it->second.rep)] += a;
  }
  return out;
}

Chain subdivide_chain(const SimplicialComplex& y, const SimplicialComplex& y1, const Chain& c) {
  std::map<std::size_t, Scalar> acc;
  std::vector<int> chain;
  for (const auto& [tau, a] : c) {
    std::vector<std::pair<Simplex, int>> flags;
    flags_of(y, tau, chain, 1, flags);
    for (const auto& [flag, sign] : flags) {
      auto [it, fresh] = acc.try_emplace(y1.index(flag), Scalar::zero(a.field()));
      if (sign > 0) it->second += a;
      else it->second -= a;
    }
  }
  Chain out;
  for (auto& [s, a] : acc)
    if (!a.is_zero()) out.emplace_back(s, std::move(a));
  return out;
}

Scalar OrientationCocycle::operator()(const SimplicialMap& f, const Simplex& front) const {
  if (front.size() != flag.size()) return Scalar::zero(value.field());
  for (std::size_t i = 0; i < front.size(); ++i)
    if (f.image(as_index(front[i])) != flag[i]) return Scalar::zero(value.field());
  return value;
}

OrientationCocycle orientation_cocycle(const SimplicialMap& f, std::size_t sigma, const Orientation& o, Field field) {
  const SimplicialComplex& k = f.target();
  if (sigma >= k.size()) throw Error("orientation_cocycle: no simplex " + std::to_string(sigma) + " in the base");
  Report ok = validate_orientation(k, o, true);
  if (!ok.ok()) throw Error("orientation_cocycle: " + ok.first());
  const int m = k.dimension();
  std::size_t top = k.size();
  for (std::size_t t : k.of_dimension(m))
    if (k.is_face(sigma, t)) {
      top = t;
      break;
    }
  // Down from the top simplex through sigma, then down from sigma; always the
  // first admissible facet.
  std::vector<std::size_t> down{top};
  while (down.back() != sigma) {
    for (std::size_t g : k.facets(down.back()))
      if (k.is_face(sigma, g)) {
        down.push_back(g);
        break;
      }
  }
  while (k.dim_of(down.back()) > 0) down.push_back(k.facets(down.back()).front());
  OrientationCocycle z;
  z.sigma = sigma;
  z.flag.assign(down.rbegin(), down.rend());
  int sign = o.sign[top];
  for (std::size_t d = 1; d < z.flag.size(); ++d) {
    const auto& fs = k.facets(z.flag[d]);
    const auto p = static_cast<std::size_t>(std::find(fs.begin(), fs.end(), z.flag[d - 1]) - fs.begin());
    if ((d + p) % 2 == 1) sign = -sign;
  }
  z.value = Scalar(field, sign);
  return z;
}

Chain cap(const SimplicialComplex& y1, const SimplicialMap& f, const Chain& c, int m, const OrientationCocycle& z) {
  std::map<std::size_t, Scalar> acc;
  const auto front_len = static_cast<std::size_t>(m + 1);
  for (const auto& [w, a] : c) {
    const Simplex& flag = y1.simplex(w);
    if (flag.size() < front_len) continue;
    Scalar v = z(f, Simplex(flag.begin(), flag.begin() + static_cast<long>(front_len)));
    if (v.is_zero()) continue;
    std::size_t back = y1.index(Simplex(flag.begin() + static_cast<long>(front_len) - 1, flag.end()));
    auto [it, fresh] = acc.try_emplace(back, Scalar::zero(a.field()));
    it->second += a * v;
  }
  Chain out;
  for (auto& [s, a] : acc)
    if (!a.is_zero()) out.emplace_back(s, std::move(a));
  return out;
}

CellSheaf relative_sheaf(const SimplicialMap& f, int d, Field field, Exec exec) {
  return assemble_sheaf(f, relative_stalks(f, d, field, exec), field, exec);
}

CellCosheaf fiber_cosheaf(const SimplicialMap& f, int j, Field field, Exec exec) {
  SimplicialComplex y1 = barycentric_subdivision(f.source());
  return assemble_cosheaf(f, fiber_stalks(f, y1, j, field, exec), field, exec);
}

Bisheaf leray_bisheaf(const SimplicialMap& f, int j, const Orientation& o, Field field, Exec exec) {
  const SimplicialComplex& k = f.target();
  Report ok = validate_orientation(k, o, true);
  if (!ok.ok()) throw Error("leray: " + ok.first());
  const int m = k.dimension();
  SimplicialComplex y1 = barycentric_subdivision(f.source());
  LerayStalks rel = relative_stalks(f, j + m, field, exec);
  LerayStalks fib = fiber_stalks(f, y1, j, field, exec);
  Bisheaf b = Bisheaf::with_zero_vertical(assemble_sheaf(f, rel, field, exec), assemble_cosheaf(f, fib, field, exec));
  for_each_index(k.size(), exec, [&](std::size_t s) {
    OrientationCocycle z = orientation_cocycle(f, s, o, field);
    std::vector<Vector> cols;
    for (const Chain& rep : rel.homology[s].representatives()) {
      Chain capped = cap(y1, f, subdivide_chain(f.source(), y1, rep), m, z);
      if (!fib.homology[s].is_cycle(capped))
        throw Error("leray: the cap product at " + name_of(k, s) + " is not a cycle of the star preimage");
      cols.push_back(fib.homology[s].coordinates(capped));
    }
    b.vertical[s] = from_coordinate_columns(field, fib.homology[s].dim(), cols);
  });
  Report r = validate_bisheaf(b);
  if (!r.ok()) throw Error("leray: construction fault: " + r.first());
  return b;
}

}  // namespace plsys
