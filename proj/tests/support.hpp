#pragma once

#include <algorithm>
#include <random>

#include "plsys/bisheaf.hpp"
#include "plsys/cellsheaf.hpp"

namespace testing_support {

// A uniformly chosen small-integer combination of a basis of all natural
// transformations source -> target.
inline plsys::FunctorMap random_natural_map(const plsys::CellFunctor& source, const plsys::CellFunctor& target,
                                            std::mt19937& rng) {
  using namespace plsys;
  const SimplicialComplex& k = source.base();
  const Field f = source.field();
  std::vector<std::size_t> offset(k.size() + 1, 0);
  for (std::size_t s = 0; s < k.size(); ++s)
    offset[s + 1] = offset[s] + (source.supported(s) ? target.dim(s) * source.dim(s) : 0);
  const std::size_t unknowns = offset.back();
  auto var = [&](std::size_t s, std::size_t i, std::size_t j) { return offset[s] + i * source.dim(s) + j; };

  std::vector<Vector> rows;
  for (auto [s, t] : source.relations()) {
    const bool sheaf = source.variance() == Variance::sheaf;
    // sheaf:   a_t R_src - R_tgt a_s = 0, shape tgt.dim(t) x src.dim(s)
    // cosheaf: a_s E_src - E_tgt a_t = 0, shape tgt.dim(s) x src.dim(t)
    const Matrix& ms = source.map(s, t);
    const Matrix& mt = target.map(s, t);
    const std::size_t left = sheaf ? t : s, right = sheaf ? s : t;
    for (std::size_t i = 0; i < target.dim(left); ++i)
      for (std::size_t j = 0; j < source.dim(right); ++j) {
        Vector row(unknowns, Scalar::zero(f));
        for (std::size_t m = 0; m < source.dim(left); ++m) row[var(left, i, m)] += ms(m, j);
        for (std::size_t m = 0; m < target.dim(right); ++m) row[var(right, m, j)] -= mt(i, m);
        rows.push_back(std::move(row));
      }
  }
  Subspace sol = rows.empty() ? Subspace::full(f, unknowns) : kernel_basis(Matrix::from_rows(f, unknowns, rows));
  std::uniform_int_distribution<long> coef(-2, 2);
  Vector x(unknowns, Scalar::zero(f));
  for (std::size_t b = 0; b < sol.dim(); ++b) {
    Scalar c(f, coef(rng));
    for (std::size_t u = 0; u < unknowns; ++u) x[u] += c * sol.rows()(b, u);
  }
  FunctorMap a;
  for (std::size_t s = 0; s < k.size(); ++s) {
    Matrix m(f, target.dim(s), source.dim(s));
    if (source.supported(s))
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = x[var(s, i, j)];
    a.component.push_back(std::move(m));
  }
  return a;
}

// Small random complex on at most `vertices` vertices: a few random
// triangles and edges, never empty.
inline plsys::ComplexPtr random_complex(std::mt19937& rng, int vertices) {
  std::uniform_int_distribution<int> vert(0, vertices - 1), shape(0, 2), count(1, 4);
  std::vector<plsys::Simplex> top;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    plsys::Simplex s;
    const int size = 1 + std::min(shape(rng), vertices - 1);
    while (static_cast<int>(s.size()) < size) {
      int v = vert(rng);
      if (std::find(s.begin(), s.end(), v) == s.end()) s.push_back(v);
    }
    top.push_back(std::move(s));
  }
  return plsys::share(plsys::SimplicialComplex::build(top));
}

// Full support half of the time, otherwise the open star of one or two
// random simplices.
inline std::vector<char> random_open(const plsys::SimplicialComplex& k, std::mt19937& rng) {
  std::vector<char> mask(k.size(), 1);
  if (rng() % 2 == 0) return mask;
  std::fill(mask.begin(), mask.end(), 0);
  std::uniform_int_distribution<std::size_t> pick(0, k.size() - 1);
  const int stars = 1 + static_cast<int>(rng() % 2);
  for (int i = 0; i < stars; ++i)
    for (std::size_t t : plsys::open_star(k, pick(rng))) mask[t] = 1;
  return mask;
}

// All vertical maps Phi satisfying the bisheaf squares for the given sheaf
// and cosheaf, and a random small-integer combination of them.
inline std::vector<plsys::Matrix> random_vertical(const plsys::CellSheaf& f, const plsys::CellCosheaf& g,
                                                  std::mt19937& rng) {
  using namespace plsys;
  const SimplicialComplex& k = f.base();
  const Field field = f.field();
  std::vector<std::size_t> offset(k.size() + 1, 0);
  for (std::size_t s = 0; s < k.size(); ++s)
    offset[s + 1] = offset[s] + (f.supported(s) ? g.dim(s) * f.dim(s) : 0);
  const std::size_t unknowns = offset.back();
  auto var = [&](std::size_t s, std::size_t i, std::size_t j) { return offset[s] + i * f.dim(s) + j; };
  std::vector<Vector> rows;
  for (auto [s, t] : f.relations()) {
    const Matrix& r = f.map(s, t);
    const Matrix& e = g.map(s, t);
    for (std::size_t i = 0; i < g.dim(s); ++i)
      for (std::size_t j = 0; j < f.dim(s); ++j) {
        Vector row(unknowns, Scalar::zero(field));
        row[var(s, i, j)] += Scalar::one(field);
        for (std::size_t m = 0; m < g.dim(t); ++m)
          for (std::size_t n = 0; n < f.dim(t); ++n) row[var(t, m, n)] -= e(i, m) * r(n, j);
        rows.push_back(std::move(row));
      }
  }
  Subspace sol = rows.empty() ? Subspace::full(field, unknowns) : kernel_basis(Matrix::from_rows(field, unknowns, rows));
  std::uniform_int_distribution<long> coef(-2, 2);
  Vector x(unknowns, Scalar::zero(field));
  for (std::size_t b = 0; b < sol.dim(); ++b) {
    Scalar c(field, coef(rng));
    for (std::size_t u = 0; u < unknowns; ++u) x[u] += c * sol.rows()(b, u);
  }
  std::vector<Matrix> phi;
  for (std::size_t s = 0; s < k.size(); ++s) {
    Matrix m(field, g.dim(s), f.dim(s));
    if (f.supported(s))
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = x[var(s, i, j)];
    phi.push_back(std::move(m));
  }
  return phi;
}

// F(s) = A_s / B_s with A, B increasing along faces and G(s) = C_s / D_s with
// C, D decreasing, all inside F^ambient; the maps are induced by identity.
// Restrictions need not be onto and extensions need not be injective, so
// isofy has real work to do.
inline plsys::Bisheaf random_bisheaf(std::mt19937& rng, plsys::Field field, plsys::ComplexPtr k,
                                     std::vector<char> support, std::size_t ambient = 3) {
  using namespace plsys;
  const std::size_t n = k->size();
  std::uniform_int_distribution<long> entry(-1, 1);
  std::uniform_int_distribution<int> gens(0, 1);
  auto random_span = [&](int count) {
    std::vector<Vector> rows;
    for (int i = 0; i < count; ++i) {
      Vector v(ambient, Scalar::zero(field));
      for (auto& x : v) x = Scalar(field, entry(rng));
      rows.push_back(v);
    }
    return rows.empty() ? Subspace::zero(field, ambient) : Subspace::span_rows(Matrix::from_rows(field, ambient, rows));
  };
  std::vector<Subspace> own_a(n), own_b(n), own_c(n), own_d(n);
  for (std::size_t s = 0; s < n; ++s) {
    own_a[s] = random_span(gens(rng) + (k->dim_of(s) == 0 ? 1 : 0));
    own_b[s] = random_span(gens(rng));
    own_c[s] = random_span(gens(rng) + (k->cofaces(s).empty() ? 1 : 0));
    own_d[s] = random_span(gens(rng));
  }
  std::vector<Subspace> a(n), b(n), c(n), d(n);
  for (std::size_t s = 0; s < n; ++s) {
    a[s] = b[s] = c[s] = d[s] = Subspace::zero(field, ambient);
    for (std::size_t t = 0; t < n; ++t) {
      if (k->is_face(t, s)) {
        a[s] = join(a[s], own_a[t]);
        b[s] = join(b[s], own_b[t]);
      }
      if (k->is_face(s, t)) {
        c[s] = join(c[s], own_c[t]);
        d[s] = join(d[s], own_d[t]);
      }
    }
    b[s] = meet(b[s], a[s]);
    d[s] = meet(d[s], c[s]);
  }
  // Subquotient coordinates: Y inside X as a subspace of F^{dim X}.
  auto inside = [&](const Subspace& x, const Subspace& y) {
    std::vector<Vector> rows;
    for (std::size_t i = 0; i < y.dim(); ++i) rows.push_back(x.coordinates(y.rows().row(i)));
    return rows.empty() ? Subspace::zero(field, x.dim()) : Subspace::span_rows(Matrix::from_rows(field, x.dim(), rows));
  };
  std::vector<Subspace> bc(n), dc(n);
  std::vector<std::size_t> fd(n, 0), gd(n, 0);
  for (std::size_t s = 0; s < n; ++s) {
    bc[s] = inside(a[s], b[s]);
    dc[s] = inside(c[s], d[s]);
    if (support[s]) {
      fd[s] = a[s].dim() - b[s].dim();
      gd[s] = c[s].dim() - d[s].dim();
    }
  }
  CellSheaf f(k, field, fd, support);
  CellCosheaf g(k, field, gd, support);
  const Matrix id = Matrix::identity(field, ambient);
  for (auto [s, t] : f.relations()) {
    Matrix fa = induced_map(id, a[s], a[t], InducedMode::sub);
    f.set_map(s, t, induced_map(fa, bc[s], bc[t], InducedMode::quotient));
    Matrix gc = induced_map(id, c[t], c[s], InducedMode::sub);
    g.set_map(s, t, induced_map(gc, dc[t], dc[s], InducedMode::quotient));
  }
  std::vector<Matrix> phi = random_vertical(f, g, rng);
  return Bisheaf{std::move(f), std::move(g), std::move(phi)};
}

// Rank one with restriction u_t / u_s and extension w_s / w_t for random
// nonzero gauges u, w.
inline plsys::Bisheaf random_rank_one(std::mt19937& rng, plsys::Field field, plsys::ComplexPtr k,
                                      std::vector<char> support) {
  using namespace plsys;
  const std::size_t n = k->size();
  std::uniform_int_distribution<long> pick(1, 4);
  std::vector<Scalar> u, w;
  for (std::size_t s = 0; s < n; ++s) {
    Scalar x(field, pick(rng)), y(field, pick(rng));
    if (x.is_zero()) x = Scalar::one(field);
    if (y.is_zero()) y = Scalar::one(field);
    u.push_back(rng() % 2 ? x : -x);
    w.push_back(y);
  }
  Bisheaf b = Bisheaf::constant(k, field, 1, support);
  for (auto [s, t] : b.sheaf.relations()) {
    Matrix r(field, 1, 1), e(field, 1, 1);
    r(0, 0) = u[t] / u[s];
    e(0, 0) = w[s] / w[t];
    b.sheaf.set_map(s, t, r);
    b.cosheaf.set_map(s, t, e);
  }
  b.vertical = random_vertical(b.sheaf, b.cosheaf, rng);
  return b;
}

}  // namespace testing_support
