#include "plsys/subspace.hpp"

namespace plsys {

namespace {

std::string vector_string(const Vector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].to_string();
  return s + ")";
}

}  // namespace

Subspace Subspace::zero(Field field, std::size_t ambient) {
  Subspace s;
  s.rows_ = Matrix(field, 0, ambient);
  return s;
}

Subspace Subspace::full(Field field, std::size_t ambient) {
  Subspace s;
  s.rows_ = Matrix::identity(field, ambient);
  for (std::size_t i = 0; i < ambient; ++i) s.pivots_.push_back(i);
  return s;
}

Subspace Subspace::span_rows(const Matrix& rows) {
  Rref r = rref(rows);
  Subspace s;
  s.pivots_ = r.pivots;
  s.rows_ = Matrix(rows.field(), r.pivots.size(), rows.cols());
  for (std::size_t i = 0; i < r.pivots.size(); ++i)
    for (std::size_t j = 0; j < rows.cols(); ++j) s.rows_(i, j) = r.reduced(i, j);
  return s;
}

Vector Subspace::reduce(const Vector& v) const {
  if (v.size() != ambient_dim()) throw Error("vector length does not match subspace ambient dimension");
  Vector out = v;
  for (std::size_t i = 0; i < pivots_.size(); ++i) {
    Scalar c = out[pivots_[i]];
    if (c.is_zero()) continue;
    for (std::size_t j = pivots_[i]; j < ambient_dim(); ++j) {
      if (!rows_(i, j).is_zero()) out[j] -= c * rows_(i, j);
    }
  }
  return out;
}

bool Subspace::contains(const Vector& v) const {
  for (const auto& x : reduce(v))
    if (!x.is_zero()) return false;
  return true;
}

bool Subspace::contains(const Subspace& s) const {
  if (s.ambient_dim() != ambient_dim()) throw Error("subspace containment: ambient dimensions differ");
  for (std::size_t i = 0; i < s.dim(); ++i)
    if (!contains(s.rows_.row(i))) return false;
  return true;
}

Vector Subspace::coordinates(const Vector& v) const {
  if (!contains(v)) throw Error("vector " + vector_string(v) + " is not in the subspace");
  Vector c;
  c.reserve(dim());
  for (std::size_t p : pivots_) c.push_back(v[p]);
  return c;
}

std::vector<std::size_t> Subspace::free_columns() const {
  std::vector<std::size_t> out;
  std::size_t k = 0;
  for (std::size_t j = 0; j < ambient_dim(); ++j) {
    if (k < pivots_.size() && pivots_[k] == j) {
      ++k;
    } else {
      out.push_back(j);
    }
  }
  return out;
}

Matrix Subspace::projection() const {
  const auto free = free_columns();
  const std::size_t n = ambient_dim();
  Matrix p(field(), free.size(), n);
  // e_j reduces to itself at a free column and to e_{p_i} - row_i at a pivot.
  for (std::size_t k = 0; k < free.size(); ++k) p(k, free[k]) = Scalar::one(field());
  for (std::size_t i = 0; i < pivots_.size(); ++i)
    for (std::size_t k = 0; k < free.size(); ++k) p(k, pivots_[i]) = -rows_(i, free[k]);
  return p;
}

Matrix Subspace::annihilator() const {
  // The rows of kernel(rows_) pair to zero with every basis row.
  return kernel_basis(rows_).rows();
}

Subspace image_basis(const Matrix& m) { return Subspace::span_columns(m); }

Subspace kernel_basis(const Matrix& m) {
  Rref r = rref(m);
  const std::size_t n = m.cols();
  std::vector<Vector> vecs;
  std::size_t k = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (k < r.pivots.size() && r.pivots[k] == j) {
      ++k;
      continue;
    }
    Vector v(n, Scalar::zero(m.field()));
    v[j] = Scalar::one(m.field());
    for (std::size_t i = 0; i < r.pivots.size(); ++i) v[r.pivots[i]] = -r.reduced(i, j);
    vecs.push_back(std::move(v));
  }
  Subspace s = Subspace::span_rows(Matrix::from_rows(m.field(), n, vecs));
  if (s.dim() + r.pivots.size() != n) throw Error("rank-nullity violated in kernel computation");
  return s;
}

Subspace preimage(const Matrix& m, const Subspace& s) {
  if (s.ambient_dim() != m.rows()) {
    throw Error("preimage: subspace lives in dimension " + std::to_string(s.ambient_dim()) + " but the map has " +
                std::to_string(m.rows()) + " rows");
  }
  return kernel_basis(s.annihilator() * m);
}

Subspace push_forward(const Matrix& m, const Subspace& s) {
  if (s.ambient_dim() != m.cols()) throw Error("push_forward: dimension mismatch");
  return image_basis(m * s.basis());
}

Subspace meet(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw Error("meet: ambient dimensions differ");
  if (a.is_full()) return b;
  if (b.is_full()) return a;
  return kernel_basis(a.annihilator().stack_below(b.annihilator()));
}

Subspace join(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw Error("join: ambient dimensions differ");
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return Subspace::span_rows(a.rows().stack_below(b.rows()));
}

std::pair<Subspace, Subspace> meet_join(const Subspace& a, const Subspace& b) {
  Subspace m = meet(a, b);
  Subspace j = join(a, b);
  if (a.dim() + b.dim() != m.dim() + j.dim()) throw Error("modular dimension law violated");
  return {std::move(m), std::move(j)};
}

Matrix induced_map(const Matrix& m, const Subspace& dom, const Subspace& cod, InducedMode mode) {
  if (dom.ambient_dim() != m.cols() || cod.ambient_dim() != m.rows()) {
    throw Error("induced_map: subspace dimensions do not match the map shape");
  }
  for (std::size_t i = 0; i < dom.dim(); ++i) {
    Vector image = m.apply(dom.rows().row(i));
    if (!cod.contains(image)) {
      throw Error("induced_map: basis vector " + vector_string(dom.rows().row(i)) + " maps to " +
                  vector_string(image) + ", outside the target subspace");
    }
  }
  if (mode == InducedMode::sub) {
    Matrix out(m.field(), cod.dim(), dom.dim());
    for (std::size_t j = 0; j < dom.dim(); ++j) {
      Vector c = cod.coordinates(m.apply(dom.rows().row(j)));
      for (std::size_t i = 0; i < cod.dim(); ++i) out(i, j) = c[i];
    }
    return out;
  }
  const auto dom_free = dom.free_columns();
  const auto cod_free = cod.free_columns();
  Matrix out(m.field(), cod_free.size(), dom_free.size());
  for (std::size_t j = 0; j < dom_free.size(); ++j) {
    Vector r = cod.reduce(m.column(dom_free[j]));
    for (std::size_t i = 0; i < cod_free.size(); ++i) out(i, j) = r[cod_free[i]];
  }
  return out;
}

}  // namespace plsys
