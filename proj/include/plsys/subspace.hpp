#pragma once

#include <utility>

#include "plsys/matrix.hpp"

namespace plsys {

/// A linear subspace of F^n, stored as the reduced row echelon form of a
/// spanning set. Two subspaces are equal exactly when their stored forms are.
class Subspace {
 public:
  Subspace() = default;

  static Subspace zero(Field field, std::size_t ambient);
  static Subspace full(Field field, std::size_t ambient);
  static Subspace span_rows(const Matrix& rows);
  static Subspace span_columns(const Matrix& cols) { return span_rows(cols.transpose()); }

  Field field() const { return rows_.field(); }
  std::size_t ambient_dim() const { return rows_.cols(); }
  std::size_t dim() const { return rows_.rows(); }
  bool is_zero() const { return dim() == 0; }
  bool is_full() const { return dim() == ambient_dim(); }

  /// Canonical basis, one vector per row.
  const Matrix& rows() const { return rows_; }
  /// The same basis as columns; this is the inclusion map into F^n.
  Matrix basis() const { return rows_.transpose(); }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  bool contains(const Vector& v) const;
  bool contains(const Subspace& s) const;
  /// Coordinates of v in the canonical basis; throws if v is not in the span.
  Vector coordinates(const Vector& v) const;
  /// v minus its component along the canonical basis (zero at every pivot).
  Vector reduce(const Vector& v) const;
  /// Columns of F^n indexing the quotient F^n / this.
  std::vector<std::size_t> free_columns() const;
  /// Matrix of the projection F^n -> F^n / this in free-column coordinates.
  Matrix projection() const;
  /// Rows spanning the annihilator: v is in this iff annihilator() * v = 0.
  Matrix annihilator() const;

  friend bool operator==(const Subspace& a, const Subspace& b) { return a.rows_ == b.rows_; }

 private:
  Matrix rows_;
  std::vector<std::size_t> pivots_;
};

Subspace image_basis(const Matrix& m);
Subspace kernel_basis(const Matrix& m);
Subspace preimage(const Matrix& m, const Subspace& s);
/// Image of a subspace under m.
Subspace push_forward(const Matrix& m, const Subspace& s);
std::pair<Subspace, Subspace> meet_join(const Subspace& a, const Subspace& b);
Subspace meet(const Subspace& a, const Subspace& b);
Subspace join(const Subspace& a, const Subspace& b);

enum class InducedMode { sub, quotient };

/// sub: the restriction of m to dom -> cod, in the canonical bases.
/// quotient: the map F^n/dom -> F^m/cod in free-column coordinates.
Matrix induced_map(const Matrix& m, const Subspace& dom, const Subspace& cod, InducedMode mode);

}  // namespace plsys
