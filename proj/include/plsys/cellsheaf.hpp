#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "plsys/exec.hpp"
#include "plsys/report.hpp"
#include "plsys/simplicial.hpp"
#include "plsys/subspace.hpp"

namespace plsys {

/// Direction of the structure maps along a covering relation face < coface.
/// A sheaf restricts F(face) -> F(coface), a matrix dim(coface) x dim(face);
/// a cosheaf extends F(coface) -> F(face), a matrix dim(face) x dim(coface).
enum class Variance { sheaf, cosheaf };

/// A functor on the face poset of a complex, given by a space dimension per
/// simplex and a matrix per covering relation. It may live on an up-closed
/// subset of the simplices (the open part of an etale open); simplices outside
/// the support carry no data at all.
class CellFunctor {
 public:
  CellFunctor() = default;
  /// All dimensions zero. An empty support mask means everything is supported.
  CellFunctor(ComplexPtr base, Field field, Variance variance, std::vector<char> support = {});
  CellFunctor(ComplexPtr base, Field field, Variance variance, const std::vector<std::size_t>& dims,
              std::vector<char> support = {});

  static CellFunctor constant(ComplexPtr base, Field field, Variance variance, std::size_t n,
                              std::vector<char> support = {});

  const SimplicialComplex& base() const { return *base_; }
  const ComplexPtr& base_ptr() const { return base_; }
  Field field() const { return field_; }
  Variance variance() const { return variance_; }

  bool supported(std::size_t s) const { return support_[s] != 0; }
  const std::vector<char>& support() const { return support_; }
  std::size_t dim(std::size_t s) const { return dims_[s]; }
  /// Resets every map touching s to zero of the new shape.
  void set_dim(std::size_t s, std::size_t n);

  /// The structure map of the covering relation face < coface.
  const Matrix& map(std::size_t face, std::size_t coface) const;
  void set_map(std::size_t face, std::size_t coface, Matrix m);
  /// Composite along the saturated chain that adds the missing vertices in
  /// increasing order. face == coface gives the identity.
  Matrix map_between(std::size_t face, std::size_t coface) const;

  /// Covering relations (face, coface) with both ends supported, in
  /// (coface, facet position) order.
  std::vector<std::pair<std::size_t, std::size_t>> relations() const;

 private:
  std::size_t slot(std::size_t face, std::size_t coface) const;
  Matrix zero_map(std::size_t face, std::size_t coface) const;

  ComplexPtr base_;
  Field field_;
  Variance variance_ = Variance::sheaf;
  std::vector<char> support_;
  std::vector<std::size_t> dims_;
  // maps_[coface][k] belongs to the relation facets(coface)[k] < coface.
  std::vector<std::vector<Matrix>> maps_;
};

class CellSheaf : public CellFunctor {
 public:
  CellSheaf() = default;
  explicit CellSheaf(CellFunctor f);
  CellSheaf(ComplexPtr base, Field field, const std::vector<std::size_t>& dims, std::vector<char> support = {})
      : CellFunctor(std::move(base), field, Variance::sheaf, dims, std::move(support)) {}
  static CellSheaf constant(ComplexPtr base, Field field, std::size_t n, std::vector<char> support = {}) {
    return CellSheaf(CellFunctor::constant(std::move(base), field, Variance::sheaf, n, std::move(support)));
  }

  const Matrix& restrict(std::size_t face, std::size_t coface) const { return map(face, coface); }
};

class CellCosheaf : public CellFunctor {
 public:
  CellCosheaf() = default;
  explicit CellCosheaf(CellFunctor f);
  CellCosheaf(ComplexPtr base, Field field, const std::vector<std::size_t>& dims, std::vector<char> support = {})
      : CellFunctor(std::move(base), field, Variance::cosheaf, dims, std::move(support)) {}
  static CellCosheaf constant(ComplexPtr base, Field field, std::size_t n, std::vector<char> support = {}) {
    return CellCosheaf(CellFunctor::constant(std::move(base), field, Variance::cosheaf, n, std::move(support)));
  }

  const Matrix& extend(std::size_t face, std::size_t coface) const { return map(face, coface); }
};

/// Shapes, up-closed support and commutation of every square of covering
/// relations.
Report validate_functor(const CellFunctor& f);
inline Report validate_sheaf(const CellSheaf& f) { return validate_functor(f); }
inline Report validate_cosheaf(const CellCosheaf& f) { return validate_functor(f); }

bool is_episheaf(const CellSheaf& f);
bool is_monocosheaf(const CellCosheaf& f);

struct SheafSubfunctor {
  std::vector<Subspace> component;  // indexed by simplex; meaningless off the support
};

struct CosheafQuotient {
  std::vector<Subspace> kernel;
};

/// Relaxation order. Any order reaches the same fixed point; the seed only
/// exists so tests can shuffle it.
struct SweepOptions {
  Exec exec = Exec::serial;
  unsigned shuffle_seed = 0;
};

SheafSubfunctor epify(const CellSheaf& f, SweepOptions opts = {});
CosheafQuotient monofy(const CellCosheaf& f, SweepOptions opts = {});

/// The sub-episheaf as a sheaf in its own right (canonical bases).
CellSheaf as_sheaf(const CellSheaf& f, const SheafSubfunctor& e);
/// The quotient as a cosheaf (free-column bases).
CellCosheaf as_cosheaf(const CellCosheaf& f, const CosheafQuotient& q);

Report check_subfunctor(const CellSheaf& f, const SheafSubfunctor& e, bool require_epi);
Report check_quotient(const CellCosheaf& f, const CosheafQuotient& q, bool require_mono);

/// A natural transformation source -> target, one matrix per simplex of shape
/// target.dim x source.dim.
struct FunctorMap {
  std::vector<Matrix> component;
};

FunctorMap identity_map(const CellFunctor& f);
FunctorMap zero_map(const CellFunctor& source, const CellFunctor& target);

Report validate_map(const CellFunctor& source, const CellFunctor& target, const FunctorMap& a);

/// Epi(F) -> Epi(G) induced by a sheaf map F -> G, in canonical bases.
FunctorMap induced_epi_map(const CellSheaf& f, const CellSheaf& g, const FunctorMap& a);
/// Mono(F) -> Mono(G) induced by a cosheaf map F -> G.
FunctorMap induced_mono_map(const CellCosheaf& f, const CellCosheaf& g, const FunctorMap& a);

/// The image subfunctor of a sheaf map, inside the target.
SheafSubfunctor image_subfunctor(const CellFunctor& source, const CellFunctor& target, const FunctorMap& a);

}  // namespace plsys
