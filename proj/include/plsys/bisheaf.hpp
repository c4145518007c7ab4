#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plsys/cellsheaf.hpp"
#include "plsys/etale.hpp"

namespace plsys {

/// A sheaf, a cosheaf on the same base and support, and a vertical map
/// Phi_s : sheaf(s) -> cosheaf(s) per simplex with
/// Phi_s = extend(s, t) * Phi_t * restrict(s, t) on every covering relation.
struct Bisheaf {
  CellSheaf sheaf;
  CellCosheaf cosheaf;
  std::vector<Matrix> vertical;

  const SimplicialComplex& base() const { return sheaf.base(); }
  const ComplexPtr& base_ptr() const { return sheaf.base_ptr(); }
  Field field() const { return sheaf.field(); }
  bool supported(std::size_t s) const { return sheaf.supported(s); }

  /// Zero vertical maps.
  static Bisheaf with_zero_vertical(CellSheaf sheaf, CellCosheaf cosheaf);
  static Bisheaf constant(ComplexPtr base, Field field, std::size_t n, std::vector<char> support = {});
};

Report validate_bisheaf(const Bisheaf& b);

struct IsoBisheaf {
  Bisheaf bisheaf;
  SheafSubfunctor epi;   // inside the original sheaf
  CosheafQuotient mono;  // kernels inside the original cosheaf
};

IsoBisheaf isofy(const Bisheaf& b, SweepOptions opts = {});
/// Episheaf and monocosheaf checks plus bisheaf validation.
Report validate_isobisheaf(const Bisheaf& b);

/// Forward sheaf map F -> G and backward cosheaf map G -> F, with
/// Phi_F = cosheaf * Phi_G * sheaf at every simplex.
struct BisheafMap {
  FunctorMap sheaf;
  FunctorMap cosheaf;
};

Report validate_bisheaf_map(const Bisheaf& f, const Bisheaf& g, const BisheafMap& a);
BisheafMap identity_bisheaf_map(const Bisheaf& b);
/// The map Iso(F) -> Iso(G) induced by a map F -> G.
BisheafMap induced_iso_map(const Bisheaf& f, const IsoBisheaf& fi, const Bisheaf& g, const IsoBisheaf& gi,
                           const BisheafMap& a);

/// Stalks and invertible transports on an up-closed set of simplices.
/// transport[(s, t)] for s < t covering maps stalk(t) -> stalk(s).
struct LocalSystem {
  ComplexPtr base;
  Field field;
  std::vector<char> support;
  std::vector<std::size_t> stalk_dim;
  std::map<std::pair<std::size_t, std::size_t>, Matrix> transport;
  /// For image local systems: the stalk as a subspace of the cosheaf value.
  std::vector<Subspace> stalk_space;
};

/// stalk(coface) -> stalk(face) along any saturated chain.
Matrix transport_between(const LocalSystem& l, std::size_t face, std::size_t coface);

/// Invertible transports and commuting diamonds.
Report validate_local_system(const LocalSystem& l);

LocalSystem image_local_system(const IsoBisheaf& i);

/// Value at s is the value of b at psi(s); maps are composites along psi of
/// b's maps (psi may collapse a covering relation to an identity). The
/// result lives on the given up-closed support of psi's source.
Bisheaf pullback_along(const Bisheaf& b, const SimplicialMap& psi, std::vector<char> support);
Bisheaf pullback_bisheaf(const Bisheaf& b, const EtaleOpen& a);
/// Components of a map between two bisheaves on K, read at psi(s); fp and gp
/// are the pulled-back source and target.
BisheafMap pullback_bisheaf_map(const BisheafMap& a, const Bisheaf& fp, const Bisheaf& gp, const SimplicialMap& psi);

/// image_local_system(isofy(pullback_bisheaf(b, a))).
LocalSystem pls(const Bisheaf& b, const EtaleOpen& a, SweepOptions opts = {});
/// pls over many etale opens; the parallel path runs them concurrently.
std::vector<LocalSystem> pls_many(const Bisheaf& b, const std::vector<EtaleOpen>& opens, Exec exec);

struct Loop {
  std::size_t face = 0;
  std::size_t coface = 0;
  /// The closed vertex path root -> ... -> coface -> face -> ... -> root.
  std::vector<std::size_t> path;
  Matrix matrix;
  Scalar trace;
  Scalar determinant;
  std::size_t rank_minus_identity = 0;
};

struct Component {
  std::size_t root = 0;
  std::vector<std::size_t> simplices;
  std::size_t stalk_dim = 0;
  std::vector<Loop> loops;
};

struct MonodromyReport {
  std::vector<Component> components;
};

enum class TreeRoot { smallest, largest };

/// Breadth-first spanning tree of the covering-relation graph of each
/// component, one loop per non-tree edge. Loop matrices act on the stalk at
/// the root. Zero-stalk components are listed with no loops.
MonodromyReport monodromy_report(const LocalSystem& l, TreeRoot root = TreeRoot::smallest);
/// Composite transport around a closed path of adjacent simplices, acting on
/// the stalk at path.front().
Matrix holonomy(const LocalSystem& l, const std::vector<std::size_t>& closed_path);

/// Same stalk dimensions per component and same trace, determinant and
/// rank(L - I) loop by loop. Both reports must come from the same graph.
bool equivalent(const MonodromyReport& a, const MonodromyReport& b, std::string* why = nullptr);

enum class Verdict { isomorphic, subquotient, not_subquotient };
std::string to_string(Verdict v);

struct SubquotientResult {
  Verdict verdict = Verdict::not_subquotient;
  std::string reason;
  std::vector<Subspace> intermediate;  // I, inside the fine cosheaf value
  std::vector<Subspace> kernel;        // K = I meet ker(cosheaf map)
};

/// Decides whether the image local system of `coarse` is a quotient of a
/// sublocal system of that of `fine`. With a map coarse -> fine (between the
/// isobisheaves) the witness I, K is computed and checked; the map must
/// satisfy the bisheaf square or an Error is thrown.
SubquotientResult compare_subquotient(const IsoBisheaf& coarse, const IsoBisheaf& fine,
                                      const std::optional<BisheafMap>& via);

}  // namespace plsys
