#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "plsys/report.hpp"
#include "plsys/simplicial.hpp"

namespace plsys {

/// A simplicial pair (L, L0) with a simplicial map psi : L -> K. The open part
/// L - L0 is what the etale open covers.
struct EtaleOpen {
  ComplexPtr total;            // L
  std::vector<char> boundary;  // L0, as a mask over L
  SimplicialMap psi;           // L -> K

  const SimplicialComplex& base() const { return psi.target(); }
  /// Mask of L - L0.
  std::vector<char> open_part() const;

  static EtaleOpen identity(ComplexPtr k);
  /// L = closure of the up-closed set u, L0 = L - u, psi the inclusion. The
  /// vertex identifiers of L are those of K.
  static EtaleOpen from_open_set(ComplexPtr k, const std::vector<std::size_t>& u);
};

/// Combinatorial local-homeomorphism test: nondegeneracy, the ridge counts,
/// and injectivity (bijectivity away from L0) of psi on open stars.
Report validate_etale(const EtaleOpen& e);

/// Raw etale data: cells labelled by simplices of K with a face relation.
/// Each relation (face, coface) must drop dimension by exactly one and be
/// compatible with the labels.
struct RawEtale {
  std::vector<std::size_t> label;                           // cell -> simplex of K
  std::vector<std::pair<std::size_t, std::size_t>> faces;  // (face cell, coface cell)
};

struct UniversalCompletion {
  EtaleOpen open;
  std::vector<std::size_t> cell;  // raw cell -> simplex of open.total
};

/// The universal constructible etale open through which the raw data factors:
/// every cell is completed to a copy of its simplex, then copies are glued
/// along parallel zigzags of face relations with equal images. Throws if the
/// labels are not dimension-compatible or the result does not validate.
UniversalCompletion universal_completion(const RawEtale& r, ComplexPtr base);
inline EtaleOpen universal_constructible(const RawEtale& r, ComplexPtr base) {
  return universal_completion(r, std::move(base)).open;
}

/// Whether a map from the raw cells into the open part of a constructible
/// etale open (commuting with labels and faces) factors through u by a
/// simplicial map. Returns the induced vertex map or a report.
Report universal_factor(const RawEtale& r, const UniversalCompletion& u, const EtaleOpen& target,
                        const std::vector<std::size_t>& cell_to_target, std::map<int, int>* factor = nullptr);

/// Checks b.psi o mu = a.psi vertexwise and that mu carries a's open part
/// into b's open part.
Report compose_etale(const SimplicialMap& mu, const EtaleOpen& a, const EtaleOpen& b);

}  // namespace plsys
