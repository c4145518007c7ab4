#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plsys/bisheaf.hpp"

namespace plsys {

/// K, its first and second subdivisions and the dilation Sigma : K^2 -> K^1.
/// Vertices of K^1 are simplex indices of K and vertices of K^2 are simplex
/// indices of K^1, so a simplex of either is an increasing chain.
struct DilationMap {
  ComplexPtr k;
  ComplexPtr k1;
  ComplexPtr k2;
  SimplicialMap sigma;

  /// The largest element of a chain of K^1, as a simplex of K.
  std::size_t top1(std::size_t c) const;
  /// The simplex of K carrying a simplex of K^2.
  std::size_t top2(std::size_t c) const;
  /// sigma_{i0} of a simplex of K^2: the top of its image under Sigma.
  std::size_t anchor(std::size_t c) const;
};

DilationMap dilation_map(ComplexPtr k);
/// Checks, for every simplex t of K, that the simplices sent onto the vertex
/// [t] are exactly cl st [[t]] minus the cl st [[s]] for proper faces s.
Report check_dilation(const DilationMap& d);

/// Value at a chain = value at its top simplex.
Bisheaf subdivide_bisheaf(const Bisheaf& b, ComplexPtr k1);
/// Value at t in K^2 = value of b1 at Sigma(t).
Bisheaf dilation_pullback(const Bisheaf& b1, const DilationMap& d);

struct Dilation {
  DilationMap map;
  Bisheaf once;     // b on K^1
  Bisheaf twice;    // b on K^2
  Bisheaf pulled;   // Sigma^* of `once`, on K^2
  BisheafMap canonical;  // pulled -> twice
};

/// Subdivides b twice, pulls back along Sigma and builds the canonical map
/// whose components are b's maps between the two carriers.
Dilation dilate(const Bisheaf& b);
Dilation dilate(const Bisheaf& b, const DilationMap& d);

struct Shrinking {
  EtaleOpen subdivided;  // (L^2, L0^2) over K^2
  EtaleOpen shrunk;      // L^2 minus the closed star of L0^2
  SimplicialMap inclusion;  // shrunk -> subdivided
};

/// `d` must be the dilation map of e's base.
Shrinking shrink(const EtaleOpen& e, const DilationMap& d);

/// pls(b, e) restricted to the shrunk open, against pls(Sigma^* b, shrunk).
struct ShrinkingCheck {
  bool ok = false;
  std::string why;
  LocalSystem restricted;
  LocalSystem dilated;
};

ShrinkingCheck verify_shrinking_invariance(const Bisheaf& b, const EtaleOpen& e);
ShrinkingCheck verify_shrinking_invariance(const Dilation& dil, const Bisheaf& b, const EtaleOpen& e);

/// Pull a local system on L back to a subdivision-like complex along a
/// carrier map (simplex -> simplex of L, monotone).
LocalSystem restrict_local_system(const LocalSystem& l, ComplexPtr target, const std::vector<char>& support,
                                  const std::vector<std::size_t>& carrier);

struct StabilityWitness {
  /// Simplex of L -> simplex of K^2 whose star contains its star.
  std::vector<std::size_t> assign;
  struct Refinement {
    ComplexPtr complex;
    std::vector<std::size_t> carrier_l;   // simplex of the refinement -> simplex of L
    std::vector<std::size_t> carrier_k2;  // simplex of the refinement -> simplex of K^2
  };
  std::optional<Refinement> refinement;
  /// Per simplex of L: the maps into the two vertical sides of the ladder.
  /// sheaf_fill * sheaf_from = sheaf_to and cosheaf_from * cosheaf_fill =
  /// cosheaf_to. Empty means the ladder of g = f on L = K^2.
  struct Ladder {
    Matrix sheaf_from, sheaf_to, cosheaf_from, cosheaf_to;
  };
  std::vector<Ladder> ladder;

  static StabilityWitness identity(const SimplicialComplex& k2);
};

Report check_witness(const StabilityWitness& w, const SimplicialComplex& l, const SimplicialComplex& k2);

struct StabilitySpan {
  Dilation dilation;   // includes the canonical map Sigma^* B_f -> B_f
  Bisheaf source;      // Sigma^* B_f carried to L by the witness
  BisheafMap to_g;     // source -> B_g
};

/// Throws with the obstructed simplex when a fill is missing or not unique.
StabilitySpan stability_span(const Bisheaf& f, const Bisheaf& g, const StabilityWitness& w);

/// Compare the persistent local systems of the two ends of a span-like map
/// over an etale open of the common base. Without a map only stalk
/// dimensions are compared.
SubquotientResult compare_over(const Bisheaf& coarse, const Bisheaf& fine, const std::optional<BisheafMap>& via,
                               const EtaleOpen& e);

}  // namespace plsys
