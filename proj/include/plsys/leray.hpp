#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "plsys/bisheaf.hpp"
#include "plsys/exec.hpp"

namespace plsys {

/// S = {tau : sigma <= f(tau)} as a mask over Y. It is up-closed, and its
/// complement C is a subcomplex.
struct StarPreimage {
  std::size_t sigma = 0;
  std::vector<char> inside;

  bool in_s(std::size_t tau) const { return inside[tau] != 0; }
  bool in_c(std::size_t tau) const { return inside[tau] == 0; }
};

StarPreimage star_preimage(const SimplicialMap& f, std::size_t sigma);

/// Sparse chain: (simplex index, coefficient), ascending, no zeros.
using Chain = std::vector<std::pair<std::size_t, Scalar>>;

/// Boundary with the alternating facet signs; faces outside `cells` are
/// dropped (an empty mask keeps everything).
Chain boundary(const SimplicialComplex& k, const Chain& c, const std::vector<char>& cells = {});

/// Homology in one degree of the chain complex spanned by the masked cells,
/// where a boundary keeps only masked faces. A face-closed mask gives the
/// homology of a subcomplex, an up-closed mask relative homology.
class Homology {
 public:
  Homology() = default;
  Homology(const SimplicialComplex& k, const std::vector<char>& cells, int degree, Field field);

  int degree() const { return degree_; }
  std::size_t dim() const { return reps_.size(); }
  const std::vector<Chain>& representatives() const { return reps_; }
  bool is_cycle(const Chain& c) const;
  /// Coordinates of the class of a cycle; throws if c is not a cycle.
  Vector coordinates(const Chain& c) const;

 private:
  struct Pivot {
    Chain column;
    long rep = -1;  // index into reps_, or -1 for a boundary column
  };

  const SimplicialComplex* complex_ = nullptr;
  std::vector<char> cells_;
  int degree_ = 0;
  Field field_;
  std::map<std::size_t, Pivot> table_;  // by lowest-order (largest) index
  std::vector<Chain> reps_;
};

/// The chain map C(Y) -> C(Y^1) sending a simplex to the signed sum of its
/// flags, each flag written with the vertex of its top element last.
Chain subdivide_chain(const SimplicialComplex& y, const SimplicialComplex& y1, const Chain& c);

/// A relative m-cochain on Y^1: the orientation sign on the one flag of K
/// chosen for sigma (smallest top simplex and facets through sigma), pulled
/// back along f^1.
struct OrientationCocycle {
  std::size_t sigma = 0;
  std::vector<std::size_t> flag;  // simplices of K, one per dimension 0..m
  Scalar value;

  /// Value on the m-simplex [w0 .. wm] of Y^1 (simplices of Y).
  Scalar operator()(const SimplicialMap& f, const Simplex& front) const;
};

OrientationCocycle orientation_cocycle(const SimplicialMap& f, std::size_t sigma, const Orientation& o, Field field);

/// [w0 .. wd] cap z = z(w0 .. wm) [wm .. wd].
Chain cap(const SimplicialComplex& y1, const SimplicialMap& f, const Chain& c, int m, const OrientationCocycle& z);

/// H_d(Y, C_sigma) per simplex of K with the maps induced by the pair
/// inclusions.
CellSheaf relative_sheaf(const SimplicialMap& f, int d, Field field, Exec exec = Exec::serial);
/// H_j of the full subcomplex of Y^1 on the barycentres of S_sigma, with the
/// maps induced by inclusion.
CellCosheaf fiber_cosheaf(const SimplicialMap& f, int j, Field field, Exec exec = Exec::serial);

/// Sheaf H_{j+m}(Y, C), cosheaf H_j and the cap-product vertical maps.
/// Throws with the offending square if the assembled data is not a bisheaf.
Bisheaf leray_bisheaf(const SimplicialMap& f, int j, const Orientation& o, Field field, Exec exec = Exec::serial);

}  // namespace plsys
