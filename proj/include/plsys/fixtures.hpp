#pragma once

#include <string>
#include <vector>

#include "plsys/bisheaf.hpp"

// The worked examples: the cone over a hexagon as a disk around the origin,
// the octahedron as the stratified sphere, the three bisheaves read off the
// example diagrams, a few etale opens, and simplicial desk models of the
// example maps for the Leray builder.
namespace plsys::fixtures {

/// Center vertex 0, rim vertices 1..6 in cyclic order.
ComplexPtr cone_hexagon();
inline constexpr int cone_center = 0;

/// Equator 0..3 (vertex 0 is the point S0), 4 = the inner pole on the
/// origin side, 5 = the outer pole.
ComplexPtr octahedron();
inline constexpr int north = 4;
inline constexpr int south = 5;

/// Sheaf 0 at the center and 1 elsewhere; cosheaf Z^2 at the center with
/// 1 -> (1,0) from each spoke.
Bisheaf example1(Field field);
/// Sheaf constant 1; cosheaf 0 at the center.
Bisheaf example2(Field field);
/// The f bisheaf in degree zero on the octahedron.
Bisheaf example3_f(Field field);
/// The h bisheaf: zero restriction out of the origin, zero Phi there.
Bisheaf example3_h(Field field);

struct NamedOpen {
  std::string name;
  EtaleOpen open;
};

/// identity, disk (open star of the center), annulus (the star minus the
/// center) over the cone.
std::vector<NamedOpen> cone_opens(ComplexPtr cone);
/// identity and the open star of the inner pole over the octahedron.
std::vector<NamedOpen> octahedron_opens(ComplexPtr oct);

/// An annulus with inner ring 0..3 and outer ring 4..7.
ComplexPtr annulus(int ring = 4);
/// The connected double cover of annulus(ring), unrolled to rings of 2*ring.
EtaleOpen annulus_double_cover(ComplexPtr base);
/// Rank one, identity transports except -1 across one radial edge.
Bisheaf twisted_annulus(ComplexPtr base, Field field);

/// A simplicial map from a model of the source space onto the base, with
/// a coherent orientation of the base and the homological degree.
struct DeskModel {
  std::string name;
  SimplicialMap map;
  Orientation orientation;
  int degree = 0;
};

/// [0,1] x S^1 x S^1 -> cone, (r, phi, theta) -> (r, theta).
DeskModel example1_desk(ComplexPtr cone);
/// The same with the r = 0 torus coned off.
DeskModel example2_desk(ComplexPtr cone);
/// Torus with two disks glued; B wraps the sphere, the rest goes to the
/// inner pole.
DeskModel example3_h_desk(ComplexPtr oct);
/// The identity of the octahedron in degree zero.
DeskModel identity_desk(ComplexPtr oct);

}  // namespace plsys::fixtures
