#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "plsys/report.hpp"

namespace plsys {

/// Sorted vertex identifiers.
using Simplex = std::vector<int>;

std::string simplex_key(const Simplex& s);
Simplex parse_simplex_key(const std::string& key);

/// A finite abstract simplicial complex. Simplices are numbered by
/// (dimension, lexicographic vertex list); the numbering is part of the
/// contract because the barycentric subdivision uses these indices as its
/// vertex identifiers, which makes every chain a sorted vertex list.
class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  /// Face closure of the given simplices. Vertex lists may be unsorted but
  /// may not repeat a vertex.
  static SimplicialComplex build(const std::vector<Simplex>& maximal);

  std::size_t size() const { return simplices_.size(); }
  bool empty() const { return simplices_.empty(); }
  int dimension() const { return simplices_.empty() ? -1 : static_cast<int>(simplices_.back().size()) - 1; }
  int dim_of(std::size_t i) const { return static_cast<int>(simplices_[i].size()) - 1; }

  const Simplex& simplex(std::size_t i) const { return simplices_[i]; }
  const std::vector<Simplex>& simplices() const { return simplices_; }
  std::optional<std::size_t> find(const Simplex& s) const;
  /// Throws if s is not a simplex.
  std::size_t index(const Simplex& s) const;

  /// facets(i)[k] is the face obtained by deleting vertex k of simplex i.
  const std::vector<std::size_t>& facets(std::size_t i) const { return facets_[i]; }
  /// Simplices having i as a facet, ascending.
  const std::vector<std::size_t>& cofaces(std::size_t i) const { return cofaces_[i]; }

  std::vector<int> vertices() const;
  std::vector<std::size_t> of_dimension(int d) const;
  std::vector<std::size_t> maximal() const;
  bool is_pure() const;
  /// Whether simplex a is a face of simplex b (a <= b).
  bool is_face(std::size_t a, std::size_t b) const;
  long euler_characteristic() const;
  std::vector<std::size_t> f_vector() const;

  friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b) {
    return a.simplices_ == b.simplices_;
  }

 private:
  std::vector<Simplex> simplices_;
  std::map<Simplex, std::size_t> lookup_;
  std::vector<std::vector<std::size_t>> facets_;
  std::vector<std::vector<std::size_t>> cofaces_;
};

using ComplexPtr = std::shared_ptr<const SimplicialComplex>;

inline ComplexPtr share(SimplicialComplex k) { return std::make_shared<const SimplicialComplex>(std::move(k)); }

std::vector<std::size_t> open_star(const SimplicialComplex& k, std::size_t s);
std::vector<std::size_t> closed_star(const SimplicialComplex& k, std::size_t s);
std::vector<std::size_t> link(const SimplicialComplex& k, std::size_t s);
/// All faces of the given simplices, as a sorted index list.
std::vector<std::size_t> face_closure(const SimplicialComplex& k, const std::vector<std::size_t>& which);

/// K^1: one vertex per simplex of K (its index), one simplex per strictly
/// increasing chain.
SimplicialComplex barycentric_subdivision(const SimplicialComplex& k);

/// Simplices of k all of whose vertices lie in vs.
SimplicialComplex full_subcomplex(const SimplicialComplex& k, const std::vector<int>& vs);

/// The subcomplex on a face-closed set of simplex indices.
SimplicialComplex subcomplex(const SimplicialComplex& k, const std::vector<std::size_t>& face_closed);

class SimplicialMap {
 public:
  SimplicialMap() = default;
  /// Throws if some simplex image is not a simplex of the target.
  SimplicialMap(ComplexPtr source, ComplexPtr target, std::map<int, int> vertex_map);

  static SimplicialMap identity(ComplexPtr k);

  const SimplicialComplex& source() const { return *source_; }
  const SimplicialComplex& target() const { return *target_; }
  const ComplexPtr& source_ptr() const { return source_; }
  const ComplexPtr& target_ptr() const { return target_; }
  const std::map<int, int>& vertex_map() const { return vertex_map_; }

  int operator()(int v) const { return vertex_map_.at(v); }
  /// Index in the target of the image of source simplex i.
  std::size_t image(std::size_t i) const { return image_[i]; }
  /// Injective on the vertices of source simplex i.
  bool nondegenerate_on(std::size_t i) const;

 private:
  ComplexPtr source_;
  ComplexPtr target_;
  std::map<int, int> vertex_map_;
  std::vector<std::size_t> image_;
};

SimplicialMap compose(const SimplicialMap& g, const SimplicialMap& f);

/// f^1 : Y^1 -> K^1, sending the barycenter of tau to the barycenter of f(tau).
SimplicialMap subdivide_map(const SimplicialMap& f, ComplexPtr y1, ComplexPtr k1);
SimplicialMap subdivide_map(const SimplicialMap& f);

/// Signs on the top-dimensional simplices; zero elsewhere.
struct Orientation {
  std::vector<int> sign;
};

/// Coherence of o on a pure complex. With allow_boundary, ridges lying in a
/// single top simplex are accepted, otherwise they are reported as a failure
/// of the closed pseudo-manifold condition.
Report validate_orientation(const SimplicialComplex& k, const Orientation& o, bool allow_boundary = false);

/// Propagates +1 from the first top simplex of each component across ridges.
/// Throws if the complex is not orientable or not pure.
Orientation orient_coherently(const SimplicialComplex& k);

}  // namespace plsys
