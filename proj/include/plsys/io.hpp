#pragma once

#include <string>

#include "json.hpp"
#include "plsys/bisheaf.hpp"
#include "plsys/dilation.hpp"

namespace plsys::io {

using Json = nlohmann::json;

/// Malformed input. The message starts with the location inside the file.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Sorted keys, two-space indent, trailing newline.
std::string canonical(const Json& j);
Json read_file(const std::string& path);
void write_file(const std::string& path, const Json& j);

Field field_from(const Json& j, const std::string& where);

/// Rows of exact scalars as strings.
Json matrix_json(const Matrix& m);
Matrix matrix_from(const Json& j, Field field, std::size_t rows, std::size_t cols, const std::string& where);

/// {"vertices": [...], "maximal": [[...], ...]}
Json complex_json(const SimplicialComplex& k);
ComplexPtr complex_from(const Json& j, const std::string& where);

/// {"vertex_map": {"v": w, ...}}
Json map_json(const SimplicialMap& f);
SimplicialMap map_from(const Json& j, ComplexPtr source, ComplexPtr target, const std::string& where);

/// {"signs": {"v0,v1,v2": 1, ...}} over the top simplices.
Json orientation_json(const SimplicialComplex& k, const Orientation& o);
Orientation orientation_from(const Json& j, const SimplicialComplex& k, const std::string& where);

/// {"dims": {"key": n}, "maps": {"face|coface": rows}}. Only supported
/// simplices appear; a sheaf map is dim(coface) x dim(face), a cosheaf map
/// dim(face) x dim(coface).
Json functor_json(const CellFunctor& f);
CellFunctor functor_from(const Json& j, ComplexPtr k, Field field, Variance v, const std::string& where);

/// {"field", "complex", "sheaf", "cosheaf", "vertical": {"key": rows}}
Json bisheaf_json(const Bisheaf& b);
Bisheaf bisheaf_from(const Json& j);

/// {"L": complex, "L0": [keys], "psi": {vertex map}}
Json etale_json(const EtaleOpen& e);
EtaleOpen etale_from(const Json& j, ComplexPtr base, const std::string& where);

/// Subspace families (epify, monofy): {"key": rows of the canonical basis}.
Json subspaces_json(const SimplicialComplex& k, const std::vector<char>& support, const std::vector<Subspace>& s);

/// {"components": [{"root", "simplices", "stalk_dim", "loops": [...]}]};
/// zero-stalk components are listed explicitly.
Json local_system_json(const LocalSystem& l, const MonodromyReport& r);
Json subquotient_json(const SubquotientResult& r);
Json report_json(const Report& r);

/// {"assign": {"tau": "k2 simplex"}, "refinement": {"complex", "carrier_l",
/// "carrier_k2"}}; the refinement is optional.
Json witness_json(const StabilityWitness& w, const SimplicialComplex& l, const SimplicialComplex& k2);
StabilityWitness witness_from(const Json& j, const SimplicialComplex& l, const SimplicialComplex& k2,
                              const std::string& where);

}  // namespace plsys::io
