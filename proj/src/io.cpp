#include "plsys/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace plsys::io {
namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw ParseError(where + ": " + what); }

const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing \"") + key + "\"");
  return *it;
}

void expect_object(const Json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
}

void only_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* a : allowed) known = known || it.key() == a;
    if (!known) fail(where, "unknown key \"" + it.key() + "\"");
  }
}

int as_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

std::size_t as_count(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long>() >= 0)) {
    fail(where, "expected a nonnegative integer");
  }
  return j.get<std::size_t>();
}

std::size_t simplex_at(const SimplicialComplex& k, const std::string& key, const std::string& where) {
  Simplex s;
  try {
    s = parse_simplex_key(key);
  } catch (const std::exception&) {
    fail(where, "bad simplex key \"" + key + "\"");
  }
  auto i = k.find(s);
  if (!i) fail(where, "\"" + key + "\" is not a simplex");
  return *i;
}

std::string key_of(const SimplicialComplex& k, std::size_t s) { return simplex_key(k.simplex(s)); }

std::map<int, int> vertex_map_from(const Json& j, const std::string& where) {
  expect_object(j, where);
  std::map<int, int> m;
  for (auto it = j.begin(); it != j.end(); ++it) {
    int v = 0;
    try {
      std::size_t used = 0;
      v = std::stoi(it.key(), &used);
      if (used != it.key().size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      fail(where, "bad vertex \"" + it.key() + "\"");
    }
    m[v] = as_int(it.value(), where + "." + it.key());
  }
  return m;
}

Json vertex_map_json(const std::map<int, int>& m) {
  Json j = Json::object();
  for (const auto& [v, w] : m) j[std::to_string(v)] = w;
  return j;
}

Json index_map_json(const SimplicialComplex& from, const SimplicialComplex& to, const std::vector<std::size_t>& m) {
  Json j = Json::object();
  for (std::size_t s = 0; s < m.size(); ++s) j[key_of(from, s)] = key_of(to, m[s]);
  return j;
}

std::vector<std::size_t> index_map_from(const Json& j, const SimplicialComplex& from, const SimplicialComplex& to,
                                        const std::string& where) {
  expect_object(j, where);
  std::vector<std::size_t> m(from.size());
  std::vector<char> seen(from.size(), 0);
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string at = where + "[\"" + it.key() + "\"]";
    std::size_t s = simplex_at(from, it.key(), at);
    if (!it.value().is_string()) fail(at, "expected a simplex key");
    m[s] = simplex_at(to, it.value().get<std::string>(), at);
    seen[s] = 1;
  }
  for (std::size_t s = 0; s < from.size(); ++s) {
    if (!seen[s]) fail(where, "no entry for \"" + key_of(from, s) + "\"");
  }
  return m;
}

}  // namespace

std::string canonical(const Json& j) { return j.dump(2) + "\n"; }

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": byte " + std::to_string(e.byte) + ": malformed JSON");
  }
}

void write_file(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path + ": cannot write");
  out << canonical(j);
  if (!out) throw Error(path + ": write failed");
}

Field field_from(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a field tag");
  try {
    return Field::parse(j.get<std::string>());
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(i, c).to_string());
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from(const Json& j, Field field, std::size_t rows, std::size_t cols, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of rows");
  // A matrix with no columns serializes as rows of empty arrays, and one with
  // no rows as []; both are accepted for either shape.
  if (rows * cols == 0 && (j.empty() || j.size() == rows)) {
    for (const auto& r : j) {
      if (!r.is_array() || !r.empty()) fail(where, "expected an empty matrix");
    }
    return Matrix::zero(field, rows, cols);
  }
  if (j.size() != rows) {
    fail(where, "expected " + std::to_string(rows) + " rows, found " + std::to_string(j.size()));
  }
  Matrix m(field, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const Json& r = j[i];
    const std::string at = where + "[" + std::to_string(i) + "]";
    if (!r.is_array() || r.size() != cols) fail(at, "expected " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) {
      const Json& x = r[c];
      try {
        if (x.is_string()) {
          m(i, c) = Scalar::parse(field, x.get<std::string>());
        } else if (x.is_number_integer()) {
          m(i, c) = Scalar(field, x.get<long>());
        } else {
          fail(at, "expected a scalar string");
        }
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        fail(at + "[" + std::to_string(c) + "]", e.what());
      }
    }
  }
  return m;
}

Json complex_json(const SimplicialComplex& k) {
  Json maximal = Json::array();
  for (std::size_t s : k.maximal()) maximal.push_back(k.simplex(s));
  return Json{{"vertices", k.vertices()}, {"maximal", maximal}};
}

ComplexPtr complex_from(const Json& j, const std::string& where) {
  expect_object(j, where);
  only_keys(j, {"vertices", "maximal"}, where);
  const Json& maximal = member(j, "maximal", where);
  if (!maximal.is_array()) fail(where + ".maximal", "expected an array");
  std::vector<Simplex> simplices;
  for (std::size_t i = 0; i < maximal.size(); ++i) {
    const std::string at = where + ".maximal[" + std::to_string(i) + "]";
    if (!maximal[i].is_array() || maximal[i].empty()) fail(at, "expected a nonempty vertex list");
    Simplex s;
    for (const auto& v : maximal[i]) s.push_back(as_int(v, at));
    if (std::set<int>(s.begin(), s.end()).size() != s.size()) fail(at, "repeated vertex");
    simplices.push_back(std::move(s));
  }
  if (j.contains("vertices")) {
    const Json& vs = j["vertices"];
    if (!vs.is_array()) fail(where + ".vertices", "expected an array");
    std::set<int> covered;
    for (const auto& s : simplices) covered.insert(s.begin(), s.end());
    for (const auto& v : vs) {
      int x = as_int(v, where + ".vertices");
      if (!covered.count(x)) simplices.push_back({x});
    }
    std::set<int> listed;
    for (const auto& v : vs) listed.insert(v.get<int>());
    for (int x : covered) {
      if (!listed.count(x)) fail(where + ".vertices", "vertex " + std::to_string(x) + " is not listed");
    }
  }
  return share(SimplicialComplex::build(simplices));
}

Json map_json(const SimplicialMap& f) { return Json{{"vertex_map", vertex_map_json(f.vertex_map())}}; }

SimplicialMap map_from(const Json& j, ComplexPtr source, ComplexPtr target, const std::string& where) {
  expect_object(j, where);
  only_keys(j, {"vertex_map"}, where);
  std::map<int, int> m = vertex_map_from(member(j, "vertex_map", where), where + ".vertex_map");
  for (int v : source->vertices()) {
    if (!m.count(v)) fail(where + ".vertex_map", "vertex " + std::to_string(v) + " is not mapped");
  }
  try {
    return SimplicialMap(std::move(source), std::move(target), std::move(m));
  } catch (const Error& e) {
    fail(where + ".vertex_map", e.what());
  }
}

Json orientation_json(const SimplicialComplex& k, const Orientation& o) {
  Json signs = Json::object();
  for (std::size_t s : k.of_dimension(k.dimension())) signs[key_of(k, s)] = o.sign[s];
  return Json{{"signs", signs}};
}

Orientation orientation_from(const Json& j, const SimplicialComplex& k, const std::string& where) {
  expect_object(j, where);
  only_keys(j, {"signs"}, where);
  const Json& signs = member(j, "signs", where);
  expect_object(signs, where + ".signs");
  Orientation o{std::vector<int>(k.size(), 0)};
  for (auto it = signs.begin(); it != signs.end(); ++it) {
    const std::string at = where + ".signs[\"" + it.key() + "\"]";
    std::size_t s = simplex_at(k, it.key(), at);
    if (k.dim_of(s) != k.dimension()) fail(at, "not a top simplex");
    int v = as_int(it.value(), at);
    if (v != 1 && v != -1) fail(at, "sign must be 1 or -1");
    o.sign[s] = v;
  }
  for (std::size_t s : k.of_dimension(k.dimension())) {
    if (o.sign[s] == 0) fail(where + ".signs", "no sign for \"" + key_of(k, s) + "\"");
  }
  return o;
}

Json functor_json(const CellFunctor& f) {
  const SimplicialComplex& k = f.base();
  Json dims = Json::object();
  for (std::size_t s = 0; s < k.size(); ++s) {
    if (f.supported(s)) dims[key_of(k, s)] = f.dim(s);
  }
  Json maps = Json::object();
  for (const auto& [face, coface] : f.relations()) {
    maps[key_of(k, face) + "|" + key_of(k, coface)] = matrix_json(f.map(face, coface));
  }
  return Json{{"dims", dims}, {"maps", maps}};
}

CellFunctor functor_from(const Json& j, ComplexPtr k, Field field, Variance v, const std::string& where) {
  expect_object(j, where);
  only_keys(j, {"dims", "maps"}, where);
  const Json& dims = member(j, "dims", where);
  expect_object(dims, where + ".dims");
  std::vector<std::size_t> d(k->size(), 0);
  std::vector<char> support(k->size(), 0);
  for (auto it = dims.begin(); it != dims.end(); ++it) {
    const std::string at = where + ".dims[\"" + it.key() + "\"]";
    std::size_t s = simplex_at(*k, it.key(), at);
    d[s] = as_count(it.value(), at);
    support[s] = 1;
  }
  for (std::size_t s = 0; s < k->size(); ++s) {
    if (!support[s]) continue;
    for (std::size_t c : k->cofaces(s)) {
      if (!support[c]) fail(where + ".dims", "support is not up-closed at \"" + key_of(*k, c) + "\"");
    }
  }
  CellFunctor f(k, field, v, d, support);
  const Json empty = Json::object();
  const Json& maps = j.contains("maps") ? j["maps"] : empty;
  expect_object(maps, where + ".maps");
  std::set<std::string> used;
  for (const auto& [face, coface] : f.relations()) {
    const std::string key = key_of(*k, face) + "|" + key_of(*k, coface);
    const std::size_t rows = v == Variance::sheaf ? d[coface] : d[face];
    const std::size_t cols = v == Variance::sheaf ? d[face] : d[coface];
    auto it = maps.find(key);
    if (it == maps.end()) {
      if (rows * cols != 0) fail(where + ".maps", "missing \"" + key + "\"");
      continue;
    }
    used.insert(key);
    f.set_map(face, coface, matrix_from(*it, field, rows, cols, where + ".maps[\"" + key + "\"]"));
  }
  for (auto it = maps.begin(); it != maps.end(); ++it) {
    if (!used.count(it.key())) fail(where + ".maps", "\"" + it.key() + "\" is not a supported covering relation");
  }
  return f;
}

Json bisheaf_json(const Bisheaf& b) {
  const SimplicialComplex& k = b.base();
  Json vertical = Json::object();
  for (std::size_t s = 0; s < k.size(); ++s) {
    if (b.supported(s)) vertical[key_of(k, s)] = matrix_json(b.vertical[s]);
  }
  return Json{{"field", b.field().tag()},
              {"complex", complex_json(k)},
              {"sheaf", functor_json(b.sheaf)},
              {"cosheaf", functor_json(b.cosheaf)},
              {"vertical", vertical}};
}

Bisheaf bisheaf_from(const Json& j) {
  const std::string where = "bisheaf";
  expect_object(j, where);
  only_keys(j, {"field", "complex", "sheaf", "cosheaf", "vertical"}, where);
  Field field = field_from(member(j, "field", where), where + ".field");
  ComplexPtr k = complex_from(member(j, "complex", where), where + ".complex");
  CellSheaf sheaf(functor_from(member(j, "sheaf", where), k, field, Variance::sheaf, where + ".sheaf"));
  CellCosheaf cosheaf(functor_from(member(j, "cosheaf", where), k, field, Variance::cosheaf, where + ".cosheaf"));
  if (sheaf.support() != cosheaf.support()) fail(where, "sheaf and cosheaf supports differ");
  Bisheaf b{std::move(sheaf), std::move(cosheaf), {}};
  const Json& vertical = member(j, "vertical", where);
  expect_object(vertical, where + ".vertical");
  for (std::size_t s = 0; s < k->size(); ++s) {
    const std::size_t rows = b.cosheaf.dim(s);
    const std::size_t cols = b.sheaf.dim(s);
    const std::string key = key_of(*k, s);
    auto it = vertical.find(key);
    if (!b.supported(s) || it == vertical.end()) {
      if (b.supported(s) && rows * cols != 0) fail(where + ".vertical", "missing \"" + key + "\"");
      b.vertical.push_back(Matrix::zero(field, rows, cols));
      continue;
    }
    b.vertical.push_back(matrix_from(*it, field, rows, cols, where + ".vertical[\"" + key + "\"]"));
  }
  for (auto it = vertical.begin(); it != vertical.end(); ++it) {
    std::size_t s = simplex_at(*k, it.key(), where + ".vertical");
    if (!b.supported(s)) fail(where + ".vertical", "\"" + it.key() + "\" is outside the support");
  }
  return b;
}

Json etale_json(const EtaleOpen& e) {
  Json l0 = Json::array();
  for (std::size_t s = 0; s < e.total->size(); ++s) {
    if (e.boundary[s]) l0.push_back(key_of(*e.total, s));
  }
  return Json{{"L", complex_json(*e.total)}, {"L0", l0}, {"psi", vertex_map_json(e.psi.vertex_map())}};
}

EtaleOpen etale_from(const Json& j, ComplexPtr base, const std::string& where) {
  expect_object(j, where);
  only_keys(j, {"L", "L0", "psi"}, where);
  EtaleOpen e;
  e.total = complex_from(member(j, "L", where), where + ".L");
  e.boundary.assign(e.total->size(), 0);
  const Json& l0 = member(j, "L0", where);
  if (!l0.is_array()) fail(where + ".L0", "expected an array of simplex keys");
  for (std::size_t i = 0; i < l0.size(); ++i) {
    const std::string at = where + ".L0[" + std::to_string(i) + "]";
    if (!l0[i].is_string()) fail(at, "expected a simplex key");
    e.boundary[simplex_at(*e.total, l0[i].get<std::string>(), at)] = 1;
  }
  for (std::size_t s = 0; s < e.total->size(); ++s) {
    if (!e.boundary[s]) continue;
    for (std::size_t f : e.total->facets(s)) {
      if (!e.boundary[f]) fail(where + ".L0", "not a subcomplex: missing \"" + key_of(*e.total, f) + "\"");
    }
  }
  e.psi = map_from(Json{{"vertex_map", member(j, "psi", where)}}, e.total, std::move(base), where + ".psi");
  return e;
}

Json subspaces_json(const SimplicialComplex& k, const std::vector<char>& support, const std::vector<Subspace>& s) {
  Json j = Json::object();
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (support.empty() || support[i]) {
      j[key_of(k, i)] = Json{{"ambient", s[i].ambient_dim()}, {"basis", matrix_json(s[i].rows())}};
    }
  }
  return j;
}

Json local_system_json(const LocalSystem& l, const MonodromyReport& r) {
  const SimplicialComplex& k = *l.base;
  Json components = Json::array();
  for (const Component& c : r.components) {
    Json simplices = Json::array();
    for (std::size_t s : c.simplices) simplices.push_back(key_of(k, s));
    Json loops = Json::array();
    for (const Loop& lp : c.loops) {
      Json path = Json::array();
      for (std::size_t s : lp.path) path.push_back(key_of(k, s));
      loops.push_back(Json{{"face", key_of(k, lp.face)},
                           {"coface", key_of(k, lp.coface)},
                           {"path", path},
                           {"matrix", matrix_json(lp.matrix)},
                           {"trace", lp.trace.to_string()},
                           {"determinant", lp.determinant.to_string()},
                           {"rank_minus_identity", lp.rank_minus_identity}});
    }
    components.push_back(Json{{"root", key_of(k, c.root)},
                              {"simplices", simplices},
                              {"stalk_dim", c.stalk_dim},
                              {"loops", loops}});
  }
  return Json{{"field", l.field.tag()}, {"components", components}};
}

Json subquotient_json(const SubquotientResult& r) {
  return Json{{"verdict", to_string(r.verdict)}, {"reason", r.reason}};
}

Json report_json(const Report& r) { return Json{{"ok", r.ok()}, {"problems", r.problems}}; }

Json witness_json(const StabilityWitness& w, const SimplicialComplex& l, const SimplicialComplex& k2) {
  Json j{{"assign", index_map_json(l, k2, w.assign)}};
  if (w.refinement) {
    const auto& r = *w.refinement;
    j["refinement"] = Json{{"complex", complex_json(*r.complex)},
                           {"carrier_l", index_map_json(*r.complex, l, r.carrier_l)},
                           {"carrier_k2", index_map_json(*r.complex, k2, r.carrier_k2)}};
  }
  return j;
}

StabilityWitness witness_from(const Json& j, const SimplicialComplex& l, const SimplicialComplex& k2,
                              const std::string& where) {
  expect_object(j, where);
  only_keys(j, {"assign", "refinement"}, where);
  StabilityWitness w;
  w.assign = index_map_from(member(j, "assign", where), l, k2, where + ".assign");
  if (j.contains("refinement")) {
    const std::string at = where + ".refinement";
    const Json& r = j["refinement"];
    expect_object(r, at);
    only_keys(r, {"complex", "carrier_l", "carrier_k2"}, at);
    StabilityWitness::Refinement ref;
    ref.complex = complex_from(member(r, "complex", at), at + ".complex");
    ref.carrier_l = index_map_from(member(r, "carrier_l", at), *ref.complex, l, at + ".carrier_l");
    ref.carrier_k2 = index_map_from(member(r, "carrier_k2", at), *ref.complex, k2, at + ".carrier_k2");
    w.refinement = std::move(ref);
  }
  return w;
}

}  // namespace plsys::io
