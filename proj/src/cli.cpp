#include "plsys/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>

#include "CLI11.hpp"
#include "plsys/fixtures.hpp"
#include "plsys/io.hpp"
#include "plsys/leray.hpp"

namespace plsys::cli {
namespace {

namespace fs = std::filesystem;
namespace fx = plsys::fixtures;
using io::Json;

// Raised for a failed validation or verdict after the report is written.
struct Failed {
  std::string what;
};

struct Options {
  std::string field;
  std::string out;
  bool check = false;
  bool parallel = false;
  int threads = 0;
  unsigned seed = 0;

  std::string bisheaf, complex, orientation, witness, f, g, y, k, map, desk, which = "all", dir = ".";
  std::vector<std::string> etale;
  int degree = -1;
};

Field default_field(const Options& o) {
  return io::field_from(Json(o.field.empty() ? std::string("Q") : o.field), "--field");
}

Exec exec_of(const Options& o) { return o.parallel ? Exec::parallel : Exec::serial; }

Bisheaf load_bisheaf(const std::string& path) {
  Json j = io::read_file(path);
  try {
    return io::bisheaf_from(j);
  } catch (const io::ParseError& e) {
    throw io::ParseError(path + ": " + e.what());
  }
}

template <class T>
T with_path(const std::string& path, const std::function<T(const Json&)>& parse) {
  Json j = io::read_file(path);
  try {
    return parse(j);
  } catch (const io::ParseError& e) {
    throw io::ParseError(path + ": " + e.what());
  }
}

EtaleOpen load_etale(const std::string& path, const ComplexPtr& base) {
  return with_path<EtaleOpen>(path, [&](const Json& j) { return io::etale_from(j, base, "etale"); });
}

ComplexPtr load_complex(const std::string& path) {
  return with_path<ComplexPtr>(path, [](const Json& j) { return io::complex_from(j, "complex"); });
}

Json local_system_report(const LocalSystem& l) { return io::local_system_json(l, monodromy_report(l)); }

void require(const Report& r, const std::string& what, std::ostream& err) {
  if (r.ok()) return;
  for (const auto& p : r.problems) err << what << ": " << p << "\n";
  throw Failed{what + ": " + r.first()};
}

Json cmd_validate(const Options& o, std::ostream& err) {
  Json out = Json::object();
  bool failed = false;
  auto note = [&](const std::string& name, const Report& r) {
    out[name] = io::report_json(r);
    for (const auto& p : r.problems) err << name << ": " << p << "\n";
    failed = failed || !r.ok();
  };
  ComplexPtr base;
  if (!o.bisheaf.empty()) {
    Bisheaf b = load_bisheaf(o.bisheaf);
    base = b.base_ptr();
    note("bisheaf", validate_bisheaf(b));
    if (o.check) note("isobisheaf", validate_isobisheaf(isofy(b).bisheaf));
  }
  if (!o.complex.empty()) base = load_complex(o.complex);
  if (!o.orientation.empty()) {
    if (!base) throw io::ParseError("--orientation needs --complex or --bisheaf");
    Orientation or_ = with_path<Orientation>(o.orientation, [&](const Json& j) {
      return io::orientation_from(j, *base, "orientation");
    });
    note("orientation", validate_orientation(*base, or_, true));
  }
  for (const auto& path : o.etale) {
    if (!base) throw io::ParseError("--etale needs --complex or --bisheaf");
    note("etale " + path, validate_etale(load_etale(path, base)));
  }
  if (out.empty()) throw io::ParseError("validate: nothing to validate");
  out["ok"] = !failed;
  return out;
}

Json cmd_epify(const Options& o) {
  Bisheaf b = load_bisheaf(o.bisheaf);
  SheafSubfunctor e = epify(b.sheaf, {exec_of(o), o.seed});
  return Json{{"field", b.field().tag()}, {"epi", io::subspaces_json(b.base(), b.sheaf.support(), e.component)}};
}

Json cmd_monofy(const Options& o) {
  Bisheaf b = load_bisheaf(o.bisheaf);
  CosheafQuotient q = monofy(b.cosheaf, {exec_of(o), o.seed});
  return Json{{"field", b.field().tag()}, {"kernel", io::subspaces_json(b.base(), b.cosheaf.support(), q.kernel)}};
}

Json cmd_isofy(const Options& o, std::ostream& err) {
  Bisheaf b = load_bisheaf(o.bisheaf);
  require(validate_bisheaf(b), "bisheaf", err);
  IsoBisheaf i = isofy(b, {exec_of(o), o.seed});
  if (o.check) require(validate_isobisheaf(i.bisheaf), "isobisheaf", err);
  return io::bisheaf_json(i.bisheaf);
}

Json cmd_pls(const Options& o, std::ostream& err) {
  Bisheaf b = load_bisheaf(o.bisheaf);
  require(validate_bisheaf(b), "bisheaf", err);
  std::vector<EtaleOpen> opens;
  for (const auto& path : o.etale) {
    opens.push_back(load_etale(path, b.base_ptr()));
    if (o.check) require(validate_etale(opens.back()), "etale " + path, err);
  }
  std::vector<LocalSystem> ls = pls_many(b, opens, exec_of(o));
  if (o.check) {
    for (std::size_t i = 0; i < ls.size(); ++i) require(validate_local_system(ls[i]), "local system " + o.etale[i], err);
  }
  if (ls.size() == 1) return local_system_report(ls[0]);
  Json reports = Json::array();
  for (std::size_t i = 0; i < ls.size(); ++i) {
    Json r = local_system_report(ls[i]);
    r["etale"] = o.etale[i];
    reports.push_back(std::move(r));
  }
  return Json{{"reports", reports}};
}

fx::DeskModel desk_named(const std::string& name) {
  if (name == "example1") return fx::example1_desk(fx::cone_hexagon());
  if (name == "example2") return fx::example2_desk(fx::cone_hexagon());
  if (name == "example3_h") return fx::example3_h_desk(fx::octahedron());
  if (name == "identity") return fx::identity_desk(fx::octahedron());
  throw io::ParseError("--desk: unknown model \"" + name + "\" (example1, example2, example3_h, identity)");
}

Json cmd_leray(const Options& o, std::ostream& err) {
  Field field = default_field(o);
  SimplicialMap f;
  Orientation orient;
  int degree = o.degree;
  if (!o.desk.empty()) {
    fx::DeskModel d = desk_named(o.desk);
    f = d.map;
    orient = d.orientation;
    if (degree < 0) degree = d.degree;
  } else {
    if (o.y.empty() || o.k.empty() || o.map.empty() || o.orientation.empty())
      throw io::ParseError("leray: give --desk or all of --source, --target, --map, --orientation");
    ComplexPtr y = load_complex(o.y);
    ComplexPtr k = load_complex(o.k);
    f = with_path<SimplicialMap>(o.map, [&](const Json& j) { return io::map_from(j, y, k, "map"); });
    orient = with_path<Orientation>(o.orientation, [&](const Json& j) { return io::orientation_from(j, *k, "orientation"); });
  }
  if (degree < 0) throw io::ParseError("leray: --degree is required");
  Bisheaf b = leray_bisheaf(f, degree, orient, field, exec_of(o));
  if (o.check) require(validate_bisheaf(b), "leray bisheaf", err);
  return io::bisheaf_json(b);
}

Json cmd_subdivide(const Options& o) {
  Bisheaf b = load_bisheaf(o.bisheaf);
  return io::bisheaf_json(subdivide_bisheaf(b, share(barycentric_subdivision(b.base()))));
}

Json cmd_dilate(const Options& o, std::ostream& err) {
  Bisheaf b = load_bisheaf(o.bisheaf);
  require(validate_bisheaf(b), "bisheaf", err);
  Dilation d = dilate(b);
  Report r = validate_bisheaf_map(d.pulled, d.twice, d.canonical);
  Json out{{"pulled", io::bisheaf_json(d.pulled)},
           {"twice", io::bisheaf_json(d.twice)},
           {"canonical", io::report_json(r)}};
  if (o.check) require(check_dilation(d.map), "dilation", err);
  return out;
}

Json cmd_shrink(const Options& o, std::ostream& err) {
  std::optional<Bisheaf> b;
  ComplexPtr base;
  if (!o.bisheaf.empty()) {
    b = load_bisheaf(o.bisheaf);
    base = b->base_ptr();
  } else if (!o.complex.empty()) {
    base = load_complex(o.complex);
  } else {
    throw io::ParseError("shrink: give --bisheaf or --complex");
  }
  if (o.etale.size() != 1) throw io::ParseError("shrink: exactly one --etale");
  EtaleOpen e = load_etale(o.etale[0], base);
  std::optional<Dilation> dil;
  DilationMap d;
  if (b) {
    dil = dilate(*b);
    d = dil->map;
  } else {
    d = dilation_map(base);
  }
  Shrinking sh = shrink(e, d);
  Json out{{"shrunk", io::etale_json(sh.shrunk)}};
  if (b) {
    ShrinkingCheck c = verify_shrinking_invariance(*dil, *b, e);
    out["invariance"] = Json{{"ok", c.ok}, {"why", c.why}, {"dilated", local_system_report(c.dilated)}};
    if (!c.ok) {
      err << "shrinking invariance: " << c.why << "\n";
      out["ok"] = false;
    }
  }
  return out;
}

Json cmd_span(const Options& o, std::ostream& err) {
  Bisheaf f = load_bisheaf(o.f);
  Bisheaf g = load_bisheaf(o.g);
  require(validate_bisheaf(f), "f", err);
  require(validate_bisheaf(g), "g", err);
  DilationMap d = dilation_map(f.base_ptr());
  // g on the base of f is read as g on its second subdivision.
  if (g.base() == f.base()) g = dilate(g, d).twice;
  StabilityWitness w;
  if (o.witness.empty()) {
    w = StabilityWitness::identity(*d.k2);
  } else {
    w = with_path<StabilityWitness>(o.witness,
                                    [&](const Json& j) { return io::witness_from(j, g.base(), *d.k2, "witness"); });
  }
  StabilitySpan span = stability_span(f, g, w);
  Report squares = validate_bisheaf_map(span.source, g, span.to_g);
  Json out{{"squares", io::report_json(squares)}};
  for (const auto& p : squares.problems) err << "span: " << p << "\n";
  bool failed = !squares.ok();
  Json comparisons = Json::array();
  for (const auto& path : o.etale) {
    if (!(g.base() == *d.k2)) throw io::ParseError("span: --etale needs g on the second subdivision of f's base");
    EtaleOpen e = load_etale(path, f.base_ptr());
    Shrinking sh = shrink(e, span.dilation.map);
    SubquotientResult r = compare_over(span.source, g, span.to_g, sh.shrunk);
    Json c = io::subquotient_json(r);
    c["etale"] = path;
    comparisons.push_back(std::move(c));
    if (r.verdict == Verdict::not_subquotient) {
      err << "span over " << path << ": " << r.reason << "\n";
      failed = true;
    }
  }
  out["comparisons"] = comparisons;
  out["ok"] = !failed;
  return out;
}

void write_examples(const fs::path& dir, const std::string& prefix, const std::vector<std::pair<std::string, Bisheaf>>& bs,
                    const std::vector<fx::NamedOpen>& opens, Json& index) {
  fs::create_directories(dir);
  for (const auto& [name, open] : opens) {
    io::write_file((dir / (name + ".json")).string(), io::etale_json(open));
    index[prefix]["etale"].push_back(name + ".json");
  }
  for (const auto& [name, b] : bs) {
    io::write_file((dir / (name + ".json")).string(), io::bisheaf_json(b));
    index[prefix]["bisheaf"].push_back(name + ".json");
    for (const auto& [oname, open] : opens) {
      const std::string file = "expected_" + name + "_" + oname + ".json";
      io::write_file((dir / file).string(), local_system_report(pls(b, open)));
      index[prefix]["expected"].push_back(file);
    }
  }
}

Json cmd_examples(const Options& o) {
  Field field = default_field(o);
  const bool all = o.which == "all";
  if (!all && o.which != "1" && o.which != "2" && o.which != "3")
    throw io::ParseError("--which: expected 1, 2, 3 or all");
  auto dir_for = [&](const std::string& n) { return all ? fs::path(o.dir) / ("example" + n) : fs::path(o.dir); };
  Json index = Json::object();
  auto cone = fx::cone_hexagon();
  if (all || o.which == "1") write_examples(dir_for("1"), "example1", {{"ex1", fx::example1(field)}}, fx::cone_opens(cone), index);
  if (all || o.which == "2") write_examples(dir_for("2"), "example2", {{"ex2", fx::example2(field)}}, fx::cone_opens(cone), index);
  if (all || o.which == "3") {
    auto oct = fx::octahedron();
    Bisheaf f = fx::example3_f(field);
    Bisheaf h = fx::example3_h(field);
    write_examples(dir_for("3"), "example3", {{"ex3f", f}, {"ex3h", h}}, fx::octahedron_opens(oct), index);
    SubquotientResult r = compare_over(f, h, std::nullopt, EtaleOpen::identity(oct));
    io::write_file((dir_for("3") / "expected_compare_f_in_h.json").string(), io::subquotient_json(r));
    index["example3"]["expected"].push_back("expected_compare_f_in_h.json");
  }
  return index;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Persistent local systems of constructible bisheaves"};
  app.require_subcommand(1);
  app.add_option("--field", o.field, "Field tag, Q or F<p>")->envname("PLSYS_FIELD");
  app.add_option("-o,--out", o.out, "Write the report here instead of stdout");
  app.add_flag("--check", o.check, "Also validate intermediate invariants");
  app.add_flag("--parallel", o.parallel, "Use the OpenMP kernels");
  app.add_option("--threads", o.threads, "OpenMP thread count (0 = runtime default)");
  app.add_option("--seed", o.seed, "Relaxation shuffle seed");

  auto bisheaf_opt = [&](CLI::App* s, bool required) {
    auto* opt = s->add_option("--bisheaf", o.bisheaf, "Bisheaf file");
    if (required) opt->required();
  };
  auto* validate = app.add_subcommand("validate", "Validate input files");
  bisheaf_opt(validate, false);
  validate->add_option("--complex", o.complex);
  validate->add_option("--orientation", o.orientation);
  validate->add_option("--etale", o.etale);
  bisheaf_opt(app.add_subcommand("epify", "Maximal sub-episheaf of the sheaf part"), true);
  bisheaf_opt(app.add_subcommand("monofy", "Minimal monocosheaf quotient of the cosheaf part"), true);
  bisheaf_opt(app.add_subcommand("isofy", "Isobisheaf of a bisheaf"), true);
  auto* pls_cmd = app.add_subcommand("pls", "Persistent local system over etale opens");
  bisheaf_opt(pls_cmd, true);
  pls_cmd->add_option("--etale", o.etale)->required();
  auto* leray = app.add_subcommand("leray", "Leray bisheaf of a simplicial map");
  leray->add_option("--desk", o.desk, "Built-in model: example1, example2, example3_h, identity");
  leray->add_option("--source", o.y);
  leray->add_option("--target", o.k);
  leray->add_option("--map", o.map);
  leray->add_option("--orientation", o.orientation);
  leray->add_option("--degree", o.degree);
  bisheaf_opt(app.add_subcommand("subdivide", "Bisheaf on the barycentric subdivision"), true);
  bisheaf_opt(app.add_subcommand("dilate", "Dilation pullback and the canonical map"), true);
  auto* shrink_cmd = app.add_subcommand("shrink", "Shrink an etale open away from its boundary");
  bisheaf_opt(shrink_cmd, false);
  shrink_cmd->add_option("--complex", o.complex);
  shrink_cmd->add_option("--etale", o.etale)->required();
  auto* span = app.add_subcommand("span", "Stability span between two bisheaves");
  span->add_option("--f", o.f)->required();
  span->add_option("--g", o.g)->required();
  span->add_option("--witness", o.witness);
  span->add_option("--etale", o.etale);
  auto* examples = app.add_subcommand("examples", "Write the worked examples and their expected reports");
  examples->add_option("--which", o.which, "1, 2, 3 or all");
  examples->add_option("--dir", o.dir);

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return parse_error;
  }

  if (o.threads > 0) set_threads(o.threads);
  const std::string name = app.get_subcommands().front()->get_name();
  try {
    static const std::map<std::string, std::function<Json(const Options&, std::ostream&)>> commands{
        {"validate", cmd_validate},
        {"epify", [](const Options& x, std::ostream&) { return cmd_epify(x); }},
        {"monofy", [](const Options& x, std::ostream&) { return cmd_monofy(x); }},
        {"isofy", cmd_isofy},
        {"pls", cmd_pls},
        {"leray", cmd_leray},
        {"subdivide", [](const Options& x, std::ostream&) { return cmd_subdivide(x); }},
        {"dilate", cmd_dilate},
        {"shrink", cmd_shrink},
        {"span", cmd_span},
        {"examples", [](const Options& x, std::ostream&) { return cmd_examples(x); }},
    };
    Json report = commands.at(name)(o, err);
    if (o.out.empty()) {
      out << io::canonical(report);
    } else {
      io::write_file(o.out, report);
    }
    if (report.is_object() && report.contains("ok") && report["ok"] == false) return validation_failure;
    if (name == "dilate" && report["canonical"]["ok"] == false) return validation_failure;
    return ok;
  } catch (const io::ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return parse_error;
  } catch (const Failed&) {
    return validation_failure;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return validation_failure;
  }
}

}  // namespace plsys::cli
