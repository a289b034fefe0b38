// sheafkit — site validation, sheafification, W-types, forcing universes and
// mvs genericity over finite sites, with machine-readable JSON reports.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage/parse error.

#include <chrono>
#include <functional>
#include <iostream>

#include <CLI11.hpp>

#include "sheafkit/forcing.hpp"
#include "sheafkit/json_io.hpp"
#include "sheafkit/mvs.hpp"
#include "sheafkit/sheaf.hpp"
#include "sheafkit/wtype.hpp"

namespace sk = sheafkit;

namespace {

struct Options {
  std::string site_file, presheaf_file, morphism_file, formula_file;
  int rank = 3;
  int depth = 3;
  int bound = 0;  // 0 = unbounded
  bool sheaf_mode = false;
  bool timing = false;
  bool emit = false;
  std::string mode = "pointwise";
  std::string family = "minimal";
};

sk::SmallnessClass cls_of(const Options& o) {
  sk::SmallnessClass cls;
  if (o.bound > 0) cls.bound = o.bound;
  return cls;
}

std::string sieve_names(const sk::FiniteCategory& cat, const sk::Bitset& s) {
  std::string out = "[";
  bool first = true;
  for (int f : s.elements()) {
    if (!first) out += ",";
    first = false;
    out += cat.arrows[f].name;
  }
  return out + "]";
}

int run_validate(const Options& o, sk::Report& rep) {
  std::string raw = sk::read_file(o.site_file);
  rep.add_input("site", raw);
  sk::Site site = sk::load_site(sk::ordered_json::parse(raw));
  const auto& cat = *site.cat;
  rep.add_check("category-laws", sk::check_category_laws(cat).empty());
  // the loaded topology went through construction; re-validate extensionally
  auto v = sk::validate_topology(cat, site.top.cov);
  rep.add_check("topology-maximality", v.ok());
  rep.add_check("topology-stability", v.ok());
  rep.add_check("topology-local-character", v.ok());
  if (!v.ok()) {
    sk::ordered_json issues = sk::ordered_json::array();
    for (const auto& issue : v.issues) issues.push_back(issue.code + ": " + issue.detail);
    rep.add_data("issues", issues);
  }
  sk::ordered_json sizes = sk::ordered_json::object();
  for (int a = 0; a < cat.n_objects(); ++a)
    sizes[cat.objects[a]] = site.top.cov[a].size();
  rep.add_data("covering_sieves", sizes);
  return rep.exit_code();
}

int run_sheafify(const Options& o, sk::Report& rep) {
  std::string raw_site = sk::read_file(o.site_file);
  std::string raw_psh = sk::read_file(o.presheaf_file);
  rep.add_input("site", raw_site);
  rep.add_input("presheaf", raw_psh);
  sk::Site site = sk::load_site(sk::ordered_json::parse(raw_site));
  sk::Presheaf p = sk::load_presheaf(*site.cat, sk::ordered_json::parse(raw_psh));

  sk::Sheafification sh = sk::sheafify(p, site.top);
  rep.add_check("plus-separated", sk::is_separated(sh.first.plus, site.top));
  rep.add_check("plus-plus-sheaf", sk::is_sheaf(sh.sheaf, site.top));
  rep.add_check("unit-natural", sk::validate_morphism(sh.unit).empty());
  rep.add_check("universal-property", sk::unique_factorization(sh, sh.sheaf));
  sk::ordered_json sizes = sk::ordered_json::object();
  for (int a = 0; a < site.cat->n_objects(); ++a)
    sizes[site.cat->objects[a]] = sh.sheaf.fib[a];
  rep.add_data("sheaf_fibers", sizes);
  if (o.emit) rep.add_data("sheaf", sk::presheaf_to_json(sh.sheaf));
  return rep.exit_code();
}

int run_wtype(const Options& o, sk::Report& rep) {
  std::string raw_site = sk::read_file(o.site_file);
  std::string raw_mor = sk::read_file(o.morphism_file);
  rep.add_input("site", raw_site);
  rep.add_input("morphism", raw_mor);
  rep.set_config("depth", o.depth);
  rep.set_config("sheaf", o.sheaf_mode);
  rep.set_config("smallness_bound", o.bound == 0 ? "unbounded" : std::to_string(o.bound));
  sk::Site site = sk::load_site(sk::ordered_json::parse(raw_site));
  sk::PresheafMorphism f = sk::load_morphism(*site.cat, sk::ordered_json::parse(raw_mor));
  const auto& cat = *site.cat;

  sk::ordered_json carriers = sk::ordered_json::object();
  sk::ordered_json heights = sk::ordered_json::array();
  bool stabilized = false;
  auto height_row = [&](const std::vector<int>& sizes, int h) {
    sk::ordered_json row = sk::ordered_json::object();
    row["height"] = h;
    for (int a = 0; a < cat.n_objects(); ++a) row[cat.objects[a]] = sizes[a];
    return row;
  };
  if (o.sheaf_mode) {
    sk::ShfWType w = sk::sheaf_wtype(f, site.top, o.depth, cls_of(o));
    stabilized = w.stabilized;
    for (int a = 0; a < cat.n_objects(); ++a)
      carriers[cat.objects[a]] = w.psh.fib[a];
    for (std::size_t h = 0; h < w.sizes_per_height.size(); ++h)
      heights.push_back(height_row(w.sizes_per_height[h], static_cast<int>(h)));
    if (stabilized) {
      auto alg = sk::check_initial_algebra(w);
      rep.add_check("initial-algebra", alg.ok(), alg.detail);
    }
  } else {
    sk::PresheafWType w = sk::presheaf_wtype(f, o.depth, cls_of(o));
    stabilized = w.stabilized;
    for (int a = 0; a < cat.n_objects(); ++a)
      carriers[cat.objects[a]] = w.psh.fib[a];
    for (std::size_t h = 0; h < w.sizes_per_height.size(); ++h)
      heights.push_back(height_row(w.sizes_per_height[h], static_cast<int>(h)));
    if (stabilized) {
      auto alg = sk::check_initial_algebra(w);
      rep.add_check("initial-algebra", alg.ok(), alg.detail);
    }
  }
  rep.add_data("carrier_sizes", carriers);
  rep.add_data("carrier_sizes_per_height", heights);
  rep.add_data("stabilized", stabilized);
  return rep.exit_code();
}

int run_universe(const Options& o, sk::Report& rep) {
  std::string raw_site = sk::read_file(o.site_file);
  rep.add_input("site", raw_site);
  rep.set_config("rank", o.rank);
  sk::Site site = sk::load_site(sk::ordered_json::parse(raw_site));
  sk::Universe u = sk::build_universe(*site.cat, site.top, o.rank);
  sk::ordered_json carrier = sk::ordered_json::array();
  for (std::size_t i = 0; i < u.classes.size(); ++i) {
    sk::ordered_json e;
    e["index"] = i;
    e["object"] = site.cat->objects[u.classes[i].at];
    e["rank"] = u.classes[i].rank;
    e["name"] = u.describe(static_cast<int>(i));
    carrier.push_back(e);
  }
  rep.add_data("carrier", carrier);
  sk::ordered_json sizes = sk::ordered_json::object();
  for (int a = 0; a < site.cat->n_objects(); ++a)
    sizes[site.cat->objects[a]] = u.carrier[a].size();
  rep.add_data("carrier_sizes", sizes);
  return rep.exit_code();
}

int run_force(const Options& o, sk::Report& rep) {
  std::string raw_site = sk::read_file(o.site_file);
  std::string raw_formula = sk::read_file(o.formula_file);
  rep.add_input("site", raw_site);
  rep.add_input("formula", raw_formula);
  rep.set_config("rank", o.rank);
  sk::Site site = sk::load_site(sk::ordered_json::parse(raw_site));
  sk::Universe u = sk::build_universe(*site.cat, site.top, o.rank);
  sk::FormulaPtr f = sk::parse_formula(raw_formula);
  auto fv = sk::free_variables(f);
  if (!fv.empty()) throw sk::Error("OpenFormula", "free variable '" + fv[0] + "'");
  // out-of-range literals are input errors, not stage mismatches
  std::function<void(const sk::FormulaPtr&)> check_lits = [&](const sk::FormulaPtr& g) {
    auto check_term = [&](const sk::Term& t) {
      if (!t.is_var && (t.literal < 0 ||
                        t.literal >= static_cast<int>(u.classes.size())))
        throw sk::Error("ParseError",
                        "literal #" + std::to_string(t.literal) +
                            " is outside the rank-" + std::to_string(o.rank) + " carrier");
    };
    using K = sk::Formula::Kind;
    if (g->kind == K::Eq || g->kind == K::Mem) {
      check_term(g->t1);
      check_term(g->t2);
    } else if (g->kind == K::ForallIn || g->kind == K::ExistsIn) {
      check_term(g->t2);
    }
    if (g->a) check_lits(g->a);
    if (g->b) check_lits(g->b);
  };
  check_lits(f);
  sk::Forcing forcing(u);
  rep.add_data("formula", sk::print_formula(f));
  sk::ordered_json verdicts = sk::ordered_json::object();
  for (int c = 0; c < site.cat->n_objects(); ++c) {
    try {
      bool v = forcing.forces(c, f);
      verdicts[site.cat->objects[c]] = v;
      std::cerr << "forced at " << site.cat->objects[c] << ": " << (v ? "true" : "false")
                << "\n";
    } catch (const sk::Error& e) {
      if (e.code() == "UnknownLiteral") {
        verdicts[site.cat->objects[c]] = "n/a";  // literals live elsewhere
      } else {
        throw;
      }
    }
  }
  rep.add_data("forced", verdicts);
  return rep.exit_code();
}

int run_axioms(const Options& o, sk::Report& rep) {
  std::string raw_site = sk::read_file(o.site_file);
  rep.add_input("site", raw_site);
  rep.set_config("rank", o.rank);
  sk::Site site = sk::load_site(sk::ordered_json::parse(raw_site));
  sk::Universe u = sk::build_universe(*site.cat, site.top, o.rank);
  sk::RstReport rst = sk::check_rst_axioms(u);
  for (const auto& ax : rst.axioms) {
    if (!ax.checkable) {
      rep.add_data(ax.axiom, "not checkable at finite rank");
      continue;
    }
    sk::ordered_json witness = sk::ordered_json::array();
    for (const auto& fail : ax.failures) witness.push_back(fail);
    rep.add_check(ax.axiom, ax.pass, witness);
  }
  return rep.exit_code();
}

int run_mvs(const Options& o, sk::Report& rep) {
  std::string raw_site = sk::read_file(o.site_file);
  std::string raw_mor = sk::read_file(o.morphism_file);
  rep.add_input("site", raw_site);
  rep.add_input("morphism", raw_mor);
  rep.set_config("mode", o.mode);
  rep.set_config("family", o.family);
  rep.set_config("smallness_bound", o.bound == 0 ? "unbounded" : std::to_string(o.bound));
  rep.set_config("test_objects", "terminal + representables + binary products");
  sk::Site site = sk::load_site(sk::ordered_json::parse(raw_site));
  const auto& cat = *site.cat;
  sk::PresheafMorphism phi = sk::load_morphism(cat, sk::ordered_json::parse(raw_mor));
  sk::CoverMode mode =
      o.mode == "local" ? sk::CoverMode::Local : sk::CoverMode::Pointwise;
  sk::SmallnessClass cls = cls_of(o);

  std::vector<sk::Mvs> all = sk::enumerate_mvs(phi, mode, site.top, cls);
  std::vector<sk::Mvs> family;
  if (o.family == "all") {
    family = all;
  } else if (o.family == "minimal") {
    family = sk::minimal_mvs(phi, mode, site.top, cls);
  } else {
    std::string raw_family = sk::read_file(o.family);
    rep.add_input("family", raw_family);
    auto j = sk::ordered_json::parse(raw_family);
    for (const auto& member : j.at("members")) {
      sk::Subpresheaf s = sk::empty_subpresheaf(phi.src);
      for (const auto& [obj, labels] : member.items()) {
        int a = cat.object_index(obj);
        if (a < 0) throw sk::Error("ParseError", "unknown object '" + obj + "' in family");
        for (const auto& l : labels) {
          int found = -1;
          for (int i = 0; i < phi.src.fib[a]; ++i)
            if (phi.src.label(a, i) == l.get<std::string>()) found = i;
          if (found < 0)
            throw sk::Error("ParseError", "unknown element '" + l.get<std::string>() + "'");
          s.member[a].set(found);
        }
      }
      family.push_back(sk::Mvs{s});
    }
  }

  sk::ordered_json mvss = sk::ordered_json::array();
  for (const auto& m : all) {
    sk::ordered_json e = sk::ordered_json::object();
    for (int a = 0; a < cat.n_objects(); ++a) {
      sk::ordered_json labels = sk::ordered_json::array();
      for (int i : m.carrier.member[a].elements()) labels.push_back(phi.src.label(a, i));
      e[cat.objects[a]] = labels;
    }
    mvss.push_back(e);
  }
  rep.add_data("mvs_count", all.size());
  rep.add_data("mvs", mvss);
  rep.add_data("family_size", family.size());

  auto tests = sk::default_test_objects(cat);
  auto gen = sk::check_generic(family, phi, tests, mode, site.top, cls);
  sk::ordered_json witness;
  if (!gen.generic && gen.counter_q) {
    witness = sk::ordered_json::object();
    for (int a = 0; a < cat.n_objects(); ++a) {
      sk::ordered_json labels = sk::ordered_json::array();
      for (int i : gen.counter_q->carrier.member[a].elements())
        labels.push_back(phi.src.label(a, i));
      witness[cat.objects[a]] = labels;
    }
    witness["test_object"] = gen.counter_test;
  }
  rep.add_check("generic", gen.generic, witness);
  return rep.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-site sheaf semantics toolkit"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--timing", o.timing, "attach wall-clock timing to the report");

  auto add_site = [&](CLI::App* cmd) {
    cmd->add_option("--site", o.site_file, "site JSON file")->required();
  };

  CLI::App* validate = app.add_subcommand("validate", "validate a site file");
  add_site(validate);

  CLI::App* sheafify = app.add_subcommand("sheafify", "sheafify a presheaf over a site");
  add_site(sheafify);
  sheafify->add_option("--presheaf", o.presheaf_file, "presheaf JSON file")->required();
  sheafify->add_flag("--emit", o.emit, "include the sheafified presheaf in the report");

  CLI::App* wtype = app.add_subcommand("wtype", "height-bounded W-type of a small map");
  add_site(wtype);
  wtype->add_option("--morphism", o.morphism_file, "morphism JSON file")->required();
  wtype->add_option("--depth", o.depth, "height bound")->required();
  wtype->add_flag("--sheaf", o.sheaf_mode, "sheaf W-type (default: presheaf)");
  wtype->add_option("--bound", o.bound, "smallness bound (0 = unbounded)");

  CLI::App* universe = app.add_subcommand("universe", "rank-bounded forcing universe");
  add_site(universe);
  universe->add_option("--rank", o.rank, "rank bound")->required();

  CLI::App* force = app.add_subcommand("force", "evaluate a formula by forcing");
  add_site(force);
  force->add_option("--rank", o.rank, "rank bound")->required();
  force->add_option("--formula", o.formula_file, "formula file (.sx)")->required();

  CLI::App* axioms = app.add_subcommand("axioms", "check the set-theory axiom suite");
  add_site(axioms);
  axioms->add_option("--rank", o.rank, "rank bound")->required();

  CLI::App* mvs = app.add_subcommand("mvs", "multi-valued sections and genericity");
  add_site(mvs);
  mvs->add_option("--morphism", o.morphism_file, "morphism JSON file")->required();
  mvs->add_option("--mode", o.mode, "cover mode: pointwise|local")
      ->check(CLI::IsMember({"pointwise", "local"}));
  mvs->add_option("--family", o.family, "all | minimal | path to explicit family file");
  mvs->add_option("--bound", o.bound, "smallness bound (0 = unbounded)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string cmd = app.get_subcommands().front()->get_name();
  sk::Report rep(cmd);
  auto start = std::chrono::steady_clock::now();
  int code = 2;
  try {
    if (cmd == "validate") code = run_validate(o, rep);
    else if (cmd == "sheafify") code = run_sheafify(o, rep);
    else if (cmd == "wtype") code = run_wtype(o, rep);
    else if (cmd == "universe") code = run_universe(o, rep);
    else if (cmd == "force") code = run_force(o, rep);
    else if (cmd == "axioms") code = run_axioms(o, rep);
    else if (cmd == "mvs") code = run_mvs(o, rep);
    if (cmd == "force") code = 0;  // the verdict is data, not a check
  } catch (const sk::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::string c = e.code();
    return (c == "ParseError" || c == "ValidationError" || c == "OpenFormula" ||
            c == "UnknownLiteral" || c == "UnknownObject")
               ? 2
               : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  auto end = std::chrono::steady_clock::now();
  rep.set_timing_ms(std::chrono::duration<double, std::milli>(end - start).count());
  std::cout << rep.to_json(o.timing).dump(2) << "\n";
  return code;
}
