// jetsym: command-line front end. Exit 0 when every verdict holds, 1 on a
// failed verdict, 2 on an input error.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "jetsym/catalog.hpp"
#include "jetsym/commands.hpp"
#include "jetsym/suite.hpp"

using namespace jetsym;

namespace {

struct Report {
  bool json = false;
  bool ok = true;
  Json doc = Json::object();
  std::vector<std::string> lines;

  void add(const Outcome& o) {
    ok = ok && o.ok;
    lines.insert(lines.end(), o.lines.begin(), o.lines.end());
    doc["results"].push_back(o.json);
  }

  int finish() {
    doc["ok"] = ok;
    if (json)
      std::cout << doc.dump(2) << "\n";
    else
      for (const auto& l : lines) std::cout << l << "\n";
    return ok ? 0 : 1;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
  return s;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("JETSYM_SEED")) return std::stoull(env);
  return kDefaultSeed;
}

// Runs every command queued by `source`.
void run_source(Session& s, const std::string& source, const std::string& origin, const RunOptions& opts, Report& rep) {
  std::size_t before = s.commands().size();
  s.load(source, origin);
  for (std::size_t i = before; i < s.commands().size(); ++i) rep.add(execute(s, s.commands()[i], opts));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lie, Q-conditional and conditional symmetry toolkit for PDEs"};
  app.require_subcommand(1);
  Report rep;
  std::string session_file;
  std::uint64_t seed = 0;
  bool seed_given = false;
  app.add_flag("--json", rep.json, "Print a JSON report");
  app.add_option("--session", session_file, "Session file with declarations to load first");
  auto add_seed = [&](CLI::App* a) {
    a->add_option_function<std::uint64_t>(
        "--seed", [&](std::uint64_t v) {
          seed = v;
          seed_given = true;
        }, "Oracle seed (default: $JETSYM_SEED or 20240917)");
  };
  add_seed(&app);

  std::string op, target, kind, by, candidate, translation, spec, file, entry, corpus;
  std::vector<std::string> given;
  int order = 1;
  int trials = 20;

  auto* prolong = app.add_subcommand("prolong", "Prolong a point operator");
  prolong->add_option("op", op, "Operator (name, @catalog/id or field text)")->required();
  prolong->add_option("--order", order, "Prolongation order")->check(CLI::Range(0, JetSpace::kOrderCap));

  auto add_check = [&](CLI::App* c) {
    c->add_option("kind", kind, "lie | qcond | cond | inv | cdi")->required()->check(CLI::IsMember({"lie", "qcond", "cond", "inv", "cdi"}));
    c->add_option("ops", op, "Operators, comma separated")->required();
    c->add_option("target", target, "Equation, invariant list or expression")->required();
    c->add_option("--given", given, "Condition names or condition sets");
  };
  auto* check = app.add_subcommand("check", "Symbolic invariance check");
  add_check(check);
  auto* oracle = app.add_subcommand("oracle", "Numeric flow oracle next to the symbolic check");
  add_check(oracle);
  oracle->add_option("--trials", trials, "Sampled points per operator")->check(CLI::Range(20, 100000));
  add_seed(oracle);

  auto* reduce = app.add_subcommand("reduce", "Reduce an equation by an ansatz or a translation");
  reduce->add_option("equation", target)->required();
  auto* ans = reduce->add_option("--ansatz", by, "Ansatz reference");
  auto* tr = reduce->add_option("--translation", translation, "Independent variable to translate along");
  ans->excludes(tr);

  auto* hidden = app.add_subcommand("hidden", "Hidden symmetry after a reduction");
  hidden->add_option("equation", target)->required();
  hidden->add_option("--reduce-by", by, "Reduction (d/dX, ansatz or reduction name)")->required();
  hidden->add_option("--candidate", candidate, "Candidate operator")->required();

  auto* pipeline = app.add_subcommand("pipeline", "Run a reduction pipeline");
  pipeline->add_option("spec", spec, "Pipeline reference or a session file declaring pipelines")->required();

  auto* catalog_cmd = app.add_subcommand("catalog", "Browse the built-in catalog");
  catalog_cmd->require_subcommand(1);
  auto* list = catalog_cmd->add_subcommand("list", "List entries");
  auto* show = catalog_cmd->add_subcommand("show", "Show one entry");
  show->add_option("id", entry)->required();

  auto* suite = app.add_subcommand("suite", "Run the acceptance corpus");
  suite->add_option("corpus", corpus)->required()->check(CLI::IsMember({"paper"}));
  add_seed(suite);

  auto* run = app.add_subcommand("run", "Execute the commands of a session file");
  run->add_option("file", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  RunOptions opts;
  opts.oracle.seed = seed_given ? seed : default_seed();
  opts.oracle.trials = trials;

  try {
    Session s;
    attach_catalog(s);
    if (!session_file.empty()) s.load(read_file(session_file), session_file);
    if (!*run && !*pipeline && !s.has_space()) s.load(catalog_header(), "@catalog/header");

    if (*prolong) {
      run_source(s, "prolong " + op + " order " + std::to_string(order) + ";", "<args>", opts, rep);
    } else if (*check || *oracle) {
      std::string verb = *check ? "check" : "oracle";
      std::string text = verb + " " + kind + " " + op + " on " + target;
      if (!given.empty()) text += " given " + join(given);
      run_source(s, text + ";", "<args>", opts, rep);
    } else if (*reduce) {
      if (by.empty() && translation.empty()) throw Error("reduce needs --ansatz or --translation");
      run_source(s, "reduce " + target + " by " + (by.empty() ? "d/d" + translation : by) + ";", "<args>", opts, rep);
    } else if (*hidden) {
      run_source(s, "hidden " + target + " by " + by + " candidate " + candidate + ";", "<args>", opts, rep);
    } else if (*pipeline) {
      std::ifstream probe(spec);
      if (!probe.good() && !s.has_space()) s.load(catalog_header(), "@catalog/header");
      if (probe.good()) {
        auto before = s.names();
        s.load(read_file(spec), spec);
        int n = 0;
        for (const auto& [name, obj] : s.names())
          if (obj.kind == "pipeline" && !before.count(name)) {
            run_source(s, "run " + name + ";", "<args>", opts, rep);
            ++n;
          }
        if (n == 0) throw Error("'" + spec + "' declares no pipeline");
      } else {
        run_source(s, "run " + spec + ";", "<args>", opts, rep);
      }
    } else if (*list) {
      for (const auto& e : catalog()) {
        rep.lines.push_back(e.id + "  " + e.kind + "  " + e.name + (e.constructed ? "  (constructed)" : ""));
        rep.doc["entries"].push_back({{"id", e.id}, {"kind", e.kind}, {"name", e.name}, {"constructed", e.constructed}});
      }
    } else if (*show) {
      const CatalogEntry& e = catalog_entry(entry);
      rep.lines = {"id: " + e.id, "kind: " + e.kind, "name: " + e.name, "about: " + e.anchor};
      if (!e.requires_.empty()) rep.lines.push_back("requires: " + join(e.requires_));
      std::istringstream body(e.payload);
      for (std::string l; std::getline(body, l);) rep.lines.push_back("  " + l);
      rep.doc = {{"id", e.id}, {"kind", e.kind}, {"name", e.name}, {"about", e.anchor}, {"requires", e.requires_},
                 {"constructed", e.constructed}, {"payload", e.payload}};
    } else if (*suite) {
      AcceptanceSuite acceptance(SuiteOptions{opts.oracle});
      rep.doc["seed"] = opts.oracle.seed;
      for (const auto& c : acceptance.run()) {
        rep.ok = rep.ok && c.passed;
        rep.lines.push_back(format_criterion(c));
        for (const auto& d : c.detail) rep.lines.push_back("      " + d);
        rep.doc["criteria"].push_back({{"id", c.id}, {"title", c.title}, {"passed", c.passed}, {"detail", c.detail}});
      }
    } else if (*run) {
      run_source(s, read_file(file), file, opts, rep);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rep.finish();
}
