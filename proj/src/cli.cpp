#include "acyclify/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "acyclify/analysis.hpp"
#include "acyclify/encoder.hpp"
#include "acyclify/formula.hpp"
#include "acyclify/formula_json.hpp"
#include "acyclify/semantics.hpp"

namespace acyclify {

namespace {

using json = nlohmann::json;

struct RunConfig {
  std::string command;
  std::string formula;
  std::string file;
  bool allowConstant = false;
  std::string format = "text";
  bool dot = false;
  bool report = false;
  std::string mode = "prenex";
  std::string guard = "size";
  std::string atoms = "unified";
  std::string empties = "predicate";
  std::string mutate = "none";
  unsigned baseRank = 3;
  unsigned atomCount = 0;
  std::size_t cap = kDefaultUniverseCap;
  bool baseRankSet = false;
  bool atomCountSet = false;
};

TranslationOptions optionsOf(const RunConfig& cfg) {
  TranslationOptions o;
  o.pipeline = cfg.mode == "prenex" ? Pipeline::Prenex
               : cfg.mode == "nested" ? Pipeline::Nested
                                      : Pipeline::NestedAgreement;
  o.guard = cfg.guard == "fn" ? Guard::Fn : Guard::Size;
  o.atomMode = cfg.atoms == "separate" ? AtomMode::Separate : AtomMode::Unified;
  o.emptiesReading = cfg.empties == "constant" ? EmptiesReading::Constant : EmptiesReading::Predicate;
  o.mutation = cfg.mutate == "drop-ident" ? Mutation::DropIdent : Mutation::None;
  return o;
}

std::string witnessText(const StratFailure& f) {
  std::ostringstream out;
  out << "not stratified; constraint cycle:\n";
  for (const ConstraintStep& s : f.witness)
    out << "  type(" << s.to.name() << ") = type(" << s.from.name() << ") " << (s.offset < 0 ? "- " : "+ ")
        << std::abs(s.offset) << "   [" << s.atomText << "]\n";
  out << "  sum of offsets: " << f.replay() << '\n';
  return out.str();
}

json witnessJson(const StratFailure& f) {
  json steps = json::array();
  for (const ConstraintStep& s : f.witness)
    steps.push_back({{"atom", s.atom}, {"text", s.atomText}, {"from", s.from.name()}, {"to", s.to.name()},
                     {"offset", s.offset}});
  return {{"stratified", false}, {"witness", steps}, {"offset", f.replay()}};
}

class Runner {
 public:
  Runner(const RunConfig& cfg, std::ostream& out, std::ostream& err) : cfg_(cfg), out_(out), err_(err) {}

  int run(const std::string& source) {
    Formula f = Formula::eqConst(Var("_"));
    try {
      ParseOptions po;
      po.allowConstant = cfg_.allowConstant;
      po.allowGenerated = cfg_.command == "stratify" || cfg_.command == "acyclic" || cfg_.command == "graph";
      f = parse(source, po);
    } catch (const ParseError& e) {
      err_ << "parse error: " << e.what() << '\n';
      return kExitParseError;
    }
    try {
      if (cfg_.command == "stratify") return stratifyCmd(f);
      if (cfg_.command == "acyclic") return acyclicCmd(f);
      if (cfg_.command == "graph") return graphCmd(f);
      if (cfg_.command == "translate") return translateCmd(f);
      if (cfg_.command == "verify") return verifyCmd(f);
      return exploreCmd(f);
    } catch (const NotStratified& e) {
      if (json_()) {
        out_ << witnessJson(e.failure()).dump(2) << '\n';
      } else {
        err_ << witnessText(e.failure());
      }
      return kExitNotStratified;
    } catch (const CapExceeded& e) {
      err_ << "cap exceeded: " << e.what() << '\n';
      return kExitCapExceeded;
    }
  }

 private:
  bool json_() const { return cfg_.format == "json"; }

  int stratifyCmd(const Formula& f) {
    const StratResult r = stratify(f);
    if (!isStratified(r)) {
      if (json_()) {
        out_ << witnessJson(std::get<StratFailure>(r)).dump(2) << '\n';
      } else {
        out_ << witnessText(std::get<StratFailure>(r));
      }
      return kExitNotStratified;
    }
    const Stratification& s = std::get<Stratification>(r);
    const IdentityIndex idx = identityIndices(f);
    if (json_()) {
      json types = json::array();
      for (const auto& [v, t] : s.types) types.push_back({{"var", v.name()}, {"type", t}, {"index", idx.indexOf(v)}});
      out_ << json{{"stratified", true}, {"types", types}}.dump(2) << '\n';
    } else {
      out_ << "variable type index\n";
      for (const auto& [v, t] : s.types) out_ << v.name() << ' ' << t << ' ' << idx.indexOf(v) << '\n';
    }
    return kExitOk;
  }

  int acyclicCmd(const Formula& f) {
    const AcyclicityReport r = checkAcyclic(f);
    if (json_()) {
      json j{{"acyclic", r.acyclic()}, {"vertices", r.graph.vertices.size()}, {"edges", r.graph.edges.size()}};
      if (r.cycle) {
        json steps = json::array();
        for (const WalkStep& s : r.cycle->steps)
          steps.push_back({{"from", r.graph.vertices[s.from].label},
                           {"to", r.graph.vertices[s.to].label},
                           {"atom", r.graph.edges[s.edge].label},
                           {"edge", s.edge}});
        j["cycle"] = steps;
      }
      out_ << j.dump(2) << '\n';
    } else if (r.acyclic()) {
      out_ << "Acyclic (" << r.graph.vertices.size() << " vertices, " << r.graph.edges.size() << " edges)\n";
    } else {
      out_ << "Cyclic: " << describeCycle(r.graph, *r.cycle) << '\n';
    }
    return kExitOk;
  }

  int graphCmd(const Formula& f) {
    const VariableGraph g = variableGraph(f);
    if (cfg_.dot) {
      out_ << toDot(g);
      return kExitOk;
    }
    if (json_()) {
      json vs = json::array(), es = json::array();
      for (const GraphVertex& v : g.vertices) vs.push_back({{"label", v.label}, {"constant", v.constant}});
      for (const GraphEdge& e : g.edges) es.push_back({{"from", e.from}, {"to", e.to}, {"atom", e.atom}, {"label", e.label}});
      out_ << json{{"vertices", vs}, {"edges", es}}.dump(2) << '\n';
      return kExitOk;
    }
    for (const GraphEdge& e : g.edges)
      out_ << g.vertices[e.from].label << " -- " << g.vertices[e.to].label << "  [" << e.label << "]\n";
    return kExitOk;
  }

  int translateCmd(const Formula& f) {
    const TranslationReport r = translate(f, optionsOf(cfg_));
    if (json_()) {
      json j{{"output", render(r.output)}, {"tree", toJson(r.output)}};
      if (cfg_.report) j["report"] = r.str();
      out_ << j.dump(2) << '\n';
      return kExitOk;
    }
    out_ << render(r.output) << '\n';
    if (cfg_.report) out_ << r.str();
    return kExitOk;
  }

  Universe base(unsigned defaultRank, unsigned defaultAtoms) const {
    const unsigned rank = cfg_.baseRankSet ? cfg_.baseRank : defaultRank;
    const unsigned atoms = cfg_.atomCountSet ? cfg_.atomCount : defaultAtoms;
    return hfUniverse(rank, atoms, cfg_.cap);
  }

  int verifyCmd(const Formula& f) {
    const Universe b = base(3, 0);
    const TranslationReport r = translate(f, optionsOf(cfg_));
    EnrichmentOptions eo;
    eo.cap = cfg_.cap;
    const EquivReport rep = checkEquivalence(f, r.output, b, r.blocks, r.sourceVars, eo);
    if (json_()) {
      json ces = json::array();
      for (const AssignmentVerdict& v : rep.counterexamples)
        ces.push_back({{"assignment", v.assignment.str()}, {"original", v.original}, {"translated", v.translated}});
      out_ << json{{"agree", rep.agrees()},
                   {"assignments", rep.verdicts.size()},
                   {"agreements", rep.agreementCount()},
                   {"base", rep.baseSize},
                   {"enriched", rep.enrichedSize},
                   {"strategy", rep.strategy},
                   {"counterexamples", ces}}
                  .dump(2)
           << '\n';
    } else {
      out_ << rep.str();
    }
    return rep.agrees() ? kExitOk : kExitDisagreement;
  }

  int exploreCmd(const Formula& f) {
    const Universe b = base(2, 2);
    if (b.atomCount() == 0) out_ << "note: extensional base (no atoms), control run\n";
    out_ << "formula: " << render(f) << '\n';
    out_ << "base: " << b.size() << " elements, " << b.atomCount() << " atoms\n";
    out_ << "guard x reading (agreements / assignments):\n";
    out_ << "        predicate        constant\n";
    for (Guard g : {Guard::Fn, Guard::Size}) {
      out_ << "  " << guardName(g) << std::string(6 - std::string(guardName(g)).size(), ' ');
      for (EmptiesReading rd : {EmptiesReading::Predicate, EmptiesReading::Constant}) {
        TranslationOptions o = optionsOf(cfg_);
        o.guard = g;
        o.emptiesReading = rd;
        const TranslationReport r = translate(f, o);
        EnrichmentOptions eo;
        eo.junkCandidates = true;
        eo.cap = cfg_.cap;
        const EquivReport rep = checkEquivalence(f, r.output, b, r.blocks, r.sourceVars, eo);
        std::ostringstream cell;
        cell << (rep.agrees() ? "agree " : "DIFFER ") << rep.agreementCount() << '/' << rep.verdicts.size();
        std::string text = cell.str();
        out_ << text << std::string(text.size() < 17 ? 17 - text.size() : 1, ' ');
      }
      out_ << '\n';
    }
    threePair();
    return kExitOk;
  }

  // f = {<{0},{x}>, <{{0}},{y}>, <{0*},{z}>} with x = y = {}, z = {{}}, 0* = a0.
  void threePair() {
    const HFSet empty = HFSet::empty();
    const HFSet star = HFSet::atom(0);
    const HFSet x = empty, y = empty, z = HFSet::singleton(empty);
    const HFSet fval = HFSet::of({HFSet::pair(HFSet::iterSingleton(empty, 1), HFSet::singleton(x)),
                                  HFSet::pair(HFSet::iterSingleton(empty, 2), HFSet::singleton(y)),
                                  HFSet::pair(HFSet::singleton(star), HFSet::singleton(z))});
    std::vector<HFSet> seeds{fval, HFSet::atom(0), HFSet::atom(1)};
    for (unsigned i = 0; i <= 2; ++i) seeds.push_back(HFSet::iterSingleton(empty, i));
    const Universe u = closureUniverse(seeds);
    out_ << "three-pair function: f = " << fval.str() << '\n';
    out_ << "  x = y = {}, z = {{}}, second empty object a0, universe " << u.size() << " elements\n";
    for (EmptiesReading rd : {EmptiesReading::Predicate, EmptiesReading::Constant}) {
      FreshNames fresh;
      const Var fv("f");
      const Gadget g = eqTranslation(fv, 1, 2, rd, fresh);
      const bool v = eval(g.formula(), u, Assignment{{fv, fval}});
      out_ << "  f(iota(0)) = f(iota^2(0)) under " << readingName(rd) << " reading: " << (v ? "true" : "false")
           << '\n';
    }
  }

  const RunConfig& cfg_;
  std::ostream& out_;
  std::ostream& err_;
};

std::string readFile(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Stratified to acyclic formula translation and checking"};
  app.require_subcommand(1);

  auto addCommon = [&](CLI::App* sub) {
    sub->add_option("formula", cfg.formula, "Formula text");
    sub->add_option("--file", cfg.file, "Formula file, or a directory of formula files");
    sub->add_flag("--const", cfg.allowConstant, "Accept the constant 0");
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  };
  auto addTranslation = [&](CLI::App* sub) {
    sub->add_option("--mode", cfg.mode)->check(CLI::IsMember({"prenex", "nested", "nested-agreement"}));
    sub->add_option("--guard", cfg.guard)->check(CLI::IsMember({"fn", "size"}));
    sub->add_option("--atoms", cfg.atoms)->check(CLI::IsMember({"separate", "unified"}));
    sub->add_option("--empties", cfg.empties)->check(CLI::IsMember({"predicate", "constant"}));
    sub->add_option("--mutate", cfg.mutate, "Corrupt the translation on purpose")
        ->check(CLI::IsMember({"none", "drop-ident"}));
  };
  auto addUniverse = [&](CLI::App* sub) {
    sub->add_option("--base-rank", cfg.baseRank, "Base model: objects of rank below N");
    sub->add_option("--atoms-count", cfg.atomCount, "Number of atoms in the base model");
    sub->add_option("--cap", cfg.cap, "Largest universe or enumeration allowed");
  };

  CLI::App* strat = app.add_subcommand("stratify", "Print types or a constraint-cycle witness");
  CLI::App* acyc = app.add_subcommand("acyclic", "Check the variable graph for cycles");
  CLI::App* graph = app.add_subcommand("graph", "Print the variable multigraph");
  CLI::App* trans = app.add_subcommand("translate", "Translate to an acyclic formula");
  CLI::App* ver = app.add_subcommand("verify", "Translate and compare on a finite model");
  CLI::App* expl = app.add_subcommand("explore-counterexample", "Guard x empties-reading matrix on atoms");
  for (CLI::App* sub : {strat, acyc, graph, trans, ver, expl}) addCommon(sub);
  for (CLI::App* sub : {trans, ver, expl}) addTranslation(sub);
  for (CLI::App* sub : {ver, expl}) addUniverse(sub);
  graph->add_flag("--dot", cfg.dot, "Graphviz output");
  trans->add_flag("--report", cfg.report, "Append stratification, index and gadget tables");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << e.what() << '\n';
    return kExitParseError;
  }
  for (CLI::App* sub : app.get_subcommands()) {
    cfg.command = sub->get_name();
    const CLI::Option* rank = sub->get_option_no_throw("--base-rank");
    const CLI::Option* atoms = sub->get_option_no_throw("--atoms-count");
    cfg.baseRankSet = rank && rank->count() > 0;
    cfg.atomCountSet = atoms && atoms->count() > 0;
  }
  if (cfg.command == "explore-counterexample" && cfg.formula.empty() && cfg.file.empty()) cfg.formula = "x = y";
  if (cfg.empties == "constant") cfg.allowConstant = true;

  Runner runner(cfg, out, err);
  if (cfg.file.empty()) {
    if (cfg.formula.empty()) {
      err << "no formula given\n";
      return kExitParseError;
    }
    return runner.run(cfg.formula);
  }

  namespace fs = std::filesystem;
  try {
    const fs::path path(cfg.file);
    if (!fs::is_directory(path)) return runner.run(readFile(path));
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path))
      if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    int worst = kExitOk;
    for (const fs::path& p : files) {
      out << "== " << p.filename().string() << '\n';
      worst = std::max(worst, runner.run(readFile(p)));
    }
    return worst;
  } catch (const std::runtime_error& e) {
    err << e.what() << '\n';
    return kExitParseError;
  }
}

}  // namespace acyclify
