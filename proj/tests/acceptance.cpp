// One line per acceptance criterion: PASS/FAIL, elapsed time against the
// limit, and a short summary. Exit status is non-zero if any line fails.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "acyclify/cli.hpp"
#include "acyclify/encoder.hpp"
#include "acyclify/semantics.hpp"
#include "corpus.hpp"

using namespace acyclify;
namespace ts = acyclify::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> notes;
};

struct Criterion {
  int id;
  std::string name;
  double limitSeconds;
  std::function<Outcome()> body;
};

constexpr std::size_t kCorpusSize = 200;
constexpr std::size_t kQuantifiedEquivalence = 24;

HFSet iota(HFSet x, unsigned n) { return HFSet::iterSingleton(x, n); }

void require(Outcome& o, bool cond, const std::string& what) {
  if (!cond) {
    o.pass = false;
    o.notes.push_back(what);
  }
}

const std::vector<Formula>& theCorpus() {
  static const std::vector<Formula> c = ts::corpus(kCorpusSize);
  return c;
}

std::vector<Formula> quantifierFree() {
  std::vector<Formula> out;
  for (const Formula& f : theCorpus())
    if (!hasQuantifier(f)) out.push_back(f);
  return out;
}

std::vector<Formula> quantified(std::size_t count) {
  std::vector<Formula> out;
  for (const Formula& f : theCorpus())
    if (hasQuantifier(f) && out.size() < count) out.push_back(f);
  return out;
}

// ---------------------------------------------------------------------------

Outcome workedExamples() {
  Outcome o;
  auto types = [](const char* text) {
    std::vector<int> out;
    for (const auto& [v, t] : std::get<Stratification>(stratify(parse(text))).types) out.push_back(t);
    return out;
  };
  auto indices = [](const char* text) {
    std::vector<std::size_t> out;
    const Formula f = parse(text);
    const IdentityIndex idx = identityIndices(f);
    for (const Var& v : freeVars(f)) out.push_back(idx.indexOf(v));
    return out;
  };
  const char* first = "x in y & z in y";
  const char* second = "x in y & z in y & w in x & w in z";
  require(o, types(first) == std::vector<int>{-2, -1, -2}, "types of the first example");
  require(o, indices(first) == std::vector<std::size_t>{1, 2, 3}, "indices of the first example");
  require(o, types(second) == std::vector<int>{-2, -1, -2, -3}, "types of the second example");
  require(o, indices(second) == std::vector<std::size_t>{1, 2, 3, 4}, "indices of the second example");

  const HFSet e = HFSet::empty();
  const HFSet xv = parseHFSet("{}"), yv = parseHFSet("{{}}"), zv = parseHFSet("{{{}}}"),
              wv = parseHFSet("{{},{{}}}");
  Assignment a{{Var("x"), xv}, {Var("y"), yv}, {Var("z"), zv}, {Var("w"), wv}};
  // f = {<{0},{{x}}>, <{{0}},{y}>, <{{{0}}},{{z}}>}
  const HFSet f1 = HFSet::of({HFSet::pair(iota(e, 1), iota(xv, 2)), HFSet::pair(iota(e, 2), iota(yv, 1)),
                              HFSet::pair(iota(e, 3), iota(zv, 2))});
  // ... plus <{{{{0}}}},{{{w}}}>
  const HFSet f2 = HFSet::of({HFSet::pair(iota(e, 1), iota(xv, 2)), HFSet::pair(iota(e, 2), iota(yv, 1)),
                              HFSet::pair(iota(e, 3), iota(zv, 2)), HFSet::pair(iota(e, 4), iota(wv, 3))});
  for (const auto& [text, expected] : {std::pair{first, f1}, std::pair{second, f2}}) {
    const Formula phi = parse(text);
    const HFSet got =
        buildCodingFunction(a, identityIndices(phi), std::get<Stratification>(stratify(phi)));
    require(o, got == expected, std::string("coding function for ") + text);
  }
  o.detail = "types, indices and both coding functions checked";
  return o;
}

Outcome acyclicOutputs() {
  Outcome o;
  std::size_t checked = 0;
  for (const Formula& phi : theCorpus())
    for (Pipeline p : {Pipeline::Prenex, Pipeline::Nested, Pipeline::NestedAgreement}) {
      TranslationOptions opts;
      opts.pipeline = p;
      const TranslationReport t = translate(phi, opts);
      ++checked;
      if (!checkAcyclic(t.output).acyclic()) require(o, false, "cyclic output for " + render(phi));
      if (!isStratified(stratify(t.output))) require(o, false, "unstratified output for " + render(phi));
    }
  o.detail = std::to_string(theCorpus().size()) + " formulas x 3 pipelines = " + std::to_string(checked) +
             " outputs acyclic and stratified";
  return o;
}

/// Equivalence of each formula with its translation over V_3.
Outcome equivalence() {
  Outcome o;
  const Universe base = hfUniverse(3, 0);
  std::size_t assignments = 0, agreements = 0, formulas = 0;
  auto check = [&](const Formula& phi, Pipeline p) {
    TranslationOptions opts;
    opts.pipeline = p;
    const TranslationReport t = translate(phi, opts);
    const EquivReport r = checkEquivalence(phi, t.output, base, t.blocks, t.sourceVars);
    assignments += r.verdicts.size();
    agreements += r.agreementCount();
    ++formulas;
    if (!r.agrees())
      require(o, false, std::string(pipelineName(p)) + " disagrees on " + render(phi) + ": " +
                            r.counterexamples.front().assignment.str());
  };
  const auto qf = quantifierFree();
  const auto q = quantified(kQuantifiedEquivalence);
  for (const Formula& phi : qf) check(phi, Pipeline::Prenex);
  for (const Formula& phi : q) check(phi, Pipeline::Prenex);
  for (const Formula& phi : q) check(phi, Pipeline::Nested);
  std::ostringstream d;
  d << qf.size() << " quantifier-free + " << q.size() << " quantified (prenex and nested), " << agreements << '/'
    << assignments << " assignments agree";
  o.detail = d.str();
  require(o, q.size() >= 20, "fewer than 20 quantified members");
  return o;
}

Outcome crossAgreement() {
  Outcome o;
  const Universe base = hfUniverse(3, 0);
  std::vector<Formula> formulas = quantifierFree();
  for (const Formula& f : quantified(kQuantifiedEquivalence)) formulas.push_back(f);
  std::size_t compared = 0;
  for (const Formula& phi : formulas) {
    std::map<std::string, std::vector<bool>> results;
    std::vector<bool> original;
    for (Guard g : {Guard::Fn, Guard::Size})
      for (AtomMode m : {AtomMode::Separate, AtomMode::Unified}) {
        TranslationOptions opts;
        opts.guard = g;
        opts.atomMode = m;
        const TranslationReport t = translatePrenex(phi, opts);
        const EquivReport r = checkEquivalence(phi, t.output, base, t.blocks, t.sourceVars);
        std::vector<bool> column;
        original.clear();
        for (const auto& v : r.verdicts) {
          column.push_back(v.translated);
          original.push_back(v.original);
        }
        results[std::string(guardName(g)) + "/" + atomModeName(m)] = column;
      }
    const auto& ref = results.begin()->second;
    for (const auto& [name, column] : results) {
      if (column != ref) require(o, false, name + " differs on " + render(phi));
      compared += column.size();
    }
    if (ref != original) require(o, false, "modes agree with each other but not with " + render(phi));
  }
  o.detail = std::to_string(formulas.size()) + " formulas, 4 mode combinations, " + std::to_string(compared) +
             " evaluations consistent";
  return o;
}

Outcome counterexample() {
  Outcome o;
  // f = {<{0},{x}>, <{{0}},{y}>, <{0*},{z}>}, x = y = {}, z = {{}}, 0* = a0.
  const HFSet e = HFSet::empty();
  const HFSet star = HFSet::atom(0);
  const HFSet fval = HFSet::of({HFSet::pair(iota(e, 1), iota(e, 1)), HFSet::pair(iota(e, 2), iota(e, 1)),
                                HFSet::pair(iota(star, 1), iota(iota(e, 1), 1))});
  const Universe u = closureUniverse(std::vector<HFSet>{fval, HFSet::atom(1), iota(e, 3)});
  const Var f("f");
  std::map<EmptiesReading, bool> threePair;
  for (EmptiesReading rd : {EmptiesReading::Predicate, EmptiesReading::Constant}) {
    FreshNames fresh;
    threePair[rd] = eval(eqTranslation(f, 1, 2, rd, fresh).formula(), u, Assignment{{f, fval}});
  }
  require(o, !threePair[EmptiesReading::Predicate], "equality gadget holds on the three-pair function");

  const Universe base = hfUniverse(2, 2);
  const std::vector<std::string> corpus{"x = y", "x in y", "E z. z in x & z in y", "A z. z in x -> z in y",
                                        "x in y & z in y"};
  std::map<std::pair<Guard, EmptiesReading>, std::pair<std::size_t, std::size_t>> cells;
  for (const auto& text : corpus) {
    const Formula phi = parse(text);
    for (Guard g : {Guard::Fn, Guard::Size})
      for (EmptiesReading rd : {EmptiesReading::Predicate, EmptiesReading::Constant}) {
        TranslationOptions opts;
        opts.guard = g;
        opts.emptiesReading = rd;
        const TranslationReport t = translatePrenex(phi, opts);
        EnrichmentOptions eo;
        eo.junkCandidates = true;
        const EquivReport r = checkEquivalence(phi, t.output, base, t.blocks, t.sourceVars, eo);
        auto& cell = cells[{g, rd}];
        cell.first += r.agreementCount();
        cell.second += r.verdicts.size();
      }
  }
  const auto sizePred = cells[{Guard::Size, EmptiesReading::Predicate}];
  require(o, sizePred.first == sizePred.second, "size guard with predicate reading below 100%");
  std::ostringstream d;
  d << "three-pair: predicate " << (threePair[EmptiesReading::Predicate] ? "true" : "false") << ", constant "
    << (threePair[EmptiesReading::Constant] ? "true" : "false") << "; matrix over 2 atoms:";
  for (const auto& [key, cell] : cells)
    d << ' ' << guardName(key.first) << '/' << readingName(key.second) << '=' << cell.first << '/' << cell.second;
  o.detail = d.str();
  return o;
}

Outcome gadgetOracles() {
  Outcome o;
  const Universe dom(ts::gadgetDomain());
  const Var p("p"), x("x"), y("y");
  std::size_t rows = 0;
  auto table1 = [&](const std::string& name, const Gadget& g, const std::function<bool(HFSet)>& oracle) {
    Evaluator ev(g.formula(), dom);
    std::size_t bad = 0, positives = 0;
    for (HFSet v : dom.elements()) {
      const bool want = oracle(v);
      positives += want;
      if (ev(Assignment{{g.interfaceVars()[0], v}}) != want) ++bad;
      ++rows;
    }
    if (bad) require(o, false, name + ": " + std::to_string(bad) + " mismatches");
    if (!positives) require(o, false, name + ": no positive rows in the domain");
  };
  auto table2 = [&](const std::string& name, const Gadget& g, const Var& a, const Var& b,
                    const std::function<bool(HFSet, HFSet)>& oracle) {
    Evaluator ev(g.formula(), dom);
    std::size_t bad = 0, positives = 0;
    for (HFSet va : dom.elements())
      for (HFSet vb : dom.elements()) {
        const bool want = oracle(va, vb);
        positives += want;
        if (ev(Assignment{{a, va}, {b, vb}}) != want) ++bad;
        ++rows;
      }
    if (bad) require(o, false, name + ": " + std::to_string(bad) + " mismatches");
    if (!positives) require(o, false, name + ": no positive rows in the domain");
  };
  FreshNames fresh;
  for (EmptiesReading rd : {EmptiesReading::Predicate, EmptiesReading::Constant}) {
    const bool c = rd == EmptiesReading::Constant;
    const std::string tag = std::string("/") + readingName(rd);
    table1("pair" + tag, wienerPairGadget(p, fresh, rd), [c](HFSet v) { return ts::oracleWienerPair(v, c); });
    table2("proj1" + tag, proj1Gadget(x, p, fresh, rd), x, p,
           [c](HFSet a, HFSet b) { return ts::oracleProj1(a, b, c); });
    table2("proj2" + tag, proj2Gadget(x, p, fresh, rd), x, p,
           [c](HFSet a, HFSet b) { return ts::oracleProj2(a, b, c); });
  }
  table2("singleton", singletonGadget(y, x, fresh), y, x, ts::oracleSingleton);
  for (unsigned n : {2u, 3u})
    table2("iter-singleton/" + std::to_string(n), iterSingletonGadget(y, x, n, fresh), y, x,
           [n](HFSet a, HFSet b) { return ts::oracleIterSingleton(a, b, n); });
  for (unsigned d : {1u, 2u, 3u})
    table2("iter-element/" + std::to_string(d), iterElementGadget(x, y, d, fresh), x, y,
           [d](HFSet a, HFSet b) { return ts::oracleIterElement(a, b, d); });
  o.detail = std::to_string(rows) + " rows over " + std::to_string(dom.size()) + " sets (closure of V_3 over 2 atoms plus pairs over V_2; max rank " +
             std::to_string(std::max_element(dom.elements().begin(), dom.elements().end(),
                                             [](HFSet a, HFSet b) { return a.rank() < b.rank(); })
                                ->rank()) +
             ")";
  return o;
}

bool witnessValid(const VariableGraph& g, const CycleWitness& w) {
  if (w.steps.empty()) return false;
  std::set<std::size_t> used;
  for (std::size_t i = 0; i < w.steps.size(); ++i) {
    const WalkStep& s = w.steps[i];
    if (s.edge >= g.edges.size() || !used.insert(s.edge).second) return false;
    const GraphEdge& e = g.edges[s.edge];
    if (!((e.from == s.from && e.to == s.to) || (e.from == s.to && e.to == s.from))) return false;
    if (w.steps[(i + 1) % w.steps.size()].from != s.to) return false;
  }
  return true;
}

Outcome negativeCases() {
  Outcome o;
  for (const char* text : {"x in x", "x in y & y in x"}) {
    const Formula f = parse(text);
    const StratResult r = stratify(f);
    if (isStratified(r)) {
      require(o, false, std::string(text) + " accepted as stratified");
      continue;
    }
    const StratFailure& fail = std::get<StratFailure>(r);
    const auto atoms = atomOccurrences(f);
    bool stepsMatch = true;
    for (const ConstraintStep& s : fail.witness) stepsMatch &= s.atom < atoms.size() && render(atoms[s.atom]) == s.atomText;
    require(o, stepsMatch, std::string(text) + " witness cites unknown atoms");
    require(o, fail.replay() != 0, std::string(text) + " witness replays to zero");
    bool threw = false;
    try {
      translatePrenex(f);
    } catch (const NotStratified&) {
      threw = true;
    }
    require(o, threw, std::string(text) + " translated");
  }
  for (const char* text : {"r in s & r in s", "x = x"}) {
    const AcyclicityReport r = checkAcyclic(parse(text));
    require(o, !r.acyclic(), std::string(text) + " classified acyclic");
    if (!r.acyclic()) require(o, witnessValid(r.graph, *r.cycle), std::string(text) + " witness invalid");
  }
  o.detail = "2 unstratified with replayed witnesses, 2 cyclic with valid walks";
  return o;
}

Outcome determinism() {
  Outcome o;
  std::size_t runs = 0;
  auto cli = [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = runCli(args, out, err);
    return std::to_string(code) + "\n" + out.str() + err.str();
  };
  std::vector<std::string> texts = ts::workedFormulas();
  for (std::size_t i = 0; i < 20; ++i) texts.push_back(render(theCorpus()[ts::workedFormulas().size() + i]));
  for (const auto& text : texts)
    for (const char* mode : {"prenex", "nested", "nested-agreement"})
      for (const char* guard : {"fn", "size"}) {
        const std::vector<std::string> args{"translate", text, "--mode", mode, "--guard", guard, "--report"};
        if (cli(args) != cli(args)) require(o, false, "translate output differs for " + text);
        ++runs;
      }
  o.detail = std::to_string(runs) + " repeated translate runs byte-identical";
  return o;
}

}  // namespace

// Optional arguments select criteria by number.
int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const std::vector<Criterion> criteria{
      {1, "worked-example fidelity", 1, workedExamples},
      {2, "acyclicity of output", 60, acyclicOutputs},
      {3, "equivalence at desk scale", 600, equivalence},
      {4, "mode cross-agreement", 600, crossAgreement},
      {5, "counterexample reproduction", 300, counterexample},
      {6, "gadget oracle suite", 300, gadgetOracles},
      {7, "negative cases", 1, negativeCases},
      {8, "determinism", 600, determinism},
  };
  bool all = true;
  for (const Criterion& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limitSeconds) {
      o.pass = false;
      o.notes.push_back("time limit exceeded");
    }
    all &= o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << c.id << " " << c.name << "  (" << std::fixed
              << std::setprecision(2) << secs << " s, limit " << std::setprecision(0) << c.limitSeconds
              << " s)  " << o.detail << '\n';
    for (std::size_t i = 0; i < o.notes.size() && i < 10; ++i) std::cout << "      " << o.notes[i] << '\n';
    std::cout.flush();
  }
  return all ? 0 : 1;
}
