#include <gtest/gtest.h>

#include <map>
#include <regex>
#include <set>

#include "acyclify/analysis.hpp"
#include "acyclify/semantics.hpp"
#include "corpus.hpp"

using namespace acyclify;
using acyclify::testing::FormulaGen;
namespace ts = acyclify::testing;

namespace {

std::map<std::string, int> typeMap(const Formula& f) {
  const StratResult r = stratify(f);
  if (!isStratified(r)) return {};
  std::map<std::string, int> out;
  for (const auto& [v, t] : std::get<Stratification>(r).types) out[v.name()] = t;
  return out;
}

std::vector<std::string> indexNames(const Formula& f) {
  std::vector<std::string> out;
  for (const Var& v : identityIndices(f).order) out.push_back(v.name());
  return out;
}

/// Distinct edges of the graph, chained into a closed walk.
::testing::AssertionResult validWitness(const VariableGraph& g, const CycleWitness& w) {
  if (w.steps.empty()) return ::testing::AssertionFailure() << "empty witness";
  std::set<std::size_t> used;
  for (std::size_t i = 0; i < w.steps.size(); ++i) {
    const WalkStep& s = w.steps[i];
    if (s.edge >= g.edges.size()) return ::testing::AssertionFailure() << "edge out of range";
    const GraphEdge& e = g.edges[s.edge];
    const bool forward = e.from == s.from && e.to == s.to;
    const bool backward = e.from == s.to && e.to == s.from;
    if (!forward && !backward) return ::testing::AssertionFailure() << "step does not follow edge " << s.edge;
    if (!used.insert(s.edge).second) return ::testing::AssertionFailure() << "edge repeated";
    if (w.steps[(i + 1) % w.steps.size()].from != s.to) return ::testing::AssertionFailure() << "not closed";
  }
  return ::testing::AssertionSuccess();
}

std::vector<std::string> walkLabels(const VariableGraph& g, const CycleWitness& w) {
  std::vector<std::string> out;
  for (const WalkStep& s : w.steps) out.push_back(g.vertices[s.from].label);
  return out;
}

bool sameEval(const Formula& a, const Formula& b, const Universe& u) {
  std::vector<Var> free = freeVars(a);
  for (const Assignment& asg : enumerateAssignments(free, u.elements()))
    if (eval(a, u, asg) != eval(b, u, asg)) return false;
  return true;
}

}  // namespace

TEST(Stratify, WorkedExample) {
  EXPECT_EQ(typeMap(parse("x in y & z in y")), (std::map<std::string, int>{{"x", -2}, {"y", -1}, {"z", -2}}));
}

TEST(Stratify, CyclicStratifiedExample) {
  EXPECT_EQ(typeMap(parse("x in y & z in y & w in x & w in z")),
            (std::map<std::string, int>{{"x", -2}, {"y", -1}, {"z", -2}, {"w", -3}}));
}

TEST(Stratify, SelfMembershipFails) {
  const StratResult r = stratify(parse("x in x"));
  ASSERT_FALSE(isStratified(r));
  const StratFailure& fail = std::get<StratFailure>(r);
  ASSERT_EQ(fail.witness.size(), 1u);
  EXPECT_EQ(fail.witness[0].from.name(), "x");
  EXPECT_EQ(fail.witness[0].to.name(), "x");
  EXPECT_NE(fail.replay(), 0);
}

TEST(Stratify, MutualMembershipFails) {
  const StratResult r = stratify(parse("x in y & y in x"));
  ASSERT_FALSE(isStratified(r));
  EXPECT_NE(std::get<StratFailure>(r).replay(), 0);
}

TEST(Stratify, EqualityOnly) {
  EXPECT_EQ(typeMap(parse("x = y")), (std::map<std::string, int>{{"x", -1}, {"y", -1}}));
}

TEST(Stratify, ComponentsNormalizedSeparately) {
  EXPECT_EQ(typeMap(parse("x in y & z = w")),
            (std::map<std::string, int>{{"x", -2}, {"y", -1}, {"z", -1}, {"w", -1}}));
}

TEST(Stratify, AgreesWithBruteForce) {
  FormulaGen gen(3);
  for (int i = 0; i < 400; ++i) {
    const Formula f = gen.anyFormula(3);
    const StratResult r = stratify(f);
    EXPECT_EQ(isStratified(r), ts::bruteForceStratifiable(f)) << render(f);
    if (isStratified(r))
      EXPECT_TRUE(ts::typingValid(f, std::get<Stratification>(r))) << render(f);
    else
      EXPECT_NE(std::get<StratFailure>(r).replay(), 0) << render(f);
  }
}

TEST(Stratify, GeneratedFormulasAreStratified) {
  FormulaGen gen(5);
  for (int i = 0; i < 300; ++i) {
    const Formula f = gen.next();
    const StratResult r = stratify(f);
    ASSERT_TRUE(isStratified(r)) << render(f);
    EXPECT_TRUE(ts::typingValid(f, std::get<Stratification>(r))) << render(f);
  }
}

TEST(Stratify, InvariantUnderRenaming) {
  FormulaGen gen(9);
  const std::map<std::string, std::string> rename{{"x", "p"}, {"y", "q"}, {"z", "r"}, {"w", "s"}};
  for (int i = 0; i < 200; ++i) {
    const Formula f = gen.next();
    std::string text = render(f);
    text = std::regex_replace(text, std::regex("\\bx\\b"), "p");
    text = std::regex_replace(text, std::regex("\\by\\b"), "q");
    text = std::regex_replace(text, std::regex("\\bz\\b"), "r");
    text = std::regex_replace(text, std::regex("\\bw\\b"), "s");
    const auto a = typeMap(f);
    const auto b = typeMap(parse(text));
    ASSERT_EQ(a.size(), b.size());
    for (const auto& [name, t] : a) EXPECT_EQ(b.at(rename.at(name)), t) << render(f);
  }
}

TEST(Indices, FirstOccurrence) {
  EXPECT_EQ(indexNames(parse("x in y & z in y")), (std::vector<std::string>{"x", "y", "z"}));
  EXPECT_EQ(indexNames(parse("x in y & z in y & w in x & w in z")),
            (std::vector<std::string>{"x", "y", "z", "w"}));
  const IdentityIndex idx = identityIndices(parse("r in s"));
  EXPECT_EQ(idx.indexOf(Var("r")), 1u);
  EXPECT_EQ(idx.indexOf(Var("s")), 2u);
  EXPECT_THROW(idx.indexOf(Var("t")), std::out_of_range);
}

TEST(Graph, CyclicExample) {
  const VariableGraph g = variableGraph(parse("x in y & z in y & w in x & w in z"));
  EXPECT_EQ(g.vertices.size(), 4u);
  EXPECT_EQ(g.edges.size(), 4u);
}

TEST(Graph, ParallelEdges) {
  const VariableGraph g = variableGraph(parse("r in s & r in s"));
  EXPECT_EQ(g.vertices.size(), 2u);
  ASSERT_EQ(g.edges.size(), 2u);
  EXPECT_EQ(g.edges[0].from, g.edges[1].from);
  EXPECT_EQ(g.edges[0].to, g.edges[1].to);
}

TEST(Graph, SingleAtom) {
  const VariableGraph g = variableGraph(parse("x in y"));
  EXPECT_EQ(g.vertices.size(), 2u);
  EXPECT_EQ(g.edges.size(), 1u);
}

TEST(Graph, ConstantGetsPseudoVertex) {
  const VariableGraph g = variableGraph(parse("x = 0 & y = 0", {.allowConstant = true}));
  EXPECT_EQ(g.variableCount(), 2u);
  EXPECT_EQ(g.vertices.size(), 4u);
  EXPECT_FALSE(findCycle(g).has_value());
}

TEST(Graph, DotExport) {
  const std::string dot = toDot(variableGraph(parse("x in y")));
  EXPECT_NE(dot.find("graph variables {"), std::string::npos);
  EXPECT_NE(dot.find("\"x\" -- \"y\" [label=\"x in y\"]"), std::string::npos);
}

TEST(Acyclic, PathIsAcyclic) { EXPECT_TRUE(checkAcyclic(parse("x in y & z in y")).acyclic()); }

TEST(Acyclic, FourCycleWitness) {
  const AcyclicityReport r = checkAcyclic(parse("x in y & z in y & w in x & w in z"));
  ASSERT_FALSE(r.acyclic());
  EXPECT_TRUE(validWitness(r.graph, *r.cycle));
  EXPECT_EQ(walkLabels(r.graph, *r.cycle), (std::vector<std::string>{"x", "y", "z", "w"}));
}

TEST(Acyclic, SelfLoop) {
  const AcyclicityReport r = checkAcyclic(parse("x = x"));
  ASSERT_FALSE(r.acyclic());
  EXPECT_EQ(r.cycle->steps.size(), 1u);
  EXPECT_TRUE(validWitness(r.graph, *r.cycle));
}

TEST(Acyclic, TwoCycle) {
  const AcyclicityReport r = checkAcyclic(parse("r in s & r in s"));
  ASSERT_FALSE(r.acyclic());
  EXPECT_EQ(r.cycle->steps.size(), 2u);
  EXPECT_TRUE(validWitness(r.graph, *r.cycle));
}

TEST(Acyclic, WitnessesValidAndAcyclicImpliesStratified) {
  FormulaGen gen(21);
  for (int i = 0; i < 500; ++i) {
    const Formula f = gen.anyFormula(3);
    const AcyclicityReport r = checkAcyclic(f);
    if (r.acyclic())
      EXPECT_TRUE(isStratified(stratify(f))) << render(f);
    else
      EXPECT_TRUE(validWitness(r.graph, *r.cycle)) << render(f);
  }
}

TEST(Prenex, QuantifierFree) {
  const Formula f = parse("x in y & ~(z = y)");
  const PrenexForm p = prenex(f);
  EXPECT_TRUE(p.prefix.empty());
  EXPECT_EQ(p.matrix, f);
}

TEST(Prenex, NegationFlipsPolarity) {
  const PrenexForm p = prenex(parse("~(E x. x in y)"));
  ASSERT_EQ(p.prefix.size(), 1u);
  EXPECT_EQ(p.prefix[0].first, Quantifier::Forall);
  EXPECT_EQ(p.prefix[0].second.name(), "x");
  EXPECT_EQ(render(p.matrix), "~(x in y)");
}

TEST(Prenex, AntecedentFlipsPolarity) {
  const Formula f = parse("(A x. x in y) -> z in y");
  const PrenexForm p = prenex(f);
  ASSERT_EQ(p.prefix.size(), 1u);
  EXPECT_EQ(p.prefix[0].first, Quantifier::Exists);
  EXPECT_EQ(render(p.matrix), "x in y -> z in y");
  EXPECT_TRUE(sameEval(f, p.toFormula(), hfUniverse(3, 0)));
}

TEST(Prenex, PreservesEvaluation) {
  const Universe u4 = hfUniverse(3, 0);
  const Universe u5 = hfUniverse(2, 1);
  FormulaGen gen(31);
  for (int i = 0; i < 200; ++i) {
    const Formula f = rectify(gen.anyFormula(3));
    const Formula p = prenex(f).toFormula();
    EXPECT_FALSE(hasQuantifier(prenex(f).matrix));
    EXPECT_TRUE(sameEval(f, p, u4)) << render(f);
    EXPECT_TRUE(sameEval(f, p, u5)) << render(f);
  }
}
