#include <algorithm>
#include <sstream>

#include "acyclify/encoder.hpp"

namespace acyclify {

const char* guardName(Guard g) { return g == Guard::Fn ? "fn" : "size"; }
const char* atomModeName(AtomMode m) { return m == AtomMode::Separate ? "separate" : "unified"; }
const char* pipelineName(Pipeline p) {
  switch (p) {
    case Pipeline::Prenex: return "prenex";
    case Pipeline::Nested: return "nested";
    case Pipeline::NestedAgreement: return "nested-agreement";
  }
  return "?";
}
const char* readingName(EmptiesReading r) { return r == EmptiesReading::Predicate ? "predicate" : "constant"; }

namespace {

std::string describeFailure(const StratFailure& failure) {
  std::string out = "formula is not stratified:";
  for (const ConstraintStep& s : failure.witness) out += " [" + s.atomText + "]";
  return out;
}

}  // namespace

NotStratified::NotStratified(StratFailure failure)
    : std::runtime_error(describeFailure(failure)), failure_(std::move(failure)) {}

std::string TranslationReport::str() const {
  std::ostringstream out;
  out << "pipeline: " << pipelineName(options.pipeline) << '\n';
  out << "guard: " << guardName(options.guard) << '\n';
  out << "atoms: " << atomModeName(options.atomMode) << '\n';
  out << "empties: " << readingName(options.emptiesReading) << '\n';
  if (options.mutation == Mutation::DropIdent) out << "mutation: drop-ident\n";
  out << "rectified: " << render(rectified) << '\n';
  out << "types:\n";
  for (const auto& [v, t] : stratification.types) out << "  " << v.name() << ' ' << t << '\n';
  out << "indices:\n";
  for (std::size_t i = 0; i < indices.order.size(); ++i) out << "  " << indices.order[i].name() << ' ' << i + 1 << '\n';
  out << "coding functions:\n";
  for (const CodingBlock& b : blocks) {
    out << "  " << b.function.name() << ':';
    for (const CodedVar& c : b.coded) out << ' ' << c.var.name() << '@' << c.index << '^' << c.depth;
    out << '\n';
  }
  out << "gadgets: " << gadgetCount << '\n';
  for (const auto& [kind, count] : census) out << "  " << kind << ' ' << count << '\n';
  out << "fresh variables: " << freshConsumed << '\n';
  out << "output graph: " << outputVertices << " vertices, " << outputEdges << " edges, acyclic\n";
  return out.str();
}

namespace {

struct Builder {
  const TranslationOptions& options;
  const Stratification& strat;
  const IdentityIndex& idx;
  FreshNames& fresh;
  std::map<std::string, std::size_t> census;
  std::size_t gadgets = 0;

  Formula use(const Gadget& g) {
    ++census[g.kind()];
    ++gadgets;
    return g.formula();
  }

  unsigned index(const Var& v) const { return static_cast<unsigned>(idx.indexOf(v)); }
  unsigned depth(const Var& v) const { return static_cast<unsigned>(-strat.typeOf(v)); }

  Formula atom(const Formula& a, const Var& f) {
    const EmptiesReading r = options.emptiesReading;
    if (a.op() == Op::EqConst) return use(applyConstGadget(f, index(a.lhs()), depth(a.lhs()), r, fresh));
    const unsigned i = index(a.lhs());
    const unsigned j = index(a.rhs());
    if (options.atomMode == AtomMode::Unified) return use(unifiedTranslation(f, i, j, depth(a.lhs()), r, fresh));
    if (a.op() == Op::Eq) return use(eqTranslation(f, i, j, r, fresh));
    return use(memTranslation(f, i, j, depth(a.rhs()), r, fresh));
  }

  /// A block that codes nothing gets the empty coding function.
  Formula guard(const Var& f, const std::vector<CodedVar>& coded) {
    if (coded.empty()) return use(emptyGadget(f, fresh));
    if (options.guard == Guard::Size) return use(sizeGuard(f, static_cast<unsigned>(coded.size()), fresh));
    std::vector<unsigned> indices;
    for (const CodedVar& c : coded) indices.push_back(static_cast<unsigned>(c.index));
    std::sort(indices.begin(), indices.end());
    return use(fnGuard(f, indices, options.emptiesReading, fresh));
  }

  Formula ident(const Var& f, const Var& x) {
    return use(applyEqGadget(f, index(x), x, depth(x), options.emptiesReading, fresh));
  }

  std::vector<CodedVar> codedVars(std::vector<Var> vars) const {
    std::sort(vars.begin(), vars.end(), [&](const Var& a, const Var& b) { return index(a) < index(b); });
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    std::vector<CodedVar> out;
    for (const Var& v : vars) out.push_back({v, index(v), static_cast<int>(depth(v))});
    return out;
  }
};

/// Rebuilds the connective skeleton of a quantifier-free formula over `f`.
Formula translateMatrix(const Formula& m, const Var& f, Builder& b) {
  switch (m.op()) {
    case Op::Mem:
    case Op::Eq:
    case Op::EqConst:
      return b.atom(m, f);
    case Op::Not:
      return Formula::negate(translateMatrix(m.body(), f, b));
    case Op::And:
      return Formula::conj(translateMatrix(m.left(), f, b), translateMatrix(m.right(), f, b));
    case Op::Or:
      return Formula::disj(translateMatrix(m.left(), f, b), translateMatrix(m.right(), f, b));
    case Op::Implies:
      return Formula::implies(translateMatrix(m.left(), f, b), translateMatrix(m.right(), f, b));
    default:
      throw std::logic_error("quantifier inside a prenex matrix");
  }
}

Formula wrapPrefix(const std::vector<std::pair<Quantifier, Var>>& prefix, Formula body) {
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    body = it->first == Quantifier::Exists ? Formula::exists(it->second, body) : Formula::forall(it->second, body);
  return body;
}

std::vector<Var> sourceVariables(const Formula& input, const Formula& rectified) {
  std::vector<Var> out = allVars(input);
  for (const Var& v : allVars(rectified))
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  return out;
}

void certify(TranslationReport& report) {
  const AcyclicityReport acyclic = checkAcyclic(report.output);
  if (!acyclic.acyclic())
    throw std::logic_error("translation produced a cyclic formula: " + describeCycle(acyclic.graph, *acyclic.cycle));
  if (!isStratified(stratify(report.output))) throw std::logic_error("translation produced an unstratified formula");
  if (report.options.mutation == Mutation::None && freeVars(report.output) != freeVars(report.input))
    throw std::logic_error("translation changed the free variables");
  report.outputVertices = acyclic.graph.vertices.size();
  report.outputEdges = acyclic.graph.edges.size();
}

const Stratification& requireStratified(const StratResult& r) {
  if (!isStratified(r)) throw NotStratified(std::get<StratFailure>(r));
  return std::get<Stratification>(r);
}

}  // namespace

TranslationReport translatePrenex(const Formula& phi, const TranslationOptions& options) {
  FreshNames fresh = FreshNames::after(phi);
  const unsigned start = fresh.peek();
  const Formula rectified = rectify(phi, fresh);
  const PrenexForm pf = prenex(rectified);
  const StratResult sr = stratify(pf.matrix);
  const Stratification strat = requireStratified(sr);
  const IdentityIndex idx = identityIndices(pf.matrix);

  TranslationOptions opts = options;
  opts.pipeline = Pipeline::Prenex;
  Builder b{opts, strat, idx, fresh, {}, 0};

  const Var f = fresh.next();
  const std::vector<CodedVar> coded = b.codedVars(idx.order);
  std::vector<Formula> parts;
  parts.push_back(b.guard(f, coded));
  parts.push_back(translateMatrix(pf.matrix, f, b));
  for (const CodedVar& c : coded) parts.push_back(b.ident(f, c.var));
  if (opts.mutation == Mutation::DropIdent && parts.size() > 2) parts.pop_back();
  const Formula output = wrapPrefix(pf.prefix, Formula::exists(f, Formula::conjAll(parts)));

  TranslationReport report{phi, rectified, output, opts, strat, idx, {}, {}, {}, 0, 0, 0, 0};
  report.blocks.push_back({f, coded});
  report.sourceVars = sourceVariables(phi, rectified);
  report.census = std::move(b.census);
  report.gadgetCount = b.gadgets;
  report.freshConsumed = fresh.peek() - start;
  certify(report);
  return report;
}

namespace {

struct NestedTranslator {
  Builder& b;
  const Pipeline pipeline;
  std::vector<CodingBlock> blocks;

  struct Parent {
    Var f;
    std::vector<Var> coded;
  };

  /// `psi` starts a block: its leading quantifier run (possibly empty for
  /// the top block) followed by a body.
  Formula block(const Formula& psi, const Parent* parent, bool top) {
    std::vector<std::pair<Quantifier, Var>> prefix;
    Formula body = psi;
    while (body.isQuantifier()) {
      prefix.emplace_back(body.op() == Op::Exists ? Quantifier::Exists : Quantifier::Forall, body.var());
      body = body.body();
    }
    std::vector<Var> prefixVars;
    for (const auto& q : prefix) prefixVars.push_back(q.second);

    const Var f = b.fresh.next();
    std::vector<Var> coded = prefixVars;
    std::vector<Var> identified = prefixVars;
    std::vector<Var> inherited;  // coded but identified elsewhere
    if (top) {
      for (const Var& v : freeVars(psi)) {
        coded.push_back(v);
        identified.push_back(v);
      }
    } else if (pipeline == Pipeline::Nested) {
      inherited = parent->coded;
    } else {
      for (const Var& v : freeVars(psi))
        if (std::find(prefixVars.begin(), prefixVars.end(), v) == prefixVars.end()) inherited.push_back(v);
    }
    coded.insert(coded.end(), inherited.begin(), inherited.end());
    const std::vector<CodedVar> codedList = b.codedVars(coded);
    std::vector<Var> codedNames;
    for (const CodedVar& c : codedList) codedNames.push_back(c.var);
    blocks.push_back({f, codedList});

    std::vector<Formula> parts;
    parts.push_back(b.guard(f, codedList));
    if (parent) {
      if (pipeline == Pipeline::Nested) {
        parts.push_back(b.use(subsetGadget(parent->f, f, b.fresh)));
      } else {
        parts.push_back(b.use(agreementGadget(f, parent->f, b.options.emptiesReading, b.fresh)));
        for (const CodedVar& c : b.codedVars(inherited))
          parts.push_back(b.use(domainGadget(f, static_cast<unsigned>(c.index), b.options.emptiesReading, b.fresh)));
      }
    }
    const Parent self{f, codedNames};
    parts.push_back(body_(body, self));
    const std::size_t identStart = parts.size();
    for (const CodedVar& c : b.codedVars(identified)) parts.push_back(b.ident(f, c.var));
    if (top && b.options.mutation == Mutation::DropIdent && parts.size() > identStart) parts.pop_back();
    return wrapPrefix(prefix, Formula::exists(f, Formula::conjAll(parts)));
  }

  Formula body_(const Formula& m, const Parent& self) {
    switch (m.op()) {
      case Op::Mem:
      case Op::Eq:
      case Op::EqConst:
        return b.atom(m, self.f);
      case Op::Not:
        return Formula::negate(body_(m.body(), self));
      case Op::And:
        return Formula::conj(body_(m.left(), self), body_(m.right(), self));
      case Op::Or:
        return Formula::disj(body_(m.left(), self), body_(m.right(), self));
      case Op::Implies:
        return Formula::implies(body_(m.left(), self), body_(m.right(), self));
      case Op::Exists:
      case Op::Forall:
        return block(m, &self, false);
    }
    throw std::logic_error("unknown operator");
  }
};

}  // namespace

TranslationReport translateNested(const Formula& phi, const TranslationOptions& options) {
  FreshNames fresh = FreshNames::after(phi);
  const unsigned start = fresh.peek();
  const Formula rectified = rectify(phi, fresh);
  const StratResult sr = stratify(rectified);
  const Stratification strat = requireStratified(sr);
  const IdentityIndex idx = identityIndices(rectified);

  TranslationOptions opts = options;
  if (opts.pipeline == Pipeline::Prenex) opts.pipeline = Pipeline::Nested;
  Builder b{opts, strat, idx, fresh, {}, 0};
  NestedTranslator t{b, opts.pipeline, {}};
  const Formula output = t.block(rectified, nullptr, true);

  TranslationReport report{phi, rectified, output, opts, strat, idx, {}, {}, {}, 0, 0, 0, 0};
  report.blocks = std::move(t.blocks);
  report.sourceVars = sourceVariables(phi, rectified);
  report.census = std::move(b.census);
  report.gadgetCount = b.gadgets;
  report.freshConsumed = fresh.peek() - start;
  certify(report);
  return report;
}

TranslationReport translate(const Formula& phi, const TranslationOptions& options) {
  return options.pipeline == Pipeline::Prenex ? translatePrenex(phi, options) : translateNested(phi, options);
}

}  // namespace acyclify
