#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "acyclify/semantics.hpp"

namespace acyclify {

HFSet codingFunction(std::span<const CodedVar> coded, const Assignment& a, HFSet empty) {
  std::vector<HFSet> pairs;
  pairs.reserve(coded.size());
  for (const CodedVar& c : coded) {
    auto value = a.get(c.var);
    if (!value) throw EvalError("no value for coded variable '" + c.var.name() + "'");
    if (c.depth < 0) throw std::invalid_argument("negative coding depth for '" + c.var.name() + "'");
    pairs.push_back(HFSet::pair(HFSet::iterSingleton(empty, static_cast<unsigned>(c.index)),
                                HFSet::iterSingleton(*value, static_cast<unsigned>(c.depth))));
  }
  return HFSet::of(std::move(pairs));
}

HFSet buildCodingFunction(const Assignment& a, const IdentityIndex& idx, const Stratification& strat,
                          EmptiesReading reading, HFSet empty) {
  if (!empty.hasNoElements()) throw std::invalid_argument("coding functions need an element-less base object");
  if (reading == EmptiesReading::Constant && !empty.isEmptySet())
    throw std::invalid_argument("the constant reading codes indices from the canonical empty set");
  std::vector<CodedVar> coded;
  for (std::size_t i = 0; i < idx.order.size(); ++i)
    coded.push_back({idx.order[i], i + 1, -strat.typeOf(idx.order[i])});
  return codingFunction(coded, a, empty);
}

unsigned rankBound(const IdentityIndex& idx, const Stratification& strat, const Assignment& a) {
  long best = 0;
  for (std::size_t i = 0; i < idx.order.size(); ++i) {
    const Var& v = idx.order[i];
    const auto value = a.get(v);
    const long r = value ? static_cast<long>(value->rank()) : 0;
    const long d = strat.contains(v) ? strat.typeOf(v) : -1;
    best = std::max(best, std::max(static_cast<long>(i + 1), r - d));
  }
  return static_cast<unsigned>(best + 4);
}

std::string EquivReport::str() const {
  std::ostringstream out;
  out << "original: " << original << '\n';
  out << "translated: " << translated.size() << " characters\n";
  out << "strategy: " << strategy << '\n';
  out << "base: " << baseSize << " elements, enriched: " << enrichedSize << " elements, coding candidates: "
      << candidateCount << '\n';
  out << "assignments: " << verdicts.size() << ", agreements: " << agreementCount() << '\n';
  for (const AssignmentVerdict& v : counterexamples) {
    out << "counterexample: " << (v.assignment.entries().empty() ? "(no free variables)" : v.assignment.str())
        << " original=" << (v.original ? "true" : "false") << " translated=" << (v.translated ? "true" : "false")
        << '\n';
  }
  out << "verdict: " << (agrees() ? "agree" : "DISAGREE") << '\n';
  return out.str();
}

namespace {

std::vector<HFSet> atomsOf(const Universe& u) {
  std::vector<HFSet> out;
  for (HFSet x : u.elements())
    if (x.isAtom()) out.push_back(x);
  return out;
}

void addNearMisses(std::span<const CodedVar> coded, const Assignment& a, std::span<const HFSet> atoms,
                   std::span<const HFSet> base, std::vector<HFSet>& out) {
  for (std::size_t k = 0; k < coded.size(); ++k) {
    for (HFSet atom : atoms) {
      // One pair re-rooted on an atom.
      std::vector<HFSet> pairs;
      for (std::size_t j = 0; j < coded.size(); ++j) {
        const CodedVar& c = coded[j];
        const HFSet root = j == k ? atom : HFSet::empty();
        pairs.push_back(HFSet::pair(HFSet::iterSingleton(root, static_cast<unsigned>(c.index)),
                                    HFSet::iterSingleton(*a.get(c.var), static_cast<unsigned>(c.depth))));
      }
      out.push_back(HFSet::of(pairs));
      // One extra atom-rooted pair.
      const HFSet intended = codingFunction(coded, a);
      for (HFSet v : base) {
        std::vector<HFSet> extended(intended.elements().begin(), intended.elements().end());
        extended.push_back(HFSet::pair(HFSet::iterSingleton(atom, static_cast<unsigned>(coded[k].index)),
                                       HFSet::iterSingleton(v, static_cast<unsigned>(coded[k].depth))));
        out.push_back(HFSet::of(std::move(extended)));
      }
    }
  }
}

}  // namespace

EquivReport checkEquivalence(const Formula& original, const Formula& translated, const Universe& base,
                             std::span<const CodingBlock> blocks, std::span<const Var> sourceVars,
                             const EnrichmentOptions& options) {
  EquivReport report;
  report.original = render(original);
  report.translated = render(translated);
  report.baseSize = base.size();

  const std::vector<HFSet> atoms = options.junkCandidates ? atomsOf(base) : std::vector<HFSet>{};
  std::vector<HFSet> seeds(base.elements().begin(), base.elements().end());
  std::size_t maxIndex = 0;
  Evaluator::Ranges ranges;
  for (const Var& v : sourceVars) ranges[v].assign(base.elements().begin(), base.elements().end());

  for (const CodingBlock& block : blocks) {
    std::vector<Var> coded;
    for (const CodedVar& c : block.coded) {
      coded.push_back(c.var);
      maxIndex = std::max(maxIndex, c.index);
    }
    std::vector<HFSet> candidates;
    for (const Assignment& a : enumerateAssignments(coded, base.elements(), options.cap)) {
      candidates.push_back(codingFunction(block.coded, a));
      if (!atoms.empty()) addNearMisses(block.coded, a, atoms, base.elements(), candidates);
      if (candidates.size() > options.cap)
        throw CapExceeded("more than " + std::to_string(options.cap) + " coding candidates");
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    report.candidateCount += candidates.size();
    seeds.insert(seeds.end(), candidates.begin(), candidates.end());
    ranges[block.function] = std::move(candidates);
  }
  for (std::size_t i = 0; i <= maxIndex; ++i) seeds.push_back(HFSet::iterSingleton(HFSet::empty(), i));
  seeds.insert(seeds.end(), options.extraSeeds.begin(), options.extraSeeds.end());

  const Universe enriched = closureUniverse(seeds);
  if (enriched.size() > options.cap)
    throw CapExceeded("enriched universe has " + std::to_string(enriched.size()) + " elements, cap is " +
                      std::to_string(options.cap));
  report.enrichedSize = enriched.size();

  std::ostringstream strategy;
  strategy << "original over the base; in the translation the source variables range over the base, ";
  for (const CodingBlock& block : blocks) {
    strategy << block.function.name() << " over " << ranges[block.function].size() << " coding functions, ";
  }
  strategy << "built from every assignment of the coded variables over the base";
  if (!atoms.empty()) strategy << " with atom-rooted near misses";
  strategy << "; every other variable over the transitive closure of the base, iota^0..iota^" << maxIndex
           << " of {} and those functions";
  if (!options.extraSeeds.empty()) strategy << " plus " << options.extraSeeds.size() << " extra seeds";
  report.strategy = strategy.str();

  Evaluator lhs(original, base);
  Evaluator rhs(translated, enriched, ranges);
  const std::vector<Var> free = freeVars(original);
  for (Assignment& a : enumerateAssignments(free, base.elements(), options.cap)) {
    const bool o = lhs(a);
    const bool t = rhs(a);
    report.verdicts.push_back({a, o, t});
    if (o != t) report.counterexamples.push_back({std::move(a), o, t});
  }
  return report;
}

EquivReport checkEquivalence(const Formula& original, const Formula& translated, const Universe& base,
                             const Var& fVar, const EnrichmentOptions& options) {
  const Formula rectified = rectify(original);
  const PrenexForm pf = prenex(rectified);
  const StratResult sr = stratify(pf.matrix);
  if (!isStratified(sr)) throw std::invalid_argument("original formula is not stratified");
  const Stratification& strat = std::get<Stratification>(sr);
  const IdentityIndex idx = identityIndices(pf.matrix);

  CodingBlock block{fVar, {}};
  for (std::size_t i = 0; i < idx.order.size(); ++i)
    block.coded.push_back({idx.order[i], i + 1, -strat.typeOf(idx.order[i])});

  std::vector<Var> sources = allVars(original);
  for (const Var& v : allVars(rectified))
    if (std::find(sources.begin(), sources.end(), v) == sources.end()) sources.push_back(v);
  return checkEquivalence(original, translated, base, std::span<const CodingBlock>(&block, 1), sources, options);
}

}  // namespace acyclify
