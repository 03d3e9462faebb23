#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "acyclify/analysis.hpp"
#include "acyclify/formula.hpp"

namespace acyclify {

/// An acyclic formula whose free variables are exactly its interface.
/// Construction throws std::logic_error when either property fails.
class Gadget {
 public:
  Gadget(std::string kind, Formula formula, std::vector<Var> interfaceVars);

  const std::string& kind() const { return kind_; }
  const Formula& formula() const { return formula_; }
  const std::vector<Var>& interfaceVars() const { return interface_; }

 private:
  std::string kind_;
  Formula formula_;
  std::vector<Var> interface_;
};

// Every auxiliary variable comes from `fresh`, so two instances never share
// anything beyond their interface.

/// `A g. ~(g in x)`
Gadget emptyGadget(const Var& x, FreshNames& fresh);
/// `(E w. w in y) & (A z. z in y -> z = x)`; y == x is rejected.
Gadget singletonGadget(const Var& y, const Var& x, FreshNames& fresh);
/// y = iota^n(x), n >= 1.
Gadget iterSingletonGadget(const Var& y, const Var& x, unsigned n, FreshNames& fresh);
/// y = iota^n(empty) under the given reading; n = 0 is emptiness itself.
Gadget iterEmptyGadget(const Var& y, unsigned n, EmptiesReading reading, FreshNames& fresh);
/// p is a Wiener pair {{{a}}, {{b}, e}} with e element-less (e = 0 under the
/// constant reading).
Gadget wienerPairGadget(const Var& p, FreshNames& fresh, EmptiesReading reading = EmptiesReading::Predicate);
/// p is a Wiener pair with first projection x.
Gadget proj1Gadget(const Var& x, const Var& p, FreshNames& fresh, EmptiesReading reading = EmptiesReading::Predicate);
/// p is a Wiener pair with second projection x.
Gadget proj2Gadget(const Var& x, const Var& p, FreshNames& fresh, EmptiesReading reading = EmptiesReading::Predicate);
/// e is a d-fold iterated element of k, d >= 1.
Gadget iterElementGadget(const Var& e, const Var& k, unsigned d, FreshNames& fresh);

/// f(iota^i(empty)) = iota^d(x)
Gadget applyEqGadget(const Var& f, unsigned i, const Var& x, unsigned d, EmptiesReading reading, FreshNames& fresh);
/// f(iota^i(empty)) = iota^d(0), the image of a source atom `x = 0`.
Gadget applyConstGadget(const Var& f, unsigned i, unsigned d, EmptiesReading reading, FreshNames& fresh);
/// f(iota^i(empty)) = f(iota^j(empty))
Gadget eqTranslation(const Var& f, unsigned i, unsigned j, EmptiesReading reading, FreshNames& fresh);
/// f(iota^i(empty)) in_d f(iota^j(empty)), d = -type(x_j).
Gadget memTranslation(const Var& f, unsigned i, unsigned j, unsigned d, EmptiesReading reading, FreshNames& fresh);
/// `E e. A p. A k. (p in f & (pi1(p) = iota^i | pi1(p) = iota^j) & k = pi2(p)) -> e in^d k`,
/// d = -type(x_i) for the left variable.
Gadget unifiedTranslation(const Var& f, unsigned i, unsigned j, unsigned d, EmptiesReading reading,
                          FreshNames& fresh);

/// F_n over indices 1..n.
Gadget fnGuard(const Var& f, unsigned n, EmptiesReading reading, FreshNames& fresh);
/// F over an arbitrary non-empty index set.
Gadget fnGuard(const Var& f, std::span<const unsigned> indices, EmptiesReading reading, FreshNames& fresh);
/// `E m1..mn. A p. p in f -> p = m1 | ... | p = mn`
Gadget sizeGuard(const Var& f, unsigned n, FreshNames& fresh);
/// `A q. q in sub -> q in super`
Gadget subsetGadget(const Var& sub, const Var& super, FreshNames& fresh);
/// `A x. E y. A p. ((p in a | p in b) & x = pi1(p)) -> y = pi2(p)`
Gadget agreementGadget(const Var& a, const Var& b, EmptiesReading reading, FreshNames& fresh);
/// `E p. p in f & pi1(p) = iota^i(empty)`
Gadget domainGadget(const Var& f, unsigned i, EmptiesReading reading, FreshNames& fresh);

// ---------------------------------------------------------------------------

enum class Guard { Fn, Size };
enum class AtomMode { Separate, Unified };
enum class Pipeline { Prenex, Nested, NestedAgreement };
enum class Mutation { None, DropIdent };

const char* guardName(Guard g);
const char* atomModeName(AtomMode m);
const char* pipelineName(Pipeline p);
const char* readingName(EmptiesReading r);

struct TranslationOptions {
  Guard guard = Guard::Size;
  AtomMode atomMode = AtomMode::Unified;
  EmptiesReading emptiesReading = EmptiesReading::Predicate;
  Pipeline pipeline = Pipeline::Prenex;
  /// Deliberate corruption for harness self-tests.
  Mutation mutation = Mutation::None;
};

class NotStratified : public std::runtime_error {
 public:
  explicit NotStratified(StratFailure failure);
  const StratFailure& failure() const { return failure_; }

 private:
  StratFailure failure_;
};

struct TranslationReport {
  Formula input;
  Formula rectified;
  Formula output;
  TranslationOptions options;
  Stratification stratification;
  IdentityIndex indices;
  /// Coding functions with the variables each one codes.
  std::vector<CodingBlock> blocks;
  /// Variables of the input (before and after renaming); they range over the
  /// base model when the output is checked.
  std::vector<Var> sourceVars;
  std::map<std::string, std::size_t> census;
  std::size_t gadgetCount = 0;
  unsigned freshConsumed = 0;
  std::size_t outputVertices = 0;
  std::size_t outputEdges = 0;

  /// Stratification, index and gadget tables, one fact per line.
  std::string str() const;
};

TranslationReport translatePrenex(const Formula& phi, const TranslationOptions& options = {});
TranslationReport translateNested(const Formula& phi, const TranslationOptions& options = {});
/// Dispatches on options.pipeline.
TranslationReport translate(const Formula& phi, const TranslationOptions& options = {});

}  // namespace acyclify
