#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "acyclify/analysis.hpp"
#include "acyclify/formula.hpp"
#include "acyclify/hfset.hpp"

namespace acyclify {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Values for variables, kept in insertion order.
class Assignment {
 public:
  Assignment() = default;
  Assignment(std::initializer_list<std::pair<Var, HFSet>> values);

  void set(const Var& v, HFSet value);
  std::optional<HFSet> get(const Var& v) const;
  const std::vector<std::pair<Var, HFSet>>& entries() const { return values_; }
  /// `x={} y={{}}`
  std::string str() const;

 private:
  std::vector<std::pair<Var, HFSet>> values_;
};

/// Parses `x={} y={a0}` (whitespace separated `var=term` pairs).
Assignment parseAssignment(std::string_view text);

/// Compiled Tarski evaluator for one formula.
///
/// Quantifiers range over `universe` unless `ranges` names a variable, in
/// which case that variable ranges over the given elements. `0` denotes the
/// canonical empty set; atoms have no members.
///
/// Quantifier loops are narrowed to the values that can matter: when the
/// body can only hold (for `E`) or fail (for `A`) if the variable is an
/// element, hereditary member or copy of something already bound, only those
/// values are visited. Subformula results are cached on the values of their
/// free variables. Neither changes the verdict.
class Evaluator {
 public:
  using Ranges = std::unordered_map<Var, std::vector<HFSet>>;

  Evaluator(const Formula& f, const Universe& universe, const Ranges& ranges = {});
  ~Evaluator();
  Evaluator(const Evaluator&) = delete;
  Evaluator& operator=(const Evaluator&) = delete;

  /// Throws EvalError when a free variable has no value.
  bool operator()(const Assignment& a);

  std::size_t cacheSize() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot evaluation with every quantifier over `u`.
bool eval(const Formula& f, const Universe& u, const Assignment& a);

/// All assignments of `vars` over `domain`, odometer order with the last
/// variable varying fastest. Throws CapExceeded past `cap` assignments.
std::vector<Assignment> enumerateAssignments(std::span<const Var> vars, std::span<const HFSet> domain,
                                             std::size_t cap = kDefaultUniverseCap);

// ---------------------------------------------------------------------------
// Coding functions

/// The set of Wiener pairs <iota^index(empty), iota^depth(a(var))>.
/// `empty` picks the element-less object the indices are built from; under
/// the constant reading only the canonical empty set is allowed.
HFSet codingFunction(std::span<const CodedVar> coded, const Assignment& a, HFSet empty = HFSet::empty());

/// Coding function for every indexed variable, depth = -type.
HFSet buildCodingFunction(const Assignment& a, const IdentityIndex& idx, const Stratification& strat,
                          EmptiesReading reading = EmptiesReading::Predicate, HFSet empty = HFSet::empty());

/// max over indexed x_i of max(i, rank(a(x_i)) - type(x_i)), plus 4. Equals
/// the rank of the coding function; unassigned variables count as rank 0.
unsigned rankBound(const IdentityIndex& idx, const Stratification& strat, const Assignment& a);

// ---------------------------------------------------------------------------
// Equivalence harness

struct EnrichmentOptions {
  /// Also offer near-miss coding functions whose index sets are built on
  /// atoms instead of {}: one pair re-rooted, or one extra pair added.
  /// Only has an effect when the base contains atoms.
  bool junkCandidates = false;
  /// Extra objects added to the carrier, for monotonicity spot checks.
  std::vector<HFSet> extraSeeds;
  std::size_t cap = kDefaultUniverseCap;
};

struct AssignmentVerdict {
  Assignment assignment;
  bool original;
  bool translated;
};

struct EquivReport {
  std::string original;
  std::string translated;
  std::vector<AssignmentVerdict> verdicts;
  std::vector<AssignmentVerdict> counterexamples;
  std::size_t baseSize = 0;
  std::size_t enrichedSize = 0;
  std::size_t candidateCount = 0;
  std::string strategy;

  bool agrees() const { return counterexamples.empty(); }
  std::size_t agreementCount() const { return verdicts.size() - counterexamples.size(); }
  /// Line-oriented summary with every counterexample.
  std::string str() const;
};

/// Compares `original` evaluated over `base` with `translated` evaluated
/// over an enriched carrier, for every assignment of the free variables of
/// `original` over `base`.
///
/// In the translated formula, `sourceVars` range over `base`, each coding
/// function variable ranges over the coding functions of all assignments of
/// its coded variables over `base` (plus near misses on request), and every
/// other variable ranges over the transitive closure of all of that.
EquivReport checkEquivalence(const Formula& original, const Formula& translated, const Universe& base,
                             std::span<const CodingBlock> blocks, std::span<const Var> sourceVars,
                             const EnrichmentOptions& options = {});

/// Same, for a prenex translation whose single coding function is `fVar`:
/// the coded variables, their indices and depths are recomputed from
/// `original` the way the prenex pipeline assigns them.
EquivReport checkEquivalence(const Formula& original, const Formula& translated, const Universe& base,
                             const Var& fVar, const EnrichmentOptions& options = {});

}  // namespace acyclify
