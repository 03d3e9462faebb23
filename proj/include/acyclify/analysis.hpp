#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "acyclify/formula.hpp"

namespace acyclify {

/// Atomic subformula occurrences in rendered text order. The position in
/// this list is the occurrence id used by graphs and witnesses.
std::vector<Formula> atomOccurrences(const Formula& f);

// ---------------------------------------------------------------------------
// Stratification

/// Integer types with type(y) = type(x) + 1 for every `x in y` and equal types
/// for every `x = y`. After normalization every type is negative and each
/// constraint component has maximum -1.
struct Stratification {
  /// In first-occurrence order.
  std::vector<std::pair<Var, int>> types;
  /// Shift added to each component's raw solution, in order of the
  /// component's first variable.
  std::vector<int> componentShift;

  bool contains(const Var& v) const;
  int typeOf(const Var& v) const;
};

/// One step of a constraint cycle: type(to) = type(from) + offset, justified
/// by atom occurrence `atom`.
struct ConstraintStep {
  std::size_t atom;
  std::string atomText;
  Var from;
  Var to;
  int offset;
};

/// A closed walk of constraints whose offsets sum to a nonzero value.
struct StratFailure {
  std::vector<ConstraintStep> witness;

  /// Checks that the steps chain into a closed walk and returns the total
  /// offset k in `t = t + k`. Throws if the walk is not closed.
  int replay() const;
};

using StratResult = std::variant<Stratification, StratFailure>;

StratResult stratify(const Formula& f);
inline bool isStratified(const StratResult& r) { return std::holds_alternative<Stratification>(r); }

// ---------------------------------------------------------------------------
// Identity indices

/// Bijection from the variables of a formula onto 1..n in first-occurrence
/// order.
struct IdentityIndex {
  std::vector<Var> order;

  std::size_t size() const { return order.size(); }
  /// 1-based; throws std::out_of_range for unknown variables.
  std::size_t indexOf(const Var& v) const;
};

IdentityIndex identityIndices(const Formula& f);

// ---------------------------------------------------------------------------
// Variable graph and acyclicity

struct GraphVertex {
  std::string label;
  /// Pseudo-vertex for one occurrence of the constant `0`.
  bool constant = false;
};

struct GraphEdge {
  std::size_t from;
  std::size_t to;
  std::size_t atom;
  std::string label;
};

/// Undirected multigraph: one vertex per variable, one edge per atom
/// occurrence. Each `x = 0` gets its own constant pseudo-vertex.
struct VariableGraph {
  std::vector<GraphVertex> vertices;
  std::vector<GraphEdge> edges;

  std::optional<std::size_t> vertexOf(const Var& v) const;
  std::size_t variableCount() const;
};

VariableGraph variableGraph(const Formula& f);

struct WalkStep {
  std::size_t edge;  // index into VariableGraph::edges
  std::size_t from;
  std::size_t to;
};

/// Closed walk without repeated edges. Rotated to start at the lowest edge
/// index and oriented so that the second step has a lower index than the last.
struct CycleWitness {
  std::vector<WalkStep> steps;
};

struct AcyclicityReport {
  VariableGraph graph;
  std::optional<CycleWitness> cycle;

  bool acyclic() const { return !cycle.has_value(); }
};

std::optional<CycleWitness> findCycle(const VariableGraph& g);
AcyclicityReport checkAcyclic(const Formula& f);
/// Graph edges as text: `x in y` per line, witness as `x - y, y - z, ...`.
std::string describeCycle(const VariableGraph& g, const CycleWitness& w);
std::string toDot(const VariableGraph& g);

// ---------------------------------------------------------------------------
// Prenex normal form

enum class Quantifier { Exists, Forall };

struct PrenexForm {
  std::vector<std::pair<Quantifier, Var>> prefix;
  Formula matrix;

  Formula toFormula() const;
};

/// Pulls quantifiers to the front. Expects a rectified formula; does not
/// rename.
PrenexForm prenex(const Formula& f);

// ---------------------------------------------------------------------------
// Coding plans

/// How `iota^n(empty)` is read: any element-less object (`Predicate`) or the
/// distinguished constant `0` denoting the canonical empty set (`Constant`).
enum class EmptiesReading { Predicate, Constant };

/// A variable coded by a coding function: the function maps the
/// `index`-fold singleton of the empty set to the `depth`-fold singleton of
/// the variable's value, where depth is the negated type.
struct CodedVar {
  Var var;
  std::size_t index;
  int depth;
};

/// One coding function of a translated formula and the variables it codes.
struct CodingBlock {
  Var function;
  std::vector<CodedVar> coded;
};

}  // namespace acyclify
