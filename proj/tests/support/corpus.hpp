#pragma once

#include <random>
#include <string>
#include <vector>

#include "acyclify/analysis.hpp"
#include "acyclify/formula.hpp"
#include "acyclify/hfset.hpp"

namespace acyclify::testing {

struct GenLimits {
  unsigned maxVars = 4;
  unsigned maxAtoms = 4;
  unsigned maxQuantifiers = 2;
  bool allowSelfEq = true;
};

/// Random stratified formulas: a type is drawn for every variable first and
/// only atoms consistent with it are emitted.
class FormulaGen {
 public:
  explicit FormulaGen(unsigned seed, GenLimits limits = {}) : rng_(seed), limits_(limits) {}

  Formula next();
  Formula next(unsigned quantifiers);

  /// Arbitrary (possibly unstratified) formula over x,y,z,w.
  Formula anyFormula(unsigned depth);

 private:
  unsigned pick(unsigned lo, unsigned hi) { return std::uniform_int_distribution<unsigned>(lo, hi)(rng_); }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }
  Formula atom(const std::vector<Var>& vars, const std::vector<int>& types);
  Formula combine(std::vector<Formula>& atoms, std::size_t lo, std::size_t hi, unsigned& quantifiers,
                  const std::vector<Var>& vars);

  std::mt19937 rng_;
  GenLimits limits_;
};

/// The two worked formulas plus the one-atom example.
std::vector<std::string> workedFormulas();

/// workedFormulas followed by `count` generated formulas (deterministic).
std::vector<Formula> corpus(std::size_t count, unsigned seed = 20240611);

/// True iff some integer typing in [-n, -1] satisfies every atom; n is the
/// number of variables. Independent of the union-find stratifier.
bool bruteForceStratifiable(const Formula& f);

/// Every atom constraint holds and each connected component peaks at -1.
bool typingValid(const Formula& f, const Stratification& s);

// Direct set-theoretic oracles for the gadgets.

bool oracleSingleton(HFSet y, HFSet x);
bool oracleIterSingleton(HFSet y, HFSet x, unsigned n);
bool oracleIterElement(HFSet e, HFSet k, unsigned d);
/// {{{a}}, {{b}, e}} with e element-less (e = {} when `constantEmpty`).
bool oracleWienerPair(HFSet p, bool constantEmpty);
bool oracleProj1(HFSet x, HFSet p, bool constantEmpty);
bool oracleProj2(HFSet x, HFSet p, bool constantEmpty);

/// Transitively closed domain on atoms a0, a1: everything of rank at most 2
/// plus Wiener pairs and near misses up to rank 4.
std::vector<HFSet> gadgetDomain();

}  // namespace acyclify::testing
